# src/models.py
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class SearchBudget:
    max_subgroups: int = 64
    max_nodes: int = 200_000
    wall_clock_ms: int = 600_000
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("max_subgroups", "max_nodes", "wall_clock_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget field {name} must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class ExpectedRow:
    aut_order: int
    p_rank: int
    classes: Tuple[int, int]
    partner: Optional[str] = None


@dataclass(frozen=True)
class FixtureUnital:
    plane_name: str
    index: int
    points_as_printed: Tuple[int, ...]
    digest: str
    expected: Optional[ExpectedRow] = None
    known: bool = False

    @property
    def points_1based(self) -> List[int]:
        return sorted(self.points_as_printed)

    @property
    def points(self) -> List[int]:
        """0-based sorted labels."""
        return [p - 1 for p in self.points_1based]

    @property
    def fixture_id(self) -> str:
        return f"{self.plane_name}.{self.index}"


@dataclass
class DesignReport:
    plane: str
    unital_id: str
    stabilizer_order: int
    design_aut_order: int
    p_rank_5: int
    parallel_classes: int
    dual_parallel_classes: int
    certificate: str
    dual_certificate: str
    isomorphic_partner: Optional[str] = None
    dual_self_isomorphic: bool = False
    flags: List[str] = field(default_factory=list)

    @property
    def aut_order(self) -> int:
        """Value matched against the |Aut(Unital)| column."""
        return self.design_aut_order or self.stabilizer_order

    def classes_pair(self) -> str:
        return f"{self.parallel_classes}/{self.dual_parallel_classes}"

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        # big integers stay exact in JSON
        d["stabilizer_order"] = int(self.stabilizer_order)
        d["design_aut_order"] = int(self.design_aut_order)
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "DesignReport":
        return cls(**d)


@dataclass
class RunManifest:
    command: List[str]
    config: Dict[str, Any]
    seed: Optional[int]
    budgets: Dict[str, Any]
    tool_version: str
    started: str
    finished: str = ""
    input_digests: Dict[str, str] = field(default_factory=dict)
    output_digests: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
