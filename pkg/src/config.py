# src/config.py
from __future__ import annotations

import copy
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .models import SearchBudget

DEFAULT_CONFIG: Dict[str, Any] = {
    "plane_dir": "state/planes",
    "state_dir": "state",
    "search": {
        "orders": [12, 16, 20],
        "budget": {"max_subgroups": 64, "max_nodes": 200_000, "wall_clock_ms": 900_000},
    },
    "embed": {
        "budget": {"max_subgroups": 1, "max_nodes": 5_000_000, "wall_clock_ms": 1_800_000},
    },
    "analytics": {"prime": 5},
    "autom": {"certificate_version": 2},
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path: Optional[Path]) -> Dict[str, Any]:
    """File values over DEFAULT_CONFIG; a missing file means the defaults."""
    if path and Path(path).exists():
        with Path(path).open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping at the top level")
        return _merge(DEFAULT_CONFIG, data)
    return copy.deepcopy(DEFAULT_CONFIG)


def budget_from(section: Dict[str, Any], *, seed: int = 0, **overrides: Optional[int]) -> SearchBudget:
    values = dict(section.get("budget") or {})
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SearchBudget(
        max_subgroups=int(values.get("max_subgroups", 64)),
        max_nodes=int(values.get("max_nodes", 200_000)),
        wall_clock_ms=int(values.get("wall_clock_ms", 600_000)),
        seed=seed,
    )
