# src/state_store.py
from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable

from dateutil import parser as dp

from .models import RunManifest


def load_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
            return data if isinstance(data, dict) else {}
    except FileNotFoundError:
        return {}


def save_json(data: Any, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")
    return path


def file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def digests(paths: Iterable[Path]) -> Dict[str, str]:
    return {str(p): file_digest(p) for p in paths if Path(p).exists()}


def now_iso() -> str:
    return datetime.now(tz=timezone.utc).replace(microsecond=0).isoformat()


def manifest_path(artifact: Path) -> Path:
    artifact = Path(artifact)
    return artifact.with_name(artifact.stem + ".manifest.json")


def save_artifact(data: Dict[str, Any], path: Path, manifest: RunManifest) -> Path:
    """Write data with a pointer to its manifest, then the manifest with the output digest."""
    path = Path(path)
    mpath = manifest_path(path)
    save_json({**data, "manifest": mpath.name}, path)
    manifest.finished = now_iso()
    manifest.output_digests = {path.name: file_digest(path)}
    save_json(manifest.to_dict(), mpath)
    return path


def load_manifest(path: Path) -> RunManifest:
    data = load_json(path)
    if not data:
        raise FileNotFoundError(f"no manifest at {path}")
    m = RunManifest(**data)
    # both timestamps must parse; replay relies on them being ordered
    started, finished = dp.isoparse(m.started), dp.isoparse(m.finished)
    if finished < started:
        raise ValueError(f"{path}: finished before it started")
    return m
