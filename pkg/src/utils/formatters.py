"""
Artifact writers: JSON with stable key order, 17-digit CSV, little-endian binary.
"""
import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def to_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2, default=_to_builtin)


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(payload) + "\n", encoding="utf-8")
    return path


def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def write_binary(path: Union[str, Path], values: np.ndarray, manifest: Dict[str, Any]) -> Path:
    """Write float64 little-endian values plus a sibling `<name>.json` manifest."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.asarray(values, dtype="<f8").tofile(path)
    write_json(path.with_suffix(".json"), manifest)
    return path


def read_binary(path: Union[str, Path]) -> np.ndarray:
    return np.fromfile(Path(path), dtype="<f8")
