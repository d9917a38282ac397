"""
Result-table and provenance I/O

CSV uses pandas with the shortest round-trip float representation and
``\\n`` line endings; JSON-lines uses one ``json`` object per row with NaN
written as null.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Union

import numpy as np
import pandas as pd
import yaml

from transducersim.exceptions import ConfigError

PathLike = Union[str, Path]


def plain(value: Any) -> Any:
    """Convert numpy scalars, tuples and NaN into YAML/JSON-safe Python values"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def records_to_frame(records: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    """Build a table from flat records, keeping first-seen column order"""
    return pd.DataFrame.from_records(list(records))


def _format_of(path: Optional[PathLike], fmt: Optional[str]) -> str:
    if fmt:
        return fmt
    if path is not None and Path(path).suffix in (".jsonl", ".json"):
        return "json"
    return "csv"


def dumps_table(frame: pd.DataFrame, fmt: str = "csv") -> str:
    """Serialize a table to text"""
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        rows = [plain(row) for row in frame.to_dict(orient="records")]
        return "".join(json.dumps(row, allow_nan=False) + "\n" for row in rows)
    raise ConfigError(f"unknown output format '{fmt}'")


def write_table(
    frame: pd.DataFrame,
    path: Optional[PathLike] = None,
    fmt: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> str:
    """
    Write a table to a file, or to ``stream`` when no path is given

    Returns:
        The serialized text
    """
    fmt = _format_of(path, fmt)
    text = dumps_table(frame, fmt)
    if path is None:
        if stream is not None:
            stream.write(text)
        return text
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(text)
    return text


def read_table(path: PathLike, fmt: Optional[str] = None) -> pd.DataFrame:
    """Read a table written by :func:`write_table`"""
    fmt = _format_of(path, fmt)
    if fmt == "csv":
        return pd.read_csv(path, float_precision="round_trip")
    rows: List[Dict[str, Any]] = []
    with open(path) as f:
        for line in f:
            if line.strip():
                rows.append(json.loads(line))
    return records_to_frame(rows)


def provenance_path(path: PathLike) -> Path:
    """Sidecar path next to a data file"""
    path = Path(path)
    return path.with_name(path.name + ".provenance.yaml")


def write_provenance(path: PathLike, provenance: Dict[str, Any]) -> Path:
    """Write the provenance sidecar of a data file and return its path"""
    sidecar = provenance_path(path)
    sidecar.parent.mkdir(parents=True, exist_ok=True)
    sidecar.write_text(yaml.safe_dump(plain(provenance), sort_keys=False))
    return sidecar


def read_provenance(path: PathLike) -> Dict[str, Any]:
    """Read the provenance sidecar of a data file"""
    return yaml.safe_load(provenance_path(path).read_text())
