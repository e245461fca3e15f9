"""Sampled data on a grid, CSV/JSON serialisation and the flat config format.

CSV files have a header ``x,value[,value2,...]`` followed by one row per
sample, every number written with 17 significant digits so that reading a
file back reproduces the doubles exactly. Metadata lives in a JSON sidecar.

Config files are plain ``key = value`` lines; ``#`` starts a comment and
blank lines are ignored. Keys are the long CLI flag names, with ``-`` and
``_`` interchangeable.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["GridSeries", "fmt", "read_config", "write_json", "to_jsonable"]


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def _column_names(k: int):
    return ["value"] + [f"value{i}" for i in range(2, k + 1)]


@dataclass
class GridSeries:
    """Ordered samples ``x`` with one or more value columns."""

    x: np.ndarray
    values: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = [np.asarray(v, dtype=float) for v in self.values]
        if not self.values:
            raise ValueError("a series needs at least one value column")
        for v in self.values:
            if v.shape != self.x.shape:
                raise ValueError("value columns must match x in shape")
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("x must be strictly increasing")
        if not self.labels:
            self.labels = _column_names(len(self.values))

    @property
    def header(self):
        return ["x"] + _column_names(len(self.values))

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header)
            for i, xi in enumerate(self.x):
                w.writerow([fmt(xi)] + [fmt(v[i]) for v in self.values])
        return path

    @classmethod
    def from_csv(cls, path, labels=None) -> "GridSeries":
        with Path(path).open(encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], rows[1:]
        if not header or header[0] != "x":
            raise ValueError("CSV header must start with 'x'")
        data = np.array([[float(c) for c in r] for r in body], dtype=float).reshape(len(body), len(header))
        return cls(data[:, 0], [data[:, j] for j in range(1, len(header))], labels or [])

    def to_json(self) -> dict:
        return {
            "x": [fmt(v) for v in self.x],
            "columns": {lab: [fmt(v) for v in col] for lab, col in zip(self.labels, self.values)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "GridSeries":
        labels = list(data["columns"])
        return cls(np.array([float(v) for v in data["x"]]),
                   [np.array([float(v) for v in data["columns"][k]]) for k in labels], labels)


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and non-finite floats for ``json``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(to_jsonable(payload), indent=2) + "\n", encoding="utf-8")
    return path


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file into a dict of strings."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        out[key.replace("-", "_").lower()] = value
    return out
