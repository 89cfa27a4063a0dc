"""Labelled sweep grids with deterministic CSV / JSON serialization."""

from __future__ import annotations

import hashlib
import io
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

FLOAT_FORMAT = "{:.16e}"  # 17 significant digits


def format_value(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return FLOAT_FORMAT.format(x)


def write_csv(columns: dict, path=None):
    """Write equal-length columns as CSV; returns the text. Fixed formatting."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ValueError("CSV columns differ in length")
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for i in range(n):
        buf.write(",".join(format_value(a[i]) for a in arrays) + "\n")
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if np.isfinite(x) else None
    return obj


def canonical_json(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def params_snapshot(p):
    from .config import params_to_dict

    return params_to_dict(p) if p is not None else None


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Scalar fields on a rectilinear grid.

    ``axes`` maps axis name to its 1-d values (ordered); every entry of
    ``values`` has shape ``tuple(len(v) for v in axes.values())``.
    """

    axes: dict
    values: dict
    params: object = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(v) for v in self.axes.values())
        for name, arr in self.values.items():
            if np.shape(arr) != shape:
                raise ValueError(f"value {name!r} has shape {np.shape(arr)}, axes imply {shape}")

    @property
    def shape(self):
        return tuple(len(v) for v in self.axes.values())

    @property
    def provenance(self):
        payload = {
            "axes": self.axes,
            "params": params_snapshot(self.params),
            "meta": self.meta,
        }
        return hashlib.sha256(canonical_json(payload).encode()).hexdigest()

    def columns(self):
        """Long-format columns: one row per grid cell, axes first (C order)."""
        names = list(self.axes)
        idx = list(itertools.product(*(range(len(self.axes[n])) for n in names)))
        cols = {n: [self.axes[n][t[k]] for t in idx] for k, n in enumerate(names)}
        for name, arr in self.values.items():
            arr = np.asarray(arr)
            cols[name] = [arr[t] for t in idx]
        return cols

    def to_csv(self, path=None):
        return write_csv(self.columns(), path)

    def to_json(self, path=None):
        doc = {
            "axes": self.axes,
            "values": self.values,
            "params": params_snapshot(self.params),
            "meta": self.meta,
            "provenance": self.provenance,
        }
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text
