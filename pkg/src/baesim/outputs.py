"""Output files: CSV data plus a JSON metadata sidecar for every artifact."""

from __future__ import annotations

import hashlib
import json
import os
import platform
from importlib import metadata
from pathlib import Path

from .config import params_to_dict
from .metrics import SNR_NORMALIZATION
from .scattering import CONVENTION
from .sweep import _jsonable, canonical_json, write_csv

OUTPUT_DIR_ENV = "BAESIM_OUTPUT_DIR"
PACKAGE = "baesim"


def package_version():
    from . import __version__

    return __version__


def versions():
    out = {PACKAGE: package_version(), "python": platform.python_version()}
    for dist in ("numpy", "scipy"):
        try:
            out[dist] = metadata.version(dist)
        except metadata.PackageNotFoundError:
            out[dist] = "unknown"
    return out


def params_hash(p):
    if p is None:
        return None
    return hashlib.sha256(canonical_json(params_to_dict(p)).encode()).hexdigest()


def resolve_output_dir(cli_value=None, default="out"):
    """Environment variable beats the command-line value, which beats the default."""
    path = Path(os.environ.get(OUTPUT_DIR_ENV) or cli_value or default)
    path.mkdir(parents=True, exist_ok=True)
    return path


def sidecar_path(path):
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def write_sidecar(path, params=None, **meta):
    doc = {
        "file": Path(path).name,
        "params": params_to_dict(params) if params is not None else None,
        "params_hash": params_hash(params),
        "params_units": "Hz (rates), rad (phases)",
        "conventions": {"fourier": CONVENTION, "snr": SNR_NORMALIZATION},
        "versions": versions(),
        **meta,
    }
    out = sidecar_path(path)
    out.write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
    return out


def write_table(path, columns, params=None, **meta):
    """CSV with fixed formatting and its sidecar; returns both paths."""
    path = Path(path)
    write_csv(columns, path)
    return [path, write_sidecar(path, params, **meta)]


def write_json(path, doc, params=None, **meta):
    path = Path(path)
    path.write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
    return [path, write_sidecar(path, params, **meta)]
