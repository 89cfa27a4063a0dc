"""JSON parameter files.

Rates are given in Hz and converted to angular frequency (x 2 pi) on
ingestion. Phases are in radians. Emitting a params object and reading it
back reproduces the same :class:`SystemParams` exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import jsonschema

from .errors import ConfigurationError
from .model import SystemParams

TWO_PI = 2 * math.pi

_RATE_KEYS = {
    "g_hz": "g",
    "s_a_hz": "s_A",
    "s_b_hz": "s_B",
    "kappa_a_hz": "kappa_A",
    "kappa_l_hz": "kappa_L",
    "kappa_b_hz": "kappa_B",
    "delta_d_hz": "delta_d",
    "delta_c_hz": "delta_c",
}
_PHASE_KEYS = {
    "pump_phase_rad": "pump_phase",
    "sms_phase_a_rad": "sms_phase_A",
    "sms_phase_b_rad": "sms_phase_B",
}

PARAMS_SCHEMA = {
    "type": "object",
    "properties": {
        **{k: {"type": "number"} for k in _RATE_KEYS},
        **{k: {"type": "number"} for k in _PHASE_KEYS},
        "n_bath": {
            "type": "object",
            "additionalProperties": {"type": "number", "minimum": 0},
        },
    },
    "required": ["g_hz", "kappa_b_hz"],
    "additionalProperties": False,
}


def params_from_dict(data: dict) -> SystemParams:
    try:
        jsonschema.validate(data, PARAMS_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(f"invalid params: {exc.message}") from None
    kwargs = {attr: float(data.get(key, 0.0)) * TWO_PI for key, attr in _RATE_KEYS.items()}
    kwargs.update({attr: float(data.get(key, 0.0)) for key, attr in _PHASE_KEYS.items()})
    kwargs["n_bath"] = {str(k): float(v) for k, v in data.get("n_bath", {}).items()}
    return SystemParams(**kwargs)


def _to_hz(omega):
    """Hz value that maps back onto ``omega`` under ``* 2 pi`` when one exists.

    Every rate that was read from a file has such a preimage (a few ulps from
    ``omega / 2 pi``). Arbitrary floats may not; they come back within 1 ulp.
    """
    guess = omega / TWO_PI
    lo = hi = guess
    if guess * TWO_PI == omega:
        return guess
    for _ in range(4):
        lo, hi = math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)
        for c in (lo, hi):
            if c * TWO_PI == omega:
                return c
    return guess


def params_to_dict(p: SystemParams) -> dict:
    out = {key: _to_hz(getattr(p, attr)) for key, attr in _RATE_KEYS.items()}
    out.update({key: getattr(p, attr) for key, attr in _PHASE_KEYS.items()})
    out["n_bath"] = dict(sorted(p.n_bath.items()))
    return out


def load_params(path) -> SystemParams:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"params file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"params file {path} is not valid JSON: {exc}") from None
    return params_from_dict(data)


def dump_params(p: SystemParams, path=None) -> str:
    text = json.dumps(params_to_dict(p), indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
