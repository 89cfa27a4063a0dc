"""Command-line front end.

Every subcommand reads a JSON params file (rates in Hz, see
:mod:`baesim.config`), writes CSV and/or JSON into the output directory
(``--out``, overridden by ``$BAESIM_OUTPUT_DIR``) and a ``.meta.json``
sidecar per file. Frequencies in emitted files are in Hz.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import circuit as circ
from .config import load_params, params_to_dict
from .errors import ConfigurationError, NumericalError
from .figures import FIGURES, reproduce
from .metrics import max_snr_over_theta, snr_spectrum, snr_vs_theta, variational_snr
from .model import PortConfig
from .outputs import resolve_output_dir, write_json, write_table
from .scanrate import BASELINES, DEFAULT_BASELINE, SreConfig, optimize_detunings, sre_map, sre_vs_cooperativity
from .scattering import FrequencyGrid, solve_scattering
from .stability import POLICIES, critical_cooperativity, stability_map
from .timedomain import FULL_STEPS_PER_PERIOD, FullModelParams, integrate_full, integrate_rwa, rwa_scaling_check

TWO_PI = 2 * math.pi
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params_path: str | None
    output_dir: str | None
    options: dict = field(default_factory=dict)


def _hz(x):
    return np.asarray(x, dtype=float) / TWO_PI


def _grid(p, opts):
    points = opts["points"]
    if points < 2:
        raise ConfigurationError("need at least 2 grid points")
    half = opts["half_span_hz"] * TWO_PI if opts.get("half_span_hz") else 3 * max(p.kappa_B, p.kappa_A_total, p.g)
    if opts.get("grid", "uniform") == "log":
        return FrequencyGrid.log_dense(half, points, max(p.kappa_A_total, 1e-9 * half) / 2)
    return FrequencyGrid.uniform(half, points)


def cmd_scattering(p, out, opts):
    ports = PortConfig.default(p)
    sm = solve_scattering(p, ports, _grid(p, opts))
    if opts.get("entries"):
        pairs = [tuple(e.split(":")) for e in opts["entries"].split(",")]
    else:
        pairs = [(o, i) for o in ports.labels for i in ports.labels]
    cols = {"omega_hz": _hz(sm.omega)}
    for o, i in pairs:
        try:
            v = sm.entry(o, i)
        except (KeyError, ValueError) as exc:
            raise ConfigurationError(f"unknown scattering entry {o}:{i}") from exc
        cols[f"re_S_{o}_{i}"] = v.real
        cols[f"im_S_{o}_{i}"] = v.imag
    return write_table(out / "scattering.csv", cols, p, kind="scattering", singular_points=int(sm.singular.sum()))


def cmd_snr(p, out, opts):
    sm = solve_scattering(p, PortConfig.default(p), FrequencyGrid(np.array([opts["at_omega_hz"] * TWO_PI]))
                          if opts.get("at_omega_hz") is not None else _grid(p, opts))
    if opts.get("at_omega_hz") is not None:
        thetas, values = snr_vs_theta(sm, 0)
        best_theta, best = max_snr_over_theta(sm, 0)
        return write_table(out / "snr_theta.csv", {"theta": thetas, "snr": values}, p, kind="snr-vs-theta",
                           omega_hz=opts["at_omega_hz"], argmax_theta=best_theta, max_snr=best)
    if opts.get("variational"):
        spec = variational_snr(sm)
        return write_table(out / "snr_variational.csv", {"omega_hz": _hz(sm.omega), "snr": spec.snr}, p,
                           kind="snr-variational", normalization=spec.normalization)
    spec = snr_spectrum(sm, opts["theta"])
    return write_table(out / "snr.csv", {"omega_hz": _hz(sm.omega), "snr": spec.snr}, p, kind="snr",
                       theta=spec.theta, normalization=spec.normalization)


def _detuning_axes(p, opts):
    unit = max(abs(p.s_A), abs(p.s_B)) or p.kappa_A_total
    span = opts["span"] * unit
    centre = {"optimal": (-p.s_A, p.s_B), "params": (p.delta_d, p.delta_c), "zero": (0.0, 0.0)}[opts["centre"]]
    offsets = np.linspace(-span, span, opts["points"])
    return centre[0] + offsets, centre[1] + offsets


def cmd_stability_map(p, out, opts):
    dd, dc = _detuning_axes(p, opts)
    res = stability_map(p, dd, dc)
    cols = res.columns()
    for name in ("delta_d", "delta_c", "margin"):
        cols[name] = _hz(cols[name])
    return write_table(out / "stability_map.csv", cols, p, kind="stability-map", centre=opts["centre"],
                       provenance=res.provenance)


def _sre_config(p, opts):
    return SreConfig(p, baseline=opts["baseline"], theta=opts["theta"], variational=opts["variational"])


def cmd_sre_sweep(p, out, opts):
    cfg = _sre_config(p, opts)
    cs = np.linspace(opts["c_min"], opts["c_max"] or p.cooperativity, opts["points"])
    res = sre_vs_cooperativity(cfg, opts["policy"], cs)
    cols = res.columns()
    cols["margin"] = _hz(cols["margin"])
    sre_vals = res.values["sre"]
    summary = {"policy": opts["policy"], "baseline": cfg.baseline, "points": int(cs.size),
               "stable_points": int(np.sum(res.values["stable"]))}
    if np.any(np.isfinite(sre_vals)):
        k = int(np.nanargmax(sre_vals))
        summary.update(best_cooperativity=cs[k], best_sre=sre_vals[k], best_margin_hz=_hz(res.values["margin"][k]))
    crit = critical_cooperativity(p, opts["policy"] if opts["policy"] != "fixed" else "fixed")
    summary.update(critical_cooperativity=crit.c_star, critical_verdict=crit.verdict)
    meta = {"kind": "sre-sweep", "baseline": cfg.baseline, "policy": opts["policy"], "provenance": res.provenance}
    return (write_table(out / "sre_sweep.csv", cols, p, **meta)
            + write_json(out / "sre_sweep_summary.json", summary, p, **meta))


def cmd_sre_map(p, out, opts):
    cfg = _sre_config(p, opts)
    dd, dc = _detuning_axes(p, opts)
    res = sre_map(cfg, dd, dc, lam=opts["lam"])
    cols = res.columns()
    for name in ("delta_d", "delta_c", "margin"):
        cols[name] = _hz(cols[name])
    summary = {"baseline": cfg.baseline, "lambda": opts["lam"], "cooperativity": p.cooperativity * opts["lam"] ** 2}
    values = res.values["sre"]
    if np.any(np.isfinite(values)):
        i, j = np.unravel_index(np.nanargmax(values), values.shape)
        summary.update(best_delta_d_hz=_hz(dd[i]), best_delta_c_hz=_hz(dc[j]), best_sre=values[i, j],
                       best_margin_hz=_hz(res.values["margin"][i, j]))
    meta = {"kind": "sre-map", "baseline": cfg.baseline, "provenance": res.provenance}
    return write_table(out / "sre_map.csv", cols, p, **meta) + write_json(out / "sre_map_summary.json", summary, p,
                                                                           **meta)


def cmd_optimize(p, out, opts):
    cfg = _sre_config(p, opts)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        best = optimize_detunings(cfg, lam=opts["lam"], seed=opts["seed"], restarts=opts["restarts"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    summary = {
        "delta_d_hz": _hz(best.delta_d), "delta_c_hz": _hz(best.delta_c), "sre": best.sre,
        "margin_hz": _hz(best.margin), "converged": best.converged, "evaluations": best.evaluations,
        "cooperativity": p.cooperativity * opts["lam"] ** 2, "baseline": cfg.baseline, "seed": opts["seed"],
        "compensation_point_hz": [_hz(-p.s_A * opts["lam"] ** 2), _hz(p.s_B * opts["lam"] ** 2)],
    }
    cols = {k: [summary[k]] for k in ("delta_d_hz", "delta_c_hz", "sre", "margin_hz", "cooperativity")}
    meta = {"kind": "optimize-detunings", "baseline": cfg.baseline}
    return write_table(out / "optimum.csv", cols, p, **meta) + write_json(out / "optimum.json", summary, p, **meta)


CIRCUIT_SCHEMA = {
    "type": "object",
    "properties": {
        "E_J": {"type": "number", "minimum": 0},
        "I0": {"type": "number", "minimum": 0},
        "phi_ext": {"type": "number"},
        **{k: {"type": "number", "exclusiveMinimum": 0} for k in ("Z_A", "Z_B", "Z_C")},
        **{k: {"type": "number"} for k in ("f_a_hz", "f_b_hz", "f_c_hz")},
        "c_amp": {"type": "number", "minimum": 0},
        "pump_phase_rad": {"type": "number"},
        "delta_sigma_hz": {"type": "number"},
        "delta_delta_hz": {"type": "number"},
        "n_c": {"type": "number", "minimum": 0},
        **{k: {"type": "number", "minimum": 0} for k in ("kappa_a_hz", "kappa_l_hz", "kappa_b_hz")},
    },
    "required": ["phi_ext", "Z_A", "Z_B", "Z_C", "f_a_hz", "f_b_hz", "f_c_hz", "c_amp", "kappa_b_hz"],
    "oneOf": [{"required": ["E_J"]}, {"required": ["I0"]}],
    "additionalProperties": False,
}


def load_circuit(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"circuit file not found: {path}")
    try:
        data = json.loads(path.read_text())
        jsonschema.validate(data, CIRCUIT_SCHEMA)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"circuit file is not valid JSON: {exc}") from None
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(f"invalid circuit file: {exc.message}") from None
    kw = dict(phi_ext=data["phi_ext"], Z_A=data["Z_A"], Z_B=data["Z_B"], Z_C=data["Z_C"],
              omega_a=TWO_PI * data["f_a_hz"], omega_b=TWO_PI * data["f_b_hz"], omega_c=TWO_PI * data["f_c_hz"])
    c = circ.JrmCircuit(E_J=data["E_J"], **kw) if "E_J" in data else circ.JrmCircuit.from_critical_current(
        data["I0"], **kw)
    drive = circ.PumpDrive(data["c_amp"], data.get("pump_phase_rad", 0.0), TWO_PI * data.get("delta_sigma_hz", 0.0),
                           TWO_PI * data.get("delta_delta_hz", 0.0))
    return c, drive, data


def cmd_circuit_rates(_p, out, opts):
    c, drive, data = load_circuit(opts["circuit"])
    rates = circ.effective_rates(c, drive, n_c=data.get("n_c"))
    p = rates.to_system_params(drive, TWO_PI * data.get("kappa_a_hz", 0.0), TWO_PI * data["kappa_b_hz"],
                               TWO_PI * data.get("kappa_l_hz", 0.0))
    k = rates.kerr
    doc = {
        "g3_hz": _hz(rates.g3), "g_hz": _hz(rates.g), "s_a_hz": _hz(rates.s_A), "s_b_hz": _hz(rates.s_B),
        "f_A_hz": _hz(rates.omega_A), "f_B_hz": _hz(rates.omega_B), "f_C_hz": _hz(rates.omega_C),
        "pump_difference_hz": _hz(rates.pump_difference), "pump_sum_hz": _hz(rates.pump_sum),
        "kerr_hz": {name: _hz(getattr(k, name)) for name in ("K_AA", "K_BB", "K_CC", "K_AB", "K_AC", "K_BC")},
        "delta_d_hz": _hz(drive.delta_d), "delta_c_hz": _hz(drive.delta_c),
    }
    files = write_json(out / "circuit_rates.json", doc, p, kind="circuit-rates")
    params_path = out / "params.json"
    params_path.write_text(json.dumps(params_to_dict(p), indent=2, sort_keys=True) + "\n")
    return files + [params_path]


def cmd_timedomain(p, out, opts):
    check = rwa_scaling_check(p, separation=opts["separation"], t_max_g=opts["t_max_g"])
    f = FullModelParams.from_system(p, opts["separation"] * p.g, 1.37 * opts["separation"] * p.g)
    T = opts["t_max_g"] / p.g
    n = int(math.ceil(T / (TWO_PI / (FULL_STEPS_PER_PERIOD * f.Omega_sum))))
    full = integrate_full(f, (1.0, 0.0, 0.0, 0.0), T, T / n)
    rwa = integrate_rwa(p, (1.0, 0.0, 0.0, 0.0), T, T / n)
    stride = max(1, full.t.size // opts["rows"])
    sl = slice(None, None, stride)
    cols = {"t": full.t[sl]}
    for k, name in enumerate(("X_A", "Y_A", "X_B", "Y_B")):
        cols[f"{name}_full"] = full.v[sl, k]
        cols[f"{name}_rwa"] = rwa.v[sl, k]
    cols["deviation"] = np.linalg.norm(full.v - rwa.v, axis=1)[sl] / np.max(rwa.norm)
    verdict = {"separations": check.separations, "max_deviation": check.deviations,
               "halving_ratio": check.halving_ratio, "scaling_slope": check.slope,
               "within_2_percent": check.deviations[0] <= 0.02}
    return (write_table(out / "timedomain.csv", cols, p, kind="timedomain-check")
            + write_json(out / "timedomain_verdict.json", verdict, p, kind="timedomain-check"))


def cmd_reproduce(_p, out, opts):
    figs = FIGURES if "all" in opts["figures"] else opts["figures"]
    written = []
    for fig in figs:
        if fig not in FIGURES:
            raise ConfigurationError(f"unknown figure id {fig!r}; choose from {FIGURES}")
        written += reproduce(fig, out, svg=not opts["no_svg"])
    return written


COMMANDS = {
    "scattering": cmd_scattering,
    "snr": cmd_snr,
    "stability-map": cmd_stability_map,
    "sre-sweep": cmd_sre_sweep,
    "sre-map": cmd_sre_map,
    "optimize-detunings": cmd_optimize,
    "circuit-rates": cmd_circuit_rates,
    "timedomain-check": cmd_timedomain,
    "reproduce": cmd_reproduce,
}
NEEDS_PARAMS = set(COMMANDS) - {"circuit-rates", "reproduce"}


def build_parser():
    parser = argparse.ArgumentParser(prog="baesim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text, params=True):
        sp = sub.add_parser(name, help=help_text)
        if params:
            sp.add_argument("--params", required=True, help="JSON params file (rates in Hz)")
        sp.add_argument("--out", default=None, help="output directory (env BAESIM_OUTPUT_DIR wins)")
        return sp

    def grid_args(sp):
        sp.add_argument("--points", type=int, default=401)
        sp.add_argument("--half-span-hz", type=float, default=None)
        sp.add_argument("--grid", choices=("uniform", "log"), default="uniform")

    def detuning_args(sp, points=41):
        sp.add_argument("--points", type=int, default=points)
        sp.add_argument("--span", type=float, default=2.0, help="half-width in units of max |s|")
        sp.add_argument("--centre", choices=("optimal", "params", "zero"), default="optimal")

    def sre_args(sp):
        sp.add_argument("--baseline", choices=sorted(BASELINES), default=DEFAULT_BASELINE)
        sp.add_argument("--theta", type=float, default=math.pi / 2)
        sp.add_argument("--variational", action="store_true")

    sp = add("scattering", "scattering matrix on a frequency grid")
    grid_args(sp)
    sp.add_argument("--entries", default=None, help="comma list like Y_B:X_A,X_A:Y_B")

    sp = add("snr", "SNR spectrum or angle sweep")
    grid_args(sp)
    sp.add_argument("--theta", type=float, default=math.pi / 2)
    sp.add_argument("--at-omega", dest="at_omega_hz", type=float, default=None, help="Hz; sweep theta here")
    sp.add_argument("--variational", action="store_true")

    sp = add("stability-map", "stability margin over detunings")
    detuning_args(sp)

    sp = add("sre-sweep", "SRE along the pump-scaling path")
    sp.add_argument("--policy", choices=POLICIES, default="tracking-optimal")
    sp.add_argument("--c-min", type=float, default=0.5)
    sp.add_argument("--c-max", type=float, default=None)
    sp.add_argument("--points", type=int, default=24)
    sre_args(sp)

    sp = add("sre-map", "SRE over detunings")
    detuning_args(sp, points=21)
    sp.add_argument("--lam", type=float, default=1.0)
    sre_args(sp)

    sp = add("optimize-detunings", "maximize SRE over detunings")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=3)
    sp.add_argument("--lam", type=float, default=1.0)
    sre_args(sp)

    sp = add("circuit-rates", "effective rates from circuit constants", params=False)
    sp.add_argument("--circuit", required=True, help="JSON circuit file")

    sp = add("timedomain-check", "full model versus RWA")
    sp.add_argument("--separation", type=float, default=1e3, help="omega_A / g")
    sp.add_argument("--t-max-g", type=float, default=5.0)
    sp.add_argument("--rows", type=int, default=2000)

    sp = add("reproduce", "regenerate figure data", params=False)
    sp.add_argument("figures", nargs="+", help=f"any of {', '.join(FIGURES)} or 'all'")
    sp.add_argument("--no-svg", action="store_true")
    return parser


def config_from_args(ns) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "params", "out")}
    return RunConfig(ns.subcommand, getattr(ns, "params", None), ns.out, opts)


def run(cfg: RunConfig) -> int:
    try:
        p = load_params(cfg.params_path) if cfg.subcommand in NEEDS_PARAMS else None
        out = resolve_output_dir(cfg.output_dir)
        written = COMMANDS[cfg.subcommand](p, out, cfg.options)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        for key, value in (exc.diagnostics or {}).items():
            print(f"  {key}: {value}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in written:
        print(path)
    return EXIT_OK


def main(argv=None):
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
