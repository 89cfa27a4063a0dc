"""Figure presets: data panels as CSV and convenience SVG renders.

CSV files are the contract (byte-deterministic for a fixed version); SVGs
are rendered with a fixed hash salt and no timestamp so they are usually
reproducible too, but nothing depends on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import presets
from .metrics import gains, snr_spectrum, snr_vs_theta, variational_snr_exact
from .model import PortConfig
from .scanrate import SreConfig, sre, sre_map, sre_vs_cooperativity
from .scattering import FrequencyGrid, solve_scattering
from .stability import critical_cooperativity, stable_detuning_interval
from .outputs import write_table

FIGURES = ("fig2a", "fig2b", "fig2c", "fig3a", "fig3b")
FIG2_CASES = ("s0", "zero", "optimal")


@dataclass(frozen=True, eq=False)
class Panel:
    name: str
    columns: dict
    params: object
    meta: dict = field(default_factory=dict)
    x: str = ""
    ys: tuple = ()
    xlabel: str = ""
    ylabel: str = ""
    kind: str = "lines"


def _fig2_grid():
    kappa = presets.fig2().kappa_B
    return FrequencyGrid.uniform(3 * kappa, 401)


def _fig2_scattering(case, grid):
    p = presets.fig2(case)
    return solve_scattering(p, PortConfig.default(p), grid)


def fig2a():
    grid = _fig2_grid()
    cols = {"omega": grid.omega}
    for case in FIG2_CASES:
        gs = gains(_fig2_scattering(case, grid))
        cols[f"G_A_{case}"] = gs.G_A
        cols[f"G_B_{case}"] = gs.G_B
        cols[f"B_A_{case}"] = gs.B_A
        cols[f"B_B_{case}"] = gs.B_B
    return [Panel("fig2a_gains", cols, presets.fig2(), {"cases": FIG2_CASES}, "omega",
                  tuple(f"{g}_{c}" for c in FIG2_CASES for g in ("G_A", "G_B")), "omega", "gain")]


def fig2b():
    grid = _fig2_grid()
    cols = {"omega": grid.omega}
    peak = None
    for case in FIG2_CASES:
        sm = _fig2_scattering(case, grid)
        snr = snr_spectrum(sm, np.pi / 2).snr
        if case == "s0":
            peak = float(np.max(snr))
        cols[f"snr_{case}"] = snr / peak
        if case == "optimal":
            cols["snr_optimal_variational"] = variational_snr_exact(sm) / peak
    return [Panel("fig2b_snr", cols, presets.fig2(), {"normalized_to": "peak of s0 at theta=pi/2", "peak": peak},
                  "omega", tuple(c for c in cols if c != "omega"), "omega", "SNR / SNR_s0 peak")]


def fig2c():
    grid = FrequencyGrid(np.array([0.0]))
    thetas = np.deg2rad(np.arange(0, 181))
    cols = {"theta": thetas}
    peak = None
    for case in FIG2_CASES:
        sm = _fig2_scattering(case, grid)
        _, values = snr_vs_theta(sm, 0, thetas)
        if case == "s0":
            peak = float(snr_spectrum(sm, np.pi / 2).snr[0])
        cols[f"snr_{case}"] = values / peak
    return [Panel("fig2c_snr_theta", cols, presets.fig2(), {"omega": 0.0, "normalized_to": "s0 at theta=pi/2",
                                                             "peak": peak},
                  "theta", tuple(f"snr_{c}" for c in FIG2_CASES), "theta (rad)", "SNR / SNR_s0(pi/2)")]


def fig3a():
    p = presets.fig3()
    cfg = SreConfig(p)
    sa, sb = p.s_A, p.s_B
    dd = -sa + sa * np.linspace(-2, 2, 21)
    dc = sb + sb * np.linspace(-2, 2, 21)
    res = sre_map(cfg, dd, dc)
    line_dc = sb * np.linspace(-1, 3, 81)
    line = []
    for y in line_dc:
        q = p.replace(delta_d=-sa, delta_c=y)
        line.append(sre(q, cfg))
    meta = {"baseline": cfg.baseline, "theta": cfg.theta}
    return [
        Panel("fig3a_sre_map", res.columns(), p, {**meta, **res.meta, "provenance": res.provenance},
              kind="map", x="delta_d", ys=("delta_c", "sre")),
        Panel("fig3a_line_cut", {"delta_c": line_dc, "sre": np.array(line)}, p, {**meta, "delta_d": -sa},
              "delta_c", ("sre",), "delta_c (rad/s)", "SRE"),
    ]


def fig3b():
    p = presets.fig3()
    cfg = SreConfig(p)
    cs = np.linspace(0.5, presets.FIG3_COOPERATIVITY, 34)
    zero = sre_vs_cooperativity(cfg, "zero", cs)
    tracking = sre_vs_cooperativity(cfg, "tracking-optimal", cs)
    crit = critical_cooperativity(p, "zero")
    cols = {
        "cooperativity": cs,
        "sre_zero": zero.values["sre"],
        "stable_zero": zero.values["stable"],
        "sre_optimal": tracking.values["sre"],
    }
    widths_c = np.linspace(2.0, presets.FIG3_COOPERATIVITY, 15)
    span = 4 * abs(p.s_A)
    lower, upper = [], []
    for c in widths_c:
        q = p.scaled_pump(np.sqrt(c / p.cooperativity))
        lo, hi = stable_detuning_interval(q, span=span, n=201)
        lower.append(lo)
        upper.append(hi)
    band = {"cooperativity": widths_c, "lower_offset": np.array(lower), "upper_offset": np.array(upper),
            "width": np.array(upper) - np.array(lower)}
    meta = {"baseline": cfg.baseline, "c_star_zero": crit.c_star}
    return [
        Panel("fig3b_sre_vs_c", cols, p, meta, "cooperativity", ("sre_zero", "sre_optimal"), "C", "SRE"),
        Panel("fig3b_stable_band", band, p, {"delta_c": "s_B", "offsets_about": "-s_A",
                                                       "clamped_to": [-span, span]}, "cooperativity",
              ("lower_offset", "upper_offset"), "C", "delta_d offset (rad/s)"),
    ]


BUILDERS = {"fig2a": fig2a, "fig2b": fig2b, "fig2c": fig2c, "fig3a": fig3a, "fig3b": fig3b}


def figure_panels(fig_id):
    if fig_id not in BUILDERS:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {FIGURES}")
    return BUILDERS[fig_id]()


def render_svg(panel: Panel, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "baesim", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        if panel.kind == "map":
            x = np.asarray(panel.columns[panel.x], dtype=float)
            y = np.asarray(panel.columns[panel.ys[0]], dtype=float)
            z = np.asarray(panel.columns[panel.ys[1]], dtype=float)
            xs, ys = np.unique(x), np.unique(y)
            grid = z.reshape(xs.size, ys.size)
            mesh = ax.pcolormesh(ys, xs, np.ma.masked_invalid(grid), shading="nearest")
            fig.colorbar(mesh, ax=ax, label=panel.ys[1])
            ax.set_xlabel(panel.ys[0])
            ax.set_ylabel(panel.x)
        else:
            x = np.asarray(panel.columns[panel.x], dtype=float)
            for name in panel.ys:
                ax.plot(x, np.asarray(panel.columns[name], dtype=float), label=name)
            ax.set_xlabel(panel.xlabel or panel.x)
            ax.set_ylabel(panel.ylabel)
            ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def reproduce(fig_id, outdir, svg=True):
    """Write every panel of ``fig_id`` to ``outdir``; returns the paths written."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for panel in figure_panels(fig_id):
        csv = outdir / f"{panel.name}.csv"
        written += write_table(csv, panel.columns, panel.params, figure=fig_id, panel=panel.name, **panel.meta)
        if svg:
            written.append(render_svg(panel, outdir / f"{panel.name}.svg"))
    return written
