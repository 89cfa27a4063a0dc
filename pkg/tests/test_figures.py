import csv

import numpy as np
import pytest

from baesim.figures import FIGURES, figure_panels, reproduce
from baesim.outputs import sidecar_path


def _csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return {name: np.array([float(r[k]) for r in rows[1:]]) for k, name in enumerate(rows[0])}


def test_fig2b_is_byte_deterministic(tmp_path):
    a = reproduce("fig2b", tmp_path / "a", svg=False)
    b = reproduce("fig2b", tmp_path / "b", svg=False)
    assert [p.name for p in a] == [p.name for p in b]
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_fig2c_columns(tmp_path):
    reproduce("fig2c", tmp_path, svg=True)
    cols = _csv(tmp_path / "fig2c_snr_theta.csv")
    k = 90  # theta = 90 degrees
    assert cols["snr_s0"][k] == pytest.approx(1.0, rel=1e-14)
    assert cols["snr_optimal"][k] == pytest.approx(1.0, rel=1e-12)
    assert np.argmax(cols["snr_zero"]) == 14  # 0.253 rad
    assert np.max(cols["snr_optimal"]) > 1.0
    assert (tmp_path / "fig2c_snr_theta.svg").read_text().startswith("<?xml")
    assert sidecar_path(tmp_path / "fig2c_snr_theta.csv").is_file()


def test_fig2b_recovers_unsqueezed_spectrum():
    (panel,) = figure_panels("fig2b")
    cols = panel.columns
    assert np.allclose(cols["snr_optimal"], cols["snr_s0"], rtol=1e-10)
    assert np.max(cols["snr_s0"]) == 1.0
    assert np.all(cols["snr_optimal_variational"] >= cols["snr_optimal"] - 1e-15)


def test_unknown_figure():
    with pytest.raises(KeyError):
        figure_panels("fig7")
    assert set(FIGURES) == {"fig2a", "fig2b", "fig2c", "fig3a", "fig3b"}
