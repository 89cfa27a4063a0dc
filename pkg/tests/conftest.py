import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from baesim.model import SystemParams

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Log one pass/fail line per acceptance criterion (printed at the end)."""

    def _record(number, title, passed, detail):
        ACCEPTANCE.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} -- {detail}")
        return passed

    return _record


rate = st.floats(0.05, 5.0, allow_nan=False, allow_infinity=False)
signed = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def params(draw, loss=False, detuned=True):
    return SystemParams(
        g=draw(rate),
        s_A=draw(signed),
        s_B=draw(signed),
        kappa_A=draw(rate),
        kappa_L=draw(rate) if loss else 0.0,
        kappa_B=draw(rate),
        delta_d=draw(signed) if detuned else 0.0,
        delta_c=draw(signed) if detuned else 0.0,
    )


def random_params(rng, loss=False, s_max=3.0):
    return SystemParams(
        g=rng.uniform(0.05, 5.0),
        s_A=rng.uniform(-s_max, s_max),
        s_B=rng.uniform(-s_max, s_max),
        kappa_A=rng.uniform(0.05, 5.0),
        kappa_L=rng.uniform(0.05, 5.0) if loss else 0.0,
        kappa_B=rng.uniform(0.05, 5.0),
        delta_d=rng.uniform(-3, 3),
        delta_c=rng.uniform(-3, 3),
    )


def random_stable_params(rng, loss=False, margin_frac=0.0):
    from baesim.stability import beta_roots

    while True:
        p = random_params(rng, loss)
        rep = beta_roots(p)
        if rep.stable and rep.margin > margin_frac * p.max_rate:
            return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
