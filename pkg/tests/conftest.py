import numpy as np
import pytest

from qfdisc import FejerWindow, ScenarioConfig, Symbol


@pytest.fixture(scope="session")
def half_symbol():
    """1 on [0, pi), 0 on [pi, 2pi)."""
    return Symbol.from_segments([("0", "pi", 1.0), ("pi", "2pi", 0.0)], label="half")


@pytest.fixture(scope="session")
def canonical_q():
    return Symbol.from_segments(
        [("0", "pi/2", 0.5), ("pi/2", "3pi/2", 0.0), ("3pi/2", "2pi", 0.5)],
        label="q_half",
    )


@pytest.fixture(scope="session")
def canonical_r():
    return Symbol.from_segments(
        [("0", "pi/2", 0.5), ("pi/2", "3pi/2", 1.0), ("3pi/2", "2pi", 0.5)],
        label="r_half",
    )


@pytest.fixture(scope="session")
def canonical_window():
    return FejerWindow.from_angles("pi/2", "3pi/2", "pi/8", plateau_value=0.0)


@pytest.fixture(scope="session")
def canonical_scenario(canonical_q, canonical_r, canonical_window):
    return ScenarioConfig(
        symbol_q=canonical_q,
        symbol_r=canonical_r,
        window=canonical_window,
        n_values=(64, 128, 256, 512, 1024, 2048),
        label="canonical",
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
