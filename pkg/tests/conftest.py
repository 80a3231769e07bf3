import numpy as np
import pytest

from orlicz_kit.young import ExpMinusOne, Power, PowerSum, ScaledPower, Tabulated
from orlicz_kit.weights import ExpNorm, One, PolyNorm

YOUNG_CATALOG = [
    Power(1), Power(1.5), Power(2), Power(3), Power(4),
    ScaledPower(0.25, 2), ScaledPower(3.0, 1.5),
    ExpMinusOne(),
    PowerSum(1, 1, 1, 2), PowerSum(0.5, 2, 2, 3),
    Tabulated(((0, 0), (1, 1), (2, 3), (3, 6))),
]

# subset satisfying the doubling condition
DELTA2_CATALOG = [phi for phi in YOUNG_CATALOG if not isinstance(phi, ExpMinusOne)]

WEIGHTS_1D = [One(1), ExpNorm(1.0), ExpNorm(0.3), PolyNorm(1.0), PolyNorm(2.0)]


def young_id(phi):
    return repr(phi)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
