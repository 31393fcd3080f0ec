import math

import pytest

from trigsurf import sextic
from trigsurf.curve import sextic_curve
from trigsurf.periods import builtin_cycles, period_matrix

# A, B, C from scipy's QAWS rule (quad with weight="alg" absorbing the
# algebraic endpoint factors), frozen here; scipy is not used by the package.
ORACLE_A = 1.4021821053254542
ORACLE_B = 2.4286506478875824
ORACLE_C = 3.059908074114386
ORACLE = (ORACLE_A, ORACLE_B, ORACLE_C)

OMEGA = complex(-0.5, math.sqrt(3) / 2)


@pytest.fixture(scope="session")
def curve():
    return sextic_curve()


@pytest.fixture(scope="session")
def cycles(curve):
    return builtin_cycles(curve)


@pytest.fixture(scope="session")
def phi_periods(curve, cycles):
    return period_matrix(curve, sextic.PHI, cycles)


@pytest.fixture(scope="session")
def omega(phi_periods):
    return phi_periods.entries


@pytest.fixture(scope="session")
def omega_prime(phi_periods):
    return phi_periods.rotated(math.pi / 2).entries
