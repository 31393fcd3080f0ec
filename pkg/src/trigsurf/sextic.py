"""Worked example: the curve ``w**3 = z**6 - 1`` and its exact period data.

Matrices whose entries are multiples of the constants ``A, B, C`` are stored
as a row-scale vector times an exact rational coefficient matrix, so they
can be checked both numerically and in exact arithmetic.
"""

from fractions import Fraction as Fr
import math

import numpy as np

from .curve import Differential

H = Fr(1, 2)
SQRT3 = math.sqrt(3.0)

PHI = (
    Differential((1, 0, -1), 2, "Phi1"),
    Differential((1j, 0, 1j), 2, "Phi2"),
    Differential((0, 2), 2, "Phi3"),
)

HOLOMORPHIC_BASIS = (
    Differential((1,), 2, "dz/w^2"),
    Differential((0, 1), 2, "z dz/w^2"),
    Differential((0, 0, 1), 2, "z^2 dz/w^2"),
    Differential((1,), 1, "dz/w"),
)

CYCLE_NAMES = ("A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4")

# row scales: (symbol, multiplier of sqrt(3)) -> value is multiplier * constant
OMEGA_SCALES = (("A", 0), ("B", 0), ("C", 1))
OMEGA_COEFFS = (
    (0, 3 * H, -3 * H, 0, -3 * H, 0, 3 * H, -3 * H),
    (0, 3 * H, 3 * H, 0, 3 * H, 0, -3 * H, -3 * H),
    (-1, H, H, -1, -H, 1, -H, -H),
)

OMEGA_PRIME_SCALES = (("A", 1), ("B", 1), ("C", 0))
OMEGA_PRIME_COEFFS = (
    (-1, H, H, -1, H, -1, H, H),
    (1, H, -H, -1, -H, -1, -H, H),
    (0, -3 * H, 3 * H, 0, -3 * H, 0, 3 * H, -3 * H),
)

LAMBDA_COEFFS = ((3, 0, 3 * H), (0, 3, 3 * H), (0, 0, H))
LAMBDA_PRIME_COEFFS = ((1, 0, H), (0, 1, H), (0, 0, 3 * H))

G1 = ((0, 0, 0), (1, 0, 1), (0, 0, 0), (0, 0, 0), (0, 1, 0), (0, 0, 0), (1, 0, 0), (0, -1, 0))
G2 = ((1, 0, -1, 1, 0, -1, 1, 0), (1, 0, 0, 1, 1, -1, 0, 0), (-2, 1, 1, -2, -1, 2, -1, -1))
G1_PRIME = ((0, 1, 0), (1, 1, -1), (1, 1, 0), (0, 0, -1),
            (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0))
G2_PRIME = ((-1, 1, 0, -1, 1, -1, 0, 1), (1, 1, -1, -1, 0, -1, -1, 1),
            (0, -1, 1, 0, -1, 0, 1, -1))

# Complex periods over A1..A4 (X) and B1..B4 (Y): entry (p, q) means
# (p + q*omega) times the row factor A, B or i*C.
X_PATTERN = (
    ((1, 2), (1, -1), (-2, -1), (1, 2)),
    ((-1, -2), (1, -1), (2, 1), (1, 2)),
    ((1, 2), (1, -1), (-2, -1), (1, 2)),
)
Y_PATTERN = (
    ((-2, -1), (1, 2), (1, -1), (-2, -1)),
    ((2, 1), (1, 2), (-1, 1), (-2, -1)),
    ((2, 1), (-1, -2), (-1, 1), (2, 1)),
)

#: cube symmetries acting on R^3
R1 = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
R2 = ((1, 0, 0), (0, -1, 0), (0, 0, -1))
MINUS_I = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))


def _scaled(scales, coeffs, consts):
    vals = dict(zip("ABC", consts))
    rows = []
    for (sym, root3), row in zip(scales, coeffs):
        s = vals[sym] * (SQRT3 if root3 else 1.0)
        rows.append([s * float(c) for c in row])
    return np.array(rows)


def omega_pattern(A, B, C):
    """Real periods of ``PHI`` over ``A1..B4`` in terms of the constants."""
    return _scaled(OMEGA_SCALES, OMEGA_COEFFS, (A, B, C))


def omega_prime_pattern(A, B, C):
    """Real periods of ``i * PHI`` (the conjugate surface)."""
    return _scaled(OMEGA_PRIME_SCALES, OMEGA_PRIME_COEFFS, (A, B, C))


def lambda_basis(A, B, C):
    return _scaled(OMEGA_SCALES, LAMBDA_COEFFS, (A, B, C))


def lambda_prime_basis(A, B, C):
    return _scaled(OMEGA_PRIME_SCALES, LAMBDA_PRIME_COEFFS, (A, B, C))


def complex_period_pattern(A, B, C):
    """Complex periods ``∫ PHI`` over ``A1..B4`` from the Eisenstein patterns."""
    omega = complex(-0.5, SQRT3 / 2)
    factors = (A, B, 1j * C)
    out = np.empty((3, 8), dtype=complex)
    for i in range(3):
        for j, (p, q) in enumerate(X_PATTERN[i] + Y_PATTERN[i]):
            out[i, j] = (p + q * omega) * factors[i]
    return out


def immersion_matrix(b1=1, b2=1):
    """The 4x4 coefficient matrix applied to ``HOLOMORPHIC_BASIS``."""
    return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, b1, 0], [0, 0, b2, 0]], dtype=complex)
