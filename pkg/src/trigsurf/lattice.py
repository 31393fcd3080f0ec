"""Exact integer/rational matrices and lattice certificates.

Factorization checks ``U G1 = V, V G2 = U`` certify that two sets of
vectors generate the same lattice.  Rational rank is estimated by integer
relation search (LLL); it is heuristic and only the factorizations are
certificates.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import NamedTuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import (DegenerateAngle, DimensionMismatch, NotCoprime, SingularBasis)

SQRT3 = math.sqrt(3.0)
MAX_CONDITION = 1e10
DEFAULT_MAX_HEIGHT = 10 ** 6


def _check_rect(rows):
    if not rows:
        return 0, 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatch("ragged matrix rows")
    return len(rows), width


class IntMatrix:
    """Immutable matrix of Python integers."""

    __slots__ = ("_rows",)

    def __init__(self, rows):
        out = []
        for r in rows:
            row = []
            for v in r:
                if isinstance(v, str):
                    v = int(v)
                elif isinstance(v, (float, np.floating)):
                    if not float(v).is_integer():
                        raise ValueError(f"non-integer entry {v!r}")
                    v = int(v)
                elif isinstance(v, Fraction):
                    if v.denominator != 1:
                        raise ValueError(f"non-integer entry {v!r}")
                    v = v.numerator
                else:
                    v = int(v)
                row.append(v)
            out.append(tuple(row))
        _check_rect(out)
        self._rows = tuple(out)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return (len(self._rows), len(self._rows[0]) if self._rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._rows]})"

    def with_entry(self, i, j, value):
        rows = [list(r) for r in self._rows]
        rows[i][j] = value
        return IntMatrix(rows)

    def to_numpy(self):
        return np.array(self._rows, dtype=float).reshape(self.shape)

    def to_json(self):
        return [[str(v) for v in r] for r in self._rows]

    @classmethod
    def from_json(cls, obj):
        return cls([[int(v) for v in r] for r in obj])


class RatMatrix:
    """Immutable matrix of :class:`fractions.Fraction`."""

    __slots__ = ("_rows",)

    def __init__(self, rows):
        out = [tuple(Fraction(v) for v in r) for r in rows]
        _check_rect(out)
        self._rows = tuple(out)

    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return (len(self._rows), len(self._rows[0]) if self._rows else 0)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __matmul__(self, other):
        return RatMatrix(_exact_matmul(self._rows, _rows_of(other)))

    def to_numpy(self):
        return np.array([[float(v) for v in r] for r in self._rows]).reshape(self.shape)

    def to_json(self):
        return [[str(v) for v in r] for r in self._rows]

    @classmethod
    def from_json(cls, obj):
        return cls([[Fraction(v) for v in r] for r in obj])


def _rows_of(m):
    if isinstance(m, (IntMatrix, RatMatrix)):
        return m.rows
    return tuple(tuple(r) for r in m)


def _exact_matmul(a, b):
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = list(zip(*b)) if b else []
    return [[sum((Fraction(x) * y for x, y in zip(r, c)), Fraction(0)) for c in cols] for r in a]


@dataclass(frozen=True)
class LatticeBasis:
    """Columns span a full-rank lattice in ``R^n``."""

    columns: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        arr = np.array(_real_matrix(self.columns), dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"lattice basis must be square, got shape {arr.shape}")
        cond = np.linalg.cond(arr) if arr.size else np.inf
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise SingularBasis(f"basis condition number {cond:.3g} exceeds {MAX_CONDITION:g}")
        arr.setflags(write=False)
        object.__setattr__(self, "columns", arr)

    @property
    def dimension(self):
        return self.columns.shape[0]

    def reduce(self, x):
        """Representative of ``x`` in the fundamental parallelepiped ``V [0,1)^n``."""
        coeff = np.linalg.solve(self.columns, np.asarray(x, dtype=float))
        # lattice points themselves map to the origin, not to a far corner
        near = np.abs(coeff - np.round(coeff)) < 1e-9
        frac = np.where(near, 0.0, coeff - np.floor(coeff))
        return self.columns @ frac

    def to_json(self):
        return {"columns": self.columns.tolist(), "provenance": self.provenance}


def _real_matrix(x):
    if isinstance(x, LatticeBasis):
        return x.columns
    if isinstance(x, (IntMatrix, RatMatrix)):
        return x.to_numpy()
    if hasattr(x, "entries") and hasattr(x, "complex_entries"):
        return np.asarray(x.entries, dtype=float)
    return x


def _is_exact(x):
    if isinstance(x, (IntMatrix, RatMatrix)):
        return True
    if isinstance(x, (LatticeBasis, np.ndarray)) or hasattr(x, "entries"):
        return False
    try:
        return all(isinstance(v, (int, Fraction)) for r in x for v in r)
    except TypeError:
        return False


# factorization certificates ------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one matrix identity ``lhs = rhs``."""

    identity: str
    max_residual: float
    tol: float
    passed: bool

    def to_json(self):
        return {"identity": self.identity, "max_residual": self.max_residual,
                "tol": self.tol, "pass": self.passed}


def _relative_residual(lhs, rhs):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.shape != rhs.shape:
        raise DimensionMismatch(f"shapes {lhs.shape} and {rhs.shape} differ")
    scale = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    diff = float(np.max(np.abs(lhs - rhs))) if rhs.size else 0.0
    return diff / scale if scale > 0 else diff


def check_identity(lhs_factor, int_factor, rhs, tol, label):
    """``lhs_factor @ int_factor == rhs`` in max-norm relative to ``max|rhs|``.

    With ``tol == 0`` and exact inputs the comparison is done in rational
    arithmetic and passes only on exact equality.
    """
    if tol == 0 and _is_exact(lhs_factor) and _is_exact(rhs):
        prod = _exact_matmul(_rows_of(lhs_factor), _rows_of(int_factor))
        target = [[Fraction(v) for v in r] for r in _rows_of(rhs)]
        if len(prod) != len(target) or any(len(a) != len(b) for a, b in zip(prod, target)):
            raise DimensionMismatch("product and target shapes differ")
        diff = max((abs(a - b) for ra, rb in zip(prod, target) for a, b in zip(ra, rb)),
                   default=Fraction(0))
        scale = max((abs(b) for rb in target for b in rb), default=Fraction(0))
        res = diff / scale if scale else diff
        return IdentityCheck(label, float(res), 0.0, res == 0)
    u = np.asarray(_real_matrix(lhs_factor), dtype=float)
    g = np.asarray(_real_matrix(int_factor), dtype=float)
    if u.ndim != 2 or g.ndim != 2 or u.shape[1] != g.shape[0]:
        raise DimensionMismatch(f"cannot multiply {u.shape} by {g.shape}")
    res = _relative_residual(u @ g, _real_matrix(rhs))
    return IdentityCheck(label, res, float(tol), res <= tol)


def factorization_report(U, G1, G2, V, tol=1e-8, names=("U", "G1", "G2", "V")):
    """Both halves of the certificate ``U G1 = V`` and ``V G2 = U``."""
    u, g1, g2, v = names
    return (check_identity(U, G1, V, tol, f"{u} {g1} = {v}"),
            check_identity(V, G2, U, tol, f"{v} {g2} = {u}"))


def verify_factorization(U, G1, G2, V, tol=1e-8):
    """True iff ``U G1 = V`` and ``V G2 = U`` within ``tol``.

    Residuals are max-norm differences relative to the largest entry of the
    target.  Passing certifies that the columns of ``U`` and of ``V``
    generate the same lattice.
    """
    fwd, bwd = factorization_report(U, G1, G2, V, tol)
    return fwd.passed and bwd.passed


# rational rank -------------------------------------------------------------

def rational_relations(P, tol=1e-8, max_height=DEFAULT_MAX_HEIGHT):
    """Integer relations ``sum_j c_j P[:, j] ~ 0`` found by LLL.

    The columns are scaled by the largest entry; a reduced vector counts as
    a relation when the scaled combination is within ``tol`` (max-norm)
    and every coefficient is at most ``max_height`` in absolute value.
    Returns a list of independent coefficient tuples.
    """
    P = np.atleast_2d(np.asarray(_real_matrix(P), dtype=float))
    if not np.all(np.isfinite(P)):
        raise ValueError("matrix entries must be finite")
    n, k = P.shape
    scale = float(np.max(np.abs(P))) if P.size else 0.0
    if scale == 0.0:
        return [tuple(int(i == j) for j in range(k)) for i in range(k)]
    Q = P / scale
    weight = 1.0 / tol
    rows = []
    for j in range(k):
        tail = [int(round(weight * q)) for q in Q[:, j]]
        rows.append([int(i == j) for i in range(k)] + tail)
    reduced = DomainMatrix([[ZZ(v) for v in r] for r in rows], (k, k + n), ZZ).lll()
    found = []
    for r in reduced.to_list():
        c = np.array([int(v) for v in r[:k]], dtype=object)
        if not any(c) or max(abs(int(v)) for v in c) > max_height:
            continue
        combo = Q @ c.astype(float)
        if float(np.max(np.abs(combo))) <= tol:
            found.append(tuple(int(v) for v in c))
    return found


def rational_rank(P, tol=1e-8, max_height=DEFAULT_MAX_HEIGHT):
    """Number of columns minus the number of integer relations detected.

    Heuristic: a relation with coefficients above ``max_height`` or a
    residual above ``tol`` is not detected, in which case the returned rank
    is an overestimate.
    """
    P = np.atleast_2d(np.asarray(_real_matrix(P), dtype=float))
    return P.shape[1] - len(rational_relations(P, tol, max_height))


# Bezout pairs and angle families ----------------------------------------------

def extended_gcd(n, m):
    """Integers ``(x, y)`` with ``n x + m y = 1``.

    Among all solutions the one with the smallest ``|x|`` is returned
    (positive ``x`` on a tie).  Raises :class:`NotCoprime` otherwise.
    """
    n, m = int(n), int(m)
    if math.gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n}, {m}) = {math.gcd(n, m)}")
    if m == 0:
        return n, 0  # n = +-1
    step = abs(m)
    x = pow(n, -1, step) if step > 1 else 0
    if 2 * x > step:
        x -= step
    y = (1 - n * x) // m
    return x, y


@dataclass(frozen=True)
class AngleFamily:
    """Coprime ``(n, m)`` with ``tan(theta) = sqrt(3) n / (2m - n)`` and a Bezout pair."""

    n: int
    m: int
    theta: float
    x: int
    y: int

    def __post_init__(self):
        if math.gcd(self.n, self.m) != 1:
            raise NotCoprime(f"gcd({self.n}, {self.m}) != 1")
        if self.n * self.x + self.m * self.y != 1:
            raise ValueError("(x, y) is not a Bezout pair for (n, m)")

    @property
    def angle_residual(self):
        """``|2 sqrt3 sin(theta) m - (3 cos(theta) + sqrt3 sin(theta)) n|``."""
        s, c = math.sin(self.theta), math.cos(self.theta)
        return abs(2 * SQRT3 * s * self.m - (3 * c + SQRT3 * s) * self.n)

    def to_json(self):
        return {"n": self.n, "m": self.m, "theta": self.theta, "x": self.x, "y": self.y}


def angle_family(n, m, bezout=None):
    n, m = int(n), int(m)
    if math.gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n}, {m}) = {math.gcd(n, m)}")
    if 2 * m == n:
        raise DegenerateAngle("2m = n gives theta = pi/2; use the conjugate-surface check")
    if n == 0:
        raise DegenerateAngle("n = 0 leaves the angle family undefined")
    x, y = extended_gcd(n, m) if bezout is None else (int(bezout[0]), int(bezout[1]))
    theta = math.atan2(SQRT3 * n, 2 * m - n)
    return AngleFamily(n, m, theta, x, y)


class PropertyPCertificate(NamedTuple):
    family: AngleFamily
    F1: IntMatrix
    F2: IntMatrix


def property_p_certificate(n, m, bezout=None):
    """Angle, Bezout pair and the integer matrices ``F1``, ``F2`` for ``(n, m)``.

    ``bezout`` overrides the default minimal-``|x|`` pair.  Raises
    :class:`NotCoprime` or :class:`DegenerateAngle` (for ``2m = n``).
    """
    fam = angle_family(n, m, bezout)
    x, y = fam.x, fam.y
    F1 = IntMatrix([
        [-x, 0, 0, 0, m, 1, -1, 0],
        [y, 0, 0, 0, n, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, -x, 0, 0, 0, 0, -1, m],
        [-x, -x - y, 1, 0, m, 1, -1, m - n],
        [y, -x - y, 0, 1, n, 1, -1, m - n],
        [0, -y, 0, 0, 0, 1, 0, -n],
    ])
    F2 = IntMatrix([
        [-n, m, n - m, -n, 0, 0, 0, 0],
        [0, 0, m, -n, -n, 0, 0, -m],
        [-1, 0, 1, -1, -1, 1, 0, -1],
        [0, -1, 1, 0, -1, 0, 1, -1],
        [0, 0, x, y, y, 0, 0, -x],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [y, x, -x - y, y, 0, 0, 0, 0],
    ])
    return PropertyPCertificate(fam, F1, F2)


def associate_periods(omega, omega_prime, theta):
    """``cos(theta) Omega + sin(theta) Omega'``."""
    return (math.cos(theta) * np.asarray(_real_matrix(omega), dtype=float)
            + math.sin(theta) * np.asarray(_real_matrix(omega_prime), dtype=float))


def constants_from_periods(omega):
    """Recover ``(A, B, C)`` from the example period matrix ``Omega``."""
    om = np.asarray(_real_matrix(omega), dtype=float)
    return 2 * om[0, 1] / 3, 2 * om[1, 1] / 3, 2 * om[2, 1] / SQRT3


def rotated_target(family, constants, entry_34="direct"):
    """The block matrix that ``Omega_theta F1`` must equal.

    ``entry_34`` selects how entry (3, 4) is formed: ``"direct"`` uses
    ``(-sqrt3/2 cos + 3/2 sin) C``, ``"reduced"`` the equivalent
    ``(2n - m)/(2m - n) sqrt3 cos(theta) C`` valid on the angle family.
    """
    A, B, C = constants
    n, m, th = family.n, family.m, family.theta
    s = SQRT3 * math.sin(th)
    c = math.cos(th)
    if entry_34 == "direct":
        e34 = (-SQRT3 / 2 * c + 1.5 * math.sin(th)) * C
    elif entry_34 == "reduced":
        e34 = (2 * n - m) / (2 * m - n) * SQRT3 * c * C
    else:
        raise ValueError("entry_34 must be 'direct' or 'reduced'")
    out = np.zeros((3, 8))
    out[0, :4] = [2 * s * A / n, 0.0, -s * A, m * s * A / n]
    out[1, :4] = [0.0, 2 * s * B / n, -s * B, -m * s * B / n]
    out[2, :4] = [0.0, 0.0, SQRT3 * c * C, e34]
    return out


@dataclass(frozen=True)
class PropertyPReport:
    family: object
    checks: tuple
    rank: int
    rank_target: int
    passed: bool

    def to_json(self):
        fam = self.family.to_json() if hasattr(self.family, "to_json") else self.family
        return {"family": fam, "checks": [c.to_json() for c in self.checks],
                "rational_rank": self.rank, "rank_target": self.rank_target,
                "pass": self.passed}


def property_p_report(omega, omega_prime, n, m, tol=1e-8, constants=None,
                      max_height=DEFAULT_MAX_HEIGHT, bezout=None, rank_tol=None):
    """Run every check behind :func:`verify_property_p` and keep the residuals.

    ``constants`` default to the values read off ``omega``.  For ``2m = n``
    (angle pi/2) the conjugate-surface factorization through ``Lambda'``
    is checked instead.
    """
    from . import sextic

    if constants is None:
        constants = constants_from_periods(omega)
    rank_tol = tol if rank_tol is None else rank_tol
    n, m = int(n), int(m)
    if math.gcd(n, m) != 1:
        raise NotCoprime(f"gcd({n}, {m}) = {math.gcd(n, m)}")
    if 2 * m == n:
        lam_p = sextic.lambda_prime_basis(*constants)
        checks = factorization_report(omega_prime, IntMatrix(sextic.G1_PRIME),
                                      IntMatrix(sextic.G2_PRIME), lam_p, tol,
                                      ("Omega'", "G1'", "G2'", "Lambda'"))
        sign = 1.0 if n > 0 else -1.0
        rank = rational_rank(sign * np.asarray(_real_matrix(omega_prime)), rank_tol, max_height)
        ok = all(c.passed for c in checks) and rank == 3
        return PropertyPReport({"n": n, "m": m, "theta": sign * math.pi / 2},
                               checks, rank, 3, ok)
    fam, F1, F2 = property_p_certificate(n, m, bezout)
    om_t = associate_periods(omega, omega_prime, fam.theta)
    target = rotated_target(fam, constants)
    alt = rotated_target(fam, constants, "reduced")
    checks = (
        check_identity(om_t, F1, target, tol, "Omega_theta F1 = Omega'_theta"),
        check_identity(target, F2, om_t, tol, "Omega'_theta F2 = Omega_theta"),
        IdentityCheck("Omega'_theta[3,4] reduced form", _relative_residual(alt, target),
                      float(tol), _relative_residual(alt, target) <= tol),
        IdentityCheck("angle relation", fam.angle_residual, 1e-12, fam.angle_residual <= 1e-12),
    )
    rank = rational_rank(om_t, rank_tol, max_height)
    ok = all(c.passed for c in checks) and rank == 3
    return PropertyPReport(fam, checks, rank, 3, ok)


def verify_property_p(omega, omega_prime, n, m, tol=1e-8, constants=None,
                      max_height=DEFAULT_MAX_HEIGHT, bezout=None):
    """True iff ``Omega_theta F1 = Omega'_theta``, ``Omega'_theta F2 = Omega_theta``
    and ``rational_rank(Omega_theta) == 3`` for the angle family of ``(n, m)``."""
    return property_p_report(omega, omega_prime, n, m, tol, constants, max_height,
                             bezout).passed


# lattice symmetries ----------------------------------------------------------

@dataclass(frozen=True)
class InvarianceReport:
    conjugated: np.ndarray
    max_distance: float
    worst_entry: tuple
    tol: float
    invariant: bool

    def to_json(self):
        return {"conjugated": self.conjugated.tolist(), "max_distance": self.max_distance,
                "worst_entry": list(self.worst_entry), "tol": self.tol,
                "invariant": self.invariant}


def invariance_report(V, R, tol=1e-8):
    """Inspect ``V^-1 R V`` for integrality."""
    if not isinstance(V, LatticeBasis):
        V = LatticeBasis(np.asarray(_real_matrix(V), dtype=float))
    r = np.asarray(_real_matrix(R), dtype=float)
    if r.shape != V.columns.shape:
        raise DimensionMismatch(f"R has shape {r.shape}, basis has {V.columns.shape}")
    T = np.linalg.solve(V.columns, r @ V.columns)
    dist = np.abs(T - np.round(T))
    idx = np.unravel_index(int(np.argmax(dist)), dist.shape)
    md = float(dist[idx])
    return InvarianceReport(T, md, (int(idx[0]), int(idx[1])), tol, md <= tol)


def lattice_invariant_under(V, R, tol=1e-8):
    """True iff the linear map ``R`` sends the lattice of ``V`` into itself."""
    return invariance_report(V, R, tol).invariant
