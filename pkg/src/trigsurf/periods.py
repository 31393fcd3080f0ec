"""Homology cycles, period integrals and period matrices.

A cycle is a chain of arcs; on each arc the sheet is fixed by a seed
value of ``w`` and the traversed points are ``(z(t), omega**k * w(t))``
where ``k`` is the segment's multiplier exponent.  Integrals are computed
per segment with tanh-sinh quadrature, which absorbs the ``s**(-2/3)``
behaviour of the integrands at branch-point endpoints.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import cmath
import csv
import io
import math

import mpmath
import numpy as np

from .arcs import CircleArc, arc_from_json
from .curve import OMEGA, Seed, continue_branch
from .errors import OpenCycle, PrecisionNotReached, WrongCurve
from .quadrature import tanh_sinh, tanh_sinh_mp

#: quadrature in double precision is used down to this target
DOUBLE_PRECISION_LIMIT = 1e-13
DEFAULT_PRECISION = 1e-12
_Z_MATCH = 1e-12
_W_MATCH = 1e-8

MULTIPLIER_LABELS = ("1", "w", "w2")
_OMEGA_POWERS = (1.0 + 0j, OMEGA, OMEGA.conjugate())


def omega_power(k):
    """``omega**k`` from the exponent reduced mod 3."""
    return _OMEGA_POWERS[k % 3]


def _omega_power_mp(k):
    k %= 3
    if k == 0:
        return mpmath.mpc(1)
    re = mpmath.mpf(-1) / 2
    im = mpmath.sqrt(3) / 2
    return mpmath.mpc(re, im if k == 1 else -im)


@dataclass(frozen=True)
class CycleSegment:
    """One arc of a cycle with its sheet seed and deck multiplier ``omega**multiplier``."""

    arc: object
    multiplier: int
    seed: Seed

    def __post_init__(self):
        object.__setattr__(self, "multiplier", int(self.multiplier) % 3)
        t0, t1 = self.arc.t_range
        if not t0 < self.seed.t < t1:
            raise ValueError(f"seed parameter {self.seed.t} not interior to [{t0}, {t1}]")

    @property
    def multiplier_value(self):
        return omega_power(self.multiplier)

    def psi(self, k=1):
        return CycleSegment(self.arc, self.multiplier + k, self.seed)

    def phi(self, k=1):
        return CycleSegment(self.arc.rotated(k), self.multiplier,
                            Seed(self.arc.rotate_parameter(self.seed.t, k), self.seed.w))

    def to_json(self):
        return {"arc": self.arc.to_json(), "multiplier": MULTIPLIER_LABELS[self.multiplier],
                "seed": self.seed.to_json()}

    @classmethod
    def from_json(cls, obj):
        label = str(obj.get("multiplier", "1"))
        if label not in MULTIPLIER_LABELS:
            raise ValueError(f"multiplier must be one of {MULTIPLIER_LABELS}, got {label!r}")
        return cls(arc_from_json(obj["arc"]), MULTIPLIER_LABELS.index(label),
                   Seed.from_json(obj["seed"]))


@dataclass(frozen=True)
class Cycle:
    name: str
    segments: tuple

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise OpenCycle("a cycle needs at least one segment")

    def psi(self, k=1, name=None):
        """Image under ``(z, w) -> (z, omega**k w)``."""
        return Cycle(name or self.name, tuple(s.psi(k) for s in self.segments))

    def phi(self, k=1, name=None):
        """Image under ``(z, w) -> (omega**k z, w)``."""
        return Cycle(name or self.name, tuple(s.phi(k) for s in self.segments))

    def validate(self, curve):
        """Check that the segments chain into a closed loop on ``curve``.

        ``z`` must match to 1e-12 at every junction.  Away from branch
        points the sheet values ``omega**k w`` must also agree to 1e-8; at a
        branch point all sheets meet, so only the position is compared.
        Raises :class:`OpenCycle` on failure.
        """
        segs = self.segments
        for i, seg in enumerate(segs):
            nxt = segs[(i + 1) % len(segs)]
            z_end = seg.arc.z(seg.arc.t_range[1])
            z_start = nxt.arc.z(nxt.arc.t_range[0])
            if abs(z_end - z_start) > _Z_MATCH:
                raise OpenCycle(f"{self.name}: segment {i} ends at {z_end!r} but "
                                f"segment {(i + 1) % len(segs)} starts at {z_start!r}")
            if curve.is_branch_point(z_end):
                continue
            w_end = branch_for(curve, seg.arc, seg.seed).w(seg.arc.t_range[1])[0]
            w_start = branch_for(curve, nxt.arc, nxt.seed).w(nxt.arc.t_range[0])[0]
            gap = abs(w_end * seg.multiplier_value - w_start * nxt.multiplier_value)
            if gap > _W_MATCH:
                raise OpenCycle(f"{self.name}: sheet jump of {gap:.3g} after segment {i}")
        return True

    def to_json(self):
        return {"name": self.name, "segments": [s.to_json() for s in self.segments]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["name"], tuple(CycleSegment.from_json(s) for s in obj["segments"]))


@lru_cache(maxsize=512)
def branch_for(curve, arc, seed):
    """Memoized :func:`continue_branch` (all arguments are immutable)."""
    return continue_branch(curve, arc, seed)


_SEED_W = -(2.0 ** (1.0 / 3.0))


def builtin_cycles(curve):
    """The eight cycles ``A1..A4, B1..B4`` on ``w**3 = z**6 - 1``.

    ``A1`` and ``B1`` are given explicitly; the rest are their images under
    ``phi`` and ``psi``.  All seeds sit where ``z**6 = -1`` and use the real
    negative cube root of -2.
    """
    if not curve.is_sextic():
        raise WrongCurve("built-in cycles require the roots to be the 6th roots of unity")
    pi = math.pi
    a1 = Cycle("A1", (
        CycleSegment(CircleArc(1, 0.0, pi / 3), 0, Seed(pi / 6, _SEED_W)),
        CycleSegment(CircleArc(-1, -pi / 3, 0.0), 2, Seed(-pi / 6, _SEED_W)),
    ))
    b1 = Cycle("B1", (
        CycleSegment(CircleArc(1, -pi, -2 * pi / 3), 0, Seed(-5 * pi / 6, _SEED_W)),
        CycleSegment(CircleArc(-1, 2 * pi / 3, pi), 1, Seed(5 * pi / 6, _SEED_W)),
    ))
    a2 = a1.phi(name="A2")
    b2 = b1.phi(name="B2")
    return [a1, a2, a1.psi(name="A3"), a2.psi(name="A4"),
            b1, b2, b1.psi(name="B3"), b2.psi(name="B4")]


@dataclass(frozen=True)
class IntegrationResult:
    values: np.ndarray
    errors: np.ndarray


def _use_double(precision):
    return precision >= DOUBLE_PRECISION_LIMIT


def _mp_dps(precision):
    return int(math.ceil(-math.log10(precision))) + 10


def _segment_integrals(curve, diffs, seg, precision):
    branch = branch_for(curve, seg.arc, seg.seed)
    t0, t1 = seg.arc.t_range
    if _use_double(precision):
        factors = [omega_power(-d.w_power * seg.multiplier) for d in diffs]

        def integrand(side, off):
            z, dz, w = branch.lift(side, off)
            out = np.empty((len(diffs), len(z)), dtype=complex)
            for i, d in enumerate(diffs):
                out[i] = d.numerator_at(z) * factors[i] / w ** d.w_power * dz
            return out

        res = tanh_sinh(integrand, t0, t1, precision)
        return np.asarray(res.value, dtype=complex), res.error

    dps = _mp_dps(precision)
    with mpmath.workdps(dps):
        factors = [_omega_power_mp(-d.w_power * seg.multiplier) for d in diffs]
        coeffs = [[mpmath.mpc(c) for c in d.numerator] for d in diffs]

        def integrand(side, off):
            zs, dzs, ws = branch.lift_mp(side, off)
            out = []
            for d, f, cs in zip(diffs, factors, coeffs):
                vals = []
                for z, dz, w in zip(zs, dzs, ws):
                    num = mpmath.mpc(0)
                    for c in reversed(cs):
                        num = num * z + c
                    vals.append(num * f / w ** d.w_power * dz)
                out.append(vals)
            return out

        lo, hi = branch._mp_setup()[5][0][0], branch._mp_setup()[5][1][0]
        res = tanh_sinh_mp(integrand, lo, hi, precision, dps=dps)
        return res.value, res.error


def integrate_segments(curve, diffs, segments, precision=DEFAULT_PRECISION):
    """Sum of the integrals of each differential over a chain of segments.

    Returns an :class:`IntegrationResult`; values are complex (or mpc in
    extended-precision mode) and errors are absolute estimates.
    """
    diffs = list(diffs)
    live = [i for i, d in enumerate(diffs) if not d.is_zero]
    mp_mode = not _use_double(precision)
    values = np.zeros(len(diffs), dtype=object if mp_mode else complex)
    if mp_mode:
        values[:] = mpmath.mpc(0)
    errors = np.zeros(len(diffs))
    if not live:
        return IntegrationResult(values, errors)
    per_segment = precision / max(1, len(segments))
    active = [diffs[i] for i in live]
    # the mpc sums must run at the working precision, not the caller's
    with mpmath.workdps(_mp_dps(per_segment) if mp_mode else mpmath.mp.dps):
        for seg in segments:
            vals, err = _segment_integrals(curve, active, seg, per_segment)
            for j, i in enumerate(live):
                values[i] += vals[j]
                errors[i] += err
    return IntegrationResult(values, errors)


def integrate_cycle(curve, diffs, cycle, precision=DEFAULT_PRECISION):
    """Integrate several differentials over ``cycle`` with shared nodes."""
    return integrate_segments(curve, diffs, cycle.segments, precision)


def integrate_along(curve, diff, cycle, precision=DEFAULT_PRECISION):
    """``∫_cycle diff`` with absolute error estimate below ``precision``.

    Raises :class:`PrecisionNotReached` when the quadrature stalls.
    """
    res = integrate_cycle(curve, [diff], cycle, precision)
    val = res.values[0]
    return val if isinstance(val, mpmath.mpc) else complex(val)


@dataclass(frozen=True)
class PeriodMatrix:
    """Real periods ``Re ∫_cycle diff`` with the complex periods kept alongside."""

    complex_entries: np.ndarray
    row_labels: tuple
    column_labels: tuple
    errors: np.ndarray = field(default=None)

    def __post_init__(self):
        ce = np.asarray(self.complex_entries, dtype=complex)
        object.__setattr__(self, "complex_entries", ce)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "column_labels", tuple(self.column_labels))
        if self.errors is None:
            object.__setattr__(self, "errors", np.zeros(ce.shape))
        if ce.shape != (len(self.row_labels), len(self.column_labels)):
            raise ValueError("label counts do not match matrix shape")

    @property
    def entries(self):
        return self.complex_entries.real

    @property
    def shape(self):
        return self.complex_entries.shape

    def rotated(self, theta):
        """Period matrix of ``exp(i theta)`` times every differential."""
        return PeriodMatrix(self.complex_entries * cmath.exp(1j * theta), self.row_labels,
                            self.column_labels, self.errors)

    def to_json(self):
        ce = self.complex_entries
        return {
            "row_labels": list(self.row_labels),
            "column_labels": list(self.column_labels),
            "entries": ce.real.tolist(),
            "complex_entries": [[[v.real, v.imag] for v in row] for row in ce],
            "errors": np.asarray(self.errors, dtype=float).tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        ce = np.array([[complex(*v) for v in row] for row in obj["complex_entries"]])
        return cls(ce, obj["row_labels"], obj["column_labels"],
                   np.asarray(obj.get("errors", np.zeros(ce.shape)), dtype=float))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + list(self.column_labels))
        for label, row in zip(self.row_labels, self.entries):
            writer.writerow([label] + [repr(float(v)) for v in row])
        return buf.getvalue()


def period_matrix(curve, diffs, cycles, precision=DEFAULT_PRECISION):
    """Periods of every differential over every cycle.

    Entries are evaluated cycle by cycle (one quadrature per segment
    covering all differentials), so the result does not depend on the
    evaluation order.
    """
    diffs = list(diffs)
    cycles = list(cycles)
    if not diffs or not cycles:
        raise ValueError("period_matrix needs at least one differential and one cycle")
    ce = np.zeros((len(diffs), len(cycles)), dtype=complex)
    err = np.zeros((len(diffs), len(cycles)))
    for j, cyc in enumerate(cycles):
        res = integrate_cycle(curve, diffs, cyc, precision)
        ce[:, j] = [complex(v) for v in res.values]
        err[:, j] = res.errors
    labels = [d.name or f"eta{i}" for i, d in enumerate(diffs)]
    return PeriodMatrix(ce, labels, [c.name for c in cycles], err)


# reference constants ------------------------------------------------------

@dataclass(frozen=True)
class ReferenceConstants:
    A: float
    B: float
    C: float
    precision: float
    errors: tuple = (0.0, 0.0, 0.0)
    exact: tuple = field(default=None, repr=False, compare=False)

    def as_tuple(self):
        return self.A, self.B, self.C

    def to_json(self):
        return {"A": self.A, "B": self.B, "C": self.C, "precision": self.precision,
                "errors": list(self.errors)}


def _algebraic_endpoint_integral(rest, a, b, alpha, beta):
    """``∫_a^b (t-a)**alpha (b-t)**beta rest(t) dt`` for ``alpha, beta > -1``.

    The interval is split at the midpoint and ``t = a + u**3`` (resp.
    ``t = b - u**3``) removes the endpoint singularity before mpmath's
    tanh-sinh rule is applied.
    """
    mid = (a + b) / 2
    span = b - a

    def left(u):
        u3 = u ** 3
        return 3 * u ** (2 + 3 * alpha) * (span - u3) ** beta * rest(a + u3)

    def right(u):
        u3 = u ** 3
        return 3 * u ** (2 + 3 * beta) * (span - u3) ** alpha * rest(b - u3)

    vl, el = mpmath.quad(left, [0, mpmath.cbrt(mid - a)], error=True)
    vr, er = mpmath.quad(right, [0, mpmath.cbrt(b - mid)], error=True)
    return vl + vr, el + er


def _abc_exact():
    third = mpmath.mpf(1) / 3
    s3 = mpmath.sqrt(3)
    a = _algebraic_endpoint_integral(
        lambda t: (t + 1) ** (-2 * third) * (2 + t) ** (-third), mpmath.mpf(1), mpmath.mpf(2),
        -2 * third, -third)
    b = _algebraic_endpoint_integral(
        lambda t: mpmath.cbrt(2) * (s3 + t) ** (-2 * third) / mpmath.sqrt(1 + t * t),
        mpmath.mpf(0), s3, -2 * third, -2 * third)
    c = _algebraic_endpoint_integral(
        lambda t: 2 * (s3 + t) ** (-2 * third) / mpmath.sqrt(4 - t * t),
        mpmath.mpf(0), s3, -2 * third, -2 * third)
    return a, b, c


def reference_constants(precision=DEFAULT_PRECISION):
    """The constants ``A, B, C`` as one-dimensional real integrals.

    ``A = ∫_1^2 ((t²-1)²(4-t²))^(-1/3) dt``,
    ``B = ∫_0^√3 2^(1/3) (t²(3-t²)²)^(-1/3) (1+t²)^(-1/2) dt``,
    ``C = ∫_0^√3 2 (t²(3-t²)²)^(-1/3) (4-t²)^(-1/2) dt``.

    Each value is computed at two working precisions; their difference
    (floored by mpmath's own estimate) is the reported error.
    """
    if not precision > 0:
        raise ValueError("precision must be positive")
    dps = max(20, int(math.ceil(-math.log10(precision))) + 8)
    with mpmath.workdps(dps):
        coarse = _abc_exact()
    with mpmath.workdps(dps + 10):
        fine = _abc_exact()
        errs = tuple(float(max(abs(f[0] - c[0]), f[1])) for f, c in zip(fine, coarse))
        exact = tuple(+f[0] for f in fine)
    bad = [name for name, e in zip("ABC", errs) if e > precision]
    if bad:
        raise PrecisionNotReached(f"constants {bad} not resolved to {precision:g}",
                                  value=tuple(float(v) for v in exact), error=max(errs))
    return ReferenceConstants(float(exact[0]), float(exact[1]), float(exact[2]),
                              precision, errs, exact)
