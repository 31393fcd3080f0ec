"""Trigonal curves ``w**3 = p(z)`` with ``deg p = 6``.

Points are explicit ``(z, w)`` pairs; sheets are tracked by continuing
``w`` along parametrized arcs (:func:`continue_branch`).
"""

from dataclasses import dataclass
import cmath
from functools import cached_property
import itertools
import math

import mpmath
import numpy as np

from . import kernels
from .errors import (AtBranchPoint, BranchPointOnInterior, CurveNotSymmetric,
                     DuplicateRoots, InvalidCurve, SeedInconsistent)

OMEGA = cmath.exp(2j * math.pi / 3)
#: |p(z)| below this marks a branch point.
BRANCH_THRESHOLD = 1e-8
#: relative size of the parameter zone next to a branch endpoint in which
#: no anchors are placed; nodes there are lifted from the last anchor.
ENDPOINT_ZONE = 1e-6
SEED_TOL = 1e-8


@dataclass(frozen=True)
class SurfacePoint:
    z: complex
    w: complex


@dataclass(frozen=True)
class Seed:
    """Branch selector: the value of ``w`` at arc parameter ``t``."""

    t: float
    w: complex

    def to_json(self):
        return {"t": self.t, "w": [self.w.real, self.w.imag]}

    @classmethod
    def from_json(cls, obj):
        return cls(float(obj["t"]), complex(*obj["w"]))


@dataclass(frozen=True)
class TrigonalCurve:
    """The curve ``w**3 = (z - a_1) ... (z - a_6)`` of genus 4."""

    roots: tuple
    genus: int = 4

    def p(self, z):
        out = 1.0 + 0.0j
        for a in self.roots:
            out = out * (z - a)
        return out

    def dp(self, z):
        total = 0j
        for i in range(len(self.roots)):
            term = 1.0 + 0.0j
            for j, a in enumerate(self.roots):
                if j != i:
                    term = term * (z - a)
            total += term
        return total

    def cube_roots(self, z):
        """The three values of ``w`` over ``z`` (principal root first)."""
        pz = self.p(z)
        if pz == 0:
            return (0j, 0j, 0j)
        r = cmath.exp(cmath.log(pz) / 3)
        return (r, r * OMEGA, r * OMEGA ** 2)

    def fiber(self, z):
        return [SurfacePoint(complex(z), w) for w in self.cube_roots(z)]

    def residual(self, point):
        pz = self.p(point.z)
        return abs(point.w ** 3 - pz) / (1.0 + abs(pz))

    def contains(self, point, tol=1e-10):
        return self.residual(point) <= tol

    def is_branch_point(self, z):
        return abs(self.p(z)) < BRANCH_THRESHOLD

    def root_near(self, z, tol=1e-9):
        for i, a in enumerate(self.roots):
            if abs(z - a) <= tol:
                return i
        return -1

    def is_omega_symmetric(self, tol=1e-12):
        """True when the root set is invariant under ``z -> omega z``."""
        return all(min(abs(OMEGA * a - b) for b in self.roots) <= tol for a in self.roots)

    def is_sextic(self, tol=1e-12):
        """True for the curve ``w**3 = z**6 - 1`` (roots are sixth roots of unity)."""
        targets = [cmath.exp(1j * math.pi * k / 3) for k in range(6)]
        return all(min(abs(a - b) for b in self.roots) <= tol for a in targets)

    @cached_property
    def _exact_roots(self):
        if not self.is_sextic():
            return None
        out = []
        for a in self.roots:
            k = round(cmath.phase(a) / (math.pi / 3)) % 6
            out.append(k)
        return tuple(out)

    def roots_mp(self):
        """Roots at the current mpmath precision.

        Sixth roots of unity are regenerated exactly; other roots are taken
        as given.
        """
        ks = self._exact_roots
        if ks is None:
            return [mpmath.mpc(a) for a in self.roots]
        return [mpmath.expjpi(mpmath.mpf(k) / 3) for k in ks]

    def to_json(self):
        return {"roots": [[a.real, a.imag] for a in self.roots]}


def curve_from_roots(roots, separation=1e-10):
    """Build the curve ``w**3 = prod(z - a_i)`` from six distinct roots."""
    roots = tuple(complex(a) for a in roots)
    if len(roots) != 6:
        raise InvalidCurve(f"expected 6 roots, got {len(roots)}")
    for a, b in itertools.combinations(roots, 2):
        if abs(a - b) <= separation:
            raise DuplicateRoots(f"roots {a} and {b} closer than {separation:g}")
    return TrigonalCurve(roots, 4)


def sextic_curve():
    """The curve ``w**3 = z**6 - 1``."""
    return curve_from_roots([cmath.exp(1j * math.pi * k / 3) for k in range(6)])


def curve_from_json(obj):
    return curve_from_roots([complex(*r) for r in obj["roots"]])


@dataclass(frozen=True)
class Differential:
    """``(c_0 + c_1 z + ... ) dz / w**w_power``; coefficients in ascending order."""

    numerator: tuple
    w_power: int
    name: str = ""

    def __post_init__(self):
        if self.w_power not in (1, 2):
            raise ValueError("w_power must be 1 or 2")
        object.__setattr__(self, "numerator", tuple(complex(c) for c in self.numerator))

    @property
    def degree(self):
        nz = [i for i, c in enumerate(self.numerator) if c != 0]
        return nz[-1] if nz else -1

    @property
    def is_zero(self):
        return self.degree < 0

    @property
    def is_holomorphic(self):
        # order at the three points over infinity is 2k - 2 - deg
        return self.degree <= 2 * self.w_power - 2

    def numerator_at(self, z):
        return np.polynomial.polynomial.polyval(z, self.numerator) if self.numerator else 0 * z

    def density(self, z, w):
        return self.numerator_at(z) / w ** self.w_power

    def scaled(self, factor, name=None):
        return Differential(tuple(factor * c for c in self.numerator), self.w_power,
                            self.name if name is None else name)

    def to_json(self):
        out = {"numerator": [[c.real, c.imag] for c in self.numerator],
               "w_power": self.w_power}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(complex(*c) for c in obj["numerator"]), int(obj["w_power"]),
                   obj.get("name", ""))


def eval_differential(diff, point):
    """Density of ``diff`` against ``dz`` at ``point``."""
    if abs(point.w) ** 3 < BRANCH_THRESHOLD:
        raise AtBranchPoint(f"w={point.w!r} at z={point.z!r} is at a branch point")
    return complex(diff.density(point.z, point.w))


def deck_transform(point, kind, curve=None):
    """Apply ``psi: (z, w) -> (z, omega w)`` or ``phi: (z, w) -> (omega z, w)``."""
    if kind in ("psi", "ψ"):
        return SurfacePoint(point.z, OMEGA * point.w)
    if kind in ("phi", "φ"):
        if curve is not None and not curve.is_omega_symmetric():
            raise CurveNotSymmetric("root set is not invariant under z -> omega z")
        return SurfacePoint(OMEGA * point.z, point.w)
    raise ValueError(f"unknown deck transformation {kind!r}")


def _newton_cbrt(w, pz, iterations=3):
    for _ in range(iterations):
        w = w - (w ** 3 - pz) / (3 * w ** 2)
    return w


class Branch:
    """A continuous lift ``t -> (z(t), w(t))`` of an arc.

    Built by :func:`continue_branch`.  ``w`` at any parameter is obtained
    from the nearest anchor ``(t_j, w_j, p_j)`` as
    ``w_j * (p(z(t)) / p_j) ** (1/3)`` with the principal cube root; the
    anchor spacing guarantees this is the analytic continuation.
    """

    def __init__(self, curve, arc, seed, anchors_t, anchors_w, anchors_p,
                 root_left, root_right):
        self.curve = curve
        self.arc = arc
        self.seed = seed
        self.anchors_t = anchors_t
        self.anchors_w = anchors_w
        self.anchors_p = anchors_p
        self.root_left = root_left
        self.root_right = root_right
        self._roots = np.asarray(curve.roots, dtype=complex)
        self._mp_cache = {}

    def _split(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        t0, t1 = self.arc.t_range
        side = np.where(t - t0 <= t1 - t, 0, 1)
        off = np.where(side == 0, t - t0, t - t1)
        return side, off

    def lift(self, side, off):
        """``(z, dz/dt, w)`` arrays at nodes given in endpoint-offset form."""
        kind, c, v, s = self.arc.packed
        t0, t1 = self.arc.t_range
        return kernels.lift(kind, c, v, s, self._roots, t0, t1,
                            self.root_left, self.root_right,
                            np.asarray(side, dtype=np.int64), np.asarray(off, dtype=float),
                            self.anchors_t, self.anchors_w, self.anchors_p)

    def w(self, t):
        side, off = self._split(t)
        return self.lift(side, off)[2]

    def __call__(self, t):
        side, off = self._split(t)
        z, _, w = self.lift(side, off)
        return SurfacePoint(complex(z[0]), complex(w[0]))

    # extended precision -------------------------------------------------
    def _mp_setup(self):
        dps = mpmath.mp.dps
        if dps in self._mp_cache:
            return self._mp_cache[dps]
        roots = self.curve.roots_mp()
        kind, c, v, s = self.arc.packed
        c = mpmath.mpc(c)
        v = mpmath.mpc(v)
        t0, t1 = self.arc.t_range

        def z_of(t):
            if kind == kernels.CIRCLE:
                return c + v * mpmath.expj(s * t)
            return c + v * t

        def snapped(te, idx):
            # move a circle endpoint onto the exact root; line endpoints are
            # snapped through ``z_end`` alone
            te = mpmath.mpf(te)
            if idx < 0 or kind != kernels.CIRCLE:
                return te
            a = roots[idx]
            return te + mpmath.arg((a - c) / v * mpmath.expj(-s * te)) / s

        ends = []
        for te, idx in ((t0, self.root_left), (t1, self.root_right)):
            te_mp = snapped(te, idx)
            z_end = roots[idx] if idx >= 0 else z_of(te_mp)
            ends.append((te_mp, z_end))

        def poly(z):
            out = mpmath.mpc(1)
            for a in roots:
                out *= z - a
            return out

        a_w, a_p = [], []
        for t, w in zip(self.anchors_t, self.anchors_w):
            pz = poly(z_of(mpmath.mpf(float(t))))
            a_w.append(_newton_cbrt(mpmath.mpc(complex(w)), pz, 6))
            a_p.append(pz)
        setup = (roots, kind, c, v, s, ends, a_w, a_p)
        self._mp_cache[dps] = setup
        return setup

    def lift_mp(self, side, off):
        """Extended-precision lift at the current ``mpmath.mp.dps``."""
        roots, kind, c, v, s, ends, a_w, a_p = self._mp_setup()
        zs, dzs, ws = [], [], []
        at = self.anchors_t
        idx_side = (self.root_left, self.root_right)
        for sd, o in zip(side, off):
            te, z_end = ends[sd]
            t = te + o
            if kind == kernels.CIRCLE:
                half = s * o / 2
                e_end = (z_end - c) / v
                delta = v * e_end * (2j * mpmath.sin(half) * mpmath.expj(half))
                dz = 1j * s * v * e_end * mpmath.expj(s * o)
            else:
                delta = v * o
                dz = v
            z = z_end + delta
            pz = mpmath.mpc(1)
            for k, a in enumerate(roots):
                pz *= delta if k == idx_side[sd] else z - a
            tf = float(t)
            j = int(np.searchsorted(at, tf))
            if len(at) == 1:
                j = 0
            else:
                j = min(max(j, 1), len(at) - 1)
                if abs(tf - at[j - 1]) <= abs(at[j] - tf):
                    j -= 1
            w = a_w[j] * mpmath.exp(mpmath.log(pz / a_p[j]) / 3)
            zs.append(z)
            dzs.append(dz)
            ws.append(w)
        return zs, dzs, ws


def continue_branch(curve, arc, seed, *, h_max=None):
    """Continue the sheet selected by ``seed`` along ``arc``.

    Raises :class:`SeedInconsistent` when the seed is off the curve and
    :class:`BranchPointOnInterior` when the arc meets a branch point away
    from its endpoints.
    """
    t0, t1 = arc.t_range
    if not t0 <= seed.t <= t1:
        raise SeedInconsistent(f"seed parameter {seed.t} outside [{t0}, {t1}]")
    z_s = arc.z(seed.t)
    p_s = curve.p(z_s)
    if abs(p_s) < BRANCH_THRESHOLD:
        raise SeedInconsistent(f"seed at z={z_s!r} is a branch point")
    if abs(seed.w ** 3 - p_s) > SEED_TOL * (1.0 + abs(p_s)):
        raise SeedInconsistent(
            f"seed w={seed.w!r} violates w^3 = p(z) at z={z_s!r} (p={p_s!r})")
    w_s = complex(_newton_cbrt(complex(seed.w), p_s))

    span = t1 - t0
    root_left = curve.root_near(arc.z(t0))
    root_right = curve.root_near(arc.z(t1))
    zone_left = ENDPOINT_ZONE * span if root_left >= 0 else 0.0
    zone_right = ENDPOINT_ZONE * span if root_right >= 0 else 0.0
    if (seed.t - t0 < zone_left and seed.t != t0) or (t1 - seed.t < zone_right and seed.t != t1):
        raise SeedInconsistent("seed lies inside a branch-point endpoint zone")
    if h_max is None:
        h_max = span / 8.0

    kind, c, v, s = arc.packed
    roots = np.asarray(curve.roots, dtype=complex)
    fwd = kernels.march(kind, c, v, s, roots, seed.t, w_s, t1, zone_right,
                        h_max, BRANCH_THRESHOLD)
    bwd = kernels.march(kind, c, v, s, roots, seed.t, w_s, t0, zone_left,
                        h_max, BRANCH_THRESHOLD)
    a_t = np.concatenate([bwd[0][:0:-1], fwd[0]])
    a_w = np.concatenate([bwd[1][:0:-1], fwd[1]])
    a_p = np.concatenate([bwd[2][:0:-1], fwd[2]])
    return Branch(curve, arc, Seed(seed.t, w_s), a_t, a_w, a_p, root_left, root_right)


__all__ = [
    "OMEGA", "BRANCH_THRESHOLD", "SurfacePoint", "Seed", "TrigonalCurve", "Differential",
    "Branch", "curve_from_roots", "sextic_curve", "curve_from_json", "eval_differential",
    "deck_transform", "continue_branch", "BranchPointOnInterior",
]
