"""Weierstrass data, immersion evaluation and related algebraic tests."""

from dataclasses import dataclass
import cmath
import math
from typing import NamedTuple

import numpy as np

from .arcs import CircleArc, LineArc
from .curve import BRANCH_THRESHOLD, OMEGA, Seed, SurfacePoint
from .errors import AtBranchPoint, PathSheetMismatch
from .lattice import LatticeBasis
from .periods import (DEFAULT_PRECISION, Cycle, _segment_integrals, branch_for,
                      integrate_segments)

TOL_ALGEBRAIC = 1e-12
TOL_NUMERIC = 1e-8


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    max_residual: float
    tol: float
    detail: str = ""

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class InfinityPoint:
    """One of the three points over ``z = inf``; ``w_hat = z**-2 w`` there."""

    w_hat: complex


@dataclass(frozen=True)
class WeierstrassData:
    """Differentials ``(eta_1, ..., eta_n)`` defining ``Re ∫_{p0} eta``."""

    curve: object
    diffs: tuple
    basepoint: SurfacePoint
    lattice: LatticeBasis = None

    def __post_init__(self):
        object.__setattr__(self, "diffs", tuple(self.diffs))
        if len(self.diffs) < 3:
            raise ValueError("Weierstrass data needs at least three differentials")
        if not self.curve.contains(self.basepoint):
            raise ValueError("basepoint is not on the curve")

    @property
    def dimension(self):
        return len(self.diffs)

    def attach_lattice(self, lattice, sample_points=None):
        """Return a copy carrying ``lattice`` once the algebraic checks pass."""
        if sample_points is None:
            sample_points = default_sample_points(self.curve)
        conf = check_conformality(self, sample_points)
        zeros = check_common_zeros(self, candidate_points(self))
        if not (conf.passed and zeros.passed):
            raise ValueError(f"cannot attach lattice: conformality={conf.passed}, "
                             f"no common zeros={zeros.passed}")
        if not isinstance(lattice, LatticeBasis):
            lattice = LatticeBasis(lattice)
        return WeierstrassData(self.curve, self.diffs, self.basepoint, lattice)


def default_sample_points(curve, count=32, seed=0):
    """Points of the curve over random ``z`` in the disc ``|z| < 1.5``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(z) >= 1.5 or abs(curve.p(z)) < 1e-3:
            continue
        out.extend(curve.fiber(z))
    return out[:count]


def check_conformality(data, sample_points, tol=TOL_ALGEBRAIC):
    """``sum_i eta_i**2 = 0`` at every sample point (relative to ``max |eta_i|**2``)."""
    worst = 0.0
    for pt in sample_points:
        if abs(pt.w) ** 3 < BRANCH_THRESHOLD:
            raise AtBranchPoint(f"sample point z={pt.z!r} is a branch point")
        dens = np.array([d.density(pt.z, pt.w) for d in data.diffs])
        scale = float(np.max(np.abs(dens)) ** 2)
        if scale == 0.0:
            continue
        worst = max(worst, abs(complex(np.sum(dens ** 2))) / scale)
    return CheckResult(worst <= tol, worst, tol)


def local_densities(data, point):
    """Coefficients of every differential against a local parameter at ``point``.

    Ordinary points use ``z``; a branch point ``a`` uses ``s`` with
    ``z - a ~ s**3``; points over infinity use ``zeta = 1/z``.  A pole is
    reported as ``inf``.
    """
    out = []
    if isinstance(point, InfinityPoint):
        for d in data.diffs:
            k = d.w_power
            if d.degree > 2 * k - 2:
                out.append(complex(math.inf))
                continue
            lead = d.numerator[2 * k - 2] if len(d.numerator) > 2 * k - 2 else 0j
            out.append(-lead / point.w_hat ** k)
        return np.array(out)
    if data.curve.is_branch_point(point.z):
        c = cmath.exp(cmath.log(data.curve.dp(point.z)) / 3)
        for d in data.diffs:
            if d.w_power == 2:
                out.append(3 * complex(d.numerator_at(point.z)) / c ** 2)
            else:
                out.append(0j)
        return np.array(out)
    return np.array([complex(d.density(point.z, point.w)) for d in data.diffs])


def candidate_points(data):
    """Zeros of every numerator (all sheets), the branch points and the points over infinity."""
    curve = data.curve
    zs = []
    for d in data.diffs:
        coeffs = list(d.numerator)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) > 1:
            zs.extend(np.roots(coeffs[::-1]).tolist())
    points = []
    for z in zs:
        if curve.is_branch_point(z):
            continue
        points.extend(curve.fiber(complex(z)))
    points.extend(SurfacePoint(a, 0j) for a in curve.roots)
    points.extend(InfinityPoint(OMEGA ** k) for k in range(3))
    return points


def check_common_zeros(data, candidate_points, threshold=1e-8):
    """Pass iff at every candidate some differential is nonzero in a local chart."""
    worst = math.inf
    where = None
    for pt in candidate_points:
        dens = local_densities(data, pt)
        peak = float(np.max(np.abs(dens)))
        if peak < worst:
            worst, where = peak, pt
    passed = worst > threshold
    detail = "" if passed else f"common zero at {where!r}"
    return CheckResult(passed, worst, threshold, detail)


# immersion evaluation -----------------------------------------------------

class _PathPiece(NamedTuple):
    arc: object
    multiplier: int
    seed: Seed


def _walk(data, path, precision):
    """Continue along a polyline of vertices; yield cumulative complex integrals."""
    curve = data.curve
    first = path[0]
    z0 = first.z if isinstance(first, SurfacePoint) else complex(first)
    bp = data.basepoint
    if abs(z0 - bp.z) > 1e-12 or (isinstance(first, SurfacePoint)
                                  and abs(first.w - bp.w) > TOL_NUMERIC):
        raise ValueError("path must start at the basepoint")
    z, w = bp.z, bp.w
    total = np.zeros(len(data.diffs), dtype=complex)
    yield z, w, total.copy()
    per_seg = precision / max(1, len(path) - 1)
    for vertex in path[1:]:
        z_next = vertex.z if isinstance(vertex, SurfacePoint) else complex(vertex)
        if z_next == z:
            yield z, w, total.copy()
            continue
        piece = _PathPiece(LineArc(z, z_next), 0, Seed(0.0, w))
        vals, _ = _segment_integrals(curve, data.diffs, piece, per_seg)
        total = total + np.asarray(vals, dtype=complex)
        w_next = branch_for(curve, piece.arc, piece.seed).w(1.0)[0]
        if isinstance(vertex, SurfacePoint) and abs(vertex.w - w_next) > TOL_NUMERIC * (1 + abs(w_next)):
            raise PathSheetMismatch(f"vertex z={z_next!r}: given w={vertex.w!r}, "
                                    f"continued w={w_next!r}")
        z, w = z_next, complex(w_next)
        yield z, w, total.copy()


def _finish(data, theta, value, reduce):
    x = (cmath.exp(1j * theta) * np.asarray(value, dtype=complex)).real
    if reduce and data.lattice is not None:
        x = data.lattice.reduce(x)
    return x


def immerse(data, theta, path, precision=DEFAULT_PRECISION, reduce=True):
    """``Re(exp(i theta) ∫ eta)`` along ``path``.

    ``path`` is either a :class:`Cycle` (closed, so the result is a
    period) or a polyline of vertices starting at the basepoint; vertices
    are :class:`SurfacePoint` (sheet checked against the continuation) or
    bare ``z`` values (sheet carried along).  With a lattice attached and
    ``reduce`` set, the point is reduced into the fundamental
    parallelepiped.
    """
    if isinstance(path, Cycle):
        vals = integrate_segments(data.curve, data.diffs, path.segments, precision).values
        return _finish(data, theta, [complex(v) for v in vals], reduce)
    path = list(path)
    *_, (_, _, total) = _walk(data, path, precision)
    return _finish(data, theta, total, reduce)


def immerse_polyline(data, theta, path, precision=DEFAULT_PRECISION, reduce=True):
    """Immersion at every vertex of ``path`` (cumulative integration)."""
    out = []
    for z, w, total in _walk(data, list(path), precision):
        out.append(_finish(data, theta, total, reduce))
    return np.array(out)


# mesh of the fundamental domain --------------------------------------------

@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray
    faces: tuple
    dropped: tuple
    grid_size: int


def _sheet_offset(data, k, precision, radius=0.5):
    """Integral along a loop around ``z = 1`` taken ``k`` times, and the new ``w`` at 0."""
    curve = data.curve
    total = np.zeros(len(data.diffs), dtype=complex)
    w = data.basepoint.w
    z0 = data.basepoint.z
    start = 1.0 - radius
    pieces = []
    for _ in range(k):
        pieces.append(LineArc(z0, start))
        pieces.append(CircleArc(1, math.pi, 3 * math.pi, center=1.0 + 0j, radius=radius))
        pieces.append(LineArc(start, z0))
    for arc in pieces:
        t0 = arc.t_range[0]
        piece = _PathPiece(arc, 0, Seed(t0, w))
        vals, _ = _segment_integrals(curve, data.diffs, piece, precision / max(1, len(pieces)))
        total += np.asarray(vals, dtype=complex)
        w = complex(branch_for(curve, arc, piece.seed).w(arc.t_range[1])[0])
    return total, w


def fundamental_mesh(data, theta=0.0, n_rays=12, n_radii=8, radius=2.0,
                     precision=1e-10, clearance=1e-6):
    """Triangulated image of a polar grid on each of the three sheets.

    Rays leave ``z = 0`` at angles ``(j + 1/2) 2 pi / n_rays``.  Sheet
    ``k`` is entered by looping ``k`` times around ``z = 1``.  Vertices
    whose path passes within ``clearance`` of a branch point are dropped
    and reported along with the faces that touched them.
    """
    if data.basepoint.z != 0:
        raise ValueError("mesh generation expects the basepoint over z = 0")
    roots = np.asarray(data.curve.roots)
    verts, index = [], {}
    dropped = []
    for sheet in range(3):
        offset, w0 = _sheet_offset(data, sheet, precision)
        base = WeierstrassData(data.curve, data.diffs, SurfacePoint(0j, w0), data.lattice)
        index[(sheet, 0, 0)] = len(verts)
        verts.append(_finish(data, theta, offset, True))
        for j in range(n_rays):
            ang = (j + 0.5) * 2 * math.pi / n_rays
            direction = cmath.exp(1j * ang)
            radii = [radius * (i + 1) / n_radii for i in range(n_radii)]
            seg_ok = []
            prev = 0.0
            for r in radii:
                # distance from the segment [prev, r] along the ray to each root
                proj = np.clip((roots * direction.conjugate()).real, prev, r)
                seg_ok.append(float(np.min(np.abs(roots - proj * direction))) > clearance)
                prev = r
            usable = 0
            while usable < n_radii and seg_ok[usable]:
                usable += 1
            path = [0j] + [r * direction for r in radii[:usable]]
            if usable:
                pts = list(_walk(base, path, precision))[1:]
                for i, (_, _, total) in enumerate(pts):
                    index[(sheet, j, i + 1)] = len(verts)
                    verts.append(_finish(data, theta, offset + total, True))
            for i in range(usable, n_radii):
                dropped.append({"sheet": sheet, "ray": j, "radius": radii[i]})
    faces = []
    for sheet in range(3):
        for j in range(n_rays):
            jn = (j + 1) % n_rays
            for i in range(n_radii):
                if i == 0:
                    tri = [(sheet, 0, 0), (sheet, j, 1), (sheet, jn, 1)]
                    cands = [tri]
                else:
                    cands = [[(sheet, j, i), (sheet, j, i + 1), (sheet, jn, i + 1)],
                             [(sheet, j, i), (sheet, jn, i + 1), (sheet, jn, i)]]
                for tri in cands:
                    key = [(s, 0, 0) if r == 0 else (s, jj, r) for s, jj, r in tri]
                    if all(k in index for k in key):
                        faces.append(tuple(index[k] for k in key))
    grid = 3 * (1 + n_rays * n_radii)
    return Mesh(np.array(verts), tuple(faces), tuple(dropped), grid)


# Veronese construction ----------------------------------------------------

@dataclass(frozen=True)
class SectionPair:
    """Sections ``(s1, s2)`` of ``L`` and ``(t1, t2)`` of ``K - L`` as callables."""

    s1: object
    s2: object
    t1: object
    t2: object

    _PROBES = (0.3 + 0.1j, -0.7 + 0.4j, 1.3 - 0.5j, 0.05 - 1.1j)

    def __post_init__(self):
        for a, b, label in ((self.s1, self.s2, "s"), (self.t1, self.t2, "t")):
            if all(complex(a(z)) == 0 and complex(b(z)) == 0 for z in self._PROBES):
                raise ValueError(f"sections ({label}1, {label}2) vanish identically")

    @classmethod
    def from_polynomials(cls, s1, s2, t1, t2):
        """Sections from ascending coefficient lists."""
        P = np.polynomial.polynomial.polyval
        return cls(*(lambda z, c=tuple(c): P(z, c) for c in (s1, s2, t1, t2)))


def veronese(sections):
    """The four quadric-valued differentials built from two section pairs.

    ``(s1 t1 - s2 t2, s1 t2 + s2 t1, i(s1 t1 + s2 t2), i(s1 t2 - s2 t1))``;
    their squares sum to zero identically.
    """
    s1, s2, t1, t2 = sections.s1, sections.s2, sections.t1, sections.t2
    return (
        lambda x: s1(x) * t1(x) - s2(x) * t2(x),
        lambda x: s1(x) * t2(x) + s2(x) * t1(x),
        lambda x: 1j * (s1(x) * t1(x) + s2(x) * t2(x)),
        lambda x: 1j * (s1(x) * t2(x) - s2(x) * t1(x)),
    )


# holomorphy ----------------------------------------------------------------

@dataclass(frozen=True)
class ImmersionMatrix:
    """Coefficients ``M`` of ``eta = M omega`` against a basis ``omega`` of differentials."""

    M: np.ndarray

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.M, dtype=complex))
        if m.shape[0] < 3 or m.shape[1] < 1:
            raise ValueError(f"immersion matrix must be n x g with n >= 3, g >= 1; got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "M", m)


def holomorphy_residual(M):
    m = M.M if isinstance(M, ImmersionMatrix) else np.atleast_1d(np.asarray(M, dtype=complex))
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m.T @ m)))


def holomorphy_test(M, tol=TOL_ALGEBRAIC):
    """True iff ``M^T M = 0`` (bilinear product, no conjugation).

    Accepts an :class:`ImmersionMatrix` or any array; a 1-D array is read
    as a single column.
    """
    return holomorphy_residual(M) <= tol
