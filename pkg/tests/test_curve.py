import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trigsurf.arcs import CircleArc, LineArc, arc_from_json
from trigsurf.curve import (OMEGA, Differential, Seed, SurfacePoint, continue_branch,
                            curve_from_roots, deck_transform, eval_differential, sextic_curve)
from trigsurf.errors import (AtBranchPoint, BranchPointOnInterior, CurveNotSymmetric,
                             DuplicateRoots, InvalidCurve, SeedInconsistent)
from trigsurf.sextic import HOLOMORPHIC_BASIS, PHI

SEED_W = -(2 ** (1 / 3))


def test_sixth_roots_curve():
    c = curve_from_roots([cmath.exp(1j * math.pi * k / 3) for k in range(6)])
    assert c.genus == 4
    assert c.is_sextic() and c.is_omega_symmetric()
    assert abs(c.p(0.3 + 0.2j) - ((0.3 + 0.2j) ** 6 - 1)) < 1e-15


def test_duplicate_roots():
    with pytest.raises(DuplicateRoots):
        curve_from_roots([0, 0, 1, 2, 3, 4])


def test_real_roots_curve_keeps_order():
    c = curve_from_roots([1, 2, 3, 4, 5, 6])
    assert c.genus == 4
    assert c.roots == (1, 2, 3, 4, 5, 6)
    assert not c.is_omega_symmetric()


def test_wrong_root_count():
    with pytest.raises(InvalidCurve):
        curve_from_roots([1, 2, 3])


def test_branch_matches_first_half_of_a1():
    c = sextic_curve()
    br = continue_branch(c, CircleArc(1, 0.0, math.pi / 3), Seed(math.pi / 6, SEED_W))
    pt = br(math.pi / 6)
    assert abs(pt.w - SEED_W) < 1e-15
    # on this arc z^6 - 1 = 2i sin(3t) e^{3it}; the seeded sheet is the
    # continuous root -(2 sin 3t)^(1/3) e^{i(3t - pi/2)/3}
    # (the closed form itself loses digits right at the endpoints)
    ts = np.linspace(1e-6, math.pi / 3 - 1e-6, 2001)
    expect = -np.cbrt(2 * np.sin(3 * ts)) * np.exp(1j * (3 * ts - math.pi / 2) / 3)
    np.testing.assert_allclose(br.w(ts), expect, rtol=1e-10)
    assert max(c.residual(br(t)) for t in ts[::50]) < 1e-10


def test_loop_without_branch_point_returns_to_seed():
    c = sextic_curve()
    arc = CircleArc(1, 0.0, 2 * math.pi, center=0j, radius=0.5)
    w0 = c.cube_roots(arc.z(0.0))[1]
    br = continue_branch(c, arc, Seed(0.0, w0))
    assert abs(br(2 * math.pi).w - w0) < 1e-10


def test_loop_around_one_root_has_monodromy_omega():
    c = sextic_curve()
    arc = CircleArc(1, 0.0, 2 * math.pi, center=1 + 0j, radius=0.3)
    w0 = c.cube_roots(arc.z(0.0))[0]
    br = continue_branch(c, arc, Seed(0.0, w0))
    ratio = br(2 * math.pi).w / w0
    assert abs(ratio - OMEGA) < 1e-10  # counterclockwise: w -> omega w
    arc_cw = CircleArc(-1, 0.0, 2 * math.pi, center=1 + 0j, radius=0.3)
    br_cw = continue_branch(c, arc_cw, Seed(0.0, w0))
    assert abs(br_cw(2 * math.pi).w / w0 - OMEGA.conjugate()) < 1e-10


def test_interior_branch_point_rejected():
    c = sextic_curve()
    with pytest.raises(BranchPointOnInterior):
        continue_branch(c, LineArc(0j, 2 + 0j), Seed(0.0, -1 + 0j))


def test_seed_off_curve_rejected():
    c = sextic_curve()
    with pytest.raises(SeedInconsistent):
        continue_branch(c, CircleArc(1, 0.0, math.pi / 3), Seed(math.pi / 6, 1.0 + 0j))


def test_eval_differential_examples():
    p = SurfacePoint(0j, -1 + 0j)
    assert eval_differential(PHI[0], p) == 1
    assert eval_differential(PHI[2], p) == 0
    assert eval_differential(HOLOMORPHIC_BASIS[3], p) == -1


def test_eval_at_branch_point():
    with pytest.raises(AtBranchPoint):
        eval_differential(PHI[0], SurfacePoint(1 + 0j, 0j))


def test_psi_examples():
    p = SurfacePoint(0j, -1 + 0j)
    q = deck_transform(p, "psi")
    assert q == SurfacePoint(0j, -OMEGA)
    r = deck_transform(deck_transform(q, "psi"), "psi")
    assert abs(r.w - p.w) < 1e-15


def test_phi_fixes_origin():
    c = sextic_curve()
    p = SurfacePoint(0j, -1 + 0j)
    assert deck_transform(p, "phi", c) == p


def test_phi_needs_symmetric_curve():
    c = curve_from_roots([1, 2, 3, 4, 5, 6])
    with pytest.raises(CurveNotSymmetric):
        deck_transform(SurfacePoint(0j, 1 + 0j), "phi", c)


def test_differential_membership():
    assert all(d.is_holomorphic for d in HOLOMORPHIC_BASIS + PHI)
    assert not Differential((0, 0, 0, 1), 2).is_holomorphic
    assert not Differential((0, 1), 1).is_holomorphic
    with pytest.raises(ValueError):
        Differential((1,), 3)


def test_differential_json_roundtrip():
    d = Differential((1j, 0, 2 - 1j), 2, "x")
    assert Differential.from_json(d.to_json()) == d


def test_arc_json_roundtrip():
    for arc in (CircleArc(-1, 0.1, 0.9), CircleArc(1, 0.0, 1.0, 1 + 1j, 0.5),
                LineArc(0j, 1 + 2j)):
        assert arc_from_json(arc.to_json()) == arc


# properties ---------------------------------------------------------------

curve_points = st.builds(
    lambda r, a, k: (r * cmath.exp(1j * a), k),
    st.floats(0.05, 3.0), st.floats(0, 2 * math.pi), st.integers(0, 2))


def _point(z, k):
    c = sextic_curve()
    return SurfacePoint(z, c.cube_roots(z)[k])


@given(curve_points)
def test_phi_has_order_three(zk):
    z, k = zk
    if abs(z ** 6 - 1) < 1e-3:
        return
    c = sextic_curve()
    p = _point(z, k)
    q = p
    for _ in range(3):
        q = deck_transform(q, "phi", c)
        assert c.contains(q)
    assert abs(q.z - p.z) < 1e-12 and abs(q.w - p.w) < 1e-12


@given(curve_points)
def test_psi_pullback_factors(zk):
    z, k = zk
    if abs(z ** 6 - 1) < 1e-3:
        return
    p = _point(z, k)
    q = deck_transform(p, "psi")
    for d in HOLOMORPHIC_BASIS:
        factor = OMEGA if d.w_power == 2 else OMEGA ** 2
        a = eval_differential(d, q)
        b = factor * eval_differential(d, p)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, math.pi / 3 - 0.05), st.floats(0.05, math.pi / 3 - 0.05))
def test_branch_reversal_consistent(t_seed, t_far):
    c = sextic_curve()
    fwd = continue_branch(c, CircleArc(1, 0.0, math.pi / 3), Seed(t_seed, c.cube_roots(
        cmath.exp(1j * t_seed))[2]))
    far = fwd(t_far)
    back = continue_branch(c, CircleArc(1, 0.0, math.pi / 3), Seed(t_far, far.w))
    assert abs(back(t_seed).w - fwd.seed.w) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_residual_along_lines(x0, y0, x1, y1):
    c = sextic_curve()
    a, b = complex(x0, y0), complex(x1, y1)
    if abs(a - b) < 1e-3 or abs(c.p(a)) < 1e-2:
        return
    arc = LineArc(a, b)
    try:
        br = continue_branch(c, arc, Seed(0.0, c.cube_roots(a)[0]))
    except BranchPointOnInterior:
        return
    ts = np.linspace(0, 1, 101)
    z, _, w = br.lift(np.zeros(101, dtype=np.int64), ts)
    res = np.abs(w ** 3 - c.p(z)) / (1 + np.abs(c.p(z)))
    assert res.max() < 1e-10
    # also at the recorded anchors
    res_a = np.abs(br.anchors_w ** 3 - br.anchors_p) / (1 + np.abs(br.anchors_p))
    assert res_a.max() < 1e-10
