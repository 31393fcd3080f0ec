import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ORACLE
from trigsurf import sextic
from trigsurf.curve import Differential, SurfacePoint, sextic_curve
from trigsurf.errors import AtBranchPoint, PathSheetMismatch
from trigsurf.immersion import (ImmersionMatrix, InfinityPoint, SectionPair, WeierstrassData,
                                candidate_points, check_common_zeros, check_conformality,
                                default_sample_points, fundamental_mesh, holomorphy_residual,
                                holomorphy_test, immerse, immerse_polyline, local_densities,
                                veronese)
from trigsurf.lattice import (IntMatrix, LatticeBasis, associate_periods,
                              constants_from_periods, property_p_certificate, rotated_target)

P0 = SurfacePoint(0j, -1 + 0j)
LAMBDA = sextic.lambda_basis(*ORACLE)
LAMBDA_PRIME = sextic.lambda_prime_basis(*ORACLE)


@pytest.fixture(scope="module")
def data():
    return WeierstrassData(sextic_curve(), sextic.PHI, P0)


def _unit_circle_points(curve, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for t in rng.uniform(0, 2 * math.pi, count):
        z = cmath.exp(1j * t)
        if abs(curve.p(z)) > 1e-6:
            out.append(curve.fiber(z)[int(rng.integers(3))])
    return out


# algebraic checks ----------------------------------------------------------

def test_phi_conformal_on_unit_circle(data):
    res = check_conformality(data, _unit_circle_points(data.curve, 100, 1))
    assert res.passed and res.max_residual < 1e-12


def test_pair_with_i_multiple_conformal():
    curve = sextic_curve()
    w1 = Differential((0.3 - 1j, 2, 0.5j), 2)
    d = WeierstrassData(curve, (w1, w1.scaled(1j), Differential((0,), 2)), P0)
    assert check_conformality(d, default_sample_points(curve)).passed


def test_broken_identity_fails(data):
    bad = WeierstrassData(data.curve, (data.diffs[0].scaled(1.01),) + data.diffs[1:], P0)
    res = check_conformality(bad, default_sample_points(data.curve))
    assert not res.passed and res.max_residual > 1e-3


def test_conformality_refuses_branch_point(data):
    with pytest.raises(AtBranchPoint):
        check_conformality(data, [SurfacePoint(1 + 0j, 0j)])


def test_phi_has_no_common_zeros(data):
    assert check_common_zeros(data, candidate_points(data)).passed


def test_holomorphic_basis_has_no_common_zeros():
    d = WeierstrassData(sextic_curve(), sextic.HOLOMORPHIC_BASIS, P0)
    assert check_common_zeros(d, candidate_points(d)).passed


def test_planted_common_zero_found():
    diffs = (Differential((0, 1), 2), Differential((0, 1), 1), Differential((0, 0, 1), 2))
    d = WeierstrassData(sextic_curve(), diffs, P0)
    res = check_common_zeros(d, candidate_points(d))
    assert not res.passed
    assert "0j" in res.detail or "z=0" in res.detail or "SurfacePoint(z=0j" in res.detail


def test_local_densities_at_infinity(data):
    # the differentials of PHI behave like -c_2 / w_hat^2 in the chart 1/z
    dens = local_densities(data, InfinityPoint(1 + 0j))
    np.testing.assert_allclose(dens, [1, -1j, 0], atol=1e-15)


def test_local_densities_at_branch_point(data):
    dens = local_densities(data, SurfacePoint(1 + 0j, 0j))
    assert abs(dens[0]) < 1e-15 and abs(dens[1]) > 1 and abs(dens[2]) > 1


def test_small_data_rejected():
    with pytest.raises(ValueError):
        WeierstrassData(sextic_curve(), sextic.PHI[:2], P0)


def test_attach_lattice(data):
    d = data.attach_lattice(LAMBDA)
    assert isinstance(d.lattice, LatticeBasis)


# immersion -------------------------------------------------------------------

def test_trivial_path_is_origin(data):
    np.testing.assert_array_equal(immerse(data, 0.0, [P0]), np.zeros(3))


def test_a1_lands_in_lattice(data, cycles, omega):
    d = data.attach_lattice(LAMBDA)
    raw = immerse(d, 0.0, cycles[0], reduce=False)
    np.testing.assert_allclose(raw, omega[:, 0], atol=1e-10)
    k = np.linalg.solve(LAMBDA, raw)
    assert np.max(np.abs(k - np.round(k))) < 1e-8
    assert np.max(np.abs(immerse(d, 0.0, cycles[0]))) < 1e-8


def test_conjugate_periods_in_lambda_prime(data, cycles):
    d = WeierstrassData(data.curve, data.diffs, P0, LatticeBasis(LAMBDA_PRIME))
    for c in cycles:
        raw = immerse(d, math.pi / 2, c, reduce=False)
        k = np.linalg.solve(LAMBDA_PRIME, raw)
        assert np.max(np.abs(k - np.round(k))) < 1e-8


def test_lattice_valuedness_predicted_by_certificates(data, cycles, omega, omega_prime):
    G2 = IntMatrix(sextic.G2).to_numpy()
    G2p = IntMatrix(sextic.G2_PRIME).to_numpy()
    fam, _, F2 = property_p_certificate(1, 1)
    target = rotated_target(fam, constants_from_periods(omega))
    cases = ((0.0, LAMBDA, G2), (math.pi / 2, LAMBDA_PRIME, G2p),
             (fam.theta, target, F2.to_numpy()))
    for theta, basis, coeffs in cases:
        for j, c in enumerate(cycles):
            x = immerse(data, theta, c, reduce=False)
            np.testing.assert_allclose(x, basis @ coeffs[:, j], atol=1e-8)


def test_polyline_accumulates(data):
    path = [0j, 0.3 + 0j, 0.3 + 0.4j, 0.1 + 0.5j]
    pts = immerse_polyline(data, 0.0, path)
    assert pts.shape == (4, 3)
    np.testing.assert_array_equal(pts[0], 0)
    np.testing.assert_allclose(pts[-1], immerse(data, 0.0, path), atol=1e-13)
    # along the real axis from 0 with w = -1: Re ∫ 2z/w^2 dz = 0.3^2 to first order
    assert pts[1][2] > 0


def test_polyline_detects_wrong_sheet(data):
    curve = data.curve
    z1 = 0.4 + 0j
    wrong = [w for w in curve.fiber(z1) if abs(w.w.imag) > 0.1][0]
    with pytest.raises(PathSheetMismatch):
        immerse(data, 0.0, [P0, wrong])


def test_path_must_start_at_basepoint(data):
    with pytest.raises(ValueError):
        immerse(data, 0.0, [0.1 + 0j, 0.2 + 0j])


# mesh ----------------------------------------------------------------------------

def test_mesh_vertices_inside_parallelepiped(data):
    d = data.attach_lattice(LAMBDA)
    mesh = fundamental_mesh(d, n_rays=6, n_radii=3)
    assert len(mesh.vertices) + len(mesh.dropped) == mesh.grid_size == 3 * (1 + 18)
    coeff = np.linalg.solve(LAMBDA, mesh.vertices.T)
    assert np.all(coeff >= -1e-9) and np.all(coeff < 1 + 1e-9)
    assert all(max(f) < len(mesh.vertices) for f in mesh.faces)


def test_mesh_drops_cells_through_branch_points(data):
    d = data.attach_lattice(LAMBDA)
    # three rays sit at angles pi/3, pi, 5pi/3 and run into branch points
    mesh = fundamental_mesh(d, n_rays=3, n_radii=2, radius=2.0)
    assert len(mesh.dropped) == 3 * 3 * 2
    assert len(mesh.vertices) == 3
    assert len(mesh.vertices) + len(mesh.dropped) == mesh.grid_size


# Veronese ------------------------------------------------------------------------

def test_veronese_basic_example():
    sec = SectionPair(lambda z: 1, lambda z: 0, lambda z: 1, lambda z: 0)
    vals = [f(0.7) for f in veronese(sec)]
    assert vals == [1, 0, 1j, 0]


def test_zero_sections_rejected():
    with pytest.raises(ValueError):
        SectionPair(lambda z: 0, lambda z: 0, lambda z: 1, lambda z: 0)


def _random_sections(rng, deg=5):
    coeffs = [rng.normal(size=rng.integers(1, deg + 2)) + 1j * rng.normal(size=1)
              for _ in range(4)]
    return coeffs, SectionPair.from_polynomials(*coeffs)


def test_veronese_conformal_random():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        _, sec = _random_sections(rng)
        z = complex(*rng.normal(size=2))
        v = np.array([f(z) for f in veronese(sec)])
        worst = max(worst, abs(np.sum(v ** 2)) / np.max(np.abs(v)) ** 2)
    assert worst < 1e-12


def test_veronese_lambda_invariance():
    rng = np.random.default_rng(9)
    coeffs, sec = _random_sections(rng)
    lams = [2 + 1j] + list(rng.normal(size=10) + 1j * rng.normal(size=10))
    for lam in lams:
        sc = [np.asarray(coeffs[0]) * lam, np.asarray(coeffs[1]) * lam,
              np.asarray(coeffs[2]) / lam, np.asarray(coeffs[3]) / lam]
        sec2 = SectionPair.from_polynomials(*sc)
        for z in (0.2 + 0.1j, -1.3 + 0.7j):
            a = np.array([f(z) for f in veronese(sec)])
            b = np.array([f(z) for f in veronese(sec2)])
            np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-12)


# holomorphy ----------------------------------------------------------------------

def test_immersion_matrix_never_holomorphic():
    rng = np.random.default_rng(4)
    for _ in range(20):
        b1, b2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        M = ImmersionMatrix(sextic.immersion_matrix(b1, b2))
        assert not holomorphy_test(M)
        assert holomorphy_residual(M) >= 1


def test_holomorphic_trivial_cases():
    assert holomorphy_test(np.array([1, 1j]))
    assert holomorphy_test(np.zeros((3, 2)))
    assert holomorphy_test(0)


def test_immersion_matrix_shape_checked():
    with pytest.raises(ValueError):
        ImmersionMatrix(np.array([[1, 1j]]).T)


def _complex_orthogonal(rng, n):
    # exp of a complex antisymmetric matrix satisfies Q^T Q = I; the series
    # converges quickly because the generator is small
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = 0.3 * (a - a.T)
    Q = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        Q = Q + term
    return Q


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_holomorphy_invariant_under_complex_orthogonal(seed):
    rng = np.random.default_rng(seed)
    iso = np.array([[1, 0], [1j, 0], [0, 1], [0, 1j]])
    M = sextic.immersion_matrix(*(rng.normal(size=2)))
    for base in (iso, M):
        Q = _complex_orthogonal(rng, base.shape[1])
        assert np.max(np.abs(Q.T @ Q - np.eye(base.shape[1]))) < 1e-12
        scale = max(1.0, float(np.max(np.abs(Q))) ** 2)
        assert holomorphy_test(base) == holomorphy_test(base @ Q, tol=1e-12 * scale)
