"""Acceptance criteria, one PASS/FAIL line each at the contractual tolerance."""

import math
import time

import numpy as np
import pytest

from conftest import OMEGA, ORACLE
from trigsurf import sextic
from trigsurf.curve import SurfacePoint, sextic_curve
from trigsurf.immersion import (ImmersionMatrix, SectionPair, WeierstrassData,
                                check_conformality, holomorphy_test, veronese)
from trigsurf.lattice import (IntMatrix, LatticeBasis, invariance_report,
                              lattice_invariant_under, verify_factorization,
                              verify_property_p, factorization_report, property_p_report)
from trigsurf.moduli import ComponentSpec, component_dimension
from trigsurf.periods import branch_for, builtin_cycles, integrate_cycle, period_matrix


@pytest.fixture
def report(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {text}")
        assert ok, text
    return emit


def test_criterion_1_period_matrix(report):
    branch_for.cache_clear()
    t = time.perf_counter()
    curve = sextic_curve()
    P = period_matrix(curve, sextic.PHI, builtin_cycles(curve))
    dt = time.perf_counter() - t
    err = float(np.max(np.abs(P.entries - sextic.omega_pattern(*ORACLE))))
    report(1, err <= 1e-8 and dt < 60,
           f"Omega pattern max abs error {err:.2e} (tol 1e-8), {dt:.2f} s (limit 60 s)")


def test_criterion_2_factorizations(report, omega, omega_prime):
    lam = LatticeBasis(sextic.lambda_basis(*ORACLE))
    lam_p = LatticeBasis(sextic.lambda_prime_basis(*ORACLE))
    checks = (factorization_report(omega, IntMatrix(sextic.G1), IntMatrix(sextic.G2), lam, 1e-8)
              + factorization_report(omega_prime, IntMatrix(sextic.G1_PRIME),
                                     IntMatrix(sextic.G2_PRIME), lam_p, 1e-8,
                                     ("Omega'", "G1'", "G2'", "Lambda'")))
    worst = max(c.max_residual for c in checks)
    ok = all(c.passed for c in checks)
    assert ok == (verify_factorization(omega, IntMatrix(sextic.G1), IntMatrix(sextic.G2), lam)
                  and verify_factorization(omega_prime, IntMatrix(sextic.G1_PRIME),
                                           IntMatrix(sextic.G2_PRIME), lam_p))
    report(2, ok, f"four identities, worst relative residual {worst:.2e} (tol 1e-8)")


def test_criterion_3_associate_linearity(report, curve, cycles, omega, omega_prime):
    worst = 0.0
    for theta in (math.pi / 6, math.pi / 3, 1.0):
        rot = [d.scaled(complex(math.cos(theta), math.sin(theta))) for d in sextic.PHI]
        P = period_matrix(curve, rot, cycles)
        expect = math.cos(theta) * omega + math.sin(theta) * omega_prime
        worst = max(worst, float(np.max(np.abs(P.entries - expect))))
    report(3, worst <= 1e-8, f"max deviation {worst:.2e} over theta in pi/6, pi/3, 1.0 (tol 1e-8)")


def test_criterion_4_property_p_sweep(report, omega, omega_prime):
    t = time.perf_counter()
    failures, count = [], 0
    for n in range(1, 11):
        for m in range(-10, 11):
            if math.gcd(n, m) != 1 or 2 * m == n:
                continue
            count += 1
            rep = property_p_report(omega, omega_prime, n, m, tol=1e-8)
            if not (rep.passed and rep.rank == 3):
                failures.append((n, m))
    dt = time.perf_counter() - t
    assert verify_property_p(omega, omega_prime, 1, 1)
    report(4, not failures and dt < 120,
           f"{count} coprime pairs, {len(failures)} failures, {dt:.2f} s (limit 120 s)")


def test_criterion_5_symmetry_refutation(report):
    lam = LatticeBasis(sextic.lambda_basis(*ORACLE))
    rep = invariance_report(lam, np.array(sextic.R1, dtype=float))
    minus = lattice_invariant_under(lam, np.array(sextic.MINUS_I, dtype=float))
    ok = (not rep.invariant) and rep.max_distance >= 0.1 and minus
    i, j = rep.worst_entry
    report(5, ok, f"R1: entry ({i + 1},{j + 1}) = {rep.conjugated[i, j]:.6f} is "
                  f"{rep.max_distance:.3f} from an integer; -I invariant: {minus}")


def test_criterion_6_holomorphy(report):
    rng = np.random.default_rng(20)
    false_count = 0
    for _ in range(20):
        b1, b2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        false_count += not holomorphy_test(ImmersionMatrix(sextic.immersion_matrix(b1, b2)))
    ok = false_count == 20 and holomorphy_test(np.array([1, 1j])) and holomorphy_test(0)
    report(6, ok, f"immersion matrix M false for {false_count}/20 random (b1, b2); (1, i) and 0 true")


def test_criterion_7_moduli(report):
    bad = []
    total = 0
    for g in range(2, 31):
        specs = [ComponentSpec("hyperelliptic", g, r=r) for r in range((g - 1) // 2 + 1)]
        if g >= 4:
            specs.append(ComponentSpec("trigonal", g))
        specs += [ComponentSpec("d_gonal", g, d=d) for d in range(2, 11) if g > 2 * (d - 1)]
        for s in specs:
            total += 1
            if component_dimension(s).total != 4 * g:
                bad.append(s)
        total += 1
        if component_dimension(ComponentSpec("holomorphic", g)).total != 5 * g - 2:
            bad.append(("holomorphic", g))
    report(7, not bad, f"{total} components checked exactly, {len(bad)} mismatches")


def test_criterion_8_identity_suite(report, curve, cycles):
    rng = np.random.default_rng(1000)
    # conformality of PHI at 1000 random points of the curve
    pts = []
    while len(pts) < 1000:
        z = complex(*rng.uniform(-2, 2, size=2))
        if abs(curve.p(z)) > 1e-6:
            pts.append(curve.fiber(z)[int(rng.integers(3))])
    data = WeierstrassData(curve, sextic.PHI, SurfacePoint(0j, -1 + 0j))
    conf = check_conformality(data, pts, tol=1e-12)
    # conformality of Veronese outputs on 1000 random polynomial sections
    worst_v = 0.0
    for _ in range(1000):
        coeffs = [rng.normal(size=rng.integers(1, 7)) + 1j * rng.normal(size=1)
                  for _ in range(4)]
        sec = SectionPair.from_polynomials(*coeffs)
        z = complex(*rng.normal(size=2))
        v = np.array([f(z) for f in veronese(sec)])
        worst_v = max(worst_v, abs(np.sum(v ** 2)) / max(np.max(np.abs(v)) ** 2, 1e-300))
    # deck symmetry on every built-in cycle
    worst_d = 0.0
    for c in cycles:
        base = integrate_cycle(curve, sextic.HOLOMORPHIC_BASIS, c).values
        moved = integrate_cycle(curve, sextic.HOLOMORPHIC_BASIS, c.psi()).values
        for d, a, b in zip(sextic.HOLOMORPHIC_BASIS, base, moved):
            factor = OMEGA if d.w_power == 2 else OMEGA ** 2
            worst_d = max(worst_d, abs(complex(b) - factor * complex(a)))
    ok = conf.passed and worst_v <= 1e-12 and worst_d <= 1e-8
    report(8, ok, f"conformality {conf.max_residual:.1e}, veronese {worst_v:.1e} (tol 1e-12); "
                  f"deck symmetry {worst_d:.1e} (tol 1e-8)")
