import math

import mpmath
import numpy as np
import pytest

from conftest import OMEGA, ORACLE, ORACLE_A, ORACLE_B, ORACLE_C
from trigsurf import sextic
from trigsurf.arcs import CircleArc
from trigsurf.curve import Differential, Seed, curve_from_roots
from trigsurf.errors import OpenCycle, WrongCurve
from trigsurf.periods import (Cycle, CycleSegment, PeriodMatrix, builtin_cycles,
                              integrate_along, integrate_cycle, period_matrix,
                              reference_constants)
from trigsurf.quadrature import tanh_sinh


def test_reference_constants_match_oracle():
    rc = reference_constants()
    for got, want in zip(rc.as_tuple(), ORACLE):
        assert abs(got - want) < 1e-13
    assert max(rc.errors) <= 1e-12
    assert min(rc.as_tuple()) > 0


def test_reference_constants_stable_under_precision_change():
    coarse = reference_constants(1e-6).as_tuple()
    fine = reference_constants(1e-12).as_tuple()
    for a, b in zip(coarse, fine):
        assert f"{a:.8e}"[:9] == f"{b:.8e}"[:9]


def test_builtin_cycles_a1_data(cycles):
    a1 = cycles[0]
    assert a1.name == "A1"
    s1, s2 = a1.segments
    assert s1.arc == CircleArc(1, 0.0, math.pi / 3) and s1.multiplier == 0
    assert s2.arc == CircleArc(-1, -math.pi / 3, 0.0) and s2.multiplier == 2
    assert s1.seed.w < 0 and s2.seed.w < 0


def test_builtin_cycles_deck_relations(cycles):
    a1, a2, a3, a4, b1, b2, b3, b4 = cycles
    assert a3.segments == a1.psi().segments
    assert a4.segments == a2.psi().segments
    assert a2.segments == a1.phi().segments
    assert b2.segments == b1.phi().segments
    assert b3.segments == b1.psi().segments
    assert b4.segments == b2.psi().segments


def test_builtin_cycles_closed(curve, cycles):
    for c in cycles:
        assert c.validate(curve)


def test_builtin_cycles_need_sextic():
    with pytest.raises(WrongCurve):
        builtin_cycles(curve_from_roots([1, 2, 3, 4, 5, 6]))


def test_open_cycle_detected(curve, cycles):
    seg = cycles[0].segments[0]
    with pytest.raises(OpenCycle):
        Cycle("half", (seg,)).validate(curve)


def test_sheet_jump_detected():
    # a full circle of radius 1/2 avoids the branch points; closing it on a
    # rotated sheet is a jump
    c = curve_from_roots([complex(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3))
                          for k in range(6)])
    arc = CircleArc(1, 0.0, 2 * math.pi, radius=0.5)
    w = c.cube_roots(arc.z(1.0))[0]
    Cycle("ok", (CycleSegment(arc, 0, Seed(1.0, w)),)).validate(c)
    half1 = CycleSegment(CircleArc(1, 0.0, math.pi, radius=0.5), 0, Seed(1.0, w))
    half2 = CycleSegment(CircleArc(1, math.pi, 2 * math.pi, radius=0.5), 1,
                         Seed(4.0, c.cube_roots(0.5 * complex(math.cos(4.0), math.sin(4.0)))[0]))
    with pytest.raises(OpenCycle):
        Cycle("jump", (half1, half2)).validate(c)


def test_a1_phi1_closed_form(curve, cycles):
    v = integrate_along(curve, sextic.PHI[0], cycles[0])
    assert abs(v - (OMEGA - OMEGA ** 2) * ORACLE_A) < 1e-8
    assert abs(v - 1j * math.sqrt(3) * ORACLE_A) < 1e-8


def test_a1_closed_forms_all_components(phi_periods):
    col = phi_periods.complex_entries[:, 0]
    w, w2 = OMEGA, OMEGA ** 2
    assert abs(col[0] - (-w2 + w) * ORACLE_A) < 1e-8
    assert abs(col[1] - (w2 - w) * ORACLE_B) < 1e-8
    assert abs(col[2] - 1j * (-w2 + w) * ORACLE_C) < 1e-8


def test_psi_multiplies_periods(curve, cycles):
    for d in sextic.PHI:
        base = integrate_along(curve, d, cycles[0])
        assert abs(integrate_along(curve, d, cycles[2]) - OMEGA * base) < 1e-8


def test_deck_symmetry_all_cycles(curve, cycles):
    w2_basis = [d for d in sextic.HOLOMORPHIC_BASIS if d.w_power == 2]
    vals = np.array([[complex(v) for v in integrate_cycle(curve, w2_basis, c).values]
                     for c in cycles]).T
    for i, j in ((0, 2), (1, 3), (4, 6), (5, 7)):
        np.testing.assert_allclose(vals[:, j], OMEGA * vals[:, i], atol=1e-8)
    phi3 = np.array([integrate_along(curve, sextic.PHI[2], c) for c in cycles])
    for i, j in ((0, 1), (2, 3), (4, 5), (6, 7)):
        assert abs(phi3[j] - OMEGA ** 2 * phi3[i]) < 1e-8


def test_zero_differential_is_exactly_zero(curve, cycles):
    assert integrate_along(curve, Differential((0, 0), 2), cycles[3]) == 0


def test_omega_pattern(omega):
    np.testing.assert_allclose(omega, sextic.omega_pattern(*ORACLE), rtol=0, atol=1e-8)


def test_omega_prime_pattern(curve, cycles):
    iphi = [d.scaled(1j) for d in sextic.PHI]
    P = period_matrix(curve, iphi, cycles)
    np.testing.assert_allclose(P.entries, sextic.omega_prime_pattern(*ORACLE), atol=1e-8)


@pytest.mark.parametrize("theta", [math.pi / 6, 1.0])
def test_associate_linearity(curve, cycles, omega, omega_prime, theta):
    rot = [d.scaled(complex(math.cos(theta), math.sin(theta))) for d in sextic.PHI]
    P = period_matrix(curve, rot, cycles)
    expect = math.cos(theta) * omega + math.sin(theta) * omega_prime
    np.testing.assert_allclose(P.entries, expect, atol=1e-8)


def test_entries_are_real_parts_exactly(phi_periods):
    assert np.array_equal(phi_periods.entries, phi_periods.complex_entries.real)


def test_error_estimates_are_honest(curve, cycles):
    for cyc in cycles:
        coarse = integrate_cycle(curve, sextic.PHI, cyc, 1e-8)
        fine = integrate_cycle(curve, sextic.PHI, cyc, 1e-13)
        diff = np.abs(np.array(coarse.values) - np.array(fine.values))
        assert np.all(diff <= coarse.errors + 1e-15)


def test_segment_error_bounds_deeper_rule(curve, cycles):
    from trigsurf.periods import branch_for
    seg = cycles[4].segments[1]
    br = branch_for(curve, seg.arc, seg.seed)

    def f(side, off):
        z, dz, w = br.lift(side, off)
        return (1 - z ** 2) / w ** 2 * dz

    coarse = tanh_sinh(f, *seg.arc.t_range, 1e-6)
    deeper = tanh_sinh(f, *seg.arc.t_range, 1e-14)
    assert deeper.levels >= coarse.levels
    assert abs(deeper.value[0] - coarse.value[0]) <= coarse.error


def test_extended_precision_periods(curve, cycles):
    v = integrate_along(curve, sextic.PHI[0], cycles[0], precision=1e-25)
    with mpmath.workdps(40):
        a = reference_constants(1e-25).exact[0]
        assert abs(v - 1j * mpmath.sqrt(3) * a) < 1e-24


def test_period_matrix_json_csv_roundtrip(phi_periods):
    back = PeriodMatrix.from_json(phi_periods.to_json())
    np.testing.assert_array_equal(back.complex_entries, phi_periods.complex_entries)
    assert back.column_labels == sextic.CYCLE_NAMES
    lines = phi_periods.to_csv().splitlines()
    assert lines[0] == "," + ",".join(sextic.CYCLE_NAMES)
    assert lines[1].startswith("Phi1,")


def test_cycle_json_roundtrip(cycles):
    for c in cycles:
        assert Cycle.from_json(c.to_json()) == c
    assert cycles[4].to_json()["segments"][1]["multiplier"] == "w"
