import cmath
import math

import numpy as np
import pytest

from volconj.errors import DomainError
from volconj.geometry import (
    geodesic_length,
    geometry_point,
    gukov_check,
    h_closed,
    h_numeric,
    mm_check,
    nz_potential,
    r_parameter,
    schlafli_residual,
    shared_root_check,
    solve_y,
    surgery_coefficients,
    torus_in_region,
    v_of_u,
    volume,
    volume_from_parts,
    volume_geodesic_form,
)
from volconj.knots import KnotSpec
from volconj.numerics import central_derivative

FIG8 = KnotSpec.figure_eight()
TREFOIL = KnotSpec.torus(2, 3)
UNKNOT = KnotSpec.unknot()

PI = math.pi
TWO_PI_I = 2j * math.pi
FIG8_VOLUME = 2.029883212819307  # 2 * Clausen2(pi/3)
U_STAR = math.acosh(1.5)


# ---------------------------------------------------------------- potentials


def test_torus_h_closed_zero_at_shared_root():
    u = TWO_PI_I / 6 - TWO_PI_I
    assert abs(h_closed(TREFOIL, u)) <= 1e-12


def test_fig8_h_closed_zero_at_arccosh():
    assert abs(h_closed(FIG8, U_STAR)) <= 1e-10
    assert abs(h_closed(FIG8, -U_STAR)) <= 1e-10


def test_fig8_h_closed_complete_volume():
    H = h_closed(FIG8, 0.0)
    assert abs(H.imag - FIG8_VOLUME) < 1e-9
    assert abs(H.real) < 1e-12


def test_h_closed_unknot_unsupported():
    with pytest.raises(DomainError):
        h_closed(UNKNOT, 0.1)


def test_h_numeric_torus_matches_closed():
    u = -0.6 + 0.4j
    est = h_numeric(TREFOIL, u, range(500, 2501, 250))
    assert abs(est.value - h_closed(TREFOIL, u)) <= 1e-3


def test_h_numeric_unknot_exact_zero():
    est = h_numeric(UNKNOT, -0.2 + 0.1j, range(500, 1001, 100))
    assert est.value == 0.0 and est.error_estimate == 0.0


def test_h_numeric_fig8_matches_closed():
    u = 0.02 + 0.03j
    est = h_numeric(FIG8, u, range(200, 2001, 150))
    assert abs(est.value - h_closed(FIG8, u)) <= 1e-2


def test_h_numeric_schedule_gate():
    with pytest.raises(DomainError):
        h_numeric(TREFOIL, 0.1, range(10, 100, 10))


# ---------------------------------------------------------------- saddle


def test_solve_y_double_root():
    assert solve_y(U_STAR).y == 1.0
    assert solve_y(-U_STAR).y == 1.0


def test_solve_y_geometric_branch_at_zero():
    y = solve_y(0.0).y
    assert abs(y - cmath.exp(-1j * PI / 3)) < 1e-12
    assert h_closed(FIG8, 0.0).imag > 0


def test_solve_y_residuals():
    rng = np.random.default_rng(61)
    for _ in range(100):
        u = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        y = solve_y(u).y
        assert abs(y + 1 / y - (2 * cmath.cosh(u) - 1)) <= 1e-12


# ---------------------------------------------------------------- v and V


def test_v_torus_closed_form():
    u = -1.0 + 1.0j
    assert v_of_u(KnotSpec.torus(3, 4), u) == -12 * (u + TWO_PI_I)


def test_v_torus_derivative_consistency():
    rng = np.random.default_rng(67)
    for _ in range(10):
        u = complex(rng.uniform(-1.5, -0.1), rng.uniform(-1, 1))
        d = 2 * central_derivative(lambda z: h_closed(TREFOIL, z), u, 1e-5) - TWO_PI_I
        assert abs(d - v_of_u(TREFOIL, u)) <= 1e-7


def test_v_fig8_derivative_consistency():
    for u in (0.05 + 0.05j, 0.1 - 0.07j, -0.2 + 0.12j):
        v_fast = v_of_u(FIG8, u)
        v_plain = 2 * central_derivative(lambda z: h_closed(FIG8, z), u, 1e-4) - TWO_PI_I
        assert abs(v_fast - v_plain) <= 1e-4


def test_central_derivative_order_on_fig8_potential():
    # the torus potential is quadratic (central differences are exact on it),
    # so the h-halving order test runs on the figure-eight potential
    u = 0.11 + 0.06j
    exact = (v_of_u(FIG8, u, h=1e-6) + TWO_PI_I) / 2.0
    f = lambda z: h_closed(FIG8, z)
    e1 = abs(central_derivative(f, u, 4e-2) - exact)
    e2 = abs(central_derivative(f, u, 2e-2) - exact)
    assert math.log2(e1 / e2) >= 1.9


def test_volume_vanishes_on_torus_region():
    for (a, b) in ((2, 3), (2, 5), (3, 4)):
        knot = KnotSpec.torus(a, b)
        for re in np.linspace(-1.4, -0.2, 5):
            for im in np.linspace(-1.2, 1.2, 5):
                u = complex(re, im)
                assert torus_in_region(a, b, u)
                assert abs(volume(knot, u)) <= 1e-9


def test_volume_fig8_zero_deformation():
    assert abs(volume(FIG8, 0.0) - FIG8_VOLUME) < 1e-9


def test_two_volume_forms_agree():
    rng = np.random.default_rng(71)
    for _ in range(100):
        u = complex(rng.normal(), rng.normal())
        v = complex(rng.normal(), rng.normal())
        H = complex(rng.normal(), rng.normal())
        assert abs(volume_from_parts(u, H, v) - volume_geodesic_form(u, H, v)) <= 1e-12


def test_geodesic_length_values():
    assert geodesic_length(0.2j, 0.3j) == 0.0
    assert abs(geodesic_length(1.0, 1j) - 1.0 / (2 * PI)) < 1e-15
    assert geodesic_length(0.0, v_of_u(FIG8, 0.0)) == 0.0


def test_region_gate():
    assert torus_in_region(2, 3, -0.5 + 0.5j)
    assert not torus_in_region(2, 3, 0.5 + 0.5j)      # Re u >= 0
    assert not torus_in_region(2, 3, -0.5 - 7.0j)     # Im u <= -2*pi
    assert not torus_in_region(2, 3, -TWO_PI_I + 0.1j * 0)  # inside the small disk


# ---------------------------------------------------------------- Schlafli


def test_schlafli_torus_both_sides_zero():
    path = lambda s: complex(-1.0, -0.5) + 0.2 * cmath.exp(1j * s)
    for knot in (TREFOIL, KnotSpec.torus(3, 4)):
        for t in (0.3, 0.7, 1.4):
            assert schlafli_residual(knot, path, t, 1e-3) <= 1e-9


def test_schlafli_constant_path():
    path = lambda s: -0.7 + 0.3j
    assert schlafli_residual(TREFOIL, path, 0.5, 1e-3) <= 1e-12


def test_schlafli_fig8_along_spec_path():
    path = lambda s: s * (-0.1 + 0.2j)
    for t in (0.25, 0.5, 0.75):
        assert schlafli_residual(FIG8, path, t, 1e-3) <= 1e-4


# ---------------------------------------------------------------- surgery


def test_surgery_torus_identity():
    for (a, b) in ((2, 3), (3, 4), (2, 7)):
        knot = KnotSpec.torus(a, b)
        u = -0.4 + 0.25j
        pq = surgery_coefficients(u, v_of_u(knot, u))
        assert pq is not None
        p, q = pq
        assert abs(p + 1.0) < 1e-9
        assert abs(q + 1.0 / (a * b)) < 1e-9


def test_surgery_axis_cases():
    p, q = surgery_coefficients(TWO_PI_I, 1.0 + 0.5j)
    assert abs(p - 1) < 1e-12 and abs(q) < 1e-12
    p, q = surgery_coefficients(0.0, TWO_PI_I)
    assert abs(p) < 1e-12 and abs(q - 1) < 1e-12


def test_surgery_singular_system():
    assert surgery_coefficients(1.0, 2.0) is None


# ---------------------------------------------------------------- Gukov


def test_gukov_trefoil_pairing():
    rep = gukov_check(TREFOIL, -0.6 + 0.4j, tol=1e-8)
    # the representation-verified factor L*M^6 + 1 is annihilated by exactly
    # one of the two pairs; its mirror image by the other
    assert rep.pair_vanishes("L*M^6+1") == ["plus"]
    assert rep.pair_vanishes("L+M^6") == ["minus"]
    assert rep.pair_vanishes("L-1") == []


def test_gukov_fig8_pairing():
    rep = gukov_check(FIG8, 0.05 + 0.05j, tol=1e-6)
    assert len(rep.pair_vanishes("fig8")) >= 1  # palindromy gives both


def test_gukov_abelian_regime():
    # v = -2*pi*i makes both candidate L-values equal 1: the (L-1) factor dies
    rep = gukov_check(FIG8, -0.1 - TWO_PI_I, v=-TWO_PI_I, tol=1e-8)
    assert set(rep.pair_vanishes("L-1")) == {"minus", "plus"}


def test_gukov_echoes_l_of_a():
    u = -0.3 + 0.2j
    rep = gukov_check(TREFOIL, u)
    assert abs(rep.l_of_a - (-rep.v / 2 - 1j * PI)) == 0.0


def test_gukov_unknot_rejected():
    with pytest.raises(DomainError):
        gukov_check(UNKNOT, 0.1)


# ---------------------------------------------------------------- roots


def test_shared_root_fig8():
    rep = shared_root_check(FIG8)
    assert abs(abs(rep.root.real) - U_STAR) < 1e-7
    assert abs(rep.root.imag) < 1e-7
    assert abs(rep.h_at_root) <= 1e-10
    assert abs(rep.alexander_at_exp_root) <= 1e-6


def test_shared_root_torus():
    for (a, b) in ((2, 3), (3, 4)):
        rep = shared_root_check(KnotSpec.torus(a, b))
        expected = TWO_PI_I / (a * b) - TWO_PI_I
        assert abs(rep.root - expected) < 1e-9
        assert abs(rep.h_at_root) <= 1e-12
        assert abs(rep.alexander_at_exp_root) <= 1e-10


# ---------------------------------------------------------------- NZ potential


def test_nz_potential_values():
    assert abs(nz_potential(FIG8, U_STAR) - (-4j * PI * U_STAR)) < 1e-9
    u = TWO_PI_I / 6 - TWO_PI_I
    assert abs(nz_potential(TREFOIL, u) - (-4j * PI * u)) < 1e-12
    assert abs(nz_potential(FIG8, 0.0) - 4 * h_closed(FIG8, 0.0)) == 0.0


# ---------------------------------------------------------------- mm_check


def test_mm_check_fig8():
    rep = mm_check(FIG8, 0.3 - TWO_PI_I, 2000)
    assert rep.within and rep.deviation <= 1e-2


def test_mm_check_trefoil():
    rep = mm_check(TREFOIL, 0.2 - TWO_PI_I, 2000)
    assert rep.within and rep.deviation <= 1e-2


def test_mm_check_unknot():
    rep = mm_check(UNKNOT, 0.1 - TWO_PI_I, 100)
    assert rep.deviation == 0.0


def test_mm_check_gate():
    with pytest.raises(DomainError):
        mm_check(FIG8, 1.0, 100)  # u + 2*pi*i too large


# ---------------------------------------------------------------- records


def test_geometry_point_closed_form():
    u = -0.5 + 0.3j
    pt = geometry_point(TREFOIL, u)
    assert pt.source == "closed_form"
    assert abs(pt.V) <= 1e-9
    assert pt.surgery is not None
    assert "out_of_region" not in pt.flags
    assert abs(pt.v - (2 * central_derivative(lambda z: h_closed(TREFOIL, z), u, 1e-5) - TWO_PI_I)) < 1e-7


def test_geometry_point_out_of_region_flagged():
    pt = geometry_point(TREFOIL, 0.4 + 0.3j)
    assert "out_of_region" in pt.flags


def test_geometry_point_unknot():
    pt = geometry_point(UNKNOT, -0.3 + 0.2j)
    assert pt.H == 0.0 and pt.V == 0.0


def test_r_parameter_roundtrip():
    u = -0.6 + 0.4j
    assert abs((r_parameter(u) - 1) * TWO_PI_I - u) < 1e-15
