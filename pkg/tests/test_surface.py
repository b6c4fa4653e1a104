import math

import numpy as np
import pytest

from transurf import curves
from transurf.curves import FramedCurve, catalog
from transurf.jets import Jet
from transurf.surface import (TranslationSurface, ab_dependence_scan,
                              canonical_periodic_points, dependence_test,
                              find_singular_points, gfs_invariants,
                              normal_decomposition_residual)

PI = math.pi


def _line(d, n1, name="line"):
    d = np.asarray(d, float) / np.linalg.norm(d)
    n1 = np.asarray(n1, float)
    n1 -= d * (n1 @ d)
    n1 /= np.linalg.norm(n1)
    n2 = np.cross(d, n1)
    if np.cross(n1, n2) @ d < 0:
        n2 = -n2

    def gamma(t, order):
        u = Jet.variable(t, order)
        return tuple(float(c) * u for c in d)

    def nu1(t, order):
        return tuple(Jet.constant(float(c), t, order) for c in n1)

    def nu2(t, order):
        return tuple(Jet.constant(float(c), t, order) for c in n2)

    return FramedCurve(gamma, nu1, nu2, (-2.0, 2.0), name=name)


@pytest.fixture(scope="module")
def s0():
    return TranslationSurface.general(catalog("s0_a"), catalog("s0_b"))


def test_gfs_invariants_at_origin(s0):
    inv = gfs_invariants(s0, (0.0, 0.0))
    assert (inv.a2.value, inv.b2.value, inv.c2.value) == pytest.approx((0, 0, 1), abs=1e-14)
    assert inv.A.value == pytest.approx(0.0, abs=1e-14)
    assert inv.B.value == pytest.approx(0.0, abs=1e-14)
    assert (inv.a1.value, inv.b1.value) == (0.0, 0.0)
    assert inv.c1.value == pytest.approx(1.0, abs=1e-14)


def test_gfs_invariants_off_origin_cross_checked(s0):
    inv = gfs_invariants(s0, (1.0, 0.0))
    assert inv.A.value == pytest.approx(0.0, abs=1e-14)
    assert inv.B.value == pytest.approx(-1.0, rel=1e-12)
    # direct decomposition of x_u x x_v against A nu1 + B nu2
    assert normal_decomposition_residual(s0, (1.0, 0.0)) < 1e-12


def test_gfs_mirrored_frame(s0):
    p = (0.6, -0.8)
    inv = gfs_invariants(s0, p, frame="nu_of_B")
    assert inv.e1.value == 0.0 and inv.f1.value == 0.0 and inv.g1.value == 0.0
    cb = s0.curve_v.curvature(p[1], 2)
    assert inv.e2.value == pytest.approx(cb.l.value, abs=1e-14)
    # A, B from either frame vanish together (they span the same normal part)
    inv_a = gfs_invariants(s0, p)
    za = math.hypot(inv_a.A.value, inv_a.B.value)
    zb = math.hypot(inv.A.value, inv.B.value)
    assert za > 1e-3 and zb > 1e-3


def test_normal_decomposition_random_points():
    rng = np.random.default_rng(5)
    pairs = [("s0_a", "s0_b"), ("s1p_a", "s1p_b"), ("s1m_a", "s1m_b")]
    surfaces = [TranslationSurface.general(catalog(a), catalog(b))
                for a, b in pairs]
    surfaces += [TranslationSurface.self_translation(catalog("sin_curve"), sg)
                 for sg in (+1, -1)]
    for s in surfaces:
        for _ in range(100):
            p = tuple(rng.uniform(-1.5, 1.5, 2))
            assert normal_decomposition_residual(s, p) < 1e-9


def test_x_partials_split_variables(s0):
    p = (0.4, -0.7)
    xu = s0.x_partial_jets(p, 1, 0)
    for c in xu:
        for i in range(4):
            for j in range(1, 4):
                if i + j <= 3:
                    assert c.part(i, j) == 0.0
    x = s0.x_partial_jets(p, 0, 0)
    gu = s0.curve_u.gamma_jets(p[0], 4)
    gv = s0.curve_v.gamma_jets(p[1], 4)
    for c, a, b in zip(x, gu, gv):
        assert c.part(1, 0) == pytest.approx(a.deriv(1), rel=1e-14)
        assert c.part(0, 1) == pytest.approx(b.deriv(1), rel=1e-14)


def test_x_u_is_alpha_mu(s0):
    p = (0.9, 0.2)
    xu = s0.x_partial_jets(p, 1, 0, degree=2)
    alpha = s0.curve_u.curvature(p[0], 2).alpha.value
    mu = curves.vec_values(s0.curve_u.mu_jets(p[0], 2))
    assert np.allclose([c.value for c in xu], alpha * mu, atol=1e-12)


def test_dependence_examples(s0):
    s1m = TranslationSurface.general(catalog("s1m_a"), catalog("s1m_b"))
    d = dependence_test(s1m, (0.0, 0.0))
    assert d.dependent and d.t33 == pytest.approx(1.0, abs=1e-12)
    assert not dependence_test(s0, (1.0, 1.0)).dependent
    sc = catalog("sin_curve")
    selfp = TranslationSurface.self_translation(sc, +1)
    d = dependence_test(selfp, (0.7, 0.7))
    assert d.dependent and d.t33 == pytest.approx(1.0, abs=1e-12)
    # the two dependence measures agree exactly in theory
    d2 = dependence_test(s0, (0.9, -0.3))
    assert d2.mu_cross_norm == pytest.approx(d2.t_pair_norm, rel=1e-12)


def test_scan_s0_finds_exactly_origin(s0):
    pts = find_singular_points(s0, (-2, 2, -2, 2), grid_n=32)
    assert len(pts) == 1
    q = pts[0]
    assert (q.u, q.v) == pytest.approx((0.0, 0.0), abs=1e-9)
    assert q.conditions == ("iii",)
    assert q.dependence == "dependent"
    assert q.corank == 1
    assert q.isolated


def test_scan_skew_lines_empty():
    a = _line((1, 0, 0), (0, 1, 0))
    b = _line((0, 1, 0.4), (1, 0, 0), name="line2")
    s = TranslationSurface.general(a, b)
    assert find_singular_points(s, (-1.5, 1.5, -1.5, 1.5), grid_n=24) == []


def test_scan_sin_self_minus_diagonal_plus_four_points():
    sc = catalog("sin_curve")
    xm = TranslationSurface.self_translation(sc, -1)
    pts = find_singular_points(xm, (-PI, PI, -PI, PI), grid_n=48)
    canon = canonical_periodic_points(pts, 2 * PI)
    iso = sorted((q.u, q.v) for q in canon if q.isolated)
    expected = sorted([(0.0, PI), (PI / 2, 3 * PI / 2), (PI, 0.0),
                       (3 * PI / 2, PI / 2)])
    assert len(iso) == 4
    for got, want in zip(iso, expected):
        assert got == pytest.approx(want, abs=1e-7)
    diag = [q for q in canon if not q.isolated]
    assert len(diag) >= 30
    for q in diag:
        gap = abs(q.u - q.v)
        assert min(gap, 2 * PI - gap) < 1e-6


def test_scan_condition_i_curve():
    # first curve singular at u = 0: alpha(0) = 0
    def gamma(t, order):
        u = Jet.variable(t, order)
        return (u * u / 2, u * u * u / 3, Jet.constant(0.0, t, order))

    def nu1(t, order):
        u = Jet.variable(t, order)
        s = (1 + u * u) ** 0.5
        return (-u / s, 1 / s, Jet.constant(0.0, t, order))

    def nu2(t, order):
        return (Jet.constant(0.0, t, order), Jet.constant(0.0, t, order),
                Jet.constant(1.0, t, order))

    cusp = FramedCurve(gamma, nu1, nu2, (-1.5, 1.5), name="cusp")
    b = _line((0, 1, 1), (1, 0, 0))
    s = TranslationSurface.general(cusp, b)
    pts = find_singular_points(s, (-1.2, 1.2, -1.2, 1.2), grid_n=32)
    assert pts, "expected a singular line u = 0"
    assert all(abs(q.u) < 1e-8 and "i" in q.conditions for q in pts)
    assert any(not q.isolated for q in pts)


def test_scan_is_complete_and_consistent():
    # every reported point satisfies its labels; every deep-residual grid
    # cell has a reported point within the merge radius
    sc = catalog("sin_curve")
    xm = TranslationSurface.self_translation(sc, -1)
    window = (-PI, PI, -PI, PI)
    grid_n = 48
    pts = find_singular_points(xm, window, grid_n=grid_n)
    tol = xm.tols.sing_tol
    for q in pts:
        assert q.residual < 10 * tol
        if "iii" in q.conditions:
            assert dependence_test(xm, q.p).t_pair_norm < 10 * tol
    spacing = 2 * PI / (grid_n - 1)
    merge_radius = 3.0 * spacing
    us = np.linspace(*window[:2], grid_n)
    vs = np.linspace(*window[2:], grid_n)
    for u in us:
        for v in vs:
            if xm.singular_residual((float(u), float(v))) < tol / 10:
                near = min(math.hypot(q.u - u, q.v - v) for q in pts)
                assert near < merge_radius, (u, v, near)


def test_self_translation_invariants_carry_half_factors():
    sc = catalog("sin_curve")
    xp = TranslationSurface.self_translation(sc, +1)
    xm = TranslationSurface.self_translation(sc, -1)
    u, v = 0.4, -0.9
    c = sc.curvature(u, 2)
    cv = sc.curvature(v, 2)
    t31 = xp.field.partial_value(3, 1, u, v)
    t33 = xp.field.partial_value(3, 3, u, v)
    invp = gfs_invariants(xp, (u, v))
    invm = gfs_invariants(xm, (u, v))
    assert invp.c1.value == pytest.approx(c.alpha.value / 2, rel=1e-12)
    assert invm.c1.value == pytest.approx(c.alpha.value / 2, rel=1e-12)
    assert invp.a2.value == pytest.approx(cv.alpha.value * t31 / 2, rel=1e-12, abs=1e-12)
    assert invm.a2.value == pytest.approx(-cv.alpha.value * t31 / 2, rel=1e-12, abs=1e-12)
    assert invp.c2.value == pytest.approx(cv.alpha.value * t33 / 2, rel=1e-12)
    assert (invp.e1.value, invp.f1.value, invp.g1.value) == pytest.approx(
        (c.l.value, c.m.value, c.n.value), rel=1e-12)
    # x-(u, u) = 0 exactly and T(u, u) = I
    assert np.all(xm.x_value((0.8, 0.8)) == 0.0)
    assert np.max(np.abs(xm.field.value(0.8, 0.8) - np.eye(3))) < 1e-12


def test_ab_dependence_scan_coplanar():
    # both planar in z = 0 with the same constant nu2 = e3: t32 == 0 identically
    s = TranslationSurface.general(catalog("s0_a"), catalog("s0_a"))
    rep = ab_dependence_scan(s, (-1, 1, -1, 1), n=10)
    assert rep.t_fields_dependent and rep.ab_fields_dependent
    assert rep.t_sigma_ratio < 1e-8


def test_ab_dependence_scan_independent(s0):
    rep = ab_dependence_scan(s0, (-1, 1, -1, 1), n=10)
    assert not rep.t_fields_dependent
    assert not rep.ab_fields_dependent
    assert (rep.t_fields_dependent == rep.ab_fields_dependent)


def test_ab_verdict_matches_t_verdict_everywhere():
    for na, nb in [("s0_a", "s0_b"), ("s1m_a", "s1m_b")]:
        s = TranslationSurface.general(catalog(na), catalog(nb))
        rep = ab_dependence_scan(s, (-1.2, 1.2, -0.9, 0.9), n=9)
        assert rep.t_fields_dependent == rep.ab_fields_dependent
