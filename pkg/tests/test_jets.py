import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transurf import jets
from transurf.errors import DegenerateDivision, DomainError, OriginAtan2
from transurf.fd import normalized_error, richardson_derivative
from transurf.jets import BiJet, Jet


def test_polynomial_product_derivatives():
    u = Jet.variable(0.0, 6)
    p = (1 + u) * (1 - u)
    assert np.allclose(p.d, [1, 0, -2, 0, 0, 0, 0])


def test_mixed_partial_of_u2_v():
    U = BiJet.variable_u(0.7, -0.3, 3)
    V = BiJet.variable_v(0.7, -0.3, 3)
    f = U * U * V
    assert f.part(1, 1) == pytest.approx(2 * 0.7, abs=1e-14)
    assert f.part(2, 1) == pytest.approx(2.0, abs=1e-14)
    assert f.part(0, 1) == pytest.approx(0.7**2, abs=1e-14)


def test_random_quartic_products_match_expanded_polynomial():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = rng.uniform(-2, 2, size=5)
        b = rng.uniform(-2, 2, size=5)
        t0 = float(rng.uniform(-1, 1))
        # brute-force oracle: expand the product with numpy, differentiate
        prod = np.polynomial.polynomial.polymul(a, b)
        u = Jet.variable(t0, 8)
        ja = sum(float(c) * u**k for k, c in enumerate(a))
        jb = sum(float(c) * u**k for k, c in enumerate(b))
        jp = ja * jb
        poly = np.polynomial.Polynomial(prod)
        for k in range(9):
            exact = poly.deriv(k)(t0) if k else poly(t0)
            assert jp.deriv(k) == pytest.approx(exact, rel=1e-12, abs=1e-12)


def test_sin_jet_is_maclaurin():
    s = jets.sin(Jet.variable(0.0, 6))
    assert np.allclose(s.d, [0, 1, 0, -1, 0, 1, 0])


def test_atan2_at_unit_x():
    y = Jet.variable(0.0, 6)
    x = Jet.constant(1.0, 0.0, 6)
    a = jets.atan2(y, x)
    assert a.value == 0.0
    assert a.deriv(1) == pytest.approx(1.0, abs=1e-15)


def test_sqrt_jet_against_finite_differences():
    def f(t):
        return math.sqrt(1 + t * t)

    j = jets.sqrt(1 + Jet.variable(1.0, 6) ** 2)
    for k in (1, 2):
        fd = richardson_derivative(f, 1.0, k, h=1e-4)
        assert j.deriv(k) == pytest.approx(fd, rel=1e-6)
    for k in (3, 4):
        assert normalized_error(j.deriv(k), richardson_derivative(f, 1.0, k)) < 1e-5


@pytest.mark.parametrize("name,fn,jfn,lo,hi", [
    ("sin", math.sin, jets.sin, -2.0, 2.0),
    ("cos", math.cos, jets.cos, -2.0, 2.0),
    ("exp", math.exp, jets.exp, -1.0, 1.0),
    ("tan", math.tan, jets.tan, -1.0, 1.0),
    ("atan", math.atan, jets.atan, -2.0, 2.0),
    ("sqrt", math.sqrt, jets.sqrt, 0.3, 3.0),
])
def test_elementary_jets_match_richardson(name, fn, jfn, lo, hi):
    rng = np.random.default_rng(hash(name) % 2**32)
    for _ in range(20):
        t0 = float(rng.uniform(lo, hi))
        j = jfn(Jet.variable(t0, 6))
        for k in range(1, 5):
            fd = richardson_derivative(fn, t0, k)
            assert normalized_error(j.deriv(k), fd) < 1e-5, (name, t0, k)


def test_tensor_assembly_exact():
    u0, v0 = 0.4, -1.2
    fu = jets.sin(Jet.variable(u0, 6))
    gv = Jet.variable(v0, 6) ** 2
    prod = BiJet.from_u_jet(fu, v0, 3) * BiJet.from_v_jet(gv, u0, 3)
    assert prod.part(1, 1) == math.cos(u0) * 2 * v0


def test_bijet_atan2_partials():
    u0, v0 = 1.0, 0.5
    U = BiJet.variable_u(u0, v0, 3)
    V = BiJet.variable_v(u0, v0, 3)
    th = jets.atan2(V, U)
    r2 = u0**2 + v0**2
    assert th.value == math.atan2(v0, u0)
    assert th.grad[0] == pytest.approx(-v0 / r2, rel=1e-14)
    assert th.grad[1] == pytest.approx(u0 / r2, rel=1e-14)
    assert th.part(2, 0) == pytest.approx(2 * u0 * v0 / r2**2, rel=1e-13)
    assert th.part(1, 1) == pytest.approx((v0**2 - u0**2) / r2**2, rel=1e-13)


def test_division_and_vector_helpers():
    u = Jet.variable(0.5, 6)
    a = (jets.sin(u), jets.cos(u), u * u)
    b = (u, 1 - u, jets.exp(u))
    n = jets.norm3(a)
    val = math.sqrt(math.sin(0.5)**2 + math.cos(0.5)**2 + 0.5**4)
    assert n.value == pytest.approx(val, rel=1e-15)
    d = jets.det3(a, b, jets.cross3(a, b))
    cr = jets.cross3(a, b)
    assert d.value == pytest.approx(jets.dot3(cr, cr).value, rel=1e-12)


def test_errors():
    u = Jet.variable(0.0, 6)
    with pytest.raises(DegenerateDivision):
        (1 + u) / u
    with pytest.raises(DomainError):
        jets.sqrt(u - 1)
    with pytest.raises(OriginAtan2):
        jets.atan2(u, u)
    with pytest.raises(ValueError):
        Jet.variable(0.0, 1)


def test_order_closure_is_min():
    a = Jet.variable(0.0, 6)
    b = Jet.variable(0.0, 4)
    assert (a * b).order == 4
    assert (a + b).order == 4


finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(finite, finite, finite, finite)
def test_commutativity_bitwise(x1, x2, y1, y2):
    a = Jet(0.0, np.array([x1, x2, 0.5]))
    b = Jet(0.0, np.array([y1, y2, -0.25]))
    assert np.array_equal((a + b).d, (b + a).d)
    assert np.array_equal((a * b).d, (b * a).d)


@settings(max_examples=60, deadline=None)
@given(finite, finite, finite)
def test_associativity_within_ulps(x, y, z):
    # Reassociation error is bounded by ulps of the intermediate magnitudes,
    # which can exceed ulps of the result when terms cancel.
    a = Jet(0.0, np.array([x, 1.0, 0.0]))
    b = Jet(0.0, np.array([y, -1.0, 2.0]))
    c = Jet(0.0, np.array([z, 0.5, 1.0]))
    mag_a = Jet(0.0, np.abs(a.d))
    mag_b = Jet(0.0, np.abs(b.d))
    mag_c = Jet(0.0, np.abs(c.d))
    eps = np.finfo(float).eps
    s1, s2 = ((a + b) + c).d, (a + (b + c)).d
    s_scale = (mag_a + mag_b + mag_c).d
    assert np.all(np.abs(s1 - s2) <= 2 * eps * s_scale + 1e-300)
    p1, p2 = ((a * b) * c).d, (a * (b * c)).d
    p_scale = ((mag_a * mag_b) * mag_c).d
    assert np.all(np.abs(p1 - p2) <= 4 * eps * p_scale + 1e-300)


def test_bijet_derivative_shift():
    U = BiJet.variable_u(0.3, 0.8, 4)
    V = BiJet.variable_v(0.3, 0.8, 4)
    f = jets.sin(U * V)
    fu = f.du()
    assert fu.value == f.part(1, 0)
    assert fu.part(0, 1) == f.part(1, 1)
    assert fu.degree == 3


def test_jet_immutable():
    j = Jet.variable(0.0, 3)
    with pytest.raises(ValueError):
        j.d[0] = 5.0
