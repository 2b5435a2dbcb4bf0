import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.domains import QQ_I

from k3lab.errors import NoConvergence, ZeroForm
from k3lab.forms import (
    INF,
    BinaryForm,
    ProjPoint,
    backward_error,
    deflate,
    evaluate,
    exact_squarefree,
    multiple_root_backward_error,
    roots_with_multiplicity,
    vanishing_order,
)

small_ints = st.integers(-20, 20)
complexes = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


def exact_forms(min_deg=0, max_deg=8):
    return st.lists(small_ints, min_size=min_deg + 1, max_size=max_deg + 1).map(BinaryForm)


# -- points ---------------------------------------------------------------


def test_point_normalization_keeps_larger_coordinate_one():
    p = ProjPoint(4, 2)
    assert p.exact and p.p0 == QQ_I(1) and p.p1 == QQ_I(Fraction(1, 2))
    q = ProjPoint(2.0, 4.0)
    assert q.p1 == 1 and q.p0 == 0.5


def test_zero_point_rejected():
    with pytest.raises(ValueError):
        ProjPoint(0, 0)
    with pytest.raises(ValueError):
        ProjPoint(0.0, 0.0)


def test_infinity():
    inf = ProjPoint.infinity()
    assert inf.is_infinity
    assert inf.value.real == math.inf
    assert not ProjPoint.affine(3).is_infinity


@given(complexes, complexes.filter(lambda z: abs(z) > 1e-3))
def test_scaled_coordinates_give_same_point(z, lam):
    p = ProjPoint(z, 1)
    q = ProjPoint(lam * z, lam)
    assert p.distance(q) < 1e-12


# -- evaluation -----------------------------------------------------------


def test_evaluate_examples():
    f = BinaryForm([1, 3, 0])  # x0^2 + 3 x0 x1
    assert evaluate(f, (2, 1)) == QQ_I(10)
    assert evaluate(f, ProjPoint(2, 1)) == QQ_I(Fraction(5, 2))  # at [1 : 1/2]
    g = BinaryForm([1] + [0] * 11 + [-1])
    assert not evaluate(g, ProjPoint(1, 1))
    assert not evaluate(BinaryForm([0] * 8 + [1]), ProjPoint.infinity())


@given(st.lists(complexes, min_size=2, max_size=10), complexes, complexes.filter(lambda z: abs(z) > 0.1))
def test_homogeneity(coeffs, z, lam):
    # f(lam x) = lam^d f(x), checked on raw (unnormalized) coordinates
    f = BinaryForm(coeffs, exact=False)
    d = f.degree
    raw = lambda x0, x1: sum(c * x0 ** (d - i) * x1**i for i, c in enumerate(f.coeffs))
    lhs, rhs = raw(lam * z, lam), lam**d * raw(z, 1)
    scale = sum(abs(c) for c in coeffs) * (1 + abs(lam) * (1 + abs(z))) ** d
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, scale)
    assert abs(evaluate(f, (lam * z, lam)) - lam**d * evaluate(f, (z, 1))) <= 1e-12 * max(1.0, scale)


# -- arithmetic -----------------------------------------------------------


def test_product_of_linear_factors():
    f = BinaryForm.from_roots([1, -1, 2])
    assert f.exact
    assert f.coeffs == tuple(QQ_I(c) for c in (1, -2, -1, 2))


def test_difference_of_squares():
    a, b = BinaryForm([1, -1]), BinaryForm([1, 1])
    assert a * b == BinaryForm([1, 0, -1])


def test_zero_product():
    f = BinaryForm([1, 2, 3]) * BinaryForm.zero(4)
    assert f.is_zero and f.degree == 6


def test_mixed_arithmetic_goes_inexact():
    f = BinaryForm([1, 2]) + BinaryForm([0.5, 1.0])
    assert not f.exact
    assert f.coeffs == (1.5 + 0j, 3 + 0j)


@given(exact_forms(0, 5), exact_forms(0, 5), st.integers(-3, 3), st.integers(1, 3))
def test_product_evaluates_pointwise(f, g, a, b):
    p = ProjPoint(a, b)
    assert evaluate(f * g, p) == evaluate(f, p) * evaluate(g, p)


@given(exact_forms(1, 5), exact_forms(1, 5), st.sampled_from([(0, 1), (1, 0), (1, 1), (2, -1)]))
def test_orders_add_under_products(f, g, pt):
    if f.is_zero or g.is_zero:
        return
    p = ProjPoint(*pt)
    assert vanishing_order(f * g, p) == vanishing_order(f, p) + vanishing_order(g, p)


# -- vanishing orders -----------------------------------------------------


def test_vanishing_order_examples():
    assert vanishing_order(BinaryForm([0] * 8 + [1]), ProjPoint.infinity()) == 8
    f = BinaryForm([1, -1]) ** 2 * BinaryForm([0, 1]) ** 22
    assert vanishing_order(f, ProjPoint(1, 1)) == 2
    assert vanishing_order(f, ProjPoint.infinity()) == 22
    assert vanishing_order(f, ProjPoint(0, 1)) == 0
    assert vanishing_order(BinaryForm.zero(5), ProjPoint(1, 1)) == INF


def test_vanishing_order_inexact_matches_exact():
    f = BinaryForm([1, -1]) ** 3 * BinaryForm([1, 2, 5])
    g = f.to_inexact()
    p = ProjPoint(1.0, 1.0)
    assert vanishing_order(g, p) == vanishing_order(f, ProjPoint(1, 1)) == 3


# -- roots ----------------------------------------------------------------


def test_twelfth_roots_of_unity():
    f = BinaryForm([1] + [0] * 11 + [-1])
    roots = roots_with_multiplicity(f)
    assert [m for _, m in roots] == [1] * 12
    want = [cmath.exp(2j * math.pi * k / 12) for k in range(12)]
    for z in want:
        assert min(abs(p.value - z) for p, _ in roots) < 1e-12


def test_root_at_infinity_counted_from_leading_zeros():
    roots = roots_with_multiplicity(BinaryForm([0] * 24 + [1]))
    assert len(roots) == 1
    p, m = roots[0]
    assert p.is_infinity and m == 24


def test_double_roots_of_cusp_discriminant():
    alpha = BinaryForm([1] + [0] * 11 + [-1])
    roots = roots_with_multiplicity((alpha**2).to_inexact())
    assert [m for _, m in roots] == [2] * 12


def test_zero_form_has_no_roots():
    with pytest.raises(ZeroForm):
        roots_with_multiplicity(BinaryForm.zero(3))


def test_no_convergence_is_reported():
    rng = np.random.default_rng(3)
    f = BinaryForm(tuple(rng.normal(size=25) + 1j * rng.normal(size=25)), exact=False)
    with pytest.raises(NoConvergence):
        roots_with_multiplicity(f, max_iter=1)


# moduli below ~1e-150 underflow when the form is evaluated in double precision
root_values = st.one_of(st.just(0j), st.complex_numbers(min_magnitude=1e-8, max_magnitude=3.0))


@given(st.lists(root_values, min_size=1, max_size=24))
def test_multiplicities_sum_to_degree(zs):
    f = BinaryForm.from_roots(zs)
    roots = roots_with_multiplicity(f)
    assert sum(m for _, m in roots) == f.degree
    for p, k in roots:
        err = backward_error(f, p) if k == 1 else multiple_root_backward_error(f, p, k)
        assert err < 1e-8


def test_deflate_removes_factor():
    f = BinaryForm.from_roots([0.5, 0.5, 2.0, -1.0 + 1j])
    q = deflate(f, ProjPoint(0.5, 1), 2)
    assert q.degree == 2
    roots = sorted((p.value for p, _ in roots_with_multiplicity(q)), key=lambda z: z.real)
    assert abs(roots[0] - (-1 + 1j)) < 1e-10 and abs(roots[1] - 2) < 1e-10


def test_exact_squarefree():
    f = BinaryForm([1, -1]) ** 3 * BinaryForm([1, 1]) * BinaryForm([0, 1]) ** 2
    lead_zeros, parts = exact_squarefree(f)
    mults = sorted(k for _, k in parts)
    assert lead_zeros == 2  # x1^2 vanishes at [1:0]
    assert mults == [1, 3]
