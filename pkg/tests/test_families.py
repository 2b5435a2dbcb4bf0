import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ_I

from k3lab.errors import DuplicatePoints, ZeroK
from k3lab.families import (
    FamilyParams,
    cube_root_K2,
    cuspidal_family,
    min_separation,
    nodal_family,
    roots_of_unity,
    validate_family,
)
from k3lab.forms import BinaryForm, to_complex
from k3lab.kodaira import fibre_report

ALPHA = roots_of_unity()


def test_roots_of_unity_order_and_exactness():
    z = [to_complex(a) for a in ALPHA]
    assert all(abs(w - cmath.exp(1j * math.pi * (k + 1) / 6)) < 1e-15 for k, w in enumerate(z))
    assert ALPHA[2] == QQ_I(0, 1) and ALPHA[11] == QQ_I(1)


def test_cuspidal_family_forms():
    a = [Fraction(k, 2) for k in range(12)]
    W = cuspidal_family(a)
    assert W.exact and W.A.is_zero
    assert W.B == BinaryForm.from_roots(a)
    rep = fibre_report(W)
    assert [str(f.type) for f in rep.fibres] == ["II"] * 12


def test_nodal_delta_identity():
    a = [Fraction(k - 6, 3) for k in range(12)]
    K = Fraction(1, 4)
    W = nodal_family(a, K)
    assert W.exact
    alpha = BinaryForm.from_roots(a)
    x1_12 = BinaryForm.monomial(12, 12, 1)
    assert W.delta == -432 * alpha * (alpha + 2 * K * x1_12)


@settings(max_examples=40)
@given(st.floats(0.05, 0.45), st.floats(0, 2 * math.pi))
def test_nodal_family_has_24_nodes(r, theta):
    K = r * cmath.exp(1j * theta)
    W = nodal_family(ALPHA, K)
    check = validate_family(W)
    assert check.pattern == "nodal24" and check.smooth
    beta = np.polynomial.polynomial.polyfromroots([to_complex(a) for a in ALPHA])[::-1]
    beta[-1] += 2 * K
    expected = -432 * np.convolve(np.polynomial.polynomial.polyfromroots([to_complex(a) for a in ALPHA])[::-1], beta)
    assert np.abs(W.delta.array - expected).max() < 1e-10 * np.abs(expected).max()


def test_cuspidal_validation():
    assert validate_family(cuspidal_family(ALPHA)).pattern == "cuspidal12"


def test_collision_at_half():
    # K = 1/2 makes alpha + 2K x1^12 = x0^12, a 12-fold root at 0
    W = nodal_family(ALPHA, Fraction(1, 2))
    assert validate_family(W).pattern == "collision"


def test_cube_root_branch():
    for K in (0.25, -0.25, 0.3j, -0.1 - 0.2j):
        c = cube_root_K2(K)
        assert abs(c**3 - K**2) < 1e-14
        assert abs(abs(c) - abs(K) ** (2 / 3)) < 1e-14
        theta = cmath.phase(K) % (2 * math.pi)
        assert abs(cmath.phase(c) - cmath.phase(cmath.exp(2j * theta / 3))) < 1e-12
    assert cube_root_K2(Fraction(1, 8)) == QQ_I(Fraction(1, 4))


def test_exact_A_coefficient_when_possible():
    # 27/4 K^2 = (3/4)^3 at K = 1/4, so the x1^8 coefficient is -3/4
    W = nodal_family(range(12), Fraction(1, 4))
    assert W.exact
    assert W.A.coeffs[8] == QQ_I(Fraction(-3, 4))
    assert not nodal_family(range(12), Fraction(2, 3)).exact


def test_duplicate_points_rejected():
    with pytest.raises(DuplicatePoints):
        cuspidal_family([0] * 2 + list(range(1, 11)))
    with pytest.raises(DuplicatePoints):
        cuspidal_family([0.0, 1e-12] + [float(k) for k in range(1, 11)])
    with pytest.raises(DuplicatePoints):
        FamilyParams(tuple(range(11)))


def test_zero_K_rejected():
    with pytest.raises(ZeroK):
        nodal_family(ALPHA, 0)


def test_family_params():
    p = FamilyParams(ALPHA, 0.25)
    assert not p.is_cuspidal
    assert fibre_report(p.weierstrass()).count("I1") == 24
    assert FamilyParams(ALPHA).is_cuspidal
    assert abs(min_separation(ALPHA) - abs(1 - cmath.exp(1j * math.pi / 6))) < 1e-15
