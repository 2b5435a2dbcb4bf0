import math
from itertools import combinations_with_replacement

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab.curves import (
    FIBRE,
    SECTION,
    CurveConfig,
    LatticeClass,
    SeveriQuery,
    enumerate_rational_members,
    intersect,
    polarization_check,
    quartic_severi_numbers,
    severi_numbers,
    unramified_comb,
    very_ample_and_bound,
    yau_zaslow,
)
from k3lab.errors import BadDegree, InvalidGenus, K3LabInputError


def test_intersection_form():
    assert intersect(SECTION, SECTION) == -2
    assert intersect(FIBRE, FIBRE) == 0
    assert intersect(SECTION, FIBRE) == 1


@given(st.integers(1, 40))
def test_polarization_square(g):
    c = LatticeClass(1, g)
    pol = polarization_check(c)
    assert pol.self_intersection == 2 * g - 2
    assert pol.primitive
    assert pol.ample == (g >= 3)


def test_non_primitive_class():
    assert not polarization_check(LatticeClass(2, 6)).primitive
    with pytest.raises(K3LabInputError):
        polarization_check(LatticeClass(-1, 3))


def test_config_validation():
    cfg = CurveConfig(3, (2, 1) + (0,) * 10)
    assert cfg.lattice_class() == LatticeClass(1, 3)
    assert cfg.multiplicities[0] == 2
    with pytest.raises(InvalidGenus):
        CurveConfig(0, (0,) * 12)
    with pytest.raises(K3LabInputError):
        CurveConfig(3, (1, 1) + (0,) * 10)
    with pytest.raises(K3LabInputError):
        CurveConfig(1, (2, -1))
    with pytest.raises(K3LabInputError):
        CurveConfig(1, (1, 0), fibres=("a",))


def test_enumeration_against_brute_force():
    for g, s in [(3, 12), (3, 24), (2, 5), (4, 3)]:
        listed = {cfg.m for cfg in enumerate_rational_members(g, s)}
        brute = set()
        for combo in combinations_with_replacement(range(s), g):
            m = [0] * s
            for i in combo:
                m[i] += 1
            brute.add(tuple(m))
        assert listed == brute


def test_enumeration_is_lexicographic_and_labelled():
    members = list(enumerate_rational_members(2, ["p", "q", "r"]))
    assert [c.m for c in members] == sorted(c.m for c in members)
    assert members[0].fibres == ("p", "q", "r")


@given(st.integers(1, 6), st.integers(1, 24))
def test_count_matches_binomial(g, s):
    members = enumerate_rational_members(g, s)
    assert len(members) == math.comb(g + s - 1, s - 1)


def test_yau_zaslow_against_divisor_recurrence():
    # log of prod (1 - q^n)^-24 has coefficients 24 sigma(k) / k, which gives
    # n c_n = 24 sum_k sigma(k) c_(n - k)
    N = 30
    c = [1]
    for n in range(1, N + 1):
        c.append(24 * sum(int(sp.divisor_sigma(k)) * c[n - k] for k in range(1, n + 1)) // n)
    assert yau_zaslow(N) == c


def test_yau_zaslow_low_terms_by_series():
    q = sp.symbols("q")
    series = sp.series(sp.prod([(1 - q**n) ** -24 for n in range(1, 4)]), q, 0, 4).removeO()
    assert yau_zaslow(3) == [int(series.coeff(q, k)) for k in range(4)]


def test_yau_zaslow_prefix_stability():
    assert yau_zaslow(20)[:11] == yau_zaslow(10)
    with pytest.raises(K3LabInputError):
        yau_zaslow(-1)


def test_severi_numbers():
    q = SeveriQuery(g=5, k=2, h=3)
    assert q.arithmetic_genus == 17
    assert q.self_intersection == 32
    s = severi_numbers(q)
    assert (s.dimension, s.node_count) == (3, 14)
    with pytest.raises(InvalidGenus):
        severi_numbers(SeveriQuery(3, 1, 4))


@given(st.integers(3, 60), st.integers(1, 4))
def test_very_ample_bound(g, k):
    b = very_ample_and_bound(g, k)
    assert b.h_min_irreducible == math.ceil((k * (6 * k - 1) * (g - 1) + 4) / 6)
    if k == 1:
        assert b.h_min_irreducible == math.ceil((5 * g - 1) / 6)


def test_very_ample_rejects_small_genus():
    with pytest.raises(InvalidGenus):
        very_ample_and_bound(2)


def test_quartic_constants():
    a, b = quartic_severi_numbers(1), quartic_severi_numbers(2)
    assert (a.dim_W_S, a.kernel_dim, a.fibre_dim) == (11, 21, 31)
    assert (b.dim_W_S, b.kernel_dim, b.fibre_dim) == (15, 11, 25)
    with pytest.raises(BadDegree):
        quartic_severi_numbers(3)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=24).filter(lambda m: sum(m) > 0))
def test_comb_is_a_tree(m):
    cfg = CurveConfig(sum(m), tuple(m))
    comb = unramified_comb(cfg)
    assert comb.is_tree
    assert comb.arithmetic_genus == 0
    assert comb.graph.number_of_nodes() == 1 + sum(m)
    chains = comb.chains
    assert {j: len(v) for j, v in chains.items()} == {j: k for j, k in enumerate(m) if k}
