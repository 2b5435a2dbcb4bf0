from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3lab.errors import DegenerateK, K3LabInputError
from k3lab.modulipath import (
    ALPHA,
    _transpositions,
    connect_to_canonical,
    cusp_limit_path,
    moving_fibre_separation,
    node_transfer_path,
    parse_cycles,
    permutation_path,
    track_beta,
    verify_path,
)

M3 = (2, 1) + (0,) * 10


def positions(sample):
    return np.array([f.pos for f in sample.fibres])


# -- permutations ---------------------------------------------------------


def test_parse_cycles():
    perm = parse_cycles("(1 2)(3 4 5)")
    assert perm[:5] == [1, 0, 3, 4, 2]
    assert perm[5:] == list(range(5, 12))
    assert parse_cycles("id") == list(range(12))
    assert parse_cycles("(1,12)")[11] == 0


@pytest.mark.parametrize("text", ["(1 13)", "(1 2)(2 3)", "(0 1)", "(1 1)"])
def test_parse_cycles_rejects(text):
    with pytest.raises(K3LabInputError):
        parse_cycles(text)


@given(st.permutations(list(range(12))))
def test_transpositions_realize_permutation(perm):
    slot_of = list(range(12))  # slot_of[point]
    for p, q in _transpositions(perm):
        assert abs(slot_of[p] - slot_of[q]) == 1
        slot_of[p], slot_of[q] = slot_of[q], slot_of[p]
    assert slot_of == list(perm)


def test_identity_permutation_is_trivial():
    rep = verify_path(permutation_path(ALPHA, "id", M3, steps=16), 3)
    assert rep.ok
    assert np.allclose(positions(rep.first), positions(rep.last))


def test_transposition_moves_multiplicity():
    rep = verify_path(permutation_path(ALPHA, "(1 2)", M3, steps=64), 3)
    assert rep.ok and rep.continuous
    assert rep.last.multiplicity_at(ALPHA[0]) == 1
    assert rep.last.multiplicity_at(ALPHA[1]) == 2
    assert max(rep.endpoint_residuals.values()) < 1e-8


def test_permutation_then_inverse_returns():
    sigma = "(1 2 3)"
    r1 = permutation_path(ALPHA, sigma, M3, steps=64)
    inverse = [0] * 12
    for i, j in enumerate(parse_cycles(sigma)):
        inverse[j] = i
    r2 = permutation_path(r1.last.params.a, inverse, r1.last.m[:12], steps=64)
    assert np.allclose(r2.last.params.a, ALPHA, atol=1e-12)
    assert r2.last.m[:12] == M3


# -- beta tracking --------------------------------------------------------


@settings(max_examples=40)
@given(st.floats(0.02, 0.45), st.floats(-0.2, 0.2), st.integers(8, 64))
def test_track_beta_stays_on_branch(r, wobble, n):
    # any path in the punctured disc avoiding K = 1/2
    ts = np.linspace(0, 1, n + 1)
    Ks = [r * (1 - t) + 0.01 + 1j * wobble * np.sin(np.pi * t) for t in ts]
    seed = (1 - 2 * Ks[0]) ** (1 / 12)
    betas = track_beta(Ks, seed)
    assert len(betas) == len(Ks)
    for b, K in zip(betas, Ks):
        assert abs(b**12 - (1 - 2 * K)) < 1e-10
    steps = np.abs(np.diff(betas))
    assert steps.max() < 0.2


def test_track_beta_rejects_half():
    with pytest.raises(DegenerateK):
        track_beta([0.25, 0.5], 0.5 ** (1 / 12))


def test_track_beta_reaches_one():
    Ks = np.linspace(0.25, 0, 65)
    assert abs(track_beta(list(Ks), 0.5 ** (1 / 12))[-1] - 1) < 1e-8


# -- cusps and node transfer ----------------------------------------------


def test_cusp_limit():
    rep = verify_path(cusp_limit_path(ALPHA, M3, steps=64), 3)
    assert rep.ok
    assert not rep.first.degenerate and rep.last.degenerate
    assert len(rep.last.fibres) == 12
    assert tuple(rep.last.multiplicity_at(a) for a in ALPHA) == M3
    assert max(rep.endpoint_residuals.values()) < 1e-8


def test_node_transfer_moves_one_unit():
    rep = verify_path(node_transfer_path(M3, 0.25, steps=128), 3)
    assert rep.ok
    beta = 0.5 ** (1 / 12)
    assert rep.first.multiplicity_at(beta * ALPHA[0]) == 1
    assert rep.last.multiplicity_at(beta * ALPHA[1]) == 1
    assert rep.last.multiplicity_at(ALPHA[0]) == 2
    assert moving_fibre_separation(rep) > (1 - beta) / 2


def test_node_transfer_argument_checks():
    with pytest.raises(K3LabInputError):
        node_transfer_path((3,) + (0,) * 11)
    with pytest.raises(K3LabInputError):
        node_transfer_path(M3, K=0.6)


# -- verification ---------------------------------------------------------


def test_deleted_samples_break_continuity():
    rep = verify_path(node_transfer_path(M3, 0.25, steps=256), 3)
    assert rep.continuous
    samples = rep.samples
    holes = replace(rep, samples=samples[:3] + samples[60:])
    assert not verify_path(holes, 3).continuous


def test_corrupted_multiplicity_is_an_invariant_violation():
    rep = node_transfer_path(M3, 0.25, steps=32)
    bad = rep.samples[5]
    m = list(bad.m)
    m[0] += 1
    broken = replace(rep, samples=rep.samples[:5] + (replace(bad, m=tuple(m)),) + rep.samples[6:])
    checked = verify_path(broken, 3)
    assert checked.invariant_violations
    assert not checked.ok


def test_connect_already_canonical():
    rep = connect_to_canonical((3,) + (0,) * 11, steps=32)
    assert rep.ok
    assert tuple(rep.last.multiplicity_at(a) for a in ALPHA) == (3,) + (0,) * 11


def test_connect_small_case():
    rep = verify_path(connect_to_canonical((0, 1, 1) + (0,) * 9, steps=64), 2)
    assert rep.ok and rep.continuous and not rep.invariant_violations
    assert tuple(rep.last.multiplicity_at(a) for a in ALPHA) == (2,) + (0,) * 11
