import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvif.acceptance import random_triple
from pvif.monodromy import (MonodromyError, MonodromyTriple, StokesMatrix, apply_braid, braid_on_stokes,
                            cp_d_stokes, parse_braid, quadratic_form, sign_conjugate, sign_distance,
                            sign_equivalent, stokes_orbit_contains)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
words = st.lists(st.sampled_from(["b1", "b2", "B1", "B2"]), min_size=1, max_size=6)


@given(fractions, fractions, fractions)
def test_braid_relation_is_exact(a, b, c):
    t = MonodromyTriple(a, b, c, Fraction(1, 3))
    assert apply_braid(t, "b1 b2 b1").entries == apply_braid(t, "b2 b1 b2").entries


@given(fractions, fractions, fractions, words)
def test_quadratic_form_is_braid_invariant(a, b, c, word):
    t = MonodromyTriple(a, b, c, Fraction(1, 4))
    assert quadratic_form(apply_braid(t, word)) == quadratic_form(t)


@given(fractions, fractions, fractions, words)
def test_inverse_word_undoes_word(a, b, c, word):
    t = MonodromyTriple(a, b, c, Fraction(1, 4))
    inverse = [w.swapcase() for w in reversed(word)]
    assert apply_braid(apply_braid(t, word), inverse).entries == t.entries


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), words)
def test_stokes_braids_match_triple_braids(seed, word):
    rng = np.random.default_rng(seed)
    t = random_triple(rng, 0.3)
    S = StokesMatrix.from_triple_braid_frame(t)
    for g in word:
        S = braid_on_stokes(S, int(g[1]), inverse=g[0] == "B")
    got = S.to_triple_braid_frame(t.mu)
    want = apply_braid(t, word)
    scale = max(1.0, max(abs(v) for v in want.entries))
    assert max(abs(u - v) for u, v in zip(got.entries, want.entries)) <= 1e-9 * scale


def test_display_frame_round_trip():
    t = MonodromyTriple(1, 2, 3, 0.2)
    S = StokesMatrix.from_triple(t)
    assert S.upper() == [3, 1, 2]
    assert S.to_triple(0.2).entries == t.entries


def test_sign_equivalence():
    t = MonodromyTriple(1, 2, 3, 0.2)
    assert sign_equivalent(t, MonodromyTriple(-1, -2, 3, 0.2))
    assert not sign_equivalent(t, MonodromyTriple(-1, 2, 3, 0.2))
    assert sign_distance(t, t) == 0


def test_make_checks_the_quadric():
    with pytest.raises(MonodromyError):
        MonodromyTriple.make(1, 1, 1, 0.3)
    t = MonodromyTriple.make(0, 1, 1, 0.25)
    assert quadratic_form(t) == pytest.approx(4 * cmath.sin(cmath.pi / 4) ** 2)


def test_zero_mu_rejected():
    with pytest.raises(MonodromyError):
        MonodromyTriple.make(0, 0, 0, 0)


def test_unknown_generator():
    with pytest.raises(MonodromyError):
        parse_braid("b1 b3")


def test_admissibility():
    assert not MonodromyTriple(0, 0, 1, 0.5).admissible()
    assert MonodromyTriple(0, 1, 1, 0.25).admissible()


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_cp_d_stokes_entries(d):
    S = cp_d_stokes(d)
    from math import comb
    for i in range(d + 1):
        for j in range(i + 1, d + 1):
            assert S.matrix[i, j] == (-1) ** (j - i) * comb(d + 1, j - i)


def test_cp2_matrix_and_orbit():
    S = cp_d_stokes(2)
    assert [complex(v) for v in S.upper()] == [-3, 3, -3]
    word = stokes_orbit_contains(S, (3, 3, 3))
    assert word is not None
    M = S
    for g in word[:-1]:
        M = braid_on_stokes(M, int(g[1]), inverse=g[0] == "B")
    signs = [1 if ch == "+" else -1 for ch in word[-1][1:]]
    assert np.allclose(sign_conjugate(M, signs).upper(), [3, 3, 3])


def test_stokes_matrix_validation():
    with pytest.raises(MonodromyError):
        StokesMatrix(np.array([[1, 0], [1, 1]]))
    with pytest.raises(MonodromyError):
        braid_on_stokes(cp_d_stokes(2), 3)


def test_json_round_trip():
    t = MonodromyTriple.make(0, 1, 1, 0.25)
    assert MonodromyTriple.from_json(t.to_json()) == t
