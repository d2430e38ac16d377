"""Coordinate update rules against the geometric lamination oracle, plus
group-relation property tests."""
import random

import pytest
from hypothesis import given, settings, strategies as st

import lamination_oracle as lam
from braidstab.dynnikov import DynnikovState


def oracle_coords(curves, n):
    a, b = lam.coords(curves, n)
    return DynnikovState(a=a, b=b)


def oracle_apply(curves, word, n):
    return lam.apply_word(curves, word, n)


# round curves around punctures j..k (j < k) are embedded laminations
ROUND_CURVES = [(1, 2), (1, 3), (2, 3), (2, 4), (1, 4), (3, 4)]


@pytest.mark.parametrize("jk", ROUND_CURVES)
@pytest.mark.parametrize("gen", [1, -1, 2, -2, 3, -3])
def test_single_generator_matches_oracle_n4(jk, gen):
    n = 4
    curves = [lam.round_curve(*jk)]
    s0 = oracle_coords(curves, n)
    s1 = s0.apply_generator(gen)
    expected = oracle_coords(oracle_apply(curves, [gen], n), n)
    assert s1 == expected


@pytest.mark.parametrize("seed", range(8))
def test_random_words_match_oracle(seed):
    rng = random.Random(seed)
    n = rng.choice([4, 5])
    j = rng.randint(1, n - 1)
    k = rng.randint(j + 1, n)
    curves = [lam.round_curve(j, k)]
    word = [rng.choice([g for i in range(1, n) for g in (i, -i)])
            for _ in range(6)]
    s = oracle_coords(curves, n).apply_word(word)
    expected = oracle_coords(oracle_apply(curves, word, n), n)
    assert s == expected


coord_states = st.integers(min_value=3, max_value=7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.integers(-30, 30), min_size=n - 2, max_size=n - 2),
        st.lists(st.integers(-30, 30), min_size=n - 2, max_size=n - 2)))


@settings(max_examples=200, deadline=None)
@given(coord_states, st.integers(1, 6), st.booleans())
def test_generator_inverse_restores_state(data, gi, pos):
    n, a, b = data
    g = min(gi, n - 1) * (1 if pos else -1)
    s = DynnikovState(a=a, b=b)
    assert s.apply_generator(g).apply_generator(-g) == s


@settings(max_examples=150, deadline=None)
@given(coord_states, st.integers(1, 5))
def test_braid_relation(data, gi):
    n, a, b = data
    if n < 3:
        return
    i = min(gi, n - 2)
    s = DynnikovState(a=a, b=b)
    lhs = s.apply_word([i, i + 1, i])
    rhs = s.apply_word([i + 1, i, i + 1])
    assert lhs == rhs


@settings(max_examples=150, deadline=None)
@given(coord_states, st.integers(1, 6), st.integers(1, 6))
def test_far_commutation(data, gi, gj):
    n, a, b = data
    i = min(gi, n - 1)
    j = min(gj, n - 1)
    if abs(i - j) < 2:
        return
    s = DynnikovState(a=a, b=b)
    assert s.apply_word([i, j]) == s.apply_word([j, i])


def test_reference_state_and_norm():
    s = DynnikovState.reference(5)
    assert s.n == 5
    assert s.norm() == 3


def test_rejects_bad_shapes():
    with pytest.raises(ValueError):
        DynnikovState(a=(1, 2), b=(0,))
    with pytest.raises(ValueError):
        DynnikovState(a=(), b=())
    with pytest.raises(ValueError):
        DynnikovState(a=(1,), b=(0,)).apply_generator(5)


def test_coordinates_are_integers():
    s = DynnikovState(a=[1.0, 2.0], b=[0.0, -1.0])
    assert s.a == (1, 2) and s.b == (0, -1)
