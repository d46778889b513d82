from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtflow.combinat import (
    ShiftedTableau,
    binomial,
    count_N,
    count_ssyt,
    dominance_geq,
    enumerate_compositions,
    enumerate_shsyt,
    enumerate_shsyt_corner_oracle,
    enumerate_ssyt,
    multiset_binomial,
)


def test_dominance_examples():
    assert dominance_geq((2, 0, 1), (1, 1, 1))
    assert not dominance_geq((0, 2), (1, 1))
    assert dominance_geq((1, 1, 1), (1, 1, 1))


def test_dominance_length_mismatch():
    with pytest.raises(ValueError):
        dominance_geq((1, 2), (1, 2, 3))


def test_enumerate_compositions_examples():
    assert enumerate_compositions(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert enumerate_compositions(1, 2, at_least=(1, 0)) == [(1, 0)]
    assert enumerate_compositions(0, 3) == [(0, 0, 0)]


def brute_compositions(total, parts, at_least):
    out = []

    def rec(prefix, left):
        if len(prefix) == parts:
            if left == 0 and dominance_geq(prefix, at_least):
                out.append(tuple(prefix))
            return
        for v in range(left, -1, -1):
            rec(prefix + [v], left - v)

    rec([], total)
    return out


@given(
    st.integers(min_value=0, max_value=6),
    st.integers(min_value=1, max_value=4),
    st.data(),
)
@settings(deadline=None, max_examples=60)
def test_enumerate_compositions_matches_filtered_generation(total, parts, data):
    at_least = tuple(
        data.draw(st.integers(min_value=0, max_value=2)) for _ in range(parts)
    )
    got = enumerate_compositions(total, parts, at_least=at_least)
    assert got == brute_compositions(total, parts, at_least)
    assert len(set(got)) == len(got)


def test_binomial_polynomial_convention():
    assert binomial(3, 2) == 3
    assert binomial(3, 5) == 0
    assert binomial(-1, 2) == 1
    assert binomial(-2, 3) == -4
    assert binomial(5, 0) == 1
    assert binomial(5, -1) == 0


def test_multiset_binomial_examples():
    assert multiset_binomial(2, 2) == 3
    assert multiset_binomial(1, 5) == 1
    assert multiset_binomial(0, 0) == 1
    # polynomial in n for negative arguments: <-1 over k> = binom(k-2, k)
    assert multiset_binomial(-1, 1) == -1
    assert multiset_binomial(-2, 2) == 1


def test_enumerate_shsyt_small():
    assert len(enumerate_shsyt(1)) == 1
    two = enumerate_shsyt(2)
    assert len(two) == 1
    assert all(t.entry(1, 1) == 1 for t in two)
    assert len(enumerate_shsyt(3)) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumerate_shsyt_against_corner_oracle(n):
    assert len(enumerate_shsyt(n)) == enumerate_shsyt_corner_oracle(n)


def test_shifted_tableau_invariants_rejected():
    with pytest.raises(ValueError):
        ShiftedTableau(((2, 1), (3,)))
    with pytest.raises(ValueError):
        ShiftedTableau(((1, 3), (2,)))


def test_count_N_small():
    # side 2: the unique tableau has diagonal (1, 3)
    assert count_N(2, (0,)) == 0
    assert count_N(2, (1,)) == 1
    assert count_N(2, (5,)) == 0
    # side 3: diagonals (1,4,6) and (1,3,6)
    assert count_N(3, (2, 1)) == 1
    assert count_N(3, (1, 2)) == 1
    assert count_N(3, (1, 1)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_count_N_sums_to_total(n):
    total = 0
    bound = n * (n + 1) // 2
    for t in enumerate_shsyt(n):
        total += 1
    summed = sum(
        count_N(n, b)
        for b in enumerate_compositions(bound - n, n - 1)
    )
    assert summed == total


def test_count_ssyt_examples():
    assert count_ssyt((1,), 3) == 3
    assert count_ssyt((2, 1), 3) == 8
    assert count_ssyt((), 5) == 1


def test_enumerate_ssyt_validates():
    for t in enumerate_ssyt((2, 1), 3):
        pass  # construction runs the invariant checks


@given(
    st.fractions(max_denominator=50),
    st.fractions(max_denominator=50),
    st.fractions(max_denominator=50),
)
@settings(deadline=None, max_examples=50)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * (1 / a) == 1


def test_rational_canonical_form():
    f = Fraction(6, -4)
    assert f.denominator > 0
    assert (f.numerator, f.denominator) == (-3, 2)
