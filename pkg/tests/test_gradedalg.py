from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from homalg.exactla import GF, ZZ
from homalg.gradedalg import (PowerSeries, cartan_expected_dims, cartan_verify, graded_basis,
                              hilbert_series, shuffle_multiply, shuffle_product, symm_shuffle_iso)


def test_hilbert_series_examples():
    assert hilbert_series("exterior", 2, 4).coeffs == [1, 2, 1, 0, 0]
    assert hilbert_series("symmetric", 2, 4).coeffs == [1, 2, 3, 4, 5]
    assert hilbert_series("shuffle", 3, 3).coeffs == [1, 3, 6, 10]
    assert hilbert_series("tensor", 2, 3).coeffs == [1, 2, 4, 8]
    assert hilbert_series("symmetric", 1, 4, generator_degree=2).coeffs == [1, 0, 1, 0, 1]


@given(st.integers(1, 4), st.integers(0, 5))
def test_basis_counts(d, k):
    assert len(graded_basis("exterior", d, k)) == comb(d, k)
    assert len(graded_basis("symmetric", d, k)) == comb(d + k - 1, k)
    assert len(graded_basis("shuffle", d, k)) == len(graded_basis("symmetric", d, k))


def test_unknown_kind():
    with pytest.raises(ValueError):
        graded_basis("lie", 2, 2)


def test_shuffle_examples():
    assert shuffle_product((1,), (2,)) == {(1, 2): 1}
    assert shuffle_product((1,), (1,)) == {(1, 1): 2}
    assert shuffle_product((1,), (1,), GF(2)) == {}
    assert shuffle_product((), (1, 2)) == {(1, 2): 1}
    assert shuffle_product((1, 1), (1,)) == {(1, 1, 1): 3}


words = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(lambda w: tuple(sorted(w)))


@given(words, words, words)
@settings(max_examples=60, deadline=None)
def test_shuffle_associative_commutative(u, v, w):
    x, y, z = {u: 1}, {v: 1}, {w: 1}
    assert shuffle_multiply(x, y) == shuffle_multiply(y, x)
    assert shuffle_multiply(shuffle_multiply(x, y), z) == shuffle_multiply(x, shuffle_multiply(y, z))


def test_symm_shuffle_iso():
    assert len(symm_shuffle_iso(1, 3)) == 1
    assert len(symm_shuffle_iso(2, 2)) == 3
    assert symm_shuffle_iso(3, 0) == [((), ())]


def test_power_series():
    f = PowerSeries([1, -1], 6)
    assert f.inverse().coeffs == [1] * 7
    assert (f * f.inverse()).coeffs == [1, 0, 0, 0, 0, 0, 0]
    assert (PowerSeries([1, 1], 4) ** 3).coeffs == [1, 3, 3, 1, 0]


@pytest.mark.parametrize("p, d, N, expected", [
    (3, 1, 4, [1, 1, 1, 1, 1]),
    (2, 2, 4, [1, 2, 3, 4, 5]),
    ("Q", 3, 4, [1, 3, 3, 1, 0]),
    (5, 2, 3, [1, 2, 3, 4]),
])
def test_cartan_expected(p, d, N, expected):
    assert cartan_expected_dims(p, d, N).coeffs == expected


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.integers(0, 6))
def test_cartan_series_is_one_over_one_minus_t_power(p, d, N):
    # for every prime the Cartan series equals 1/(1-t)^d
    assert cartan_expected_dims(p, d, N).coeffs == [comb(d + k - 1, k) for k in range(N + 1)]


@pytest.mark.parametrize("p, d, N", [(2, 1, 4), (3, 1, 4), (2, 2, 4)])
def test_cartan_verify(p, d, N):
    rows = cartan_verify(p, d, N)
    assert all(r.passed for r in rows)
