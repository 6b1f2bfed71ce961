import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthbound import _kernels as K
from growthbound.checker import ends_with_forbidden_power, has_period, is_allowed
from growthbound.exponent import forbidden_length_table, parse_exponent
from oracles import is_forbidden_power, naive_allowed

E = parse_exponent


@pytest.mark.parametrize("w, p, expected", [("0101", 2, True), ("0101", 3, False), ("000", 1, True), ("0110", 4, True)])
def test_has_period(w, p, expected):
    assert has_period([int(c) for c in w], p) is expected


@pytest.mark.parametrize("p", [0, 5])
def test_has_period_range(p):
    with pytest.raises(ValueError):
        has_period([0, 1, 0, 1], p)


def word(s):
    return [int(c) for c in s]


def test_ends_with_forbidden_power_examples(kernel_backend):
    # 011011 is (011)^2 but also ends with the period-1 square 11
    assert ends_with_forbidden_power(word("011011"), E("2"), 3) == 1
    assert ends_with_forbidden_power(word("2012012"), E("2"), 3) == 3
    assert ends_with_forbidden_power(word("2012012"), E("2"), 2) is None
    assert ends_with_forbidden_power(word("00"), E("2+"), 1) is None
    assert ends_with_forbidden_power(word("000"), E("2+"), 1) == 1
    assert ends_with_forbidden_power(word("101101"), E("2"), 2) is None
    assert ends_with_forbidden_power(word("101101"), E("2"), 3) == 3
    assert ends_with_forbidden_power([], E("2"), 3) is None


def test_is_allowed_examples(kernel_backend):
    assert not is_allowed(word("010010"), E("2"))
    assert is_allowed(word("0102010"), E("2"))
    assert not is_allowed(word("000"), E("3"), 1)
    assert is_allowed(word("00"), E("3"), 1)
    assert is_allowed(word("0101"), E("2"), 1)
    assert not is_allowed(word("0101"), E("2"), 2)


ORACLE_EXPS = ["2", "2+", "7/3", "7/3+", "3", "3+", "3/2+"]


@pytest.mark.parametrize("e", ORACLE_EXPS)
@pytest.mark.parametrize("k, n_max", [(2, 10), (3, 7)])
def test_is_allowed_matches_factor_scan(e, k, n_max):
    ex = E(e)
    for m in (1, 2, 3, None):
        for n in range(n_max + 1):
            for w in itertools.product(range(k), repeat=n):
                assert is_allowed(w, ex, m) == naive_allowed(w, ex.value, ex.strict, m), (w, m)


def _all_words(k, n):
    if n == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    grids = np.indices((k,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids.astype(np.uint8))


def _allowed_mask(words, e, m):
    """Vectorized prefix scan: no prefix ends with a forbidden power."""
    n = words.shape[1]
    flen = np.array(forbidden_length_table(e, max(m, 1)), dtype=np.int64)
    ok = np.ones(words.shape[0], dtype=bool)
    for length in range(1, n + 1):
        ok &= ~K._forbidden_suffix_rows(words[:, :length], flen, min(m, length))
    return ok


@pytest.mark.parametrize("e", ["2", "2+", "7/3", "3", "3+"])
@pytest.mark.parametrize("k, n_max", [(2, 12), (3, 12)])
def test_allowed_sets_shrink_with_cap(e, k, n_max):
    ex = E(e)
    words = _all_words(k, n_max)
    prev = _allowed_mask(words, ex, 1)
    for m in range(2, 7):
        cur = _allowed_mask(words, ex, m)
        assert not (cur & ~prev).any()
        prev = cur


@pytest.mark.parametrize("e", ["2", "7/3+", "3"])
def test_suffix_scan_completeness_exhaustive(e):
    # w.c has a forbidden factor iff w does or w.c ends with one
    ex = E(e)
    for k, n_max in ((2, 12), (3, 7)):
        for m in (1, 2, 4):
            for n in range(n_max + 1):
                for w in itertools.product(range(k), repeat=n):
                    bad_w = not naive_allowed(w, ex.value, ex.strict, m) if n <= 8 else not is_allowed(w, ex, m)
                    for c in range(k):
                        wc = w + (c,)
                        lhs = not is_allowed(wc, ex, m)
                        rhs = bad_w or ends_with_forbidden_power(wc, ex, m) is not None
                        assert lhs == rhs


words3 = st.lists(st.integers(0, 2), min_size=1, max_size=40)


@given(words3, st.sampled_from(ORACLE_EXPS), st.integers(1, 8))
@settings(max_examples=300, deadline=None)
def test_suffix_scan_soundness(w, e, m):
    ex = E(e)
    p = ends_with_forbidden_power(w, ex, m)
    if p is not None:
        n = forbidden_length_table(ex, p)[p]
        assert p <= m
        assert is_forbidden_power(w[-n:], ex.value, ex.strict, p)
        # minimality of the reported period
        for q in range(1, p):
            nq = forbidden_length_table(ex, q)[q]
            assert not (nq <= len(w) and has_period(w[-nq:], q))


@given(words3, st.permutations([0, 1, 2]), st.sampled_from(ORACLE_EXPS), st.one_of(st.none(), st.integers(1, 6)))
@settings(max_examples=300, deadline=None)
def test_renaming_invariance(w, sigma, e, m):
    renamed = [sigma[c] for c in w]
    assert is_allowed(w, E(e), m) == is_allowed(renamed, E(e), m)
