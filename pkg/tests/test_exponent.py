from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from growthbound.exponent import (
    Classification,
    ExponentTooSmallError,
    MalformedExponentError,
    RationalExponent,
    TaskSpec,
    ZeroDenominatorError,
    classify,
    forbidden_length,
    parse_exponent,
)

exponents = st.builds(
    lambda b, extra, strict: RationalExponent(b + extra, b, strict),
    st.integers(1, 12),
    st.integers(0, 60),
    st.booleans(),
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("7/3+", (7, 3, True)),
        ("2", (2, 1, False)),
        ("14/6", (7, 3, False)),
        (" 3/2 + ", (3, 2, True)),
        ("1", (1, 1, False)),
    ],
)
def test_parse_exponent(text, expected):
    e = parse_exponent(text)
    assert (e.numerator, e.denominator, e.strict) == expected


@pytest.mark.parametrize(
    "text, err",
    [
        ("abc", MalformedExponentError),
        ("7/", MalformedExponentError),
        ("-2", MalformedExponentError),
        ("2.5", MalformedExponentError),
        ("3/0", ZeroDenominatorError),
        ("2/3", ExponentTooSmallError),
        ("0", ExponentTooSmallError),
    ],
)
def test_parse_errors_are_distinct(text, err):
    with pytest.raises(err):
        parse_exponent(text)


def test_equality_respects_reduction_and_strictness():
    assert parse_exponent("14/6") == parse_exponent("7/3")
    assert parse_exponent("7/3") != parse_exponent("7/3+")
    assert str(parse_exponent("14/6+")) == "7/3+"


def test_ordering():
    b, bp, nxt = parse_exponent("7/3"), parse_exponent("7/3+"), parse_exponent("12/5")
    assert b < bp < nxt
    assert sorted([nxt, bp, b]) == [b, bp, nxt]


@pytest.mark.parametrize(
    "e, p, n",
    [("3", 1, 3), ("2+", 1, 3), ("7/3", 3, 7), ("7/3+", 3, 8), ("2", 3, 6), ("1", 4, 4), ("1+", 4, 5)],
)
def test_forbidden_length_examples(e, p, n):
    assert forbidden_length(parse_exponent(e), p) == n


@given(exponents, st.integers(1, 10_000))
def test_forbidden_length_is_least(e, p):
    n = forbidden_length(e, p)
    beta = e.value
    if e.strict:
        assert Fraction(n, p) > beta and Fraction(n - 1, p) <= beta
    else:
        assert Fraction(n, p) >= beta and Fraction(n - 1, p) < beta


@given(exponents, st.integers(1, 5000))
def test_forbidden_length_nondecreasing(e, p):
    assert forbidden_length(e, p) <= forbidden_length(e, p + 1)


@pytest.mark.parametrize(
    "k, e, expected",
    [
        (3, "7/4", Classification.FINITE),
        (3, "7/4+", Classification.INFINITE),
        (2, "2+", Classification.INFINITE),
        (2, "2", Classification.FINITE),
        (4, "7/5", Classification.FINITE),
        (4, "7/5+", Classification.INFINITE),
        (5, "5/4", Classification.FINITE),
        (5, "5/4+", Classification.INFINITE),
        (15, "15/14+", Classification.INFINITE),
    ],
)
def test_classify(k, e, expected):
    assert classify(k, parse_exponent(e)) is expected


def test_classify_rejects_unary():
    with pytest.raises(ValueError):
        classify(1, parse_exponent("2"))


@given(st.integers(2, 15), exponents, exponents)
def test_classify_monotone(k, e1, e2):
    lo, hi = sorted([e1, e2])
    if classify(k, lo) is Classification.INFINITE:
        assert classify(k, hi) is Classification.INFINITE


def test_taskspec_validation():
    TaskSpec(k=2, exponent=parse_exponent("3"), m=1)
    assert TaskSpec(k=2, exponent="7/3+", m=2).exponent == parse_exponent("7/3+")
    for kw in ({"m": 0}, {"precision": 0.0}, {"state_cap": 0}, {"k": 1}):
        args = {"k": 2, "exponent": "3", "m": 1} | kw
        with pytest.raises(ValueError):
            TaskSpec(**args)


def test_taskspec_key_distinguishes_strictness():
    a = TaskSpec(k=2, exponent="2", m=3)
    b = TaskSpec(k=2, exponent="2+", m=3)
    assert a.key() != b.key()
    assert a.key() == "2/2/1/0/3/0"
