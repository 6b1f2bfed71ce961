from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal

import pytest

from growthbound import fixtures
from growthbound.exponent import Classification, classify, repetition_threshold

CELLS = fixtures.all_cells()
Q4 = Decimal("1e-4")


def test_checksum_is_pinned():
    assert fixtures.checksum() == fixtures.FIXTURE_SHA256


def test_checksum_detects_edits():
    text = fixtures.raw_text()
    assert fixtures.checksum(text.replace("1.2206318", "1.2206319")) != fixtures.FIXTURE_SHA256


def test_row_counts():
    tables = [c.table for c in CELLS]
    assert len(CELLS) == 262
    assert {t: tables.count(t) for t in set(tables)} == {"1": 40, "2": 78, "3": 72, "4": 69, "text": 3}


def test_bad_header_rejected():
    with pytest.raises(ValueError):
        fixtures.parse_cells("a,b\n1,2\n")


def test_lookup_cube_free():
    cells = {c.table: c for c in fixtures.lookup(2, "3")}
    assert cells["1"].kind == "two_sided" and cells["1"].m == 36
    assert cells["text"].hi_text == "1.4575772869240"
    assert cells["text"].estimate == pytest.approx(1.4575772869237, abs=0)


def test_lookup_ternary_square_free():
    cells = {c.table: c for c in fixtures.lookup(3, "2")}
    assert (cells["2"].lo_text, cells["2"].hi_text) == ("1.3017597", "1.3017619")
    assert cells["2"].kind == "two_sided"
    assert fixtures.best_lower_bound(3, "2") == Decimal("1.3017597")


def test_lookup_quaternary_three_halves():
    t3 = next(c for c in fixtures.lookup(4, "3/2") if c.table == "3")
    assert t3.kind == "upper_only" and t3.m == 154
    assert t3.hi_text == "1.0968025" and t3.estimate_text == "1.09679"
    assert t3.estimate_tolerance == pytest.approx(1e-5)
    assert fixtures.best_lower_bound(4, "3/2") is None


def test_strictness_distinguishes_cells():
    plain = fixtures.lookup(2, "7/3")
    plus = fixtures.lookup(2, "7/3+")
    assert plain and plus and not set(plain) & set(plus)


def test_two_sided_cells_are_tight():
    two = [c for c in CELLS if c.kind == "two_sided"]
    assert two
    for c in two:
        assert Decimal(c.lo_text) < Decimal(c.hi_text)
        assert Decimal(c.hi_text) - Decimal(c.lo_text) < Decimal("1e-4")


def test_upper_only_cells_have_estimates_below_bound():
    for c in CELLS:
        if c.kind == "upper_only" and c.estimate_text is not None:
            assert Decimal(c.estimate_text) <= Decimal(c.hi_text) + Decimal(str(c.estimate_tolerance))


@pytest.mark.parametrize("cell", [c for c in CELLS if c.jump_text], ids=lambda c: str(c.exponent))
def test_jump_column_between_certified_differences(cell):
    row = CELLS.index(cell)
    base = CELLS[row - 1]
    assert base.k == cell.k and base.exponent == cell.exponent.with_strict(False) and cell.exponent.strict
    low = (Decimal(cell.lo_text) - Decimal(base.hi_text)).quantize(Q4, ROUND_FLOOR)
    high = (Decimal(cell.hi_text) - Decimal(base.lo_text)).quantize(Q4, ROUND_CEILING)
    assert low <= Decimal(cell.jump_text) <= high


def test_zero_cells_are_finite_languages():
    zeros = [c for c in CELLS if c.hi_text is not None and Decimal(c.hi_text) == 0]
    assert zeros
    for c in zeros:
        assert classify(c.k, c.exponent) is Classification.FINITE


def test_nonzero_growth_cells_are_infinite_languages():
    for c in CELLS:
        if c.lo_text is not None and Decimal(c.lo_text) > 1:
            assert classify(c.k, c.exponent) is Classification.INFINITE, c


def test_threshold_rows_are_strict():
    for k in (3, 4):
        t = repetition_threshold(k)
        rows = [c for c in CELLS if c.table == "4" and c.k == k and c.exponent.value == t]
        assert rows and all(c.exponent.strict for c in rows)
