import itertools
import math
from fractions import Fraction

import pytest

from fractalcube.dimension import (
    BoxCountSeries,
    box_count,
    box_count_series,
    density_series,
    dimension_formula,
    estimate_dimension,
    formula_count,
    summarize,
    theorem4_value,
)
from fractalcube.digitset import make_cross, make_frame

LOG5_13 = math.log(13) / math.log(5)
LOG5_44 = math.log(44) / math.log(5)


def test_box_count_examples():
    assert box_count("00").count == 169
    bc = box_count("0111")
    assert bc.count == 13 * 44**3 == 1_107_392 and bc.generated == bc.count and not bc.formula_only
    assert int(box_count("")) == 1


def test_box_count_formula_only_over_budget():
    bc = box_count("1111", budget=1000)
    assert bc.formula_only and bc.generated is None and bc.count == 44**4
    assert formula_count("1" * 12) == 44**12  # beyond 64 bits, still exact


def test_formula_values():
    assert dimension_formula(1) == pytest.approx(LOG5_13, abs=1e-15)
    assert dimension_formula(0) == pytest.approx(LOG5_44, abs=1e-15)
    assert dimension_formula(Fraction(1, 2)) == pytest.approx((LOG5_13 + LOG5_44) / 2, abs=1e-15)
    assert round(dimension_formula(1), 6) == 1.593693
    assert round(dimension_formula(0), 6) == 2.351249
    assert round(dimension_formula(0.5), 6) == 1.972471
    assert theorem4_value is dimension_formula
    for bad in (-0.1, 1.5, Fraction(3, 2)):
        with pytest.raises(ValueError):
            dimension_formula(bad)


def test_formula_affine_and_decreasing():
    v0, v1 = dimension_formula(0), dimension_formula(1)
    prev = math.inf
    for i in range(11):
        lam = Fraction(i, 10)
        v = dimension_formula(lam)
        assert abs(v - (v0 + float(lam) * (v1 - v0))) < 1e-14
        assert v < prev
        prev = v


@pytest.mark.parametrize("letter,value", [("0", LOG5_13), ("1", LOG5_44)])
def test_slope_constant_words(letter, value):
    fit = estimate_dimension(box_count_series(letter * 4))
    assert abs(fit.slope - value) <= 1e-12
    assert fit.residual < 1e-12


def test_slope_alternating_even_depths():
    series = box_count_series(":01", depths=[2, 4, 6, 8], generate=False)
    assert abs(estimate_dimension(series).slope - dimension_formula(0.5)) <= 1e-12


def test_per_depth_exponents():
    rows = box_count_series("011").rows()
    for (k, n, e), lam in zip(rows, (1, Fraction(1, 2), Fraction(1, 3))):
        assert e == pytest.approx(dimension_formula(lam), abs=1e-14)
    assert [n for _, n, _ in rows] == [13, 572, 25168]


def test_series_validation():
    with pytest.raises(ValueError):
        estimate_dimension(box_count_series("0", kmax=1))
    with pytest.raises(ValueError):
        BoxCountSeries(((2, 10), (1, 5)), ("00", "0"))


def test_series_invariants():
    for w in ("0110", "1001", "0000"):
        s = box_count_series(w)
        ns = [n for _, n in s.entries]
        assert all(a < b for a, b in zip(ns, ns[1:]))
        for (k, n), p in zip(s.entries, s.word_prefixes):
            z = p.count("0")
            assert n == 13**z * 44 ** (k - z)


def test_density_examples():
    d = density_series("0101010101")
    assert d.lambda_m[-1] == Fraction(1, 2) and len(d) == 10
    d = density_series("0:1", 10)
    assert d.lambda_m[-1] == Fraction(1, 10) and d.limit == 0
    assert density_series(":01").limit == Fraction(1, 2)
    e = density_series("")
    assert len(e) == 0 and e.limsup is None and e.limit is None
    for w in ("0110", "1", "000"):
        assert all(0 <= x <= 1 for x in density_series(w).lambda_m)


def test_summary_labels_follow_density_order():
    _, s = summarize("0110", 4)
    # more zeros means a smaller value, so the upper density gives the lower bound
    assert s.lower_box == dimension_formula(density_series("0110").limsup)
    assert s.lower_box <= s.upper_box
    _, p = summarize(":01", 6)
    assert p.lam == Fraction(1, 2)
    assert abs(p.slope - p.formula_value) < 1e-12


def test_exhaustive_counts_other_base():
    menger = (make_cross(3), make_frame(3))
    for k in range(1, 4):
        for w in map("".join, itertools.product("01", repeat=k)):
            bc = box_count(w, menger)
            assert bc.generated == 7 ** w.count("0") * 20 ** w.count("1")
