"""Exact exponent calculators: frozen values, branch boundaries, types."""
import math
from fractions import Fraction

import pytest

from talbot import (BoundReport, bound_table, exponent_pair_bound,
                    frac_nls_beta, heath_brown_exponent, oblique_interval,
                    strichartz_lower, t32_dimension_interval, t32_exponent,
                    vdc_beta, vinogradov_interval, weyl_exponent)


# -- frozen headline values -----------------------------------------------------------

def test_oblique_interval_frozen():
    assert oblique_interval(2) == (Fraction(7, 4), Fraction(19, 10))
    assert oblique_interval(3) == (Fraction(11, 6), Fraction(53, 27))


def test_weyl_exponent_frozen():
    assert weyl_exponent(1) == 1
    assert weyl_exponent(2) == Fraction(1, 2)
    assert weyl_exponent(3) == Fraction(1, 4)


def test_vinogradov_interval_frozen():
    assert vinogradov_interval(2) == (Fraction(3, 2), Fraction(3, 2))
    assert vinogradov_interval(3) == (Fraction(7, 6), Fraction(11, 6))
    lo, hi = vinogradov_interval(5)
    assert lo + hi == 3  # symmetric about 3/2


def test_vdc_beta_frozen():
    assert vdc_beta(Fraction(1, 2)) == Fraction(1, 4)
    assert vdc_beta(Fraction(3, 2)) == Fraction(1, 4)
    assert vdc_beta(Fraction(9, 5)) == Fraction(1, 5)


def test_strichartz_lower_frozen():
    assert strichartz_lower(Fraction(1, 2), 0, 4) == Fraction(3, 2)
    assert strichartz_lower(Fraction(1, 2), Fraction(1, 16), 4) == Fraction(11, 8)


def test_t32_exponents_frozen():
    assert t32_exponent(3) == Fraction(5, 8)
    assert t32_exponent(4) == Fraction(5, 8)
    assert t32_dimension_interval() == (Fraction(11, 8), Fraction(13, 8))


def test_heath_brown_frozen():
    assert heath_brown_exponent(Fraction(29, 10), 3) == Fraction(11, 12)


def test_exponent_pair_frozen():
    assert exponent_pair_bound(Fraction(1, 9), Fraction(13, 18),
                               Fraction(3, 2)) == Fraction(7, 9)
    assert exponent_pair_bound(0, Fraction(1, 2), Fraction(3, 2)) == Fraction(1, 2)


# -- branch boundaries -----------------------------------------------------------------

def test_vdc_beta_branches():
    # alpha/2 below 1; 1 - alpha/2 on (1, 3/2]; 1/2 - alpha/6 above
    assert vdc_beta(Fraction(2, 3)) == Fraction(1, 3)
    assert vdc_beta(Fraction(5, 4)) == Fraction(3, 8)
    assert vdc_beta(Fraction(7, 4)) == Fraction(1, 2) - Fraction(7, 24)


def test_vdc_beta_continuous_at_three_halves():
    eps = Fraction(1, 10 ** 9)
    left = vdc_beta(Fraction(3, 2))
    right = vdc_beta(Fraction(3, 2) + eps)
    assert left == Fraction(1, 4)
    assert abs(right - left) < Fraction(1, 10 ** 8)


def test_vdc_beta_excludes_half_wave():
    for bad in (0, 1, 2, Fraction(5, 2), -1):
        with pytest.raises(ValueError):
            vdc_beta(bad)


def test_frac_nls_beta_knee():
    # alpha - 1 below 4/3, the linear branches above, continuous at 1/3
    assert frac_nls_beta(Fraction(6, 5)) == Fraction(1, 5)
    assert frac_nls_beta(Fraction(4, 3)) == Fraction(1, 3)
    assert frac_nls_beta(Fraction(7, 5)) == 1 - Fraction(7, 10)
    eps = Fraction(1, 10 ** 9)
    assert abs(frac_nls_beta(Fraction(4, 3) - eps) - Fraction(1, 3)) < Fraction(1, 10 ** 8)
    with pytest.raises(ValueError):
        frac_nls_beta(1)
    with pytest.raises(ValueError):
        frac_nls_beta(2)


def test_heath_brown_branches_meet():
    # branches agree where the fractional part equals 2/(d+1)
    d = 3
    frac = Fraction(2, d + 1)
    at_knee = heath_brown_exponent(d - 1 + frac, d)
    assert at_knee == 1 - Fraction(1, d * (d + 1))
    assert at_knee == 1 - (1 - frac) / (d * (d - 1))
    below = heath_brown_exponent(Fraction(21, 10), d)  # {alpha} = 1/10 <= 1/2
    assert below == 1 - (1 - Fraction(1, 10)) / 6
    with pytest.raises(ValueError):
        heath_brown_exponent(Fraction(5, 2), 2)
    with pytest.raises(ValueError):
        heath_brown_exponent(3, 3)  # must be strictly interior


def test_exponent_pair_validation():
    with pytest.raises(ValueError):
        exponent_pair_bound(Fraction(2, 3), Fraction(2, 3), Fraction(3, 2))
    with pytest.raises(ValueError):
        exponent_pair_bound(Fraction(1, 9), Fraction(1, 4), Fraction(3, 2))


def test_strichartz_validation():
    with pytest.raises(ValueError):
        strichartz_lower(Fraction(1, 2), 0, 2)
    with pytest.raises(ValueError):
        strichartz_lower(Fraction(1, 2), 1, 4)  # s > r0


def test_t32_monotone_to_square_root_floor():
    vals = [t32_exponent(r) for r in range(4, 12)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > Fraction(1, 2) for v in vals)
    # alpha/2 - 1/2 = 1/(2(r-1)), so the approach to the floor is O(1/r)
    for r in (10, 40, 100):
        gap = t32_exponent(r) - Fraction(1, 2)
        assert 0 < gap < Fraction(1, 2 * (r - 1))
    with pytest.raises(ValueError):
        t32_exponent(2)


def test_interval_validation():
    for fn in (oblique_interval, vinogradov_interval):
        with pytest.raises(ValueError):
            fn(1)
        with pytest.raises(ValueError):
            fn("3")


# -- types -------------------------------------------------------------------------

def test_exact_inputs_give_fractions():
    assert isinstance(vdc_beta(Fraction(3, 2)), Fraction)
    assert isinstance(frac_nls_beta(Fraction(6, 5)), Fraction)
    assert isinstance(heath_brown_exponent(Fraction(29, 10), 3), Fraction)
    assert isinstance(exponent_pair_bound(0, Fraction(1, 2), Fraction(3, 2)), Fraction)
    assert isinstance(strichartz_lower(Fraction(1, 2), 0, 4), Fraction)
    assert all(isinstance(v, Fraction) for v in oblique_interval(4))


def test_float_inputs_give_floats():
    assert isinstance(vdc_beta(1.5), float)
    assert vdc_beta(1.5) == pytest.approx(0.25)
    assert isinstance(strichartz_lower(0.5, 0.0, 4.0), float)
    assert strichartz_lower(0.5, 0.0, 4.0) == pytest.approx(1.5)


# -- report objects -----------------------------------------------------------------

def test_bound_report_xor_validation():
    with pytest.raises(ValueError):
        BoundReport("x", "both set", value=1, interval=(1, 2))
    with pytest.raises(ValueError):
        BoundReport("x", "neither set")
    with pytest.raises(ValueError):
        BoundReport("x", "backwards", interval=(2, 1))


def test_bound_report_payload():
    rep = BoundReport("t32:r=3", "sup exponent", value=Fraction(5, 8))
    pay = rep.payload()
    assert pay["value"] == "5/8"
    assert pay["value_float"] == 0.625
    rep2 = BoundReport("win", "window", interval=(Fraction(7, 4), Fraction(19, 10)))
    pay2 = rep2.payload()
    assert pay2["interval"] == ["7/4", "19/10"]
    assert pay2["interval_float"] == [1.75, 1.9]


def test_bound_table_shape():
    rows = bound_table()
    assert len(rows) == 18
    names = [r.name for r in rows]
    assert len(set(names)) == 18
    by_name = {r.name: r for r in rows}
    assert by_name["t32:r=3"].value == Fraction(5, 8)
    assert by_name["oblique:d=2"].interval == (Fraction(7, 4), Fraction(19, 10))
    assert by_name["strichartz:alpha=3/2"].value == Fraction(11, 8)
    for row in rows:
        assert row.payload()["name"] == row.name
