from fractions import Fraction

import pytest

from mordell_basis.factor import factorize, is_squarefree, prime_factors, valuation
from mordell_basis.intervals import HeightInterval, format_decimal


def test_interval_basics():
    a = HeightInterval.hull(1, 2)
    b = HeightInterval.hull(Fraction(3, 2), 3)
    assert a.intersects(b) and a.gap(b) == 0
    assert (a + b).contains(Fraction(7, 2))
    assert (a - b).lo <= -2 and (a - b).hi >= Fraction(1, 2)
    r = HeightInterval.point(2).sqrt()
    assert r.lo * r.lo <= 2 <= r.hi * r.hi and r.width < Fraction(1, 10**30)
    assert a.is_inside(0, 3) and not a.is_inside(1, 3)
    assert HeightInterval.hull(0, 1).gap(HeightInterval.hull(3, 4)) == 2


def test_interval_rejects_inverted():
    with pytest.raises(ValueError):
        HeightInterval(Fraction(2), Fraction(1), 64)


def test_json_rounding_is_outward():
    h = HeightInterval.hull(Fraction(1, 3), Fraction(2, 3))
    j = h.to_json(5)
    assert Fraction(j["lo"]) <= Fraction(1, 3) and Fraction(j["hi"]) >= Fraction(2, 3)
    assert format_decimal(Fraction(-1, 3), 3, "down") == "-0.334"


def test_factorize():
    assert factorize(27289).factors == {29: 1, 941: 1}
    assert is_squarefree(27289) is True
    assert is_squarefree(11**6 + 16 * 3**6) is False  # 25 divides it
    big = (10**12 + 39) * (10**12 + 61)
    f = factorize(big)
    assert f.complete and sorted(f.factors) == [10**12 + 39, 10**12 + 61]
    assert prime_factors(-60) == [2, 3, 5]
    assert valuation(72, 2) == 3 and valuation(72, 3) == 2
    with pytest.raises(ValueError):
        factorize(0)


def test_factor_budget_reports_unknown():
    p, q = 1000000000039, 1000000000061
    f = factorize(p * q, trial_bound=100, rho_steps=1)
    if not f.complete:
        assert f.is_squarefree is None
        assert "C" in f.as_text()
