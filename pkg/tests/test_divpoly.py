from fractions import Fraction

import pytest
from sympy import Poly, symbols

from mordell_basis.curve import MordellCurve
from mordell_basis.divpoly import division_equation, division_poly, multiplication_map, rational_roots
from mordell_basis.errors import BudgetExceededError

x = symbols("x")


def test_small_division_polynomials():
    n = 7
    assert division_poly(n, 2).as_expr() == 1
    assert division_poly(n, 3).as_expr() == 3 * x**4 + 12 * n * x
    assert division_poly(n, 5).degree() == 12


@pytest.mark.parametrize("k", [2, 3, 5])
def test_multiplication_map_matches_group_law(k):
    E = MordellCurve(27289)
    P = E.point(30, 233)
    num, den = multiplication_map(E.n, k)
    assert num.degree() == k * k and den.degree() == k * k - 1
    assert Fraction(num.as_expr().subs(x, P.x)) / Fraction(den.as_expr().subs(x, P.x)) == E.scalar_mul(k, P).x


def test_rational_roots():
    # (2x - 3)(x + 5)(x^2 + 1) x
    p = Poly((2 * x - 3) * (x + 5) * (x**2 + 1) * x, x)
    coeffs = [int(c) for c in reversed(p.all_coeffs())]
    assert rational_roots(coeffs) == [Fraction(-5), Fraction(0), Fraction(3, 2)]
    assert rational_roots([1, 0, 1]) == []


def test_rational_roots_repeated():
    p = Poly((3 * x + 1) ** 3 * (x - 2) ** 2, x)
    coeffs = [int(c) for c in reversed(p.all_coeffs())]
    assert rational_roots(coeffs) == [Fraction(-1, 3), Fraction(2)]


def test_rational_roots_errors():
    with pytest.raises(ValueError):
        rational_roots([0, 0])
    with pytest.raises(BudgetExceededError):
        rational_roots([-2, 0, 1], prime_budget=0)


def test_division_equation_has_preimage():
    E = MordellCurve(27289)
    R = E.point(-25, 108)
    Q = E.scalar_mul(3, R)
    eq = division_equation(E.n, 3, Q.x)
    assert R.x in rational_roots(eq)
