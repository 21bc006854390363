from fractions import Fraction

import pytest

from mordell_basis.curve import INFINITY
from mordell_basis.errors import BoundError, PreconditionError
from mordell_basis.intervals import HeightInterval
from mordell_basis.lattice import (
    HeightCache,
    canonical_height,
    family_height_window,
    gram_matrix,
    hermite,
    index_bound,
    pairing,
    pair_index_threshold,
    regulator,
    siksek_from_regulator,
    strictly_inside_window,
    uniform_lower_bound,
)


def test_pairing_symmetric_and_diagonal(fam53):
    E, (P1, P2, P3) = fam53.curve, fam53.points
    hc = HeightCache(E)
    a, b = pairing(E, P1, P2, heights=hc), pairing(E, P2, P1, heights=hc)
    assert a.intersects(b)
    d = pairing(E, P2, P2, heights=hc)
    assert d.intersects(hc(P2))


def test_pairing_additive(fam53):
    E, (P1, P2, P3) = fam53.curve, fam53.points
    hc = HeightCache(E)
    lhs = pairing(E, E.add(P1, P2), P3, heights=hc)
    rhs = pairing(E, P1, P3, heights=hc) + pairing(E, P2, P3, heights=hc)
    assert lhs.intersects(rhs)


def test_height_scales_quadratically(fam53):
    E, P = fam53.curve, fam53.P2
    h1 = canonical_height(E, P).total
    h3 = canonical_height(E, E.scalar_mul(3, P)).total
    assert (h3 - h1 * 9).contains(0)


def test_regulator_one_point_is_height(fam53):
    E = fam53.curve
    assert regulator(E, [fam53.P1]).intersects(canonical_height(E, fam53.P1).total)


def test_dependent_pair_has_zero_regulator(fam53):
    E, P = fam53.curve, fam53.P2
    reg = regulator(E, [P, E.scalar_mul(2, P)])
    assert reg.contains(0)
    with pytest.raises(BoundError):
        siksek_from_regulator(reg, 2, Fraction(1, 2))


def test_regulator_positive_for_basis(fam53):
    reg = regulator(fam53.curve, fam53.points)
    assert reg.lo > 0
    G = gram_matrix(fam53.curve, fam53.points)
    assert all(G[i][j].intersects(G[j][i]) for i in range(3) for j in range(3))


def test_regulator_rejects_bad_input(fam53):
    with pytest.raises(PreconditionError):
        regulator(fam53.curve, [])
    with pytest.raises(PreconditionError):
        regulator(fam53.curve, [INFINITY])


def test_hermite():
    assert [hermite(s) for s in (1, 2, 3, 4)] == [1, Fraction(4, 3), 2, 4]
    with pytest.raises(PreconditionError):
        hermite(5)


def test_siksek_scaling():
    reg = HeightInterval.point(Fraction(9), 128)
    b1 = siksek_from_regulator(reg, 2, Fraction(1))
    b2 = siksek_from_regulator(reg, 2, Fraction(2))
    assert (b1 - b2 * 2).contains(0)
    assert index_bound(b1) == 3  # 3 * sqrt(4/3) = 3.46
    with pytest.raises(BoundError):
        siksek_from_regulator(reg, 2, 0)


def test_index_bound_integer_hi():
    assert index_bound(HeightInterval(Fraction(4), Fraction(5))) == 5


def test_uniform_bound():
    assert abs(uniform_lower_bound(27289).mid - Fraction("0.704026")) < Fraction(1, 10**5)
    with pytest.raises(PreconditionError):
        uniform_lower_bound(0)


def test_family_heights_uniform_and_window(grid_members):
    for fc in grid_members:
        lam = uniform_lower_bound(fc.m)
        hc = HeightCache(fc.curve)
        for i, P in enumerate(fc.points, 1):
            h = hc(P)
            assert h.lo > lam.hi
            assert strictly_inside_window(h, family_height_window(fc.m, i))


def test_pair_index_threshold():
    assert pair_index_threshold(Fraction(10**30)).hi < 49
    assert pair_index_threshold(Fraction("6.39e22")).hi < 25
    assert pair_index_threshold(10**5).lo > pair_index_threshold(10**10).hi
    with pytest.raises(PreconditionError):
        pair_index_threshold(5)
