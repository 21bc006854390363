from math import gcd

import pytest

from mordell_basis.errors import PreconditionError
from mordell_basis.family import (
    CLOSED_FORM_COMBOS,
    FamilyCurve,
    closed_form_x,
    construct_points,
    count_structural,
    enumerate_family,
    family_m,
    is_family_member,
    s0_parametrize,
)


def test_membership_examples():
    r = is_family_member(5, 3)
    assert r and r.factorization.factors == {29: 1, 941: 1}
    assert not is_family_member(3, 3) and "gcd" in is_family_member(3, 3).reason
    r = is_family_member(5, 9)
    assert not r and r.reason.startswith("v3(b) != 1")
    assert not is_family_member(4, 3)
    assert not is_family_member(11, 3)  # 5^2 divides m
    assert "5^2" in is_family_member(11, 3).reason


def test_points():
    P1, P2, P3 = construct_points(5, 3)
    assert (P1.x, P1.y, P2.x, P2.y, P3.x, P3.y) == (-25, 108, 30, 233, -30, 17)
    fc = FamilyCurve.build(7, 3)
    assert fc.m == 129313 and (fc.P2.x, fc.P2.y) == (42, 451)
    for a in (5, 7, 13):
        _, Q2, Q3 = construct_points(a, 3)
        assert Q3.x == -Q2.x
    with pytest.raises(PreconditionError):
        FamilyCurve.build(5, 9)
    with pytest.raises(ValueError):
        fc.point(4)


def test_closed_forms(grid_members):
    for fc in grid_members:
        E = fc.curve
        xs = closed_form_x(fc.a, fc.b)
        for name, combo in CLOSED_FORM_COMBOS.items():
            assert E.combination(combo, fc.points).x == xs[name], (fc, name)


def test_enumeration_properties():
    got = [(e.a, e.b) for e in enumerate_family(25, 25)]
    assert got[0] == (5, 3) and got == sorted(got)
    assert (11, 3) not in got
    assert all(a % 2 and b % 2 and b % 3 == 0 and b % 9 for a, b in got)
    assert all(e.family is not None for e in enumerate_family(25, 25))
    assert list(enumerate_family(4, 25)) == []
    assert [(e.a, e.b) for e in enumerate_family(5, 5)] == [(5, 3)]


def test_enumeration_count_matches_double_loop():
    m_max = 10**14
    n = sum(1 for a in range(5, 300, 2) for b in range(3, 300, 6)
            if family_m(a, b) <= m_max and gcd(a, b) == 1 and b % 9)
    assert n == count_structural(300, 300, m_max)


def test_s0():
    p = s0_parametrize(1, 1)
    assert p.raw == (5, -3) and (p.a, p.b) == (5, 3) and p.necessary_conditions_hold
    assert (s0_parametrize(2, 1).a, s0_parametrize(2, 1).b) == (7, 3)
    assert "v3(k) != 0" in s0_parametrize(3, 1).flags
    assert "v2(l) != 0" in s0_parametrize(1, 2).flags


def test_member_json():
    j = is_family_member(5, 3).to_json()
    assert j["status"] == "member" and j["factorization"]
    assert is_family_member(5, 9).to_json()["status"] == "rejected"
