from fractions import Fraction
from types import SimpleNamespace

import pytest

from mordell_basis import constants
from mordell_basis.arch import (
    TateSeriesConfig,
    adaptive_z_bounds,
    agm,
    family_shift,
    family_tail_constants,
    generic_config,
    lambda_inf_lower_bound,
    periods,
    shifted_orbit,
    tail_interval,
    tate_lambda_inf,
    theta_trivial_bound,
    z_w_functions,
)
from mordell_basis.certify import family_config
from mordell_basis.curve import MordellCurve, RationalPoint
from mordell_basis.errors import PreconditionError
from mordell_basis.intervals import HeightInterval, interval_context, iv_log, to_iv


def test_z_family_closed_form(fam53):
    m, d = fam53.m, family_shift(5, 3, "2a2+4b2")
    assert d == 86
    M = fam53.curve.shift(d)
    for x in (Fraction(30), Fraction(-25), Fraction(7, 4)):
        _, z, w = z_w_functions(M, x + d)
        assert z == (x**4 + 4 * d * x**3 - 8 * m * x + 4 * d * m) / (x + d) ** 4
    _, z, w = z_w_functions(M, 30 + d)
    assert z / w == fam53.curve.scalar_mul(2, fam53.P2).x + d


def test_z_trivial_data():
    flat = SimpleNamespace(b2=Fraction(0), b4=Fraction(0), b6=Fraction(0), b8=Fraction(0))
    assert z_w_functions(flat, 5)[1] == 1
    assert adaptive_z_bounds(flat, 1) == (1, 1)
    with pytest.raises(ZeroDivisionError):
        z_w_functions(flat, 0)


def test_tail_coefficient_is_one_over_192():
    ctx = interval_context(128)
    zmin, zmax = family_tail_constants("2a2+4b2")
    t = tail_interval(ctx, 3, zmin, zmax)
    lo = HeightInterval.from_iv(iv_log(ctx, zmin) / 192, 128)
    hi = HeightInterval.from_iv(iv_log(ctx, zmax) / 192, 128)
    T = HeightInterval.from_iv(t, 128)
    assert T.lo <= lo.lo and lo.hi - T.lo < Fraction(1, 10**30)
    assert T.hi >= hi.hi and T.hi - hi.lo < Fraction(1, 10**30)


def test_family_tail_constants():
    assert family_tail_constants("2a2+4b2") == (Fraction("0.062326"), Fraction("120.531634"))
    assert family_tail_constants("3a2+4b2") == (Fraction("0.038068"), Fraction("120.531634"))
    with pytest.raises(PreconditionError):
        family_tail_constants("a2+b2")


def test_more_terms_nest(fam53):
    prev = None
    for N in (1, 2, 3, 4, 5):
        h = tate_lambda_inf(fam53.curve, fam53.P2, family_config(fam53, "2a2+4b2", N))
        if prev is not None:
            assert prev.lo <= h.lo and h.hi <= prev.hi
        prev = h


def test_p2_lambda_window(fam53):
    h = tate_lambda_inf(fam53.curve, fam53.P2, family_config(fam53, "2a2+4b2"))
    ctx = interval_context(128)
    third = iv_log(ctx, fam53.m) / 3
    lo = HeightInterval.from_iv(third + to_iv(ctx, constants.LAMBDA_INF_P2_OFFSETS[0]), 128)
    hi = HeightInterval.from_iv(third + to_iv(ctx, constants.LAMBDA_INF_P2_OFFSETS[1]), 128)
    assert lo.hi < h.lo and h.hi < hi.lo


def test_shift_invariance_and_adaptive(grid_members):
    for fc in grid_members:
        gen = generic_config(fc.curve)
        for P in fc.points:
            P = P if P.beta > 0 else fc.curve.negate(P)
            h2 = tate_lambda_inf(fc.curve, P, family_config(fc, "2a2+4b2"))
            h3 = tate_lambda_inf(fc.curve, P, family_config(fc, "3a2+4b2"))
            ha = tate_lambda_inf(fc.curve, P, gen)
            assert h2.intersects(h3) and h2.intersects(ha) and h3.intersects(ha)


def test_adaptive_bounds_on_family_model(fam53):
    d = 86
    M = fam53.curve.shift(d)
    zmin, zmax = adaptive_z_bounds(M, d - Fraction(3017, 100), depth=3, x_start=30 + d)
    assert 0 < zmin < 1 < zmax
    with pytest.raises(PreconditionError):
        adaptive_z_bounds(M, 0)


def test_orbit_values_inside_family_bounds(grid_members):
    for fc in grid_members:
        for kind in ("2a2+4b2", "3a2+4b2"):
            zmin, zmax = family_tail_constants(kind)
            d = family_shift(fc.a, fc.b, kind)
            for P in fc.points:
                for _, z in shifted_orbit(fc.curve, P, d, 4):
                    assert zmin < z < zmax


def test_p2_cube_ratio_spot_check(fam53):
    xp = fam53.P2.x + family_shift(5, 3, "2a2+4b2")
    r = xp**3 / fam53.m
    assert 4 < r < Fraction("57.2218701")


def test_shift_precondition(fam53):
    cfg = TateSeriesConfig(Fraction(10), Fraction(1, 10), Fraction(100))
    with pytest.raises(PreconditionError):
        tate_lambda_inf(fam53.curve, fam53.P2, cfg)


def test_quasi_parallelogram(grid_members):
    ctx = interval_context(128)
    for fc in grid_members[:8]:
        cfg = family_config(fc, "2a2+4b2", terms=4)
        for P in fc.points:
            lam_p = tate_lambda_inf(fc.curve, P, cfg)
            lam_2p = tate_lambda_inf(fc.curve, fc.curve.scalar_mul(2, P), cfg)
            corr = HeightInterval.from_iv(2 * iv_log(ctx, abs(2 * P.y)), 128)
            res = lam_2p - lam_p * 4 + corr
            assert res.contains(0)


def test_agm():
    assert agm(1, 1).contains(1)
    a, b = agm(6, 24), agm(3, 12)
    assert (a - b * 2).contains(0)


def test_periods():
    p1 = periods(1)
    assert abs(p1.omega1.mid - Fraction("4.206546315")) < Fraction(1, 10**8)
    assert abs(p1.q.mid - Fraction("-0.163033534")) < Fraction(1, 10**9)
    p64 = periods(64)
    assert (p64.omega1 * 2 - p1.omega1).contains(0)
    assert periods(27289).q.intersects(p1.q)
    t = theta_trivial_bound(p1.q)
    assert abs(t.mid - Fraction("1.16738574713")) < Fraction(1, 10**9)


def test_lambda_inf_lower_bound(fam53):
    b = lambda_inf_lower_bound(fam53.m, fam53.P1)
    ctx = interval_context(128)
    ref = iv_log(ctx, 27289) / 12 + iv_log(ctx, 108) / 2 + to_iv(ctx, Fraction("0.31494685"))
    assert b.intersects(HeightInterval.from_iv(ref, 128))
    h = tate_lambda_inf(fam53.curve, fam53.P1, family_config(fam53, "3a2+4b2"))
    assert h.lo > b.hi
    one = lambda_inf_lower_bound(1, MordellCurve(1).point(0, 1))
    assert one.contains(Fraction("0.31494685"))
    P = RationalPoint(fam53.P1.alpha * 4, fam53.P1.beta * 8, 2)
    assert lambda_inf_lower_bound(fam53.m, P).intersects(b)
    with pytest.raises(PreconditionError):
        lambda_inf_lower_bound(-1, MordellCurve(-1).point(1, 0))
