"""Acceptance criteria 1-12.

Each criterion is a plain function returning (ok, detail). Under pytest a
PASS/FAIL line is printed per criterion; ``python tests/test_acceptance.py``
prints the same lines without pytest.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction

import pytest

from mordell_basis.arch import generic_config, tate_lambda_inf
from mordell_basis.certify import certify_pair, certify_rank3, family_config, family_heights, PAIRS
from mordell_basis.descent import congruence_verdict, division_points
from mordell_basis.errors import MordellBasisError
from mordell_basis.family import (
    CLOSED_FORM_COMBOS,
    SWEEP5_COMBOS,
    FamilyCurve,
    closed_form_x,
    enumerate_family,
    is_family_member,
)
from mordell_basis.lattice import (
    canonical_height,
    family_height_window,
    pair_index_threshold,
    strictly_inside_window,
    uniform_lower_bound,
)
from mordell_basis.nonarch import ExactLogCombination, hf
from mordell_basis.regressions import (
    monotone_decreasing,
    naive_height,
    oracle_naive_height_limit,
    run_constant_regressions,
)

PREC = 128
SWEEP_B = (3, 15, 21, 33, 39, 51, 57, 69, 87, 93)

_members: list[FamilyCurve] | None = None


def grid_members() -> list[FamilyCurve]:
    global _members
    if _members is None:
        _members = [e.family for e in enumerate_family(25, 25) if e.family is not None]
    return _members


def _positive(E, P):
    return P if P.beta > 0 else E.negate(P)


# ---------------------------------------------------------------------------

def criterion_1():
    t = time.perf_counter()
    rep = run_constant_regressions(PREC)
    dt = time.perf_counter() - t
    bad = ", ".join(c.id for c in rep.failures)
    return rep.ok and dt < 10, f"{len(rep.cases)} constants, {dt:.1f}s" + (f", failed: {bad}" if bad else "")


def criterion_2():
    t = time.perf_counter()
    members = grid_members()
    misses = []
    for fc in members:
        hc = family_heights(fc, PREC)
        for i, P in enumerate(fc.points, 1):
            if not strictly_inside_window(hc(P).total, family_height_window(fc.m, i, PREC)):
                misses.append((fc.a, fc.b, i))
    dt = time.perf_counter() - t
    return not misses and dt < 120, f"{len(members)} members, {3 * len(members)} points, {dt:.1f}s, misses {misses}"


def criterion_3():
    L = ExactLogCombination.log_of
    bad = []
    for fc in grid_members():
        if hf(fc.P2, fc.curve) != L(2, Fraction(-2, 3)) or hf(fc.P1, fc.curve) != L(3, Fraction(-1, 2)):
            bad.append((fc.a, fc.b))
    return not bad, f"{len(grid_members())} members exact, mismatches {bad}"


def criterion_4():
    bad = []
    n = 0
    for fc in grid_members():
        E = fc.curve
        hc = family_heights(fc, PREC)
        for P in fc.points:
            n += 1
            h, h2 = hc(P).total, hc(E.scalar_mul(2, P)).total
            if not h2.intersects(h * 4):
                bad.append((fc.a, fc.b, "double", str(P)))
        for P, Q in ((fc.P1, fc.P2), (fc.P2, fc.P3), (fc.P3, fc.P1)):
            parts = [hc(E.add(P, Q)).total, hc(E.sub(P, Q)).total, hc(P).total * 2, hc(Q).total * 2]
            resid = parts[0] + parts[1] - parts[2] - parts[3]
            widths = sum((p.hi - p.lo for p in parts), Fraction(0))
            if abs(resid.mid) > widths:
                bad.append((fc.a, fc.b, "parallelogram"))
    return not bad, f"{n} doublings and {3 * len(grid_members())} parallelograms, failures {bad}"


def criterion_5():
    bad = []
    n = 0
    for fc in grid_members():
        E = fc.curve
        gen = generic_config(E, prec=PREC)
        c2, c3 = family_config(fc, "2a2+4b2", prec=PREC), family_config(fc, "3a2+4b2", prec=PREC)
        for P in fc.points:
            P = _positive(E, P)
            h2, h3, ha = (tate_lambda_inf(E, P, c) for c in (c2, c3, gen))
            n += 1
            if not (h2.intersects(h3) and ha.intersects(h2) and ha.intersects(h3)):
                bad.append((fc.a, fc.b, str(P)))
    return not bad, f"{n} points with three shifts, failures {bad}"


def criterion_6():
    rng = random.Random(6)
    bad, n = [], 0
    for fc in grid_members():
        E = fc.curve
        hc = family_heights(fc, PREC)
        lam = uniform_lower_bound(fc.m, PREC)
        combos = {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1)}
        while len(combos) < 26:
            c = tuple(rng.randint(-2, 2) for _ in range(3))
            if any(c):
                combos.add(c)
        for c in sorted(combos):
            Q = E.combination(c, fc.points)
            n += 1
            if not hc(Q).total.lo > lam.hi:
                bad.append((fc.a, fc.b, c))
    return not bad, f"{n} points above the uniform bound, failures {bad}"


def criterion_7():
    margin = Fraction(1, 10**9)
    vals = {m: pair_index_threshold(Fraction(m), PREC) for m in (19089, 10**5, 10**10, 10**20, 10**30)}
    ok = all(v.hi < 49 - margin for v in vals.values())
    v25 = pair_index_threshold(Fraction("6.39e22"), PREC)
    ok = ok and v25.hi < 25 - margin
    mono = monotone_decreasing(lambda m: float(pair_index_threshold(Fraction(m), PREC).mid),
                               math.exp(2) * 1.0001, 1e30, 200)
    shown = ", ".join(f"{m:.3g}: {float(v.hi):.4f}" for m, v in vals.items())
    return ok and mono, f"{shown}; 6.39e22: {float(v25.hi):.4f}; monotone {mono}"


def criterion_8():
    rng = random.Random(8)
    members = grid_members()
    fired, missed, n = [], [], 0
    while n < 200:
        fc = members[n % len(members)]
        E = fc.curve
        k = (2, 3, 5)[n % 3]
        c = tuple(rng.randint(-1, 1) for _ in range(3))
        if not any(c):
            continue
        R = E.combination(c, fc.points)
        Q = E.scalar_mul(k, R)
        n += 1
        if k in (2, 3) and congruence_verdict(E.n, Q, k).proven:
            fired.append((fc.a, fc.b, k, c))
        if R not in division_points(E, Q, k):
            missed.append((fc.a, fc.b, k, c))
    return not fired and not missed, f"{n} positives, false refutations {fired}, missed preimages {missed}"


def sweep_members():
    for a in range(5, 200, 2):
        for b in SWEEP_B:
            if is_family_member(a, b):
                yield FamilyCurve.build(a, b, check=False)


def criterion_9():
    t = time.perf_counter()
    hits, curves, calls = [], 0, 0
    for fc in sweep_members():
        curves += 1
        E = fc.curve
        for c in SWEEP5_COMBOS:
            calls += 1
            if division_points(E, E.combination(c, fc.points), 5):
                hits.append((fc.a, fc.b, c))
    dt = time.perf_counter() - t
    return not hits, f"{curves} curves, {calls} searches, {len(hits)} hits, {dt:.1f}s"


def _end_to_end(a, b):
    t = time.perf_counter()
    try:
        fc = FamilyCurve.build(a, b)
    except MordellBasisError as exc:
        return False, f"({a},{b}) rejected: {exc}"
    certs = [certify_pair(fc, p, PREC) for p in PAIRS]
    rank3 = certify_rank3(fc, PREC)
    dt = time.perf_counter() - t
    ok = all(c.certified and c.conclusion["index"] == 1 for c in certs) and rank3.certified
    ok = ok and float(rank3.to_dict()["regulator"]["lo"]) > 0 and dt < 60
    return ok, f"({a},{b}) pairs index 1: {[c.conclusion['index'] for c in certs]}, rank3 {rank3.certified}, {dt:.1f}s"


def criterion_10(curves=((5, 3), (7, 3), (11, 3))):
    results = [_end_to_end(a, b) for a, b in curves]
    return all(ok for ok, _ in results), "; ".join(d for _, d in results)


def criterion_11():
    members = [e.family for e in enumerate_family(199, 93) if e.family is not None]
    step = max(1, len(members) // 50)
    chosen = members[::step][:50]
    bad = []
    for fc in chosen:
        xs = closed_form_x(fc.a, fc.b)
        for name, combo in CLOSED_FORM_COMBOS.items():
            if fc.curve.combination(combo, fc.points).x != xs[name]:
                bad.append((fc.a, fc.b, name))
    return len(chosen) == 50 and not bad, f"{len(chosen)} pairs x 10 formulas, mismatches {bad}"


def criterion_12():
    fc = FamilyCurve.build(5, 3)
    h = canonical_height(fc.curve, fc.P2, PREC).total
    seq = oracle_naive_height_limit(fc.curve, fc.P2, 4, PREC)
    far = min(abs(h.lo - naive_height(fc.P2).hi), abs(h.hi - naive_height(fc.P2).lo))
    near = max(abs(h.hi - seq[4].lo), abs(seq[4].hi - h.lo))
    return near < far, f"|h - h(16P)/256| <= {float(near):.4f} < {float(far):.4f} <= |h - h(P)|"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


# ---------------------------------------------------------------------------

def _report(capsys, label, result):
    ok, detail = result
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {label}: {detail}")
    return ok


@pytest.mark.parametrize("i", [i for i in range(1, 13) if i not in (9, 10)])
def test_criterion(i, capsys):
    assert _report(capsys, i, CRITERIA[i]())


@pytest.mark.slow
def test_criterion_9(capsys):
    assert _report(capsys, 9, criterion_9())


def test_criterion_10(capsys):
    assert _report(capsys, "10 (5,3) (7,3)", criterion_10(((5, 3), (7, 3))))


# m = 11^6 + 16*3^6 = 5^2 * 71329 is not square-free, so (11, 3) is outside
# the family and cannot be certified; this part fails by construction.
@pytest.mark.xfail(strict=True, reason="(11,3) is not a family member: 25 divides m")
def test_criterion_10_11_3(capsys):
    assert _report(capsys, "10 (11,3)", criterion_10(((11, 3),)))


if __name__ == "__main__":
    only = [int(a) for a in sys.argv[1:]] or list(CRITERIA)
    failed = 0
    for i in only:
        ok, detail = CRITERIA[i]()
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {i}: {detail}", flush=True)
    sys.exit(1 if failed else 0)
