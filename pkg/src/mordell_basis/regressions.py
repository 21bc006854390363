"""Oracles and published-constant regressions.

Reference numbers live in ``data/reference_values.json``; nothing numeric
is duplicated here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from . import constants, zbounds
from .arch import periods, theta_trivial_bound
from .curve import MordellCurve, RationalPoint
from .errors import PreconditionError
from .intervals import DEFAULT_PRECISION, HeightInterval, interval_context, iv_log


def naive_height(P: RationalPoint, prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """log max(|alpha|, delta^2), the logarithmic height of x(P)."""
    if P.is_infinity:
        return HeightInterval.point(0, prec)
    ctx = interval_context(prec)
    return HeightInterval.from_iv(iv_log(ctx, max(abs(P.alpha), P.delta**2)), prec)


def oracle_naive_height_limit(curve: MordellCurve, P: RationalPoint, k_max: int = 4,
                              prec: int = DEFAULT_PRECISION) -> list[HeightInterval]:
    """[h(2^k P) / 4^k for k = 0..k_max], by exact doubling."""
    if P.is_infinity:
        raise PreconditionError("the naive-height sequence of the point at infinity is identically 0")
    if not 0 <= k_max <= 5:
        raise PreconditionError("k_max must be between 0 and 5 (digits grow fourfold per doubling)")
    out = []
    Q = P
    for k in range(k_max + 1):
        out.append(naive_height(Q, prec) / 4**k)
        if k < k_max:
            Q = curve.scalar_mul(2, Q)
    return out


# ---------------------------------------------------------------------------

def load_reference_values() -> dict[str, dict]:
    text = resources.files("mordell_basis").joinpath("data/reference_values.json").read_text(encoding="utf-8")
    return {case["id"]: case for case in json.loads(text)["cases"]}


@dataclass
class CaseResult:
    id: str
    what: str
    expected: object
    computed: object
    tol: str
    passed: bool

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.id}: computed {self.computed} expected {self.expected} (tol {self.tol})"


@dataclass
class RegressionReport:
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.passed]


def _large_x_limit(k: int) -> float:
    # the terms settle like 1/X; X = 1e12 is far inside the tolerance
    return float(zbounds.p2_series_term(1e12, k))


def _computed_scalars(prec: int) -> dict[str, float]:
    per = periods(1, prec)
    theta = theta_trivial_bound(per.q)
    r2 = zbounds.critical_y("2a2+4b2")
    r3 = zbounds.critical_y("3a2+4b2")
    out = {
        "omega1_unit": per.omega1,
        "nome_q": per.q,
        "theta_bound": theta,
        "g_at_zero": float(zbounds.g_upper(0.0, 2)),
        "zmin_2": float(zbounds.f_z(zbounds.u2(r2, 2), r2, 2)),
        "zmin_3": float(zbounds.f_z(zbounds.u2(r3, 3), r3, 3)),
        "f_u0_min": zbounds.extremum(lambda y: zbounds.f_at_u0(y, 2), "min", 1e-2, 1e2)[1],
        "p2_cube_ratio_max": zbounds.extremum(zbounds.p2_cube_ratio, "max", 1e-2, 1e2)[1],
    }
    for k, kind in ((0, "min"), (1, "max"), (2, "min")):
        out[f"series_term{k}_{kind}"] = zbounds.extremum(lambda X, k=k: zbounds.p2_series_term(X, k), kind,
                                                         1e-2, 1e2, samples=801)[1]
        out[f"series_term{k}_limit"] = _large_x_limit(k)
    return out


def _close(computed, expected: Fraction, tol: Fraction) -> bool:
    if isinstance(computed, HeightInterval):
        # every point of the enclosure must be within tol
        return abs(computed.lo - expected) <= tol and abs(computed.hi - expected) <= tol
    return abs(Fraction(computed) - expected) <= tol


def run_constant_regressions(prec: int = DEFAULT_PRECISION) -> RegressionReport:
    """Recompute every reference constant and compare at its tolerance."""
    refs = load_reference_values()
    report = RegressionReport()
    computed = _computed_scalars(prec)
    for cid, case in refs.items():
        tol = Fraction(case["tol"])
        if case["kind"] == "scalar":
            val = computed[cid]
            ok = _close(val, Fraction(case["value"]), tol)
            shown = f"[{float(val.lo):.12g}, {float(val.hi):.12g}]" if isinstance(val, HeightInterval) else f"{val:.12g}"
        elif cid == "hermite_table":
            table = {str(k): v for k, v in constants.HERMITE_POWER.items()}
            ok = table == {k: Fraction(v) for k, v in case["value"].items()}
            shown = {k: str(v) for k, v in table.items()}
        elif cid == "family_height_offsets":
            table = {str(i): list(pair) for i, pair in constants.FAMILY_HEIGHT_OFFSETS.items()}
            ok = table == {k: [Fraction(v) for v in pair] for k, pair in case["value"].items()}
            shown = {k: [f"{float(v):.4f}" for v in pair] for k, pair in table.items()}
        else:
            ok, shown = False, "no computation registered"
        report.cases.append(CaseResult(cid, case["what"], case["value"], shown, case["tol"], bool(ok)))
    return report


def monotone_decreasing(fn, lo: float, hi: float, samples: int = 200) -> bool:
    """fn strictly decreasing on a log grid of [lo, hi] (a numerical check only)."""
    xs = np.geomspace(lo, hi, samples)
    vals = [fn(x) for x in xs]
    return all(b < a for a, b in zip(vals, vals[1:]))

