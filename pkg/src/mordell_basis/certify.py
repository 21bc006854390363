"""End-to-end certificates that family points extend to a Mordell-Weil basis.

For a set S of s points the pipeline is

1. certified canonical heights of the points and their pairwise sums,
2. the regulator R(S) > 0 (independence),
3. the uniform lower bound lambda = log(m)/12 - 0.147152,
4. Siksek's bound nu <= R^(1/2) (gamma_s / lambda)^(s/2),
5. for each prime p <= floor(bound): every line of (Z/p)^s is shown not to
   lie in pE(Q), so p does not divide nu.

When all primes up to the bound are cleared the index nu is 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from sympy import primerange

from . import __version__, constants
from .arch import TateSeriesConfig, family_shift, family_tail_constants
from .curve import RationalPoint
from .descent import (
    SUPPORTED_PRIMES,
    combination_non_divisibility,
    criteria_2,
    criteria_3,
    division_points,
    index_not_divisible,
    line_count,
    line_representatives,
    normalize_line,
    torsion_trivial,
    XFraction,
)
from .divpoly import DEFAULT_PRIME_BUDGET
from .errors import BoundError, PreconditionError
from .family import FamilyCurve, is_family_member
from .intervals import DEFAULT_PRECISION, HeightInterval, interval_context, iv_log, to_iv
from .lattice import HeightCache, index_bound, regulator, siksek_from_regulator, uniform_lower_bound

SCHEMA_VERSION = 1
P1_SHIFT = "3a2+4b2"
DEFAULT_SHIFT = "2a2+4b2"


def family_config(fc: FamilyCurve, d_kind: str, terms: int = 3, prec: int = DEFAULT_PRECISION) -> TateSeriesConfig:
    z_min, z_max = family_tail_constants(d_kind)
    return TateSeriesConfig(Fraction(family_shift(fc.a, fc.b, d_kind)), z_min, z_max, terms, prec, d_kind)


def family_heights(fc: FamilyCurve, prec: int = DEFAULT_PRECISION, terms: int = 3) -> HeightCache:
    """Height cache shifting P1 by 3a^2+4b^2 and every other point by 2a^2+4b^2."""
    cfg1 = family_config(fc, P1_SHIFT, terms, prec)
    cfg2 = family_config(fc, DEFAULT_SHIFT, terms, prec)
    neg1 = fc.curve.negate(fc.P1)
    return HeightCache(fc.curve, prec, lambda P: cfg1 if P in (fc.P1, neg1) else cfg2, squarefree=True)


def _point_json(P: RationalPoint) -> dict:
    return {"x": str(P.x), "y": str(P.y)}


def _height_json(h) -> dict:
    return {"interval": h.total.to_json(), "exact_part": h.exact_part.to_json(),
            "exact_part_text": str(h.exact_part), "arch_part": h.arch_part.to_json()}


def combo_label(combo, names) -> str:
    parts = []
    for k, nm in zip(combo, names):
        if k == 0:
            continue
        sign = "-" if k < 0 else "+"
        mag = "" if abs(k) == 1 else str(abs(k))
        parts.append(f"{sign}{mag}{nm}")
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def constants_json() -> dict:
    return {
        "uniform_height_offset": str(constants.UNIFORM_HEIGHT_OFFSET),
        "z_max": str(constants.Z_MAX_FAMILY),
        "z_min": {k: str(v) for k, v in constants.Z_MIN_FAMILY.items()},
        "hermite_gamma_s_power_s": {str(k): str(v) for k, v in constants.HERMITE_POWER.items()},
        "family_height_offsets": {f"P{i}": [str(lo), str(hi)] for i, (lo, hi) in constants.FAMILY_HEIGHT_OFFSETS.items()},
    }


@dataclass
class BasisCertificate:
    """JSON-shaped record; every field is a plain JSON value so parse(emit(c)) == c."""

    kind: str
    curve: dict
    basis: list
    points: dict
    toolchain: dict
    constants: dict
    torsion_trivial: bool
    heights: dict
    regulator: dict | None
    lambda_: dict | None
    siksek: dict | None
    index_bound: int | None
    descent: dict
    conclusion: dict
    schema_version: int = SCHEMA_VERSION

    @property
    def certified(self) -> bool:
        return bool(self.conclusion.get("certified"))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "BasisCertificate":
        data = dict(data)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        data["lambda_"] = data.pop("lambda")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "BasisCertificate":
        return cls.from_dict(json.loads(text))


def _require_member(fc: FamilyCurve) -> None:
    if fc.factorization is not None and fc.factorization.complete and fc.factorization.is_squarefree:
        return
    res = is_family_member(fc.a, fc.b)
    if not res:
        raise PreconditionError(f"(a, b) = ({fc.a}, {fc.b}) is not certified in the family: {res.reason}")


def _certify(fc: FamilyCurve, indices: tuple[int, ...], kind: str, prec: int, terms: int,
             prime_budget: int, primes: tuple[int, ...] | None = None) -> BasisCertificate:
    _require_member(fc)
    E = fc.curve
    names = [f"P{i}" for i in indices]
    pts = [fc.point(i) for i in indices]
    s = len(pts)
    hc = family_heights(fc, prec, terms)
    tors = torsion_trivial(fc.m, squarefree=True)

    heights = {nm: _height_json(hc(P)) for nm, P in zip(names, pts)}
    for i in range(s):
        for j in range(i + 1, s):
            S = E.add(pts[i], pts[j])
            heights[f"{names[i]}+{names[j]}"] = _height_json(hc(S))

    toolchain = {
        "package": "mordell_basis", "version": __version__, "precision_bits": prec, "tate_terms": terms,
        "shifts": {nm: (P1_SHIFT if nm == "P1" else DEFAULT_SHIFT) for nm in names} | {"other": DEFAULT_SHIFT},
        "shift_values": {P1_SHIFT: family_shift(fc.a, fc.b, P1_SHIFT), DEFAULT_SHIFT: family_shift(fc.a, fc.b, DEFAULT_SHIFT)},
        "division_prime_budget": prime_budget,
    }
    base = dict(
        kind=kind,
        curve={"a": fc.a, "b": fc.b, "m": fc.m, "factorization": fc.factorization.as_text() if fc.factorization else None},
        basis=names, points={nm: _point_json(P) for nm, P in zip(names, pts)},
        toolchain=toolchain, constants=constants_json(), torsion_trivial=tors, heights=heights,
    )

    def fail(step: str, reason: str, witnesses=None, **extra) -> BasisCertificate:
        fields = dict(regulator=None, lambda_=None, siksek=None, index_bound=None, descent={}) | extra
        concl = {"certified": False, "index": None, "failed_step": step, "reason": reason}
        if witnesses:
            concl["witnesses"] = witnesses
        return BasisCertificate(**base, **fields, conclusion=concl)

    if not tors:
        return fail("torsion", "torsion subgroup not certified trivial")
    reg = regulator(E, pts, prec, hc)
    if reg.lo <= 0:
        return fail("regulator", "regulator enclosure is not positive", regulator=reg.to_json())
    lam = uniform_lower_bound(fc.m, prec)
    if lam.lo <= 0:
        return fail("lambda", "uniform lower bound is not positive", regulator=reg.to_json(), lambda_=lam.to_json())
    sik = siksek_from_regulator(reg, s, lam, prec)
    bound = index_bound(sik)
    needed = tuple(primerange(2, bound + 1)) if primes is None else tuple(primes)
    descent: dict = {}
    extra = dict(regulator=reg.to_json(), lambda_=lam.to_json(), siksek=sik.to_json(), index_bound=bound)
    unsupported = [p for p in needed if p not in SUPPORTED_PRIMES]
    for p in needed:
        if p in unsupported:
            continue
        res = combination_non_divisibility(E, pts, p, None, hc, lam, exhaustive=True, prime_budget=prime_budget)
        lines = []
        for combo, r in res.items():
            entry = r.to_json()
            entry["label"] = combo_label(combo, names)
            lines.append(entry)
        descent[str(p)] = {"lines": lines, "line_count": line_count(s, p),
                           "not_divisible": index_not_divisible(s, p, res)}
    extra["descent"] = descent
    if unsupported:
        return fail("descent", f"primes {unsupported} below the index bound are not supported", **extra)
    bad = [p for p, d in descent.items() if not d["not_divisible"]]
    if bad:
        witnesses = [ln for p in bad for ln in descent[p]["lines"] if ln["status"] != "ProvenNotDivisible"]
        return fail("descent", f"p = {', '.join(bad)} not excluded", witnesses, **extra)
    if kind == "rank3":
        concl = {"certified": True, "independent": True, "rank_at_least": s,
                 "index_coprime_to": [int(p) for p in descent], "index": None}
        if not needed or bound < 2:
            concl["index"] = 1
    else:
        concl = {"certified": True, "index": 1}
    return BasisCertificate(**base, **extra, conclusion=concl)


def certify_pair(fc: FamilyCurve, pair: tuple[int, int], prec: int = DEFAULT_PRECISION, terms: int = 3,
                 prime_budget: int = DEFAULT_PRIME_BUDGET) -> BasisCertificate:
    """Certificate that {P_i, P_j} extends to a basis (lattice index 1)."""
    i, j = pair
    if i == j or {i, j} - {1, 2, 3}:
        raise PreconditionError(f"pair must be two distinct indices in 1..3, got {pair}")
    return _certify(fc, (i, j), "pair", prec, terms, prime_budget)


PAIRS = ((1, 2), (2, 3), (3, 1))


def certify_all_pairs(fc: FamilyCurve, prec: int = DEFAULT_PRECISION, terms: int = 3,
                      prime_budget: int = DEFAULT_PRIME_BUDGET) -> list[BasisCertificate]:
    return [certify_pair(fc, p, prec, terms, prime_budget) for p in PAIRS]


def certify_rank3(fc: FamilyCurve, prec: int = DEFAULT_PRECISION, terms: int = 3,
                  prime_budget: int = DEFAULT_PRIME_BUDGET) -> BasisCertificate:
    """Independence of P1, P2, P3 and coprimality of their index to 2 and 3."""
    return _certify(fc, (1, 2, 3), "rank3", prec, terms, prime_budget, primes=(2, 3))


def check_independent_points(curve, points, prec: int = DEFAULT_PRECISION, heights=None) -> HeightInterval:
    """Regulator of an arbitrary point list; raises on infinity, repeats or dependence."""
    if any(P.is_infinity for P in points):
        raise PreconditionError("the point at infinity cannot be part of an independent set")
    if len(set(points)) != len(points):
        raise PreconditionError("repeated point")
    reg = regulator(curve, points, prec, heights)
    if reg.lo <= 0:
        raise BoundError("points are not certified independent (regulator enclosure reaches 0)")
    return reg


# ---------------------------------------------------------------------------
# independent checker: reads only the certificate

def _iv(d: dict, ctx):
    return ctx.mpf([d["lo"], d["hi"]])


def validate_certificate(data: dict | BasisCertificate, recheck_exhaustive: bool = False) -> list[str]:
    """Problems found in a certificate; an empty list means it is internally sound.

    The regulator, lambda, Siksek bound and index bound are recomputed from
    the recorded constants and height intervals. Congruence and height
    verdicts are re-derived; exhaustive ones are trusted unless
    ``recheck_exhaustive`` is set.
    """
    if isinstance(data, BasisCertificate):
        data = data.to_dict()
    problems: list[str] = []
    if data.get("schema_version") != SCHEMA_VERSION:
        return [f"schema_version {data.get('schema_version')!r} unsupported"]
    concl = data["conclusion"]
    if not concl.get("certified"):
        return problems
    prec = int(data["toolchain"]["precision_bits"])
    ctx = interval_context(prec)
    names = data["basis"]
    s = len(names)
    a, b, m = data["curve"]["a"], data["curve"]["b"], data["curve"]["m"]
    if a**6 + 16 * b**6 != m:
        problems.append("m does not match a, b")
    if not data["torsion_trivial"]:
        problems.append("torsion not trivial")

    from .curve import MordellCurve  # local: the checker is otherwise arithmetic-only
    E = MordellCurve(m)
    pts = []
    for nm in names:
        xy = data["points"][nm]
        x, y = Fraction(xy["x"]), Fraction(xy["y"])
        if not E.is_on_curve(x, y):
            problems.append(f"{nm} is not on the curve")
            return problems
        pts.append(E.point(x, y))

    H = {k: _iv(v["interval"], ctx) for k, v in data["heights"].items()}
    G = [[None] * s for _ in range(s)]
    for i in range(s):
        G[i][i] = H[names[i]]
        for j in range(i + 1, s):
            G[i][j] = G[j][i] = (H[f"{names[i]}+{names[j]}"] - H[names[i]] - H[names[j]]) / 2
    if s == 2:
        reg = G[0][0] * G[1][1] - G[0][1] * G[1][0]
    else:
        reg = (G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1])
               - G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0])
               + G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]))
    if not reg.a > 0:
        problems.append("recomputed regulator is not positive")
    if not (_iv(data["regulator"], ctx).a <= reg.b and reg.a <= _iv(data["regulator"], ctx).b):
        problems.append("recorded regulator disagrees with the height intervals")
    offset = Fraction(data["constants"]["uniform_height_offset"])
    lam = iv_log(ctx, m) / 12 - to_iv(ctx, offset)
    if not lam.a > 0:
        problems.append("lambda is not positive")
    gamma = Fraction(data["constants"]["hermite_gamma_s_power_s"][str(s)])
    sik = ctx.sqrt(reg) * ctx.sqrt(to_iv(ctx, gamma)) / lam ** (ctx.mpf(s) / 2)
    bound = math.floor(HeightInterval.from_iv(sik, prec).hi)
    if bound > data["index_bound"]:
        problems.append(f"index bound {data['index_bound']} is below the recomputed {bound}")
    lam_lo = HeightInterval.from_iv(lam, prec).lo

    primes = [int(p) for p in data["descent"]]
    if data["kind"] == "pair" or concl.get("index") == 1:
        missing = [p for p in primerange(2, bound + 1) if p not in primes]
        if missing:
            problems.append(f"no descent recorded for primes {missing}")
    for p_str, block in data["descent"].items():
        p = int(p_str)
        seen = set()
        for ln in block["lines"]:
            combo = tuple(ln["combo"])
            seen.add(normalize_line(combo, p))
            if ln["status"] != "ProvenNotDivisible":
                problems.append(f"p = {p}, {combo}: status {ln['status']}")
                continue
            problems += _check_line(E, pts, p, ln, lam_lo, recheck_exhaustive)
        need = set(line_representatives(s, p))
        if seen != need:
            problems.append(f"p = {p}: lines {sorted(need - seen)} uncovered")
        if len(need) != line_count(s, p):
            problems.append("line count mismatch")
    return problems


def _check_line(E, pts, p, ln, lam_lo, recheck_exhaustive) -> list[str]:
    combo = tuple(ln["combo"])
    crit = ln["criterion"]
    witness = tuple(ln.get("witness", combo))
    if crit.startswith(("2E:", "3E:")):
        lift = crit.endswith("+lift")
        if lift:
            # witness = c*combo + p*w with p not dividing c
            ok = any(all((w - c * k) % p == 0 for w, k in zip(witness, combo)) for c in range(1, p))
            if not ok:
                return [f"p = {p}, {combo}: witness {witness} is not an equivalent lift"]
        Q = E.combination(witness, pts)
        if Q.is_infinity:
            return [f"p = {p}, {combo}: witness is the point at infinity"]
        tag = (criteria_2 if p == 2 else criteria_3)(E.n, XFraction.of(Q))
        if tag is None or not crit.startswith(tag):
            return [f"p = {p}, {combo}: congruence criterion does not hold"]
        return []
    if crit == "height":
        h = ln.get("height")
        if h is None or not p * p * lam_lo > Fraction(h["hi"]):
            return [f"p = {p}, {combo}: height argument does not close"]
        return []
    if crit == "exhaustive":
        if recheck_exhaustive and division_points(E, E.combination(combo, pts), p):
            return [f"p = {p}, {combo}: division point exists"]
        return []
    return [f"p = {p}, {combo}: unknown criterion {crit!r}"]
