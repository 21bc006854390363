"""Canonical heights, the height pairing, regulators and index bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import constants
from .arch import TateSeriesConfig, generic_config, tate_lambda_inf
from .curve import MordellCurve, RationalPoint
from .errors import BoundError, PreconditionError, PrecisionError
from .intervals import DEFAULT_PRECISION, HeightInterval, interval_context, iv_log, to_iv
from .nonarch import ExactLogCombination, hf


@dataclass(frozen=True)
class CanonicalHeight:
    """h = h_f + lambda_inf, with h_f exact and lambda_inf an enclosure."""

    exact_part: ExactLogCombination
    arch_part: HeightInterval
    total: HeightInterval

    @property
    def lo(self) -> Fraction:
        return self.total.lo

    @property
    def hi(self) -> Fraction:
        return self.total.hi


def canonical_height(curve: MordellCurve, P: RationalPoint, prec: int = DEFAULT_PRECISION,
                     config: TateSeriesConfig | None = None, squarefree: bool | None = None,
                     max_prec: int = 1024) -> CanonicalHeight:
    """Certified enclosure of the canonical height (twice the log|x|/2 convention).

    On a precision failure the working precision is doubled up to ``max_prec``.
    """
    if P.is_infinity:
        raise PreconditionError("canonical height of the point at infinity is 0 and not certified here")
    exact = hf(P, curve, squarefree)
    while True:
        cfg = config or generic_config(curve, prec=prec)
        if cfg.prec != prec:
            cfg = TateSeriesConfig(cfg.d, cfg.z_min, cfg.z_max, cfg.terms, prec, cfg.tail_source)
        try:
            arch = tate_lambda_inf(curve, P, cfg)
            total = arch + exact.evaluate(prec)
            return CanonicalHeight(exact, arch, total)
        except PrecisionError:
            if prec * 2 > max_prec:
                raise
            prec *= 2


class HeightCache:
    """Memoized canonical heights on one curve with a fixed configuration rule."""

    def __init__(self, curve: MordellCurve, prec: int = DEFAULT_PRECISION, config_for=None,
                 squarefree: bool | None = None):
        self.curve = curve
        self.prec = prec
        self.config_for = config_for
        self.squarefree = squarefree
        self._cache: dict[RationalPoint, CanonicalHeight] = {}
        self._default_cfg = None

    def _config(self, P: RationalPoint) -> TateSeriesConfig:
        if self.config_for is not None:
            return self.config_for(P)
        if self._default_cfg is None:
            self._default_cfg = generic_config(self.curve, prec=self.prec)
        return self._default_cfg

    def __call__(self, P: RationalPoint) -> CanonicalHeight:
        if P.is_infinity:
            raise PreconditionError("height of the point at infinity requested")
        # h(-P) = h(P)
        key = P if P.beta >= 0 else self.curve.negate(P)
        if key not in self._cache:
            self._cache[key] = canonical_height(self.curve, key, self.prec, self._config(key), self.squarefree)
        return self._cache[key]


def _height_fn(curve, prec, heights):
    return heights if heights is not None else HeightCache(curve, prec)


def pairing(curve: MordellCurve, P: RationalPoint, Q: RationalPoint, prec: int = DEFAULT_PRECISION,
            heights=None) -> HeightInterval:
    """<P, Q> = (h(P + Q) - h(P) - h(Q)) / 2."""
    h = _height_fn(curve, prec, heights)
    if P == Q:
        return h(P).total
    S = curve.add(P, Q)
    if S.is_infinity:
        return -h(P).total
    return (h(S).total - h(P).total - h(Q).total) / 2


def gram_matrix(curve: MordellCurve, points: Sequence[RationalPoint], prec: int = DEFAULT_PRECISION,
                heights=None) -> list[list[HeightInterval]]:
    h = _height_fn(curve, prec, heights)
    s = len(points)
    G = [[None] * s for _ in range(s)]
    for i in range(s):
        G[i][i] = h(points[i]).total
        for j in range(i + 1, s):
            G[i][j] = G[j][i] = pairing(curve, points[i], points[j], prec, h)
    return G


def interval_det(G: list[list[HeightInterval]], prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """Determinant by cofactor expansion in outward-rounded interval arithmetic."""
    ctx = interval_context(prec)
    M = [[e.iv(ctx) for e in row] for row in G]

    def det(rows, cols):
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        total = ctx.mpf(0)
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = M[rows[0]][c] * minor
            total = total + term if k % 2 == 0 else total - term
        return total

    n = len(M)
    if n == 0:
        return HeightInterval.point(1, prec)
    return HeightInterval.from_iv(det(list(range(n)), list(range(n))), prec)


def regulator(curve: MordellCurve, points: Sequence[RationalPoint], prec: int = DEFAULT_PRECISION,
              heights=None) -> HeightInterval:
    if not 1 <= len(points) <= 3:
        raise PreconditionError("regulator is implemented for 1 to 3 points")
    if any(P.is_infinity for P in points):
        raise PreconditionError("the point at infinity cannot be part of an independent set")
    return interval_det(gram_matrix(curve, points, prec, heights), prec)


def hermite(s: int) -> Fraction:
    """gamma_s^s for s = 1..4."""
    try:
        return constants.HERMITE_POWER[s]
    except KeyError:
        raise PreconditionError(f"Hermite constant tabulated for s = 1..4 only, got {s}") from None


def siksek_from_regulator(reg: HeightInterval, s: int, lam, prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """R^(1/2) (gamma_s / lambda)^(s/2) from a regulator enclosure and a lower bound lambda."""
    if reg.lo <= 0:
        raise BoundError("regulator enclosure touches 0; points not certified independent")
    ctx = interval_context(prec)
    lam_iv = lam.iv(ctx) if isinstance(lam, HeightInterval) else to_iv(ctx, Fraction(lam))
    if lam_iv.a <= 0:
        raise BoundError("lambda must be positive")
    # gamma_s^(s/2) = (gamma_s^s)^(1/2)
    val = ctx.sqrt(reg.iv(ctx)) * ctx.sqrt(to_iv(ctx, hermite(s))) / lam_iv ** (ctx.mpf(s) / 2)
    return HeightInterval.from_iv(val, prec)


def siksek_bound(curve: MordellCurve, points: Sequence[RationalPoint], lam, prec: int = DEFAULT_PRECISION,
                 heights=None) -> HeightInterval:
    """Interval for the index bound of Siksek's theorem; certified bound is floor(hi)."""
    reg = regulator(curve, points, prec, heights)
    return siksek_from_regulator(reg, len(points), lam, prec)


def index_bound(siksek: HeightInterval) -> int:
    """floor(hi); an integer hi counts as reachable."""
    return math.floor(siksek.hi)


def uniform_lower_bound(n: int, prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """log(n)/12 - 0.147152; use ``.lo`` as the rigorous lower bound."""
    if n <= 0:
        raise PreconditionError("uniform bound needs n > 0")
    ctx = interval_context(prec)
    return HeightInterval.from_iv(iv_log(ctx, n) / 12 - to_iv(ctx, constants.UNIFORM_HEIGHT_OFFSET), prec)


def pair_index_threshold(m, prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """4 (L/3 + 1.0515)(L/3 + 0.5665) / (3 (L/12 - 0.147152)^2) with L = log m.

    The squared pair bound that is compared against 25 and 49. Defined for
    m > e^2, where it is decreasing.
    """
    ctx = interval_context(prec)
    m = Fraction(m)
    L = iv_log(ctx, m)
    if not L.a > 2:
        raise PreconditionError(f"m = {float(m)} is not above e^2")
    hi2 = to_iv(ctx, constants.FAMILY_HEIGHT_OFFSETS[2][1])
    hi3 = to_iv(ctx, constants.FAMILY_HEIGHT_OFFSETS[3][1])
    lam = L / 12 - to_iv(ctx, constants.UNIFORM_HEIGHT_OFFSET)
    if lam.a <= 0:
        raise PreconditionError("uniform bound is not positive at this m")
    return HeightInterval.from_iv(4 * (L / 3 + hi2) * (L / 3 + hi3) / (3 * lam**2), prec)


def family_height_window(m: int, i: int, prec: int = DEFAULT_PRECISION) -> tuple[HeightInterval, HeightInterval]:
    """Enclosures of log(m)/3 + c_lo and log(m)/3 + c_hi for the family point P_i."""
    lo, hi = constants.FAMILY_HEIGHT_OFFSETS[i]
    ctx = interval_context(prec)
    third = iv_log(ctx, m) / 3
    return (HeightInterval.from_iv(third + to_iv(ctx, lo), prec),
            HeightInterval.from_iv(third + to_iv(ctx, hi), prec))


def strictly_inside_window(h: HeightInterval, window: tuple[HeightInterval, HeightInterval]) -> bool:
    return window[0].hi < h.lo and h.hi < window[1].lo
