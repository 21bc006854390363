"""Certified archimedean local height on y^2 = x^3 + n.

The height is evaluated with Tate's series on a model shifted by x' = x + d
with d^3 > n, so every real point has x' > 0:

    lambda_inf(P) = log x'(P') + 1/4 * sum_k 4^-k log z'(2^k P')

The first ``terms`` summands are computed from exact rational doublings; the
remainder is enclosed between 4^-N/3 * log z_min and 4^-N/3 * log z_max.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from sympy import integer_nthroot

from . import constants
from .curve import MordellCurve, RationalPoint, WeierstrassModel
from .errors import BoundError, PreconditionError, PrecisionError
from .intervals import DEFAULT_PRECISION, HeightInterval, interval_context, iv_log, to_iv


@dataclass(frozen=True)
class TateSeriesConfig:
    """Shift, number of explicit terms and tail bounds for one series evaluation."""

    d: Fraction
    z_min: Fraction
    z_max: Fraction
    terms: int = 3
    prec: int = DEFAULT_PRECISION
    tail_source: str = "adaptive"

    def __post_init__(self):
        if self.terms < 1:
            raise ValueError("at least one explicit term is required")
        if not 0 < self.z_min <= self.z_max:
            raise ValueError(f"need 0 < z_min <= z_max, got {self.z_min}, {self.z_max}")


@dataclass(frozen=True)
class PeriodData:
    omega1: HeightInterval
    tau_im: HeightInterval
    q: HeightInterval


# ---------------------------------------------------------------------------
# series pieces

def z_w_functions(model: WeierstrassModel, x) -> tuple[Fraction, Fraction, Fraction]:
    """(t, z, w) at x, with t = 1/x; x(2P) = z/w."""
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("z and w are undefined at x = 0")
    t = 1 / x
    t2 = t * t
    z = 1 - model.b4 * t2 - 2 * model.b6 * t2 * t - model.b8 * t2 * t2
    w = 4 * t + model.b2 * t2 + 2 * model.b4 * t2 * t + model.b6 * t2 * t2
    return t, z, w


def shifted_orbit(curve: WeierstrassModel, P: RationalPoint, d, count: int) -> list[tuple[Fraction, Fraction]]:
    """[(x'(2^k P'), z'(2^k P')) for k < count] on the model shifted by d."""
    shifted = curve.shift(d)
    xp = P.x + Fraction(d)
    out = []
    for _ in range(count):
        _, z, w = z_w_functions(shifted, xp)
        out.append((xp, z))
        if w == 0:
            raise PreconditionError("orbit reached a 2-torsion point")
        xp = z / w
    return out


def tail_interval(ctx, terms: int, z_min: Fraction, z_max: Fraction):
    coeff = Fraction(1, 3 * 4**terms)
    lo = to_iv(ctx, coeff) * iv_log(ctx, z_min)
    hi = to_iv(ctx, coeff) * iv_log(ctx, z_max)
    return ctx.mpf([lo.a, hi.b])


def tate_lambda_inf(curve: MordellCurve, P: RationalPoint, cfg: TateSeriesConfig) -> HeightInterval:
    """Enclosure of the archimedean local height of P."""
    if P.is_infinity:
        raise PreconditionError("no archimedean height at infinity")
    d = Fraction(cfg.d)
    if d**3 <= curve.n:
        raise PreconditionError(f"shift d = {d} does not satisfy d^3 > n = {curve.n}")
    ctx = interval_context(cfg.prec)
    orbit = shifted_orbit(curve, P, d, cfg.terms)
    total = iv_log(ctx, orbit[0][0])
    for k, (xp, z) in enumerate(orbit):
        if not (xp > 0 and cfg.z_min <= z <= cfg.z_max):
            # the tail bounds must at least hold on the explicit terms
            raise BoundError(f"orbit value z' = {float(z)} outside [{float(cfg.z_min)}, {float(cfg.z_max)}]")
        total += iv_log(ctx, z) / 4 ** (k + 1)
    total += tail_interval(ctx, cfg.terms, cfg.z_min, cfg.z_max)
    out = HeightInterval.from_iv(total, cfg.prec)
    if out.width > 1:
        raise PrecisionError("archimedean enclosure is wider than 1")
    return out


# ---------------------------------------------------------------------------
# tail bounds

def family_tail_constants(d_kind: str) -> tuple[Fraction, Fraction]:
    """(z_min, z_max) valid on every E_{a,b} for the given shift family."""
    if d_kind not in constants.Z_MIN_FAMILY:
        raise PreconditionError(f"unknown shift kind {d_kind!r}; expected one of {constants.D_KINDS}")
    return constants.Z_MIN_FAMILY[d_kind], constants.Z_MAX_FAMILY


def family_shift(a: int, b: int, d_kind: str) -> int:
    if d_kind == "2a2+4b2":
        return 2 * a * a + 4 * b * b
    if d_kind == "3a2+4b2":
        return 3 * a * a + 4 * b * b
    raise PreconditionError(f"unknown shift kind {d_kind!r}")


def cube_root_upper(n: int, bits: int = 40) -> Fraction:
    """A rational upper bound for the real cube root of n, within 2^-bits."""
    scale = 1 << bits
    r, exact = integer_nthroot(abs(n) * scale**3, 3)
    if n >= 0:
        return Fraction(r if exact else r + 1, scale)
    return Fraction(-r, scale)


def default_shift(n: int) -> int:
    """Twice the least positive integer d0 with d0^3 > n."""
    d0 = 1
    if n > 0:
        d0 = integer_nthroot(n, 3)[0] + 1
    return 2 * d0


def _z_poly_bounds(b4, b6, b8, tl: Fraction, th: Fraction) -> Fraction:
    # lower bound of 1 - b4 t^2 - 2 b6 t^3 - b8 t^4 over 0 <= tl <= t <= th
    lo = Fraction(1)
    for c, j in ((-b4, 2), (-2 * b6, 3), (-b8, 4)):
        lo += c * (tl**j if c >= 0 else th**j)
    return lo


def _z_at(b4, b6, b8, t: Fraction) -> Fraction:
    t2 = t * t
    return 1 - b4 * t2 - 2 * b6 * t2 * t - b8 * t2 * t2


def adaptive_z_bounds(model: WeierstrassModel, x_min, depth: int = 0, x_start=None,
                      rel_tol: Fraction = Fraction(1, 10**6), max_pieces: int = 4096) -> tuple[Fraction, Fraction]:
    """(z_min, z_max) valid for every real point of ``model`` with x >= x_min > 0.

    z_max is the crude bound 1 + |b4|/x^2 + 2|b6|/x^3 + |b8|/x^4. z_min is a
    branch-and-bound lower bound of the quartic z(t) on t in (0, 1/x_min],
    so it covers every term of the tail, not just a sampled orbit. If
    ``x_start`` is given, the first ``depth`` orbit values are checked to lie
    inside the returned bounds.
    """
    x_min = Fraction(x_min)
    if x_min <= 0:
        raise PreconditionError("x_min must be positive")
    b4, b6, b8 = model.b4, model.b6, model.b8
    z_max = 1 + abs(b4) / x_min**2 + 2 * abs(b6) / x_min**3 + abs(b8) / x_min**4
    T = 1 / x_min
    best = min(Fraction(1), _z_at(b4, b6, b8, T))
    heap = [(_z_poly_bounds(b4, b6, b8, Fraction(0), T), Fraction(0), T)]
    z_min = None
    while heap:
        low, tl, th = heap[0]
        if low >= best - rel_tol * abs(best) or len(heap) >= max_pieces:
            z_min = low
            break
        heapq.heappop(heap)
        mid = (tl + th) / 2
        best = min(best, _z_at(b4, b6, b8, mid))
        for a, b in ((tl, mid), (mid, th)):
            heapq.heappush(heap, (_z_poly_bounds(b4, b6, b8, a, b), a, b))
    if z_min is None or z_min <= 0:
        raise BoundError("z' could not be bounded away from 0; raise the shift")
    # keep the stored rationals short
    z_min = Fraction(int(z_min * 10**12), 10**12)
    if z_min <= 0:
        raise BoundError("z' lower bound underflowed")
    z_max = Fraction(-int(-z_max * 10**12 // 1), 10**12)
    if x_start is not None and depth:
        xp = Fraction(x_start)
        for _ in range(depth):
            _, z, w = z_w_functions(model, xp)
            if not z_min <= z <= z_max:
                raise BoundError(f"orbit value z' = {float(z)} escapes [{float(z_min)}, {float(z_max)}]")
            xp = z / w
    return z_min, z_max


def generic_config(curve: MordellCurve, terms: int = 3, prec: int = DEFAULT_PRECISION,
                   d=None) -> TateSeriesConfig:
    """Shift and validated tail bounds for an arbitrary Mordell curve."""
    d = Fraction(default_shift(curve.n) if d is None else d)
    x_min = d - cube_root_upper(curve.n)
    z_min, z_max = adaptive_z_bounds(curve.shift(d), x_min)
    return TateSeriesConfig(d, z_min, z_max, terms, prec, "adaptive")


# ---------------------------------------------------------------------------
# periods and the uniform archimedean bound

def _as_iv(ctx, v):
    return v.iv(ctx) if isinstance(v, HeightInterval) else to_iv(ctx, v)


def agm_iv(ctx, a, b, max_iter: int = 200):
    """Enclosure of AGM(a, b) for interval inputs with positive entries."""
    if a.a <= 0 or b.a <= 0:
        raise ValueError("AGM needs positive arguments")
    prev = None
    for _ in range(max_iter):
        lo = min(a.a, b.a)
        hi = max(a.b, b.b)
        enclosure = ctx.mpf([lo, hi])
        width = hi - lo
        if prev is not None and width >= prev:
            return enclosure
        prev = width
        a, b = (a + b) / 2, ctx.sqrt(a * b)
    return enclosure


def agm(x, y, prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """Arithmetic-geometric mean of two positive reals (exact or interval)."""
    ctx = interval_context(prec)
    return HeightInterval.from_iv(agm_iv(ctx, _as_iv(ctx, x), _as_iv(ctx, y)), prec)


def _unit_agms(ctx):
    s3 = ctx.sqrt(ctx.mpf(3))
    r = 2 * ctx.sqrt(s3)
    return agm_iv(ctx, r, ctx.sqrt(2 * s3 - 3)), agm_iv(ctx, r, ctx.sqrt(2 * s3 + 3))


def periods(n: int, prec: int = DEFAULT_PRECISION) -> PeriodData:
    """Real period, Im(omega2/omega1) and nome q of y^2 = x^3 + n, n > 0."""
    if n <= 0:
        raise PreconditionError("periods are implemented for n > 0")
    ctx = interval_context(prec)
    m1, m2 = _unit_agms(ctx)
    omega_unit = 2 * ctx.pi / m1
    omega1 = omega_unit * ctx.exp(-ctx.log(ctx.mpf(n)) / 6)
    # Im(w2/w1) with w2 = -w1/2 + i*pi/AGM(r, sqrt(2*sqrt3 + 3))
    tau_im = m1 / (2 * m2)
    q = -ctx.exp(-2 * ctx.pi * tau_im)
    return PeriodData(*(HeightInterval.from_iv(v, prec) for v in (omega1, tau_im, q)))


def theta_trivial_bound(q: HeightInterval) -> HeightInterval:
    """1 + |q| + |q|^3 + |q|^6 + |q|^10 / (1 - |q|^5), an upper bound for |theta|."""
    ctx = interval_context(q.prec)
    aq = abs(q.iv(ctx))
    return HeightInterval.from_iv(1 + aq + aq**3 + aq**6 + aq**10 / (1 - aq**5), q.prec)


def lambda_inf_lower_bound(n: int, P: RationalPoint, prec: int = DEFAULT_PRECISION) -> HeightInterval:
    """Enclosure of log(n)/12 + log|beta/delta^3|/2 + 0.31494685 (a lower bound for lambda_inf)."""
    if n <= 0:
        raise PreconditionError("the bound is stated for n > 0")
    if P.is_infinity or P.beta == 0:
        raise PreconditionError("the bound needs a point with y != 0")
    ctx = interval_context(prec)
    val = (iv_log(ctx, n) / 12 + iv_log(ctx, Fraction(P.beta, P.delta**3)) / 2
           + to_iv(ctx, constants.ARCH_LOWER_CONSTANT))
    return HeightInterval.from_iv(val, prec)
