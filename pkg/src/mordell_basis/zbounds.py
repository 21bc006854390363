"""Numerical scans behind the uniform z'-bounds on the family curves.

With Y = (a/b)^2, d = c a^2 + 4 b^2 (c = 2 or 3) and u = x/d, the shifted
duplication numerator is

    f(u, Y) = (u^4 + 4u^3 + rho (4 - 8u)) / (u + 1)^4,   rho = m / d^3,

on u >= u0 = -rho^(1/3). Its interior critical point is
u2 = -rho + sqrt(rho^2 + 2 rho), and g(Y) bounds f from above.

The scans are floating point (numpy) and are verification aids, not proofs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from . import constants
from .errors import PreconditionError

_C = {"2a2+4b2": 2, "3a2+4b2": 3}


def _c(d_kind: str) -> int:
    try:
        return _C[d_kind]
    except KeyError:
        raise PreconditionError(f"unknown shift kind {d_kind!r}") from None


def rho(Y, c: int = 2):
    """m / d^3 as a function of Y = (a/b)^2."""
    return (Y**3 + 16) / (c * Y + 4) ** 3


def f_z(u, Y, c: int = 2):
    r = rho(Y, c)
    return (u**4 + 4 * u**3 + r * (4 - 8 * u)) / (u + 1) ** 4


def u0(Y, c: int = 2):
    return -np.cbrt(rho(Y, c))


def u2(Y, c: int = 2):
    r = rho(Y, c)
    return -r + np.sqrt(r * r + 2 * r)


def g_upper(Y, c: int = 2):
    """(8 m^(4/3) + 4 d m) / (d - m^(1/3))^4 in terms of Y."""
    r = rho(Y, c)
    t = np.cbrt(r)
    return (8 * r * t + 4 * r) / (1 - t) ** 4


def f_at_u0(Y, c: int = 2):
    """9 m^(4/3) / (d - m^(1/3))^4, the value of f at the left endpoint."""
    r = rho(Y, c)
    t = np.cbrt(r)
    return 9 * r * t / (1 - t) ** 4


def critical_y(d_kind: str) -> float:
    """Y at which f(u2(Y), Y) and f(u0(Y), Y) are extremal: sqrt(8) or sqrt(12)."""
    return float(np.sqrt({2: 8, 3: 12}[_c(d_kind)]))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    y_points: int = 241
    u_points: int = 241
    y_lo: float = 1e-3
    y_hi: float = 1e3
    u_hi: float = 1e3

    def __post_init__(self):
        if self.y_points < 1 or self.u_points < 2:
            raise ValueError("grid must contain at least one Y value and two u values")
        if not 0 < self.y_lo <= self.y_hi:
            raise ValueError("need 0 < y_lo <= y_hi")


@dataclass
class ZBoundReport:
    d_kind: str
    z_min: float
    z_max: float
    observed_min: float
    observed_max: float
    argmin: tuple[float, float]
    argmax: tuple[float, float]
    n_points: int
    violations: list[tuple[float, float, float]] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "d_kind": self.d_kind,
            "z_min": self.z_min,
            "z_max": self.z_max,
            "observed_min": self.observed_min,
            "observed_max": self.observed_max,
            "argmin": {"u": self.argmin[0], "Y": self.argmin[1]},
            "argmax": {"u": self.argmax[0], "Y": self.argmax[1]},
            "n_points": self.n_points,
            "violations": [{"u": u, "Y": y, "f": v} for u, y, v in self.violations[:20]],
            "violation_count": len(self.violations),
            "checks": self.checks,
            "ok": self.ok,
        }


def verify_zprime_bounds(d_kind: str, grid: GridSpec | None = None,
                         z_min: float | None = None, z_max: float | None = None) -> ZBoundReport:
    """Scan f(u, Y) on a grid and check it stays inside (z_min, z_max).

    The Y grid is log-spaced and always contains the critical Y; each u row
    runs from u0(Y) to ``u_hi`` (log-spaced above the critical point) and
    contains u2(Y).
    """
    grid = grid or GridSpec()
    c = _c(d_kind)
    zmin = float(constants.Z_MIN_FAMILY[d_kind]) if z_min is None else float(z_min)
    zmax = float(constants.Z_MAX_FAMILY) if z_max is None else float(z_max)
    yc = critical_y(d_kind)
    ys = np.unique(np.append(np.geomspace(grid.y_lo, grid.y_hi, grid.y_points), yc))
    us_lo, us_u2 = u0(ys, c), u2(ys, c)
    n = grid.u_points
    # fraction grid between u0 and u2, then log-spaced out to u_hi
    frac = np.linspace(0.0, 1.0, n // 2 + 1)[:-1]  # u2 itself starts the tail
    tail = np.geomspace(1.0, max(2.0, grid.u_hi), n - n // 2)
    U = np.concatenate([
        us_lo[:, None] + (us_u2 - us_lo)[:, None] * frac[None, :],
        us_u2[:, None] + (grid.u_hi - us_u2)[:, None] * (tail[None, :] - 1) / (tail[-1] - 1),
    ], axis=1)
    Yg = np.broadcast_to(ys[:, None], U.shape)
    F = f_z(U, Yg, c)
    i_min = np.unravel_index(np.argmin(F), F.shape)
    i_max = np.unravel_index(np.argmax(F), F.shape)
    bad = np.argwhere(~((F > zmin) & (F < zmax)))
    violations = [(float(U[i, j]), float(Yg[i, j]), float(F[i, j])) for i, j in bad]
    # worst offenders first: furthest outside the interval
    violations.sort(key=lambda t: -max(zmin - t[2], t[2] - zmax))
    report = ZBoundReport(
        d_kind, zmin, zmax, float(F[i_min]), float(F[i_max]),
        (float(U[i_min]), float(Yg[i_min])), (float(U[i_max]), float(Yg[i_max])),
        int(F.size), violations,
    )
    f_crit = float(f_z(u2(yc, c), yc, c))
    expected_min = 0.06232685 if c == 2 else 0.03806854
    report.checks["min_matches_critical_value"] = abs(report.observed_min - expected_min) < 1e-5
    report.checks["critical_value"] = abs(f_crit - expected_min) < 1e-6
    # g bounds the x < 0 branch; x >= 0 gives f < 9 directly
    report.checks["upper_bound_dominates"] = bool(np.all(F <= np.maximum(g_upper(Yg, c), 9.0) * (1 + 1e-12)))
    if c == 2:
        report.checks["left_endpoint_bound"] = bool(np.all(f_at_u0(ys, c) >= 0.75725080 - 1e-6))
    return report


# ---------------------------------------------------------------------------
# one-variable extrema along the orbit of P2 (b = 1, a = X)

def _orbit_x(X, steps: int):
    """x'(2^k P2') for k = 0..steps on the model shifted by 2X^2 + 4, b = 1."""
    m = X**6 + 16
    d = 2 * X**2 + 4
    x = 2 * X
    out = []
    for _ in range(steps + 1):
        out.append((x, d, m))
        x = x * (x**3 - 8 * m) / (4 * (x**3 + m))
    return out


def p2_cube_ratio(X):
    """x'(P2')^3 / m = (2X^2 + 2X + 4)^3 / (X^6 + 16)."""
    return (2 * X**2 + 2 * X + 4) ** 3 / (X**6 + 16)


def p2_series_term(X, k: int):
    """4^-(k+1) log z'(2^k P2') at a = X, b = 1."""
    with mpmath.workdps(40):
        X = mpmath.mpf(X)
        x, d, m = _orbit_x(X, k)[k]
        z = (x**4 + 4 * d * x**3 - 8 * m * x + 4 * d * m) / (x + d) ** 4
        return mpmath.log(z) / 4 ** (k + 1)


def extremum(fn, kind: str, x_lo: float = 1e-3, x_hi: float = 1e3, samples: int = 4001) -> tuple[float, float]:
    """(argument, value) of the global min or max of fn on [x_lo, x_hi].

    A log-spaced grid locates the best sample, then a bounded scalar
    minimizer refines it inside the neighbouring grid cell.
    """
    sign = 1.0 if kind == "min" else -1.0
    xs = np.geomspace(x_lo, x_hi, samples)
    vals = np.array([sign * float(fn(x)) for x in xs])
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, samples - 1)]
    res = minimize_scalar(lambda t: sign * float(fn(t)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    if res.fun <= vals[i]:
        return float(res.x), sign * float(res.fun)
    return float(xs[i]), sign * float(vals[i])
