"""Hastings-McLeod solution of Painleve II and the Tracy-Widom laws.

The solution of q'' = 2 q^3 + t q with q ~ Ai(t) at +infinity is integrated from
the right with Airy initial data.  Moving left, deviations along the Bi
direction decay, but a deviation along the Ai direction is a change of the
Ablowitz-Segur parameter and is amplified by roughly exp((2 sqrt 2 / 3)|t|^1.5),
about 1e13 at t = -10.  Double precision is therefore not enough.  We use a
Taylor-series integrator in mpmath (default 40 digits), started deep in the
right tail where q and Ai differ only at order Ai^3, and carry the integrals

    I1(t) = int_t^inf q^2,   I2(t) = int_t^inf (s - t) q^2,   Iq(t) = int_t^inf q

as extra components (I1' = -q^2, I2' = -I1, Iq' = -q).  The achieved accuracy
is measured by repeating the integration at lower precision.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import (
    InsufficientRangeError,
    SolverDivergenceError,
    SolverToleranceError,
)

AIRY_SERIES_LIMIT = 8.0
GRID_SPACING = 0.01
START_POINT = 14.0
DIVERGENCE_LIMIT = 1e6
_TAYLOR_ORDER = 30

_airy_ctx = MPContext()
_airy_ctx.dps = 40
_AI0 = _airy_ctx.mpf(3) ** (-_airy_ctx.mpf(2) / 3) / _airy_ctx.gamma(_airy_ctx.mpf(2) / 3)
_AIP0 = _airy_ctx.mpf(3) ** (-_airy_ctx.mpf(1) / 3) / _airy_ctx.gamma(_airy_ctx.mpf(1) / 3)


def _airy_maclaurin(t: float) -> float:
    ctx = _airy_ctx
    x = ctx.mpf(t)
    x3 = x**3
    f = g = ctx.zero
    fk, gk = ctx.one, x
    k = 0
    eps = ctx.mpf(10) ** -45
    while True:
        f += fk
        g += gk
        if abs(fk) < eps and abs(gk) < eps:
            break
        fk = fk * x3 / ((3 * k + 2) * (3 * k + 3))
        gk = gk * x3 / ((3 * k + 3) * (3 * k + 4))
        k += 1
    return float(_AI0 * f - _AIP0 * g)


def _airy_asymptotic(t: float) -> float:
    if t > 0:
        zeta = 2.0 / 3.0 * t**1.5
        total, u, prev = 1.0, 1.0, math.inf
        for k in range(1, 60):
            u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
            term = u / zeta**k
            if term >= prev or term < 1e-17:
                break
            total += (-1) ** k * term
            prev = term
        return math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * t**0.25) * total
    x = -t
    zeta = 2.0 / 3.0 * x**1.5
    even, odd = 1.0, 0.0
    u, prev = 1.0, math.inf
    for k in range(1, 80):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        term = u / zeta**k
        if term >= prev or term < 1e-17:
            break
        # k even -> u_{2j} with sign (-1)^j; k odd -> u_{2j+1} with sign (-1)^j
        j = k // 2
        if k % 2 == 0:
            even += (-1) ** j * term
        else:
            odd += (-1) ** j * term
        prev = term
    phase = zeta - math.pi / 4
    return (math.cos(phase) * even + math.sin(phase) * odd) / (math.sqrt(math.pi) * x**0.25)


def airy(t):
    """Airy function Ai(t); Maclaurin series for |t| <= 8, asymptotics beyond.

    Accepts scalars or arrays.
    """
    if np.ndim(t):
        return np.array([airy(float(s)) for s in np.ravel(t)]).reshape(np.shape(t))
    t = float(t)
    if math.isnan(t):
        return math.nan
    if abs(t) <= AIRY_SERIES_LIMIT:
        return _airy_maclaurin(t)
    if math.isinf(t):
        return 0.0
    return _airy_asymptotic(t)


@dataclass(frozen=True)
class PainleveSolution:
    """Hastings-McLeod solution sampled on a decreasing grid."""

    grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    I_q2: np.ndarray
    I_q2_linear: np.ndarray
    I_q: np.ndarray
    tol: float
    digits: int

    def value_at(self, t: float, field: str = "q") -> float:
        """Cubic Hermite interpolation of a stored field between grid points."""
        g = self.grid[::-1]
        if not g[0] <= t <= g[-1]:
            raise InsufficientRangeError(f"t={t} outside solution range [{g[0]}, {g[-1]}]")
        y = getattr(self, field)[::-1]
        dy = {"q": self.q_prime[::-1], "I_q2": -(self.q[::-1] ** 2),
              "I_q2_linear": -self.I_q2[::-1], "I_q": -self.q[::-1]}.get(field)
        if dy is None:
            return float(np.interp(t, g, y))
        return float(_hermite(g, y, dy, t))


def _hermite(x, y, dy, t):
    i = int(np.clip(np.searchsorted(x, t) - 1, 0, len(x) - 2))
    h = x[i + 1] - x[i]
    s = (t - x[i]) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1]


def _taylor(ctx, t0, y, order):
    """Taylor coefficients of (q, I1, I2, Iq) about t0; y = (q, q', I1, I2, Iq)."""
    q, p, i1, i2, iq = y
    a = [q, p]
    s = []
    c3 = []
    for k in range(order - 1):
        s.append(ctx.fsum(a[i] * a[k - i] for i in range(k + 1)))
        c3.append(ctx.fsum(s[i] * a[k - i] for i in range(k + 1)))
        rhs = 2 * c3[k] + t0 * a[k] + (a[k - 1] if k else 0)
        a.append(rhs / ((k + 1) * (k + 2)))
    for k in range(order - 1, order):
        s.append(ctx.fsum(a[i] * a[k - i] for i in range(k + 1)))
    b = [i1] + [-s[k] / (k + 1) for k in range(order)]
    d = [i2] + [-b[k] / (k + 1) for k in range(order)]
    e = [iq] + [-a[k] / (k + 1) for k in range(order)]
    return a, b, d, e


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _deriv_horner(coeffs, x):
    n = len(coeffs) - 1
    acc = n * coeffs[n]
    for k in range(n - 1, 0, -1):
        acc = acc * x + k * coeffs[k]
    return acc


def _tail_integrals(ctx, t):
    """Integrals over (t, inf) with q replaced by Ai, exact closed forms."""
    ai = ctx.airyai(t)
    aip = ctx.airyai(t, derivative=1)
    i1 = aip**2 - t * ai**2
    i2 = (2 * t * t * ai**2 - 2 * t * aip**2 - ai * aip) / 3
    iq = ctx.quad(ctx.airyai, [t, ctx.inf])
    return ai, aip, i1, i2, iq


def _integrate(grid: np.ndarray, digits: int, t_start: float):
    ctx = MPContext()
    ctx.dps = digits
    order = _TAYLOR_ORDER
    eps = ctx.mpf(10) ** (-(digits - 5))
    t0 = ctx.mpf(t_start)
    y = list(_tail_integrals(ctx, t0))
    out = np.empty((len(grid), 6))
    idx = 0
    n = len(grid)
    t_end = ctx.mpf(grid[-1])
    while idx < n:
        a, b, d, e = _taylor(ctx, t0, y, order)
        scale = max(abs(y[0]), ctx.one)
        h = min((eps * scale / max(abs(a[k]), ctx.mpf(10) ** -300)) ** (ctx.one / k)
                for k in (order - 1, order))
        h = -min(h / ctx.e**2 * 4, ctx.mpf("0.5"))
        if t0 + h < t_end:
            h = t_end - t0
        while idx < n and grid[idx] >= t0 + h - ctx.mpf(10) ** -20:
            tau = ctx.mpf(grid[idx]) - t0
            out[idx] = [float(_horner(a, tau)), float(_deriv_horner(a, tau)),
                        float(_horner(b, tau)), float(_horner(d, tau)), float(_horner(e, tau)), 0.0]
            idx += 1
        y = [_horner(a, h), _deriv_horner(a, h), _horner(b, h), _horner(d, h), _horner(e, h)]
        t0 = t0 + h
        if abs(y[0]) > DIVERGENCE_LIMIT or not ctx.isfinite(y[0]):
            raise SolverDivergenceError(
                f"|q| exceeded {DIVERGENCE_LIMIT:g} near t={float(t0):.3f}; "
                "integration left the Hastings-McLeod branch")
        if y[0] <= 0:
            raise SolverDivergenceError(
                f"q changed sign near t={float(t0):.3f}; integration left the Hastings-McLeod branch")
    return out


def output_grid(t_left: float, t_right: float, spacing: float = GRID_SPACING) -> np.ndarray:
    n = int(math.floor((t_right - t_left) / spacing + 1e-9))
    grid = np.round(t_right - spacing * np.arange(n + 1), 12)
    if grid[-1] - t_left > 1e-9:
        grid = np.append(grid, t_left)
    return grid


def solve_hastings_mcleod(t_left: float = -10.0, t_right: float = 6.0,
                          step_tol: float = 1e-10, digits: Optional[int] = None,
                          spacing: float = GRID_SPACING) -> PainleveSolution:
    """Hastings-McLeod solution on a grid of the given spacing from t_right down to t_left.

    ``step_tol`` is the accuracy required of the stored values of q and the
    integrals, relative to max(1, |value|); it is checked by comparing with a
    run at lower precision, and :class:`SolverToleranceError` is raised if the
    difference exceeds it.
    """
    t_left, t_right, step_tol = float(t_left), float(t_right), float(step_tol)
    if not t_right >= 6.0:
        raise ValueError(f"t_right must be >= 6, got {t_right}")
    if not t_left <= -10.0:
        raise ValueError(f"t_left must be <= -10, got {t_left}")
    if not (0 < step_tol <= 1e-8):
        raise ValueError(f"step_tol must lie in (0, 1e-8], got {step_tol}")
    if digits is None:
        digits = max(40, int(math.ceil(-math.log10(step_tol))) + 25)
    grid = output_grid(t_left, t_right, spacing)
    t_start = max(t_right, START_POINT)
    fine = _integrate(grid, digits, t_start)
    coarse = _integrate(grid, digits - 12, t_start)
    err = np.max(np.abs(fine[:, :5] - coarse[:, :5]) / np.maximum(1.0, np.abs(fine[:, :5])))
    if not err <= step_tol:
        raise SolverToleranceError(
            f"achieved accuracy {err:.3g} does not meet step_tol={step_tol:g}")
    return PainleveSolution(grid, fine[:, 0], fine[:, 1], fine[:, 2], fine[:, 3], fine[:, 4],
                            float(err), digits)


@dataclass(frozen=True)
class TWTable:
    beta: int
    grid: np.ndarray  # decreasing, as in the solution
    cdf: np.ndarray
    pdf: np.ndarray
    sf: np.ndarray  # 1 - cdf without cancellation
    cdf_error: np.ndarray

    def ascending(self):
        """(t, cdf, pdf, sf) with t increasing."""
        return self.grid[::-1], self.cdf[::-1], self.pdf[::-1], self.sf[::-1]

    def cdf_at(self, t):
        """CDF at arbitrary t in range by cubic Hermite interpolation on (cdf, pdf)."""
        g, c, p, _ = self.ascending()
        if np.ndim(t):
            return np.array([self.cdf_at(float(s)) for s in np.ravel(t)]).reshape(np.shape(t))
        t = float(t)
        if not g[0] - 1e-12 <= t <= g[-1] + 1e-12:
            raise InsufficientRangeError(f"t={t} outside table range [{g[0]}, {g[-1]}]")
        return float(_hermite(g, c, p, min(max(t, g[0]), g[-1])))

    def sf_at(self, t: float) -> float:
        """1 - CDF at t, accurate far into the right tail.

        Inside the table this interpolates log(1 - cdf); past its right end,
        where q agrees with Ai to working accuracy, it uses the closed-form
        Airy tail integrals.
        """
        g, _, _, sf = self.ascending()
        t = float(t)
        if t < g[0] - 1e-12:
            raise InsufficientRangeError(f"t={t} below table start {g[0]}")
        if t <= g[-1]:
            return float(np.exp(np.interp(t, g, np.log(sf))))
        return tail_sf(t, self.beta)

    def quantile(self, prob: float) -> float:
        g, c, _, _ = self.ascending()
        if not c[0] < prob < c[-1]:
            raise InsufficientRangeError(f"probability {prob} outside the tabulated range")
        return float(np.interp(prob, c, g))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "cdf", "pdf"])
        g, c, p, _ = self.ascending()
        for row in zip(g, c, p):
            w.writerow([f"{v:.15g}" for v in row])
        return buf.getvalue()


def tail_sf(t: float, beta: int) -> float:
    """1 - F_beta(t) for t >= 6 with q replaced by Ai (relative error ~ Ai(t)^2)."""
    if float(t) < 6.0:
        raise InsufficientRangeError(f"Airy tail form needs t >= 6, got {t}")
    ctx = MPContext()
    ctx.dps = 30
    _, _, _, i2, iq = _tail_integrals(ctx, ctx.mpf(t))
    expo = i2 if beta == 2 else (i2 + iq) / 2
    return float(-ctx.expm1(-expo))


def tw_cdf(solution: PainleveSolution, beta: int) -> TWTable:
    """Tracy-Widom CDF for beta = 2 (GUE) or beta = 1 (GOE).

    F2 = exp(-I2) and F1 = exp(-(I2 + Iq)/2); densities from the exact
    derivatives F2' = F2 I1 and F1' = F1 (I1 + q)/2.
    """
    if beta not in (1, 2) or isinstance(beta, bool):
        raise ValueError(f"beta must be 1 or 2, got {beta!r}")
    g = solution.grid
    if g.min() > -10.0 + 1e-9 or g.max() < 6.0 - 1e-9:
        raise InsufficientRangeError("solution must span at least [-10, 6]")
    if beta == 2:
        expo = solution.I_q2_linear
        rate = solution.I_q2
    else:
        expo = 0.5 * (solution.I_q2_linear + solution.I_q)
        rate = 0.5 * (solution.I_q2 + solution.q)
    cdf = np.exp(-expo)
    sf = -np.expm1(-expo)
    pdf = cdf * rate
    err = cdf * solution.tol * (1.0 + np.abs(expo))
    return TWTable(beta, g.copy(), cdf, pdf, sf, err)


def tw_right_tail_exponent(table: TWTable, t_min: float = 4.0, t_max: float = 6.0) -> float:
    """Least-squares alpha in log(1 - cdf) = c - alpha t^{3/2} over [t_min, t_max]."""
    g, _, _, sf = table.ascending()
    if g[-1] < t_min:
        raise InsufficientRangeError(f"table ends at t={g[-1]}, below {t_min}")
    mask = (g >= t_min - 1e-9) & (g <= t_max + 1e-9)
    if mask.sum() < 3:
        raise InsufficientRangeError("fewer than three table points in the fit window")
    tail = sf[mask]
    if np.any(tail <= np.finfo(float).tiny):
        raise InsufficientRangeError("1 - cdf underflows in the fit window")
    u = g[mask] ** 1.5
    slope, _ = np.polyfit(u, np.log(tail), 1)
    return float(-slope)


def painleve_residual(solution: PainleveSolution) -> np.ndarray:
    """|q'' - 2q^3 - tq| / (1 + |q''|) at interior points, q'' by five-point differences."""
    t, q = solution.grid, solution.q
    h = t[0] - t[1]
    qpp = (-q[:-4] + 16 * q[1:-3] - 30 * q[2:-2] + 16 * q[3:-1] - q[4:]) / (12 * h * h)
    tm, qm = t[2:-2], q[2:-2]
    return np.abs(qpp - 2 * qm**3 - tm * qm) / (1 + np.abs(qpp))


def f1_substitution(solution: PainleveSolution):
    """Map q to f1(x) = -(2^{5/3}/pi^2) q(t), x = 2^{-2/3} t.

    Returns (x, f1, residual) where the residual of f1'' - 4 x f1 - (pi^4/2) f1^3
    is taken with five-point differences in x at interior points (x[2:-2]).
    """
    t, q = solution.grid, solution.q
    x = 2 ** (-2 / 3) * t
    f1 = -(2 ** (5 / 3) / math.pi**2) * q
    hx = x[0] - x[1]
    fpp = (-f1[:-4] + 16 * f1[1:-3] - 30 * f1[2:-2] + 16 * f1[3:-1] - f1[4:]) / (12 * hx * hx)
    xm, fm = x[2:-2], f1[2:-2]
    return x, f1, fpp - 4 * xm * fm - (math.pi**4 / 2) * fm**3


def f1_boundary(x):
    """Large-x behaviour -sqrt(2/pi^5) exp(-4 x^{3/2}/3) / x^{1/4}."""
    x = np.asarray(x, dtype=float)
    return -math.sqrt(2 / math.pi**5) * np.exp(-4 / 3 * x**1.5) / x**0.25
