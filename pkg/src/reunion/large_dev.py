"""Large-N free energies of two-dimensional Yang-Mills on the sphere.

Weak coupling (A < pi^2) has the closed form F_-(A).  Strong coupling has no
closed form; its derivative is parametrized by an elliptic modulus k solving

    (2 E(k) - k'^2 K(k)) K(k) = A / 4,     k'^2 = 1 - k^2,

and F_+ is obtained by integrating the derivative up from the critical point
A = pi^2, where both phases coincide.

Sign conventions.  With these F_- and the large-deviation tails
G ~ exp(-N^2 (F_- - F_+)), the strong phase sits *below* the weak one:
F_+ - F_- ~ -(A - pi^2)^3 / (3 pi^6) just above pi^2.  The derivative used here is

    F_+'(A) = -1/24 - (a^2/6 - a^2 k'^2/12 + a^4 k'^4 A / 96),    a = 4K/A,

which equals half the second moment of the saturated eigenvalue density,
matches F_-'(pi^2) = -1/24 - 1/(2 pi^2) at k = 0 and tends to -1/12 for
large A.  The combination with the opposite overall sign does not join
continuously onto F_-'.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import NoRootError
from .exact_sums import ModelKind, Group

PI2 = math.pi**2
_LOG_KP_MIN = -700.0  # log k' at the far end of the bracket


def _agm(b: float) -> tuple[float, float]:
    """K and E from the AGM started at (1, k'), with k^2 = 1 - k'^2."""
    a, c = 1.0, math.sqrt(max(0.0, (1.0 - b) * (1.0 + b)))
    power = 0.5
    acc = power * c * c
    for _ in range(64):
        if c <= 1e-15 * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        power *= 2.0
        acc += power * c * c
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - acc)


def elliptic_KE(k: float) -> tuple[float, float]:
    """Complete elliptic integrals K(k), E(k) by the arithmetic-geometric mean."""
    k = float(k)
    if not (0.0 <= abs(k) < 1.0):
        raise ValueError(f"elliptic modulus must satisfy 0 <= k < 1, got {k}")
    return _agm(math.sqrt((1.0 - k) * (1.0 + k)))


@dataclass(frozen=True)
class EllipticPoint:
    A: float
    k: float
    K: float
    E: float
    a: float
    kprime: float = 1.0

    @property
    def kprime2(self) -> float:
        return self.kprime * self.kprime

    @property
    def residual(self) -> float:
        """Relative residual of the defining constraint."""
        lhs = (2.0 * self.E - self.kprime2 * self.K) * self.K
        return abs(lhs - self.A / 4.0) / (self.A / 4.0)


def _constraint(log_kp: float) -> float:
    kp = math.exp(log_kp)
    K, E = _agm(kp)
    return (2.0 * E - kp * kp * K) * K


def solve_modulus(A: float) -> EllipticPoint:
    """Elliptic modulus k(A) for A >= pi^2.

    The unknown is log k' (k' the complementary modulus), which keeps the
    constraint well conditioned as k -> 1 at large A.  Bisection, then a few
    secant steps.
    """
    A = float(A)
    if not math.isfinite(A) or A < PI2 * (1.0 - 1e-14):
        raise NoRootError(f"no elliptic modulus for A = {A} < pi^2 (weak coupling)")
    target = A / 4.0
    if A <= PI2:
        K = E = math.pi / 2
        return EllipticPoint(A, 0.0, K, E, 4.0 * K / A, 1.0)
    lo, hi = _LOG_KP_MIN, 0.0  # constraint decreases in log k'
    if _constraint(lo) < target:
        raise NoRootError(f"A = {A} beyond the reach of the modulus bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _constraint(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(lo)):
            break
    x0, x1 = lo, hi
    f0, f1 = _constraint(x0) - target, _constraint(x1) - target
    for _ in range(4):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (lo <= x2 <= hi):
            break
        x0, f0 = x1, f1
        x1, f1 = x2, _constraint(x2) - target
    x = x1 if abs(f1) <= abs(f0) else x0
    kp = math.exp(x)
    K, E = _agm(kp)
    k = math.sqrt((1.0 - kp) * (1.0 + kp))
    return EllipticPoint(A, k, K, E, 4.0 * K / A, kp)


def f_minus(A: float) -> float:
    """Weak-coupling free energy -3/4 - A/24 - log(A)/2."""
    A = float(A)
    if not A > 0:
        raise ValueError(f"A must be positive, got {A}")
    return -0.75 - A / 24.0 - 0.5 * math.log(A)


def f_minus_prime(A: float) -> float:
    return -1.0 / 24.0 - 0.5 / A


def f_plus_prime(A: float) -> float:
    """Strong-coupling derivative dF_+/dA for A >= pi^2."""
    p = solve_modulus(A)
    a2 = p.a * p.a
    kp2 = p.kprime2
    return -1.0 / 24.0 - (a2 / 6.0 - a2 * kp2 / 12.0 + a2 * a2 * kp2 * kp2 * A / 96.0)


def f_plus_prime_literal(A: float) -> float:
    """The derivative combination with the opposite overall sign, kept for comparison."""
    p = solve_modulus(A)
    a2 = p.a * p.a
    kp2 = p.kprime2
    return a2 / 6.0 - a2 * kp2 / 12.0 - 1.0 / 24.0 + a2 * a2 * kp2 * kp2 * A / 96.0


def delta(A: float, tol: float = 1e-13) -> float:
    """F_+(A) - F_-(A) for A >= pi^2, integrated directly to avoid cancellation."""
    A = float(A)
    if A < PI2:
        raise NoRootError(f"F_+ is defined only for A >= pi^2, got {A}")
    if A == PI2:
        return 0.0
    val, _ = integrate.quad(lambda s: f_plus_prime(s) - f_minus_prime(s), PI2, A,
                            epsabs=tol, epsrel=1e-11, limit=200)
    return val


def f_plus(A: float) -> float:
    """Strong-coupling free energy F_-(pi^2) + integral of F_+' from pi^2."""
    return f_minus(A) + delta(A)


def gamma_fn(x: float) -> float:
    """gamma(x) = sqrt(1-x) - (x/2) log((1+sqrt(1-x))/(1-sqrt(1-x))), 0 < x <= 1."""
    x = float(x)
    if not (0.0 < x <= 1.0):
        raise ValueError(f"gamma_fn needs 0 < x <= 1, got {x}")
    if x == 1.0:
        return 0.0
    s = math.sqrt(1.0 - x)
    # log((1+s)/(1-s)) = 2 atanh(s), accurate as s -> 0
    return s - x * math.atanh(s)


def gww_free_energy(b: float) -> float:
    """Gross-Witten-Wadia free energy with its third-order break at b = 1/2."""
    b = float(b)
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    if b <= 0.5:
        return b * b
    return 2.0 * b - 0.75 - 0.5 * math.log(2.0 * b)


def tail_formulas(model, N: int, scaled_pos: float, side: Optional[str] = None,
                  literal_argument: bool = False) -> float:
    """Leading large-deviation prediction on either side of the transition.

    Periodic, scaled_pos = r = L / (2 sqrt N):
      r < 1: log G ~ -N^2 (F_-(pi^2/r^2) - F_+(pi^2/r^2))       (returns the log)
      r > 1: 1 - G ~ (-1)^N exp(-2 N r^2 gamma(1/r^2))             (returns 1 - G)
    Absorbing, scaled_pos = h = L / sqrt(2N):
      h < 1: log F ~ -2 N^2 (F_-(A) - F_+(A)), A = pi^2/h^2       (returns the log)
      h > 1: density of the maximal height ~ exp(-2 N h^2 gamma(1/h^2))

    ``literal_argument`` switches the absorbing left branch to A = 1/h^2, which
    only exists for h <= 1/pi.  ``side`` ("left"/"right") may be given to assert
    which branch the caller expects.
    """
    model = ModelKind.parse(model)
    if model is ModelKind.REFLECTING:
        raise ValueError("no tail formula for the reflecting model")
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    x = float(scaled_pos)
    if not x > 0:
        raise ValueError(f"scaled position must be positive, got {x}")
    if side is not None:
        side = side.lower()
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        if (side == "left" and x > 1) or (side == "right" and x < 1):
            raise ValueError(f"scaled position {x} is on the wrong side of 1 for the {side} branch")
    left = x <= 1.0 if side is None else side == "left"
    if model is ModelKind.PERIODIC:
        if left:
            A = PI2 / x**2
            return N * N * delta(A)
        return (-1) ** N * math.exp(-2.0 * N * x * x * gamma_fn(1.0 / x**2))
    if left:
        A = 1.0 / x**2 if literal_argument else PI2 / x**2
        return 2.0 * N * N * delta(A)
    return math.exp(-2.0 * N * x * x * gamma_fn(1.0 / x**2))


def gm_subleading(group, N: int, A: float) -> float:
    """Exponentially small weak-coupling correction to log Z."""
    group = Group.parse(group)
    A = float(A)
    if not (0.0 < A < PI2):
        raise ValueError(f"subleading term needs 0 < A < pi^2, got {A}")
    x = A / PI2
    expo = math.exp(-(2.0 * PI2 * N / A) * gamma_fn(x))
    if group is Group.U:
        return -((-1) ** N) / math.sqrt(2 * math.pi * N) * (A / (2 * PI2)) * (1 - x) ** -0.25 * expo
    if group is Group.SP2N:
        return (A / (8 * PI2 * math.sqrt(math.pi * N)) * (1 + 1 / math.sqrt(1 - x))
                * (1 - x) ** -0.25 * expo)
    raise ValueError("subleading term available for U and Sp2N only")


@dataclass(frozen=True)
class LdfCurve:
    A_grid: np.ndarray
    F_minus: np.ndarray
    F_plus: np.ndarray  # nan below pi^2
    delta: np.ndarray  # nan below pi^2
    k: np.ndarray  # nan below pi^2

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["A", "F_minus", "F_plus", "delta"])
        for row in zip(self.A_grid, self.F_minus, self.F_plus, self.delta):
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _fmt(v: float) -> str:
    return "" if not math.isfinite(v) else f"{v:.15g}"


def ldf_curve(A_grid: Iterable[float]) -> LdfCurve:
    A = np.asarray(list(A_grid), dtype=float)
    if A.ndim != 1 or A.size == 0 or np.any(np.diff(A) <= 0):
        raise ValueError("A_grid must be a nonempty increasing sequence")
    fm = np.array([f_minus(a) for a in A])
    dl = np.full_like(A, np.nan)
    ks = np.full_like(A, np.nan)
    for i, a in enumerate(A):
        if a >= PI2:
            dl[i] = delta(a)
            ks[i] = solve_modulus(a).k
    return LdfCurve(A, fm, fm + dl, dl, ks)


def third_derivative_at_threshold(steps: Sequence[float] = (0.4, 0.2, 0.1, 0.05)) -> list:
    """Forward-difference derivatives of delta at pi^2+ for a sequence of steps.

    Returns (h, d1, d2, d3) tuples; d3 should tend to -2/pi^6 under the sign
    convention of this module.
    """
    out = []
    for h in steps:
        d = [delta(PI2 + j * h) for j in range(4)]
        d1 = (-11 * d[0] + 18 * d[1] - 9 * d[2] + 2 * d[3]) / (6 * h)
        d2 = (2 * d[0] - 5 * d[1] + 4 * d[2] - d[3]) / h**2
        d3 = (-d[0] + 3 * d[1] - 3 * d[2] + d[3]) / h**3
        out.append((h, d1, d2, d3))
    return out
