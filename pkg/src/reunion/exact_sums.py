"""Normalized reunion probabilities of non-intersecting Brownian walkers.

Three boundary conditions on the segment [0, L] are supported. Each reunion
probability is a sum over Z^N (or N^N) of a squared Vandermonde factor times a
Gaussian weight.  Such a sum factorizes through the Andreief identity

    sum_{n_1..n_N} prod_{i<j} (f(n_i) - f(n_j))^2 prod_j w(n_j)
        = N! det[ mu_{i+j} ]_{0 <= i, j < N},   mu_k = sum_n f(n)^k w(n),

so an N-fold lattice sum reduces to an N x N Hankel determinant of
one-dimensional moments.  The moment matrices are badly conditioned, so all of
this runs in mpmath extended precision inside a private context per call
(mpmath's global context is process-wide state and not thread safe).

Periodic walkers (the U(N) family) use f(n) = n and w(n) = exp(-2 pi^2 n^2/L^2).
Absorbing walls (Sp(2N)) use f(n) = n^2 and w(n) = n^2 exp(-pi^2 n^2 / 2L^2),
n >= 1.  Reflecting walls (SO(2N)) use f(n) = n^2 and
w(n) = exp(-pi^2 n^2 / 2L^2) over all of Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import PrecisionLossError, TruncationError

MIN_DIGITS = 15
BRUTE_FORCE_MAX_N = 4
BRUTE_FORCE_MAX_NMAX = 80


class ModelKind(str, Enum):
    PERIODIC = "periodic"
    ABSORBING = "absorbing"
    REFLECTING = "reflecting"

    @classmethod
    def parse(cls, value: "ModelKind | str") -> "ModelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {value!r}; expected one of {choices}") from None


class Group(str, Enum):
    U = "U"
    SP2N = "Sp2N"
    SO2N = "SO2N"

    @classmethod
    def parse(cls, value: "Group | str") -> "Group":
        if isinstance(value, cls):
            return value
        for g in cls:
            if str(value).strip().lower() == g.value.lower():
                return g
        raise ValueError(f"unknown group {value!r}; expected U, Sp2N or SO2N")


# Group whose partition function carries the same lattice sum as each model.
MODEL_GROUP = {
    ModelKind.PERIODIC: Group.U,
    ModelKind.ABSORBING: Group.SP2N,
    ModelKind.REFLECTING: Group.SO2N,
}


class Method(str, Enum):
    HANKEL_DETERMINANT = "hankel"
    BRUTE_FORCE = "brute_force"
    POISSON_DUAL = "poisson_dual"


def default_digits(num_walkers: int) -> int:
    """Working precision used when a query does not set one."""
    return max(30, 2 * num_walkers + 15)


def guard_digits(digits: int) -> int:
    return max(10, digits // 4)


def _check_positive_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def _check_length(L) -> float:
    L = float(L)
    if not math.isfinite(L) or L <= 0:
        raise ValueError(f"length must be a positive finite number, got {L}")
    return L


def _check_digits(digits) -> int:
    digits = int(digits)
    if digits < MIN_DIGITS:
        raise ValueError(f"digits must be >= {MIN_DIGITS}, got {digits}")
    return digits


@dataclass(frozen=True)
class ReunionQuery:
    """One evaluation request.  ``n_max`` and ``digits`` default to automatic."""

    model: ModelKind
    num_walkers: int
    length: float
    n_max: Optional[int] = None
    digits: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        N = _check_positive_int("num_walkers", self.num_walkers)
        object.__setattr__(self, "num_walkers", N)
        object.__setattr__(self, "length", _check_length(self.length))
        if self.n_max is not None:
            n_max = _check_positive_int("n_max", self.n_max)
            if n_max < N:
                raise ValueError(f"n_max must be >= num_walkers ({N}), got {n_max}")
            object.__setattr__(self, "n_max", n_max)
        if self.digits is not None:
            object.__setattr__(self, "digits", _check_digits(self.digits))

    @property
    def working_digits(self) -> int:
        return self.digits if self.digits is not None else default_digits(self.num_walkers)


@dataclass(frozen=True)
class MomentTable:
    model: ModelKind
    decay: float
    moments: tuple
    tail_bound: object
    n_max: int
    digits: int


@dataclass(frozen=True)
class ReunionResult:
    value: object
    truncation_error_estimate: float
    method: Method

    def __float__(self) -> float:
        return float(self.value)


class _Rate(float):
    """factor * pi^2 / L^2 as a float that remembers its exact form.

    Rounding c to double precision would cap every result at about 1e-15
    relative accuracy, so each mp context re-evaluates it from the parts.
    """

    def __new__(cls, factor: float, L: float):
        obj = super().__new__(cls, factor * math.pi**2 / L**2)
        obj.factor, obj.L = factor, L
        return obj

    def mp(self, ctx):
        return ctx.mpf(self.factor) * ctx.pi**2 / ctx.mpf(self.L) ** 2


def _as_mp(ctx, c):
    return c.mp(ctx) if isinstance(c, _Rate) else ctx.mpf(c)


def decay_rate(model: ModelKind, L: float) -> float:
    """Gaussian rate c in exp(-c n^2) for the reunion sum of ``model``."""
    model = ModelKind.parse(model)
    if model is ModelKind.PERIODIC:
        return _Rate(2.0, L)
    # Reflecting shares the absorbing rate; see normalization tests.
    return _Rate(0.5, L)


def _moment_power(model: ModelKind, k: int) -> int:
    if model is ModelKind.PERIODIC:
        return k
    if model is ModelKind.ABSORBING:
        return 2 * k + 2
    return 2 * k


def _two_sided(model: ModelKind) -> bool:
    return model is not ModelKind.ABSORBING


def auto_n_max(model: ModelKind, N: int, c: float, digits: int) -> int:
    """Smallest cutoff whose first omitted term is below 10^-(digits+5) of the peak.

    Checked for every moment power so the slowest decaying moment sets the cutoff.
    """
    model = ModelKind.parse(model)
    target = (digits + 5) * math.log(10.0)
    n_cut = N
    for k in range(2 * N - 1):
        p = _moment_power(model, k)
        peak = math.sqrt(p / (2.0 * c)) if p > 0 else 0.0
        n_peak = max(1, int(math.floor(peak)))
        log_peak = max(p * math.log(m) - c * m * m for m in (n_peak, n_peak + 1))
        if p == 0:
            log_peak = max(log_peak, 0.0)
        n = max(n_peak, 1)
        while p * math.log(n + 1) - c * (n + 1) ** 2 > log_peak - target:
            n += 1
        n_cut = max(n_cut, n)
    return n_cut


def _tail_bound(ctx, model: ModelKind, N: int, c, n_max: int):
    """Upper bound on sum_{n > n_max} n^p e^{-c n^2} over all moment powers p.

    Integral majorant Gamma((p+1)/2, c n_max^2) / (2 c^((p+1)/2)); valid past the
    summand's peak, otherwise the peak value is added as a safety term.
    Two-sided sums pick up a factor 2.
    """
    bound = ctx.zero
    for k in range(2 * N - 1):
        p = _moment_power(model, k)
        s = ctx.mpf(p + 1) / 2
        tail = ctx.gammainc(s, c * n_max**2) / (2 * c**s)
        peak = math.sqrt(p / (2.0 * float(c))) if p > 0 else 0.0
        if n_max < peak:
            tail += ctx.mpf(peak) ** p * ctx.exp(-c * peak * peak)
        if _two_sided(model):
            tail *= 2
        bound = max(bound, tail)
    return bound


def _moments(ctx, model: ModelKind, N: int, c, n_max: int) -> list:
    count = 2 * N - 1
    mu = [ctx.zero] * count
    for n in range(1, n_max + 1):
        w = ctx.exp(-c * n * n)
        if model is ModelKind.PERIODIC:
            # n and -n together: even powers double, odd powers cancel exactly.
            term = 2 * w
            for k in range(0, count, 2):
                mu[k] += term
                term *= n * n
        elif model is ModelKind.ABSORBING:
            term = w * (n * n)
            for k in range(count):
                mu[k] += term
                term *= n * n
        else:
            term = 2 * w
            for k in range(count):
                mu[k] += term
                term *= n * n
    if model is not ModelKind.ABSORBING:
        mu[0] += 1
    return mu


def _context(digits: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = digits
    return ctx


def build_moment_table(model, N: int, L: float, n_max: Optional[int] = None,
                       digits: Optional[int] = None) -> MomentTable:
    """Moments mu_0 .. mu_{2N-2} of the reunion sum at length ``L``."""
    q = ReunionQuery(model, N, L, n_max, digits)
    return _moment_table(q.model, q.num_walkers, decay_rate(q.model, q.length), q.n_max,
                         q.working_digits)


def _moment_table(model: ModelKind, N: int, c: float, n_max: Optional[int],
                  digits: int) -> MomentTable:
    if n_max is None:
        n_max = auto_n_max(model, N, c, digits)
    ctx = _context(digits)
    cc = _as_mp(ctx, c)
    mu = _moments(ctx, model, N, cc, n_max)
    return MomentTable(model, c, tuple(mu), _tail_bound(ctx, model, N, cc, n_max), n_max, digits)


def _lu_factor(ctx, a: list) -> Optional[tuple]:
    """In-place LU with partial pivoting.  Returns (lu, perm, sign) or None if singular."""
    n = len(a)
    perm = list(range(n))
    sign = 1
    for j in range(n):
        p = max(range(j, n), key=lambda i: abs(a[i][j]))
        if a[p][j] == 0:
            return None
        if p != j:
            a[j], a[p] = a[p], a[j]
            perm[j], perm[p] = perm[p], perm[j]
            sign = -sign
        piv = a[j][j]
        for i in range(j + 1, n):
            f = a[i][j] / piv
            if f:
                row, prow = a[i], a[j]
                row[j] = f
                for k in range(j + 1, n):
                    row[k] -= f * prow[k]
            else:
                a[i][j] = f
    return a, perm, sign


def _lu_solve(lu: list, perm: list, b: list) -> list:
    n = len(lu)
    y = [b[perm[i]] for i in range(n)]
    for i in range(n):
        for k in range(i):
            y[i] -= lu[i][k] * y[k]
    for i in reversed(range(n)):
        for k in range(i + 1, n):
            y[i] -= lu[i][k] * y[k]
        y[i] /= lu[i][i]
    return y


@dataclass
class _HankelEval:
    ctx: MPContext
    log_det: object  # None when numerically singular
    sign: int
    truncation_rel: float
    tail_bound: object
    n_max: int


def _hankel_eval(model: ModelKind, N: int, c: float, n_max: int, digits: int) -> _HankelEval:
    ctx = _context(digits)
    cc = _as_mp(ctx, c)
    mu = _moments(ctx, model, N, cc, n_max)
    tail = _tail_bound(ctx, model, N, cc, n_max)
    # Equilibrate the symmetric matrix by its diagonal before factoring.
    scale = [ctx.sqrt(mu[2 * i]) for i in range(N)]
    a = [[mu[i + j] / (scale[i] * scale[j]) for j in range(N)] for i in range(N)]
    fac = _lu_factor(ctx, a)
    if fac is None:
        return _HankelEval(ctx, None, 0, math.inf, tail, n_max)
    lu, perm, sign = fac
    log_det = 2 * ctx.fsum(ctx.log(s) for s in scale)
    for i in range(N):
        d = lu[i][i]
        if d < 0:
            sign = -sign
        log_det += ctx.log(abs(d))
    # Omitted lattice points are rank-one updates of H, so by the matrix
    # determinant lemma each multiplies det H by 1 + w(n) v^T H^{-1} v with
    # v = (1, f(n), f(n)^2, ...).  Sum these until they die off.
    trunc = _omitted_points_effect(ctx, model, N, cc, n_max, lu, perm, scale)
    return _HankelEval(ctx, log_det, sign, trunc, tail, n_max)


def _omitted_points_effect(ctx, model, N, c, n_max, lu, perm, scale) -> float:
    total = ctx.zero
    first = None
    prev = None
    for n in range(n_max + 1, n_max + 200):
        if model is ModelKind.PERIODIC:
            points = [(n, 1), (-n, 1)]
            w = ctx.exp(-c * n * n)
        elif model is ModelKind.ABSORBING:
            points = [(n * n, 1)]
            w = n * n * ctx.exp(-c * n * n)
        else:
            points = [(n * n, 2)]
            w = ctx.exp(-c * n * n)
        term = ctx.zero
        for f, mult in points:
            v = [ctx.mpf(f) ** i / scale[i] for i in range(N)]
            x = _lu_solve(lu, perm, v)
            term += mult * w * ctx.fsum(vi * xi for vi, xi in zip(v, x))
        term = abs(term)
        total += term
        if first is None:
            first = term
        if term <= first * ctx.mpf(10) ** -12 or term == 0:
            return float(total)
        if prev is not None and term < prev:
            ratio = term / prev
            if ratio < ctx.mpf("0.5"):
                return float(total + term * ratio / (1 - ratio))
        prev = term
    return math.inf


@dataclass
class _SumEval:
    ctx: MPContext
    log_sum: object  # log of N! det H at the higher precision
    rel_error: float
    n_max: int
    digits: int


def _lattice_sum(model: ModelKind, N: int, c: float, n_max: Optional[int],
                 digits: Optional[int]) -> _SumEval:
    """log of the symmetric lattice sum, with precision and truncation checks.

    With ``digits=None`` the working precision starts at ``default_digits(N)``
    and is raised automatically while the two-precision comparison fails (deep
    strong coupling cancels many digits).  An explicit ``digits`` is honoured
    as given and a failed check raises.
    """
    adaptive = digits is None
    digits = default_digits(N) if adaptive else digits
    for _ in range(6 if adaptive else 1):
        try:
            return _lattice_sum_at(model, N, c, n_max, digits)
        except PrecisionLossError as exc:
            if not adaptive:
                raise
            digits = max(2 * digits, digits + int(exc.digits_lost) + 10)
            last = exc
    raise last


def _lattice_sum_at(model: ModelKind, N: int, c: float, n_max: Optional[int],
                    digits: int) -> _SumEval:
    hi = digits + guard_digits(digits)
    if n_max is None:
        n_max = auto_n_max(model, N, c, hi)
    lo_eval = _hankel_eval(model, N, c, n_max, digits)
    hi_eval = _hankel_eval(model, N, c, n_max, hi)
    ctx = hi_eval.ctx
    if hi_eval.log_det is None or hi_eval.sign <= 0:
        raise PrecisionLossError(
            f"Hankel determinant is numerically singular at {hi} digits "
            f"(model={model.value}, N={N}); raise digits", digits_lost=hi)
    if lo_eval.log_det is None or lo_eval.sign <= 0:
        precision_rel = math.inf
    else:
        precision_rel = float(abs(ctx.expm1(ctx.mpf(lo_eval.log_det) - hi_eval.log_det)))
    if precision_rel > 10.0 ** (-digits / 2):
        lost = digits if precision_rel >= 1 else digits + math.log10(precision_rel)
        raise PrecisionLossError(
            f"determinant changed by relative {precision_rel:.3g} between {digits} and {hi} "
            f"digits (model={model.value}, N={N}); raise digits", digits_lost=lost)
    if hi_eval.truncation_rel > 1e-3:
        raise TruncationError(
            f"truncation at n_max={n_max} perturbs the determinant by relative "
            f"{hi_eval.truncation_rel:.3g}; raise n_max")
    log_sum = ctx.loggamma(N + 1) + hi_eval.log_det
    rel = precision_rel + hi_eval.truncation_rel + 10.0 ** (-digits)
    return _SumEval(ctx, log_sum, rel, n_max, digits)


def log_prefactor(ctx, model: ModelKind, N: int, L) -> object:
    """log of A_N / L^{N^2}, B_N / L^{2N^2+N} or C_N / L^{2N^2-N}."""
    model = ModelKind.parse(model)
    L = ctx.mpf(L)
    pi = ctx.pi
    if model is ModelKind.PERIODIC:
        return ((N * N - ctx.mpf(N) / 2) * ctx.log(2 * pi)
                - ctx.fsum(ctx.loggamma(j + 2) for j in range(N))
                - N * N * ctx.log(L))
    if model is ModelKind.ABSORBING:
        half = ctx.mpf(3) / 2
        return ((2 * N * N + N) * ctx.log(pi)
                - (N * N - ctx.mpf(N) / 2) * ctx.log(2)
                - ctx.fsum(ctx.loggamma(2 + j) + ctx.loggamma(half + j) for j in range(N))
                - (2 * N * N + N) * ctx.log(L))
    half = ctx.mpf(1) / 2
    return ((2 * N * N - N) * ctx.log(pi)
            - (N * N - ctx.mpf(N) / 2) * ctx.log(2)
            - ctx.fsum(ctx.loggamma(2 + j) + ctx.loggamma(half + j) for j in range(N))
            - (2 * N * N - N) * ctx.log(L))


def hankel_reunion(query: ReunionQuery) -> ReunionResult:
    """Normalized reunion probability through the Hankel determinant."""
    N, L, model = query.num_walkers, query.length, query.model
    s = _lattice_sum(model, N, decay_rate(model, L), query.n_max, query.digits)
    ctx = s.ctx
    value = ctx.exp(log_prefactor(ctx, model, N, L) + s.log_sum)
    return ReunionResult(value, float(value) * s.rel_error, Method.HANKEL_DETERMINANT)


def reunion(model, N: int, L: float, n_max: Optional[int] = None,
            digits: Optional[int] = None) -> float:
    """Float shortcut for ``hankel_reunion``."""
    return float(hankel_reunion(ReunionQuery(model, N, L, n_max, digits)).value)


def brute_force_reunion(query: ReunionQuery) -> ReunionResult:
    """Literal nested lattice sum in float64 for N <= 4.

    Shares no code with the determinant path: the weights, the Vandermonde
    products and the Gamma-function prefactors are all recomputed here.
    """
    N, L, model = query.num_walkers, query.length, query.model
    if N > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force supports N <= {BRUTE_FORCE_MAX_N}, got {N}")
    n_max = query.n_max if query.n_max is not None else 40
    if n_max > BRUTE_FORCE_MAX_NMAX:
        raise ValueError(f"brute force supports n_max <= {BRUTE_FORCE_MAX_NMAX}, got {n_max}")

    pi = math.pi
    if model is ModelKind.PERIODIC:
        idx = np.arange(-n_max, n_max + 1, dtype=float)
        f, w = idx, np.exp(-2 * pi**2 * idx**2 / L**2)
        logpref = ((N * N - N / 2) * math.log(2 * pi)
                   - sum(math.lgamma(j + 2) for j in range(N)) - N * N * math.log(L))
    elif model is ModelKind.ABSORBING:
        idx = np.arange(1, n_max + 1, dtype=float)
        f, w = idx**2, idx**2 * np.exp(-pi**2 * idx**2 / (2 * L**2))
        logpref = ((2 * N * N + N) * math.log(pi) - (N * N - N / 2) * math.log(2)
                   - sum(math.lgamma(2 + j) + math.lgamma(1.5 + j) for j in range(N))
                   - (2 * N * N + N) * math.log(L))
    else:
        idx = np.arange(-n_max, n_max + 1, dtype=float)
        f, w = idx**2, np.exp(-pi**2 * idx**2 / (2 * L**2))
        logpref = ((2 * N * N - N) * math.log(pi) - (N * N - N / 2) * math.log(2)
                   - sum(math.lgamma(2 + j) + math.lgamma(0.5 + j) for j in range(N))
                   - (2 * N * N - N) * math.log(L))
    edge = np.abs(idx) == np.abs(idx).max()

    # Loop over the first index, broadcast the remaining N-1.
    total = 0.0
    shell = 0.0
    rest = N - 1
    shape = lambda axis: tuple(-1 if a == axis else 1 for a in range(rest))
    fr = [f.reshape(shape(a)) for a in range(rest)]
    wr = [w.reshape(shape(a)) for a in range(rest)]
    er = [edge.reshape(shape(a)) for a in range(rest)]
    base = np.ones((1,) * rest) if rest else np.ones(())
    vander_rest = base.copy()
    weight_rest = base.copy()
    edge_rest = np.zeros((1,) * rest, dtype=bool) if rest else np.zeros((), dtype=bool)
    for a in range(rest):
        weight_rest = weight_rest * wr[a]
        edge_rest = edge_rest | er[a]
        for b in range(a + 1, rest):
            vander_rest = vander_rest * (fr[a] - fr[b]) ** 2
    for i0 in range(len(idx)):
        term = w[i0] * weight_rest * vander_rest
        for a in range(rest):
            term = term * (f[i0] - fr[a]) ** 2
        term = np.broadcast_to(term, np.broadcast_shapes(term.shape, edge_rest.shape))
        total += float(term.sum())
        mask = np.broadcast_to(edge_rest | edge[i0], term.shape)
        shell += float(term[mask].sum())
    value = math.exp(logpref) * total
    error = math.exp(logpref) * shell
    from mpmath import mpf

    return ReunionResult(mpf(value), error, Method.BRUTE_FORCE)


def g1_poisson_dual(L: float, digits: int = 30) -> ReunionResult:
    """Single periodic walker from the Poisson-resummed theta series sum_n e^{-L^2 n^2 / 2}."""
    L = _check_length(L)
    digits = _check_digits(digits)
    ctx = _context(digits)
    a = ctx.mpf(L) ** 2 / 2
    total = ctx.one
    n = 1
    while True:
        term = 2 * ctx.exp(-a * n * n)
        total += term
        if term < ctx.mpf(10) ** (-(digits + 5)) * total:
            break
        n += 1
    nxt = 2 * ctx.exp(-a * (n + 1) ** 2)
    return ReunionResult(total, float(nxt), Method.POISSON_DUAL)


def _group_shift(group: Group, N: int, A) -> object:
    """Exponent of the explicit Casimir-type prefactor of each partition function."""
    if group is Group.U:
        return -A * (N * N - 1) / 24
    if group is Group.SP2N:
        return A * (N + 0.5) * (N + 1) / 12
    return A * (N - 0.5) * (N - 1) / 12


_GROUP_MODEL = {g: m for m, g in MODEL_GROUP.items()}


def partition_function(group, N: int, A: float, n_max: Optional[int] = None,
                       digits: Optional[int] = None):
    """A-dependent part of the sphere partition function, constants set to 1.

    U(N):    e^{-A(N^2-1)/24} sum_{Z^N} Delta^2(n) e^{-(A/2N) sum n^2}
    Sp(2N):  e^{A(N+1/2)(N+1)/12} sum_{Z^N} Delta^2(n^2) prod n^2 e^{-(A/4N) sum n^2}
    SO(2N):  e^{A(N-1/2)(N-1)/12} sum_{Z^N} Delta^2(n^2) e^{-(A/4N) sum n^2}
    """
    group = Group.parse(group)
    N = _check_positive_int("N", N)
    A = float(A)
    if not math.isfinite(A) or A <= 0:
        raise ValueError(f"coupling A must be positive, got {A}")
    if n_max is not None:
        n_max = _check_positive_int("n_max", n_max)
        if n_max < N:
            raise ValueError(f"n_max must be >= N ({N}), got {n_max}")
    if digits is not None:
        digits = _check_digits(digits)
    model = _GROUP_MODEL[group]
    c = A / (2 * N) if group is Group.U else A / (4 * N)
    s = _lattice_sum(model, N, c, n_max, digits)
    ctx = s.ctx
    log_z = s.log_sum + _group_shift(group, N, ctx.mpf(A))
    if group is Group.SP2N:
        # The Z^N sum is 2^N times the positive-index sum of the absorbing moments.
        log_z += N * ctx.log(2)
    return ctx.exp(log_z)


def coupling_for(model, N: int, L: float) -> float:
    """Coupling A at which the group partition function reproduces the reunion sum."""
    model = ModelKind.parse(model)
    if model is ModelKind.PERIODIC:
        return 4 * math.pi**2 * N / L**2
    return 2 * math.pi**2 * N / L**2


def reunion_via_partition(model, N: int, L: float, n_max: Optional[int] = None,
                          digits: Optional[int] = None):
    """Reunion probability rebuilt from ``partition_function`` and explicit prefactors."""
    q = ReunionQuery(model, N, L, n_max, digits)
    model, N, L = q.model, q.num_walkers, q.length
    group = MODEL_GROUP[model]
    A = coupling_for(model, N, L)
    z = partition_function(group, N, A, q.n_max, q.digits)
    work = max(q.working_digits, z.context.dps)
    ctx = _context(work + guard_digits(work))
    L2 = ctx.mpf(L) ** 2
    pi2 = ctx.pi**2
    if model is ModelKind.PERIODIC:
        shift = pi2 * N * (N * N - 1) / (6 * L2)
    elif model is ModelKind.ABSORBING:
        shift = -pi2 * N * (N + ctx.mpf(1) / 2) * (N + 1) / (6 * L2) - N * ctx.log(2)
    else:
        shift = -pi2 * N * (N - ctx.mpf(1) / 2) * (N - 1) / (6 * L2)
    return ctx.exp(log_prefactor(ctx, model, N, L) + shift + ctx.log(ctx.mpf(z)))


def reunion_curve(model, N: int, lengths: Sequence[float], n_max: Optional[int] = None,
                  digits: Optional[int] = None) -> list:
    return [hankel_reunion(ReunionQuery(model, N, L, n_max, digits)) for L in lengths]
