"""Independent ground truth for small N.

Lattice oracle
--------------
A lazy walk with stay probability 1/2 on a lattice of spacing a = L/M is
realized exactly as two half-steps of a simple +-1 walk on the doubled lattice
(spacing a/2).  All walkers move at every half-step, so they stay on one
parity sublattice and any crossing shows up as a coincidence, which kills the
configuration.  The joint process is therefore a genuine non-crossing process
and Karlin-McGregor holds exactly at finite M.

Time matching: a coarse step has variance a^2/2, so unit time with D = 1/2
needs T = 2 M^2 / L^2 coarse steps.  When T is not that number the lattice
result belongs to the effective length M sqrt(2/T).

Boundary rules on the doubled lattice: absorbing walls kill at both ends of
[0, L]; reflecting walls fold a step through the wall back onto the first
interior site; periodic walkers live on a ring.  On the ring a configuration
that returns to its starting set after a net number k of cut crossings has
its labels rotated cyclically by k, and the lattice sum over Z^N weights it by
the sign of that rotation, (-1)^{k(N-1)}.  The joint DP carries the crossing
parity to apply this sign.

The denominator (the same reunion in an unbounded domain) is the
Karlin-McGregor determinant of single-walker propagators in a domain whose far
walls are distant enough that the escaping mass is negligible; that mass is
reported as leakage.

Monte Carlo
-----------
For a single walker with absorbing walls the reunion ratio is the CDF of the
maximum of a standard Brownian excursion, sampled as the norm of a
three-dimensional Brownian bridge.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from .errors import LeakageWarning, StateSpaceError
from .exact_sums import ModelKind

STATE_CAP = 10**7
LEAKAGE_LIMIT = 1e-9
# E[max] bias of a discretely monitored Brownian path is beta sqrt(dt),
# beta = -zeta(1/2)/sqrt(2 pi).
CONTINUITY_SHIFT = 0.5825971579390106
MC_CHUNK = 2000


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice discretization of one reunion ratio.

    ``steps`` defaults to the diffusion-matched count 2 M^2 / L^2 (rounded).
    Only laziness 1/2 is supported; it is what the doubled-lattice
    construction realizes exactly.
    """

    model: ModelKind
    N: int
    length: float
    sites: int
    steps: Optional[int] = None
    laziness: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        for name in ("N", "sites"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        L = float(self.length)
        if not (math.isfinite(L) and L > 0):
            raise ValueError(f"length must be positive, got {self.length}")
        object.__setattr__(self, "length", L)
        limit = self.sites - 1 if self.model is ModelKind.ABSORBING else self.sites
        if self.N > limit:
            raise StateSpaceError(
                f"N={self.N} walkers do not fit on {self.sites} sites for the {self.model.value} model")
        if self.laziness != 0.5:
            raise ValueError("only laziness 0.5 is supported")
        if self.steps is None:
            object.__setattr__(self, "steps", max(1, round(2 * self.sites**2 / L**2)))
        elif isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 0:
            raise ValueError(f"steps must be a nonnegative integer, got {self.steps!r}")
        else:
            object.__setattr__(self, "steps", int(self.steps))
        n_states = math.comb(self.numerator_domain().size, self.N)
        if n_states > STATE_CAP:
            raise StateSpaceError(f"state space C({self.numerator_domain().size}, {self.N}) = "
                                  f"{n_states} exceeds the cap {STATE_CAP}")

    @property
    def spacing(self) -> float:
        return self.length / self.sites

    @property
    def effective_length(self) -> float:
        """Continuum length whose unit-time reunion the lattice run approximates."""
        if self.steps == 0:
            return math.inf
        return self.sites * math.sqrt(2.0 / self.steps)

    def numerator_domain(self) -> "Domain":
        M = self.sites
        if self.model is ModelKind.ABSORBING:
            return Domain(2 * M - 1, "kill", "kill")
        if self.model is ModelKind.REFLECTING:
            return Domain(2 * M + 1, "fold", "fold")
        return Domain(2 * M, "ring", "ring")

    def start_sites(self) -> tuple:
        """Doubled-lattice indices of the starting (and final) configuration."""
        if self.model is ModelKind.ABSORBING:
            return tuple(2 * j + 1 for j in range(self.N))  # coarse sites 1..N
        return tuple(2 * j for j in range(self.N))  # coarse sites 0..N-1

    def far_distance(self) -> int:
        """Doubled-lattice sites between the start cluster and an emulated far wall."""
        phys = max(6.0 * self.length, self.length + 2.0 * math.sqrt(self.N) + 9.0)
        return 2 * max(6 * self.sites, math.ceil(phys / self.spacing))


@dataclass(frozen=True)
class Domain:
    """Sites 0..size-1 of the doubled lattice with a rule at each end.

    Rules: "kill" removes a walker stepping off the end, "fold" sends a step
    off the end back to the neighbouring interior site, "ring" identifies the
    two ends.
    """

    size: int
    left: str
    right: str


def _binom_table(n: int, k: int) -> np.ndarray:
    tab = np.zeros((n + 1, k + 1), dtype=np.int64)
    for i in range(n + 1):
        for j in range(min(i, k) + 1):
            tab[i, j] = math.comb(i, j)
    return tab


def _enumerate_states(size: int, N: int) -> np.ndarray:
    if N == 1:
        return np.arange(size, dtype=np.int64)[:, None]
    combos = itertools.combinations(range(size), N)
    flat = np.fromiter(itertools.chain.from_iterable(combos), dtype=np.int64,
                       count=math.comb(size, N) * N)
    return flat.reshape(-1, N)


def _rank(states: np.ndarray, binom: np.ndarray) -> np.ndarray:
    """Colexicographic rank of sorted rows (combinatorial number system)."""
    r = np.zeros(len(states), dtype=np.int64)
    for i in range(states.shape[1]):
        r += binom[states[:, i], i + 1]
    return r


@dataclass
class JointChain:
    """Sparse one-half-step transition operator of the non-colliding walkers."""

    domain: Domain
    N: int
    states: np.ndarray
    matrix: sparse.csr_matrix
    signed: bool  # ring with crossing-parity tracking
    binom: np.ndarray = field(repr=False)

    def index(self, config, parity: int = 0) -> int:
        s = np.array(sorted(config), dtype=np.int64)[None, :]
        return int(_rank(s, self.binom)[0]) + parity * len(self.states)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def build_joint_chain(domain: Domain, N: int) -> JointChain:
    size = domain.size
    n_states = math.comb(size, N)
    if n_states > STATE_CAP:
        raise StateSpaceError(f"state space {n_states} exceeds the cap {STATE_CAP}")
    binom = _binom_table(size, N)
    states = _enumerate_states(size, N)
    ordered = np.empty_like(states)
    ordered[_rank(states, binom)] = states
    states = ordered
    ring = domain.left == "ring"
    signed = ring and N % 2 == 0
    copies = 2 if signed else 1
    rows, cols = [], []
    src = np.arange(n_states, dtype=np.int64)
    weight = 0.5**N
    for pattern in itertools.product((-1, 1), repeat=N):
        new = states + np.array(pattern, dtype=np.int64)
        alive = np.ones(n_states, dtype=bool)
        flips = np.zeros(n_states, dtype=np.int64)
        if ring:
            flips = np.sum((new == size) | (new == -1), axis=1)
            new = np.mod(new, size)
            new.sort(axis=1)
        else:
            if domain.left == "kill":
                alive &= np.all(new >= 0, axis=1)
            else:
                new = np.where(new < 0, 1, new)
            if domain.right == "kill":
                alive &= np.all(new <= size - 1, axis=1)
            else:
                new = np.where(new > size - 1, size - 2, new)
        if N > 1:
            alive &= np.all(np.diff(new, axis=1) > 0, axis=1)
        new, s, fl = new[alive], src[alive], flips[alive] % 2
        dst = _rank(new, binom)
        for c in range(copies):
            rows.append(dst + ((c + fl) % 2) * n_states if signed else dst)
            cols.append(s + c * n_states)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    data = np.full(len(rows), weight)
    dim = copies * n_states
    mat = sparse.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    return JointChain(domain, N, states, mat, signed, binom)


def evolve(chain: JointChain, start, half_steps: int) -> np.ndarray:
    """Distribution over joint states after ``half_steps`` moves from ``start``."""
    v = np.zeros(chain.dimension)
    v[chain.index(start)] = 1.0
    m = chain.matrix
    for _ in range(half_steps):
        v = m @ v
    return v


def single_walker_matrix(domain: Domain) -> sparse.csr_matrix:
    return build_joint_chain(domain, 1).matrix


def single_propagators(domain: Domain, starts, half_steps: int):
    """Columns p(x_j -> .) after ``half_steps``, plus mass lost at kill ends."""
    m = single_walker_matrix(domain)
    P = np.zeros((domain.size, len(starts)))
    for j, x in enumerate(starts):
        P[x, j] = 1.0
    for _ in range(half_steps):
        P = m @ P
    lost = 1.0 - P.sum(axis=0)
    return P, lost


def karlin_mcgregor(domain: Domain, starts, ends, half_steps: int) -> float:
    P, _ = single_propagators(domain, starts, half_steps)
    return float(np.linalg.det(P[np.asarray(ends)][:, :].T))


@dataclass(frozen=True)
class DPResult:
    ratio: float
    numerator: float
    denominator: float
    leakage: float
    effective_length: float
    config: LatticeConfig


def _denominator(config: LatticeConfig, half_steps: int) -> tuple[float, float]:
    far = config.far_distance()
    starts = np.array(config.start_sites())
    if config.model is ModelKind.PERIODIC:
        shift = far
        size = 2 * far + starts[-1] + 1
        dom = Domain(size, "kill", "kill")
        starts = starts + shift
    elif config.model is ModelKind.ABSORBING:
        dom = Domain(starts[-1] + far + 1, "kill", "kill")
    else:
        dom = Domain(starts[-1] + far + 1, "fold", "kill")
    P, lost = single_propagators(dom, starts, half_steps)
    if config.model is ModelKind.ABSORBING:
        # The wall at the origin is physical; only count what reached the far end.
        leak = _far_leak(dom, starts, half_steps)
    else:
        leak = float(lost.max())
    det = float(np.linalg.det(P[starts][:, :]))
    return det, leak


def _far_leak(dom: Domain, starts, half_steps: int) -> float:
    """Mass of single walkers absorbed at the far (right) end only."""
    m = single_walker_matrix(dom)
    P = np.zeros((dom.size, len(starts)))
    for j, x in enumerate(starts):
        P[x, j] = 1.0
    leak = np.zeros(len(starts))
    for _ in range(half_steps):
        leak += 0.5 * P[-1]
        P = m @ P
    return float(leak.max())


def dp_reunion(config: LatticeConfig) -> DPResult:
    """Lattice reunion ratio with numerator, denominator and leakage."""
    half = 2 * config.steps
    dom = config.numerator_domain()
    chain = build_joint_chain(dom, config.N)
    start = config.start_sites()
    v = evolve(chain, start, half)
    num = v[chain.index(start)]
    if chain.signed:
        num -= v[chain.index(start, parity=1)]
    den, leak = _denominator(config, half)
    if leak > LEAKAGE_LIMIT:
        warnings.warn(f"free-domain emulation lost {leak:.3g} of its mass at the far walls",
                      LeakageWarning, stacklevel=2)
    return DPResult(float(num / den), float(num), den, leak, config.effective_length, config)


def dp_reunion_ratio(config: LatticeConfig) -> float:
    return dp_reunion(config).ratio


def richardson(coarse: float, fine: float, order: int = 2) -> float:
    """Extrapolate values at M and 2M assuming error ~ M^-order."""
    f = 2.0**order
    return (f * fine - coarse) / (f - 1.0)


def dp_extrapolated(model, N: int, L: float, sites: int, order: int = 2) -> tuple:
    """(value at M, value at 2M, Richardson value) with matched step counts."""
    r1 = dp_reunion_ratio(LatticeConfig(model, N, L, sites))
    r2 = dp_reunion_ratio(LatticeConfig(model, N, L, 2 * sites))
    return r1, r2, richardson(r1, r2, order)


# ----------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class EmpiricalCDF:
    values: np.ndarray
    cdf: np.ndarray
    stderr: np.ndarray
    sample_count: int

    @property
    def points(self):
        return list(zip(self.values.tolist(), self.cdf.tolist()))

    def at(self, x: float) -> tuple[float, float]:
        """Empirical P(X <= x) and its binomial standard error."""
        k = int(np.searchsorted(self.values, x, side="right"))
        p = k / self.sample_count
        return p, math.sqrt(p * (1.0 - p) / self.sample_count)

    def quantile(self, p: float) -> float:
        return float(np.quantile(self.values, p))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "cdf", "stderr"])
        for row in zip(self.values, self.cdf, self.stderr):
            w.writerow([f"{v:.15g}" for v in row])
        return buf.getvalue()


_active_seeds: set = set()
_seed_lock = threading.Lock()


@contextmanager
def claim_seed(seed: int):
    """Hold ``seed`` for the duration of a run; a concurrent second claim fails."""
    with _seed_lock:
        if seed in _active_seeds:
            raise ValueError(f"seed {seed} is already in use by a concurrent stream")
        _active_seeds.add(seed)
    try:
        yield
    finally:
        with _seed_lock:
            _active_seeds.discard(seed)


def _excursion_chunk(seed: int, chunk: int, count: int, time_steps: int, shift: float) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
    dt = 1.0 / time_steps
    tau = np.arange(1, time_steps + 1) / time_steps
    sq = np.zeros((count, time_steps))
    for _ in range(3):
        w = np.cumsum(rng.standard_normal((count, time_steps)), axis=1) * math.sqrt(dt)
        b = w - tau[None, :] * w[:, -1:]
        sq += b * b
    return np.sqrt(sq.max(axis=1)) + shift * math.sqrt(dt)


def mc_excursion_max(samples: int, time_steps: int, seed: int, workers: int = 1,
                     continuity_correction: bool = True) -> EmpiricalCDF:
    """Empirical law of the maximum of a standard Brownian excursion on [0, 1].

    Chunk c of MC_CHUNK samples draws from SeedSequence(seed, spawn_key=(c,)),
    so the output depends only on (samples, time_steps, seed), not on
    ``workers``.  The discrete maximum is shifted up by 0.5826 sqrt(dt) to
    correct for monitoring only at grid times.
    """
    for name, v, lo in (("samples", samples, 10**4), ("time_steps", time_steps, 10**3)):
        if isinstance(v, bool) or int(v) != v or v < lo:
            raise ValueError(f"{name} must be an integer >= {lo}, got {v!r}")
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    samples, time_steps, seed = int(samples), int(time_steps), int(seed)
    shift = CONTINUITY_SHIFT if continuity_correction else 0.0
    sizes = [min(MC_CHUNK, samples - s) for s in range(0, samples, MC_CHUNK)]
    with claim_seed(seed):
        jobs = [(seed, c, n, time_steps, shift) for c, n in enumerate(sizes)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(lambda a: _excursion_chunk(*a), jobs))
        else:
            parts = [_excursion_chunk(*a) for a in jobs]
    vals = np.sort(np.concatenate(parts))
    cdf = np.arange(1, samples + 1) / samples
    se = np.sqrt(cdf * (1 - cdf) / samples)
    return EmpiricalCDF(vals, cdf, se, samples)


def excursion_max_cdf(L: float) -> float:
    """Exact P(max <= L) of the standard excursion, theta-series form."""
    L = float(L)
    if L <= 0:
        return 0.0
    c = math.pi**2 / (2 * L * L)
    total = 0.0
    n = 1
    while True:
        term = n * n * math.exp(-c * n * n)
        total += term
        if n > math.sqrt(1 / c) and term < 1e-18 * total:
            break
        n += 1
    return math.sqrt(2) * math.pi**2.5 / L**3 * total
