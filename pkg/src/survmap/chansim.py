"""Seeded synthetic loss channels and a Monte Carlo check of the closed forms.

Every generator is ``numpy.random.PCG64`` seeded through ``SeedSequence``;
replication ``r`` of a run seeded with ``seed`` uses the child sequence with
``spawn_key=(r,)``, so replications never share a stream.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from survmap.core import UNBOUNDED, NetworkParams, ReliabilityReport, _check_nsv
from survmap.errors import InvalidInputError
from survmap.trace import BinaryTrace, app_metrics_from_trace

RNG_ALGORITHM = f"numpy-{np.__version__.split('.')[0]}.PCG64/SeedSequence"

_BERNOULLI_CHUNK = 1 << 22


@dataclass(frozen=True)
class GilbertParams:
    """Simple Gilbert channel: the good state always delivers, the bad state always loses."""

    g: float  # P(good -> bad) per cycle
    b: float  # P(bad -> good) per cycle

    def __post_init__(self) -> None:
        if not (0 < self.g <= 1 and 0 < self.b <= 1):
            raise InvalidInputError(f"transition probabilities must be in (0, 1], got {self}")

    @property
    def loss_ratio(self) -> float:
        return self.g / (self.g + self.b)

    def to_network_params(self) -> NetworkParams:
        return NetworkParams(self.g, self.b)


def gilbert_from_network_params(params: NetworkParams) -> GilbertParams:
    return GilbertParams(g=params.r_u, b=params.r_d)


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise InvalidInputError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn_key)))


def _check_n(n_cycles: int) -> None:
    if isinstance(n_cycles, bool) or not isinstance(n_cycles, (int, np.integer)) or n_cycles < 1:
        raise InvalidInputError(f"n_cycles must be a positive integer, got {n_cycles!r}")


def generate_with(
    gilbert: GilbertParams,
    n_cycles: int,
    rng: np.random.Generator,
    start: str = "stationary",
    cycle_period: float | None = None,
) -> BinaryTrace:
    """Gilbert trace drawn from ``rng``.

    Sojourn times of a per-cycle two-state chain are geometric, so the
    trace is assembled from alternating geometric run lengths. ``start`` is
    ``"stationary"``, ``"up"`` or ``"down"``.
    """
    _check_n(n_cycles)
    if start == "stationary":
        up_first = rng.random() >= gilbert.loss_ratio
    elif start in ("up", "down"):
        up_first = start == "up"
    else:
        raise InvalidInputError(f"unknown start mode {start!r}")
    first_p, second_p = (gilbert.g, gilbert.b) if up_first else (gilbert.b, gilbert.g)
    first_bit, second_bit = (1, 0) if up_first else (0, 1)

    mean_pair = 1.0 / gilbert.g + 1.0 / gilbert.b
    batch = int(min(max(64, 1.1 * n_cycles / mean_pair + 64), 1 << 22))
    parts: list[np.ndarray] = []
    total = 0
    while total < n_cycles:
        pair = np.empty(2 * batch, dtype=np.int64)
        pair[0::2] = rng.geometric(first_p, size=batch)
        pair[1::2] = rng.geometric(second_p, size=batch)
        parts.append(pair)
        total += int(pair.sum())
    lengths = np.concatenate(parts)
    values = np.tile(np.array([first_bit, second_bit], dtype=np.uint8), lengths.size // 2)
    ends = np.cumsum(lengths)
    k = int(np.searchsorted(ends, n_cycles)) + 1
    bits = np.repeat(values[:k], lengths[:k])[:n_cycles]
    return BinaryTrace(bits, cycle_period)


def generate(
    gilbert: GilbertParams,
    n_cycles: int,
    seed: int,
    start: str = "stationary",
    cycle_period: float | None = None,
) -> BinaryTrace:
    return generate_with(gilbert, n_cycles, make_rng(seed), start, cycle_period)


def bernoulli_with(
    p: float, n_cycles: int, rng: np.random.Generator, cycle_period: float | None = None
) -> BinaryTrace:
    if not 0 <= p < 1:
        raise InvalidInputError(f"p must be in [0, 1), got {p!r}")
    _check_n(n_cycles)
    bits = np.empty(n_cycles, dtype=np.uint8)
    for lo in range(0, n_cycles, _BERNOULLI_CHUNK):
        hi = min(lo + _BERNOULLI_CHUNK, n_cycles)
        bits[lo:hi] = rng.random(hi - lo) >= p
    return BinaryTrace(bits, cycle_period)


def bernoulli(p: float, n_cycles: int, seed: int, cycle_period: float | None = None) -> BinaryTrace:
    """Independent losses: each cycle fails with probability ``p``."""
    return bernoulli_with(p, n_cycles, make_rng(seed), cycle_period)


@dataclass(frozen=True)
class MonteCarloResult:
    replications: int
    cycles_per_rep: int
    mean_a: float
    mean_r: float | None  # None if some replication saw no application failure
    stderr_a: float
    stderr_r: float | None
    failure_event_count: int
    seed: int
    channel: str
    rng_algorithm: str = RNG_ALGORITHM
    per_rep: tuple[ReliabilityReport, ...] = field(default=(), repr=False)

    @property
    def mean_unavailability(self) -> float:
        return float(np.mean([r.app_unavailability for r in self.per_rep]))


def _stderr(x: np.ndarray) -> float:
    return float(x.std(ddof=1) / math.sqrt(x.size))


def _one_rep(
    params: NetworkParams, n_sv: int, n_cycles: int, seed: int, rep: int, independent: bool
) -> ReliabilityReport:
    rng = make_rng(seed, rep)
    if independent:
        trace = bernoulli_with(params.p, n_cycles, rng)
    else:
        trace = generate_with(gilbert_from_network_params(params), n_cycles, rng)
    return app_metrics_from_trace(trace, n_sv)


def monte_carlo_validate(
    params: NetworkParams,
    n_sv: int,
    n_cycles: int,
    replications: int,
    seed: int,
    independent: bool = False,
    workers: int = 1,
) -> MonteCarloResult:
    """Empirical A and R over independent seeded replications.

    With ``independent=True`` the traces are Bernoulli with the same loss
    ratio instead of bursty. Results do not depend on ``workers``.
    """
    _check_nsv(n_sv)
    _check_n(n_cycles)
    if n_cycles < 10_000:
        raise InvalidInputError("n_cycles must be >= 10^4")
    if replications < 2:
        raise InvalidInputError("at least 2 replications are needed for a standard error")
    args = [(params, n_sv, n_cycles, seed, r, independent) for r in range(replications)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(lambda a: _one_rep(*a), args))
    else:
        reps = [_one_rep(*a) for a in args]

    a = np.array([r.app_availability for r in reps])
    if any(r.app_reliability is UNBOUNDED or r.app_reliability is None for r in reps):
        mean_r = stderr_r = None
    else:
        rr = np.array([r.app_reliability for r in reps], dtype=float)
        mean_r, stderr_r = float(rr.mean()), _stderr(rr)
    events = sum(round(r.transition_rate * n_cycles) for r in reps)
    return MonteCarloResult(
        replications=replications,
        cycles_per_rep=n_cycles,
        mean_a=float(a.mean()),
        mean_r=mean_r,
        stderr_a=_stderr(a),
        stderr_r=stderr_r,
        failure_event_count=int(events),
        seed=seed,
        channel="bernoulli" if independent else "gilbert",
        per_rep=tuple(reps),
    )
