"""Closed-form mappings between network-level loss parameters and
application-level availability/reliability under a survival time.

All durations are in cycles unless a name says otherwise; seconds only
appear when a cycle period is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from survmap.errors import InfeasibleError, InvalidInputError

# Slack for float round-off when checking the r <= 1 feasibility floor.
_FEASIBILITY_SLACK = 1e-12


class Unbounded:
    """Marker for a reliability that is infinite because the application never fails."""

    _instance: Unbounded | None = None

    def __new__(cls) -> Unbounded:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __str__(self) -> str:
        return "unbounded"

    def __reduce__(self):
        return (Unbounded, ())


UNBOUNDED = Unbounded()

Cycles = Union[float, Unbounded]


def survival_cycles(survival_time: float, cycle_period: float) -> int:
    """Number of consecutive lost packets the application tolerates, ``floor(T_sv / T_c)``.

    >>> survival_cycles(0.006, 0.002)
    3
    """
    if not cycle_period > 0:
        raise InvalidInputError(f"cycle period must be > 0, got {cycle_period!r}")
    if not survival_time >= 0:
        raise InvalidInputError(f"survival time must be >= 0, got {survival_time!r}")
    q = survival_time / cycle_period
    n = math.floor(q)
    # 0.006 / 0.002 == 2.9999999999999996
    if math.isclose(q, n + 1, rel_tol=1e-9):
        n += 1
    return int(n)


@dataclass(frozen=True)
class CyclicTrafficSpec:
    cycle_period: float
    survival_time: float
    delay_bound: float
    packet_size: int | None = None

    def __post_init__(self) -> None:
        if not self.cycle_period > 0:
            raise InvalidInputError("cycle_period must be > 0")
        if not self.survival_time >= 0:
            raise InvalidInputError("survival_time must be >= 0")
        if not self.delay_bound > 0:
            raise InvalidInputError("delay_bound must be > 0")

    @property
    def n_sv(self) -> int:
        return survival_cycles(self.survival_time, self.cycle_period)


@dataclass(frozen=True)
class NetworkParams:
    """Per-cycle exit probabilities of the network up and down states.

    ``r_u = 1/tau_un`` is the chance of leaving the up state in a cycle and
    ``r_d = 1/tau_dn`` the chance of leaving the down state. Both must lie in
    ``(0, 1]``, i.e. every up and down run lasts at least one cycle.
    """

    r_u: float
    r_d: float

    def __post_init__(self) -> None:
        for name in ("r_u", "r_d"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise InvalidInputError(f"{name} must be a finite number, got {v!r}")
            if v <= 0:
                raise InvalidInputError(f"{name} must be > 0, got {v!r}")
            if v > 1:
                raise InfeasibleError(
                    f"{name}={v!r} > 1 implies a mean run shorter than one cycle"
                )
        object.__setattr__(self, "r_u", float(self.r_u))
        object.__setattr__(self, "r_d", float(self.r_d))

    @classmethod
    def from_per(cls, p: float, tau_dn: float) -> NetworkParams:
        """Build from packet error ratio and mean burst length (cycles)."""
        if not 0 < p < 1:
            raise InvalidInputError(f"packet error ratio must be in (0, 1), got {p!r}")
        if not tau_dn >= 1:
            raise InvalidInputError(f"mean down time must be >= 1 cycle, got {tau_dn!r}")
        r_d = 1.0 / tau_dn
        r_u = p * r_d / (1.0 - p)
        if r_u > 1.0:
            if r_u - 1.0 > _FEASIBILITY_SLACK:
                tau_un = tau_dn * (1.0 - p) / p
                raise InfeasibleError(
                    f"p={p!r} with tau_dn={tau_dn!r} implies tau_un={tau_un!r} < 1 cycle"
                )
            r_u = 1.0
        return cls(r_u, r_d)

    @classmethod
    def from_durations(cls, tau_un: float, tau_dn: float) -> NetworkParams:
        """Build from mean up and down run lengths (cycles)."""
        if not tau_un >= 1:
            raise InfeasibleError(f"mean up time must be >= 1 cycle, got {tau_un!r}")
        if not tau_dn >= 1:
            raise InfeasibleError(f"mean down time must be >= 1 cycle, got {tau_dn!r}")
        return cls(1.0 / tau_un, 1.0 / tau_dn)

    @property
    def p(self) -> float:
        return self.r_u / (self.r_u + self.r_d)

    @property
    def tau_un(self) -> float:
        return 1.0 / self.r_u

    @property
    def tau_dn(self) -> float:
        return 1.0 / self.r_d


@dataclass(frozen=True)
class AppRequirements:
    availability: float
    n_sv: int
    reliability: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.availability < 1:
            raise InvalidInputError("availability target must be in (0, 1)")
        if self.reliability is not None and not self.reliability > 0:
            raise InvalidInputError("reliability target must be > 0 cycles")
        _check_nsv(self.n_sv)


@dataclass(frozen=True)
class ReliabilityReport:
    """Application- and network-level metrics, durations in cycles.

    ``app_reliability`` is ``UNBOUNDED`` when no application failure can
    (or, for a trace, did) occur, and ``None`` when the application was
    never up. Mean downtimes are ``None`` when undefined.
    """

    app_availability: float
    app_unavailability: float
    app_reliability: Cycles | None
    network_availability: float
    transition_rate: float
    app_mean_downtime: float | None
    network_mean_downtime: float | None
    per: float
    n_sv: int
    cycle_period: float | None = None

    def seconds(self, cycles: Cycles | None) -> Cycles | None:
        if cycles is None or cycles is UNBOUNDED or self.cycle_period is None:
            return cycles if self.cycle_period is not None else None
        return cycles * self.cycle_period

    @property
    def app_reliability_seconds(self) -> Cycles | None:
        return self.seconds(self.app_reliability)

    @property
    def app_mean_downtime_seconds(self) -> float | None:
        return self.seconds(self.app_mean_downtime)

    @property
    def network_mean_downtime_seconds(self) -> float | None:
        return self.seconds(self.network_mean_downtime)


def _check_nsv(n_sv: int) -> None:
    if isinstance(n_sv, bool) or not isinstance(n_sv, int) or n_sv < 0:
        raise InvalidInputError(f"survival cycles must be a non-negative integer, got {n_sv!r}")


def network_params_from_per(p: float, tau_dn: float) -> NetworkParams:
    return NetworkParams.from_per(p, tau_dn)


def network_availability(params: NetworkParams) -> float:
    """Fraction of cycles in network up state, ``1 - p``."""
    return params.r_d / (params.r_u + params.r_d)


def _survive_prob(params: NetworkParams, n_sv: int) -> float:
    """Probability that a burst outlasts the survival window, ``(1 - r_d)^n_sv``."""
    if n_sv == 0:
        return 1.0
    return (1.0 - params.r_d) ** n_sv


def app_unavailability(params: NetworkParams, n_sv: int) -> float:
    _check_nsv(n_sv)
    return params.p * _survive_prob(params, n_sv)


def app_availability(params: NetworkParams, n_sv: int) -> float:
    """Long-run fraction of cycles in which the application is up.

    ``A = 1 - p (1 - r_d)^n_sv``; with ``n_sv = 0`` this is the network
    availability.
    """
    _check_nsv(n_sv)
    if n_sv == 0:
        return network_availability(params)
    return 1.0 - app_unavailability(params, n_sv)


def transition_rate(params: NetworkParams, n_sv: int) -> float:
    """Application failures per cycle, ``p r_d (1 - r_d)^n_sv``."""
    _check_nsv(n_sv)
    return params.p * params.r_d * _survive_prob(params, n_sv)


def app_reliability(params: NetworkParams, n_sv: int) -> Cycles:
    """Mean application up time in cycles, ``1/(p r_d (1-r_d)^n_sv) - tau_dn``.

    Returns ``UNBOUNDED`` when bursts can never exceed the survival window.
    """
    _check_nsv(n_sv)
    if n_sv == 0:
        return params.tau_un
    lz = transition_rate(params, n_sv)
    if lz == 0.0:
        return UNBOUNDED
    return 1.0 / lz - params.tau_dn


def independent_app_availability(p: float, n_sv: int) -> float:
    """Application availability when every cycle fails independently with probability ``p``."""
    if not 0 <= p < 1:
        raise InvalidInputError(f"p must be in [0, 1), got {p!r}")
    _check_nsv(n_sv)
    return 1.0 - p ** (n_sv + 1)


def full_report(
    params: NetworkParams, n_sv: int, cycle_period: float | None = None
) -> ReliabilityReport:
    if cycle_period is not None and not cycle_period > 0:
        raise InvalidInputError("cycle period must be > 0")
    u = app_unavailability(params, n_sv)
    lz = transition_rate(params, n_sv)
    return ReliabilityReport(
        app_availability=app_availability(params, n_sv),
        app_unavailability=u,
        app_reliability=app_reliability(params, n_sv),
        network_availability=network_availability(params),
        transition_rate=lz,
        app_mean_downtime=u / lz if lz > 0 else None,
        network_mean_downtime=params.tau_dn,
        per=params.p,
        n_sv=n_sv,
        cycle_period=cycle_period,
    )
