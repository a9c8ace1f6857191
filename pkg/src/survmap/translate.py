"""Inverse mappings: network-level bounds that meet application requirements.

Requirements are treated as non-strict: ``A >= A_req`` and ``R >= R_req``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize

from survmap.core import _check_nsv
from survmap.errors import InfeasibleError, InvalidInputError, NumericalError

TAU_CAP = 1e9
BISECT_XTOL = 1e-12
BISECT_MAXITER = 200


class Kind(str, Enum):
    BOUND = "bound"
    UNCONSTRAINED = "unconstrained"
    INFEASIBLE = "infeasible"
    INTERVAL_SET = "interval-set"


@dataclass(frozen=True)
class FeasibilityResult:
    kind: Kind
    value: float | None = None
    intervals: tuple[tuple[float, float], ...] = field(default_factory=tuple)
    diagnostic: str = ""


def _check_prob(name: str, v: float) -> None:
    if not 0 < v < 1:
        raise InvalidInputError(f"{name} must be in (0, 1), got {v!r}")


def _check_tau(tau_dn: float) -> None:
    if not tau_dn >= 1:
        raise InvalidInputError(f"mean down time must be >= 1 cycle, got {tau_dn!r}")


def _stay_down(tau_dn: float) -> float:
    """``1 - 1/tau_dn`` without cancellation near 1."""
    return (tau_dn - 1.0) / tau_dn


def _per_ceiling(tau_dn: float) -> float:
    """Largest p for which tau_un stays >= 1 cycle."""
    return tau_dn / (1.0 + tau_dn)


def _per_bound(p_max: float, tau_dn: float, what: str) -> FeasibilityResult:
    if p_max >= 1.0:
        return FeasibilityResult(Kind.UNCONSTRAINED, diagnostic=f"{what} holds for any p < 1")
    ceiling = _per_ceiling(tau_dn)
    note = f"p <= {p_max!r}"
    if p_max > ceiling:
        note += f"; note p > {ceiling!r} is infeasible for tau_dn={tau_dn!r}"
    return FeasibilityResult(Kind.BOUND, value=p_max, diagnostic=note)


def max_per_for_availability(a_req: float, tau_dn: float, n_sv: int) -> FeasibilityResult:
    _check_prob("availability target", a_req)
    _check_tau(tau_dn)
    _check_nsv(n_sv)
    if n_sv == 0:
        return FeasibilityResult(Kind.BOUND, value=1.0 - a_req, diagnostic="p <= 1 - A_req")
    if tau_dn == 1.0:
        return FeasibilityResult(
            Kind.UNCONSTRAINED, diagnostic="single-cycle bursts are always survived"
        )
    p_max = (1.0 - a_req) / _stay_down(tau_dn) ** n_sv
    return _per_bound(p_max, tau_dn, "availability target")


def max_tau_dn_for_availability(a_req: float, p: float, n_sv: int) -> FeasibilityResult:
    _check_prob("availability target", a_req)
    _check_prob("packet error ratio", p)
    _check_nsv(n_sv)
    u = 1.0 - a_req
    if p <= u:
        return FeasibilityResult(Kind.UNCONSTRAINED, diagnostic="p already meets 1 - A_req")
    if n_sv == 0:
        return FeasibilityResult(
            Kind.INFEASIBLE, diagnostic="without survival time A = 1 - p < A_req"
        )
    tau_max = 1.0 / (1.0 - (u / p) ** (1.0 / n_sv))
    return FeasibilityResult(Kind.BOUND, value=tau_max, diagnostic=f"tau_dn <= {tau_max!r}")


def max_per_for_reliability(r_req: float, tau_dn: float, n_sv: int) -> FeasibilityResult:
    if not r_req > 0:
        raise InvalidInputError(f"reliability target must be > 0 cycles, got {r_req!r}")
    _check_tau(tau_dn)
    _check_nsv(n_sv)
    if n_sv >= 1 and tau_dn == 1.0:
        return FeasibilityResult(
            Kind.UNCONSTRAINED, diagnostic="single-cycle bursts are always survived"
        )
    p_max = tau_dn / (_stay_down(tau_dn) ** n_sv * (r_req + tau_dn))
    return _per_bound(p_max, tau_dn, "reliability target")


def reliability_in_tau(tau_dn: float, p: float, n_sv: int) -> float:
    """Mean application up time as a function of the mean burst length; ``inf`` if unbounded."""
    if tau_dn == 1.0 and n_sv >= 1:
        return math.inf
    stay = _stay_down(tau_dn) ** n_sv
    lz = p * stay / tau_dn
    if lz == 0.0:
        return math.inf
    return 1.0 / lz - tau_dn


def _bisect(f, lo: float, hi: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NumericalError(f"no sign change on [{lo!r}, {hi!r}]")
    x = optimize.bisect(f, lo, hi, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER)
    # R ~ 1/(tau - 1) near tau = 1, so tighten the step relative to tau - 1 there
    xtol = BISECT_XTOL * min(1.0, x - 1.0)
    if xtol < BISECT_XTOL:
        a, b = max(lo, x - 2 * BISECT_XTOL), min(hi, x + 2 * BISECT_XTOL)
        if np.sign(f(a)) != np.sign(f(b)):
            x = optimize.bisect(f, a, b, xtol=xtol, maxiter=BISECT_MAXITER)
    return x


def _argmin_tau(p: float, n_sv: int, tau_cap: float) -> tuple[float, float]:
    """Locate the interior minimum of reliability over ``(1, tau_cap]``."""
    f = lambda t: reliability_in_tau(t, p, n_sv)  # noqa: E731
    grid = 1.0 + np.geomspace(1e-9, tau_cap - 1.0, 400)
    vals = np.array([f(t) for t in grid])
    i = int(np.argmin(vals))
    if i == len(grid) - 1:
        return float(grid[i]), float(vals[i])
    lo = 1.0 if i == 0 else float(grid[i - 1])
    res = optimize.minimize_scalar(
        f, bracket=(lo, float(grid[i]), float(grid[i + 1])), method="golden",
        options={"xtol": 1e-12},
    )
    # golden section may step back onto the grid point it was seeded with
    if res.fun > vals[i]:
        return float(grid[i]), float(vals[i])
    return float(res.x), float(res.fun)


def tau_dn_intervals_for_reliability(
    r_req: float, p: float, n_sv: int, tau_cap: float = TAU_CAP
) -> FeasibilityResult:
    """All mean burst lengths in ``[1, tau_cap]`` that meet the reliability target."""
    if not r_req > 0:
        raise InvalidInputError(f"reliability target must be > 0 cycles, got {r_req!r}")
    _check_prob("packet error ratio", p)
    _check_nsv(n_sv)
    if not tau_cap > 1:
        raise InvalidInputError("tau_cap must exceed 1 cycle")
    g = lambda t: reliability_in_tau(t, p, n_sv) - r_req  # noqa: E731

    if n_sv == 0:
        lo = max(1.0, r_req * p / (1.0 - p))
        if lo > tau_cap:
            return FeasibilityResult(Kind.INFEASIBLE, diagnostic="target exceeds R at tau_cap")
        return FeasibilityResult(
            Kind.INTERVAL_SET, intervals=((lo, tau_cap),), diagnostic=f"tau_dn >= {lo!r}"
        )

    t_min, r_min = _argmin_tau(p, n_sv, tau_cap)
    if r_min >= r_req:
        return FeasibilityResult(
            Kind.INTERVAL_SET,
            intervals=((1.0, tau_cap),),
            diagnostic=f"target below the minimum R={r_min!r} at tau_dn={t_min!r}",
        )
    # left branch: R falls from +inf at tau=1 to the minimum
    left_lo = 1.0 + 1e-15
    a = _bisect(g, left_lo, t_min) if g(left_lo) > 0 else 1.0
    intervals = [(1.0, a)]
    b = tau_cap
    if g(tau_cap) >= 0:
        b = _bisect(g, t_min, tau_cap)
        intervals.append((b, tau_cap))
    return FeasibilityResult(
        Kind.INTERVAL_SET,
        intervals=tuple(intervals),
        diagnostic=f"R < target for tau_dn in ({a!r}, {b!r})",
    )


def joint_solve(a_req: float, r_req: float, n_sv: int) -> tuple[float, float]:
    """The unique ``(p, tau_dn)`` meeting both targets with equality.

    Raises ``InfeasibleError`` when the pair cannot be met by any chain with
    runs of at least one cycle.
    """
    _check_prob("availability target", a_req)
    if not r_req > 0:
        raise InvalidInputError(f"reliability target must be > 0 cycles, got {r_req!r}")
    _check_nsv(n_sv)
    u = 1.0 - a_req
    tau_dn = r_req * u / a_req
    if tau_dn < 1.0:
        raise InfeasibleError(f"requirements imply tau_dn={tau_dn!r} < 1 cycle")
    if tau_dn == 1.0 and n_sv >= 1:
        raise InfeasibleError("requirements imply tau_dn = 1, where the application never fails")
    p = u / _stay_down(tau_dn) ** n_sv
    if p >= 1.0:
        raise InfeasibleError(f"requirements imply p={p!r} >= 1")
    tau_un = tau_dn * (1.0 - p) / p
    if tau_un < 1.0:
        raise InfeasibleError(f"requirements imply tau_un={tau_un!r} < 1 cycle")
    return p, tau_dn
