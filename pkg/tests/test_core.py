import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from survmap import (
    UNBOUNDED,
    AppRequirements,
    CyclicTrafficSpec,
    InfeasibleError,
    InvalidInputError,
    NetworkParams,
    app_availability,
    app_reliability,
    full_report,
    independent_app_availability,
    network_availability,
    network_params_from_per,
    survival_cycles,
    transition_rate,
)
from survmap.core import app_unavailability
from survmap.fsmc import build_chain, steady_state


@st.composite
def feasible(draw, n_sv=st.integers(0, 8)):
    p = draw(st.floats(1e-6, 0.45))
    tau = draw(st.floats(1.0, 50.0))
    return NetworkParams.from_per(p, tau), draw(n_sv)


class TestSurvivalCycles:
    @pytest.mark.parametrize(
        "t_sv, t_c, expected",
        [(0.006, 0.002, 3), (0.0, 0.002, 0), (0.005, 0.002, 2), (0.002, 0.002, 1), (0.0059, 0.002, 2)],
    )
    def test_floor(self, t_sv, t_c, expected):
        assert survival_cycles(t_sv, t_c) == expected

    @pytest.mark.parametrize("t_c", [0.0, -1e-3])
    def test_rejects_non_positive_period(self, t_c):
        with pytest.raises(InvalidInputError):
            survival_cycles(0.006, t_c)

    def test_traffic_spec(self):
        traffic = CyclicTrafficSpec(cycle_period=0.002, survival_time=0.006, delay_bound=0.002)
        assert traffic.n_sv == 3
        with pytest.raises(InvalidInputError):
            CyclicTrafficSpec(cycle_period=0.002, survival_time=-1, delay_bound=0.002)


class TestNetworkParams:
    def test_from_per(self):
        params = network_params_from_per(0.01, 2)
        assert params.r_d == 0.5
        assert params.r_u == pytest.approx(1 / 198, rel=1e-15)
        assert params.tau_un == pytest.approx(198, rel=1e-14)
        assert params.p == pytest.approx(0.01, rel=1e-14)

    def test_strict_alternation(self):
        params = network_params_from_per(0.5, 1)
        assert params.tau_un == 1.0
        assert params.tau_dn == 1.0

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            network_params_from_per(0.9, 1)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1])
    def test_bad_per(self, p):
        with pytest.raises(InvalidInputError):
            network_params_from_per(p, 2)

    def test_from_durations(self):
        params = NetworkParams.from_durations(198, 2)
        assert params.p == pytest.approx(0.01, rel=1e-14)
        with pytest.raises(InfeasibleError):
            NetworkParams.from_durations(0.5, 2)

    @given(feasible())
    def test_consistency_identity(self, pn):
        params, _ = pn
        assert params.tau_un == pytest.approx(params.tau_dn * (1 - params.p) / params.p, rel=1e-12)
        assert 0 < params.p < 1


class TestForward:
    params = network_params_from_per(0.01, 2)

    def test_network_availability(self):
        assert network_availability(self.params) == pytest.approx(0.99, rel=1e-15)
        assert network_availability(network_params_from_per(0.03, 2)) == pytest.approx(0.97)
        assert network_availability(NetworkParams(1e-300, 0.5)) == 1.0

    def test_app_availability(self):
        assert app_availability(self.params, 1) == pytest.approx(0.995, rel=1e-15)
        assert app_availability(network_params_from_per(0.2, 1), 3) == 1.0
        with pytest.raises(InvalidInputError):
            app_availability(self.params, -1)

    def test_app_reliability(self):
        assert app_reliability(self.params, 1) == pytest.approx(398, rel=1e-13)
        assert app_reliability(self.params, 0) == pytest.approx(198, rel=1e-13)
        assert app_reliability(network_params_from_per(0.2, 1), 1) is UNBOUNDED

    def test_reliability_calibrated_point_vs_chain(self):
        params = network_params_from_per(0.03, 2.41)
        r = app_reliability(params, 3)
        assert r == pytest.approx(398.7, abs=0.05)
        pi_d = steady_state(build_chain(params, 3)).down
        assert r == pytest.approx((1 - pi_d) / (pi_d * params.r_d), rel=1e-10)

    def test_transition_rate(self):
        assert transition_rate(self.params, 1) == pytest.approx(0.0025, rel=1e-14)
        assert transition_rate(self.params, 0) == pytest.approx(0.005, rel=1e-14)
        pi_d = steady_state(build_chain(self.params, 1)).down
        assert transition_rate(self.params, 1) == pytest.approx(pi_d * self.params.r_d, rel=1e-12)
        assert app_availability(self.params, 1) / transition_rate(self.params, 1) == pytest.approx(398)

    def test_independent(self):
        assert independent_app_availability(0.03, 3) == pytest.approx(1 - 8.1e-7, abs=1e-18)
        assert independent_app_availability(0.03, 0) == 0.97
        bursty = app_availability(network_params_from_per(0.03, 2), 1)
        assert independent_app_availability(0.03, 1) > bursty

    def test_full_report(self):
        rep = full_report(self.params, 1, 0.002)
        assert rep.app_availability == pytest.approx(0.995)
        assert rep.app_reliability == pytest.approx(398)
        assert rep.app_reliability_seconds == pytest.approx(0.796)
        assert rep.network_availability == pytest.approx(0.99)
        assert rep.transition_rate == pytest.approx(0.0025)
        assert rep.app_mean_downtime == pytest.approx(2, rel=1e-14)

    def test_full_report_no_survival(self):
        rep = full_report(self.params, 0)
        assert rep.app_availability == rep.network_availability
        assert rep.app_reliability == self.params.tau_un
        assert rep.app_reliability_seconds is None

    def test_full_report_calibrated(self):
        assert full_report(network_params_from_per(0.03, 2.41), 3).app_availability == pytest.approx(
            0.994, abs=5e-4
        )

    def test_requirements(self):
        AppRequirements(0.999999, 1, 1.5e10)
        with pytest.raises(InvalidInputError):
            AppRequirements(1.0, 1)
        with pytest.raises(InvalidInputError):
            AppRequirements(0.9, 1, 0.0)


class TestProperties:
    @given(feasible(st.integers(1, 8)), st.floats(1.0, 50.0))
    def test_monotone(self, pn, tau2):
        params, n = pn
        a = app_availability(params, n)
        assert app_availability(params, n + 1) >= a
        lo, hi = sorted((params.tau_dn, tau2))
        try:
            a_lo = app_availability(NetworkParams.from_per(params.p, lo), n)
            a_hi = app_availability(NetworkParams.from_per(params.p, hi), n)
        except InfeasibleError:
            return
        assert a_hi <= a_lo + 1e-15

    @given(feasible())
    def test_collapse(self, pn):
        params, _ = pn
        assert app_availability(params, 0) == network_availability(params)
        assert app_reliability(params, 0) == pytest.approx(params.tau_un, rel=1e-12)

    @given(feasible())
    def test_flow_balance(self, pn):
        params, n = pn
        rep = full_report(params, n)
        if rep.transition_rate > 0:
            assert rep.app_mean_downtime == pytest.approx(params.tau_dn, rel=1e-9)
            assert 1 - rep.transition_rate * rep.app_mean_downtime == pytest.approx(
                rep.app_availability, abs=1e-12
            )

    @settings(max_examples=200)
    @given(st.floats(1e-4, 0.45), st.floats(0.001, 50.0), st.integers(1, 8))
    def test_independent_dominates_longer_bursts(self, p, excess, n):
        # i.i.d. losses have mean burst 1/(1-p); dominance needs longer bursts than that
        tau = 1.0 / (1.0 - p) + excess
        params = NetworkParams.from_per(p, tau)
        assert p ** (n + 1) < app_unavailability(params, n)

    @given(st.floats(0.01, 0.45), st.floats(0.01, 0.99), st.integers(1, 8))
    def test_independent_pessimistic_for_short_bursts(self, p, frac, n):
        tau = 1.0 + frac * (1.0 / (1.0 - p) - 1.0)
        params = NetworkParams.from_per(p, tau)
        assert p ** (n + 1) > app_unavailability(params, n)

    @given(feasible())
    def test_ranges(self, pn):
        params, n = pn
        rep = full_report(params, n, 0.001)
        assert 0 <= rep.network_availability <= rep.app_availability <= 1
        assert 0 <= rep.app_unavailability <= 1
        assert rep.transition_rate >= 0
        r = rep.app_reliability
        assert r is UNBOUNDED or (r >= 0 and math.isfinite(r))
        assert rep.network_mean_downtime >= 1


def test_unbounded_is_singleton():
    import pickle

    assert pickle.loads(pickle.dumps(UNBOUNDED)) is UNBOUNDED
    assert str(UNBOUNDED) == "unbounded"
