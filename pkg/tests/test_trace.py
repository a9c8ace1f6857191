import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from survmap import UNBOUNDED, InvalidInputError
from survmap.trace import (
    BinaryTrace,
    PacketLogRecord,
    app_metrics_from_trace,
    downtime_cdf,
    from_packet_log,
    from_runs,
    parse_trace,
    read_packet_log,
    run_lengths,
    run_stats,
    survival_filter,
    write_cdf,
    write_trace,
)


def reference_filter(bits, n_sv, assume_up_before=True):
    """Walk the trace cycle by cycle with a survival counter."""
    out = []
    prev_up = assume_up_before
    eligible = False
    lost = 0
    for b in bits:
        if b == 1:
            out.append(1)
            lost = 0
            prev_up = True
            eligible = False
            continue
        if lost == 0:
            eligible = prev_up
        lost += 1
        prev_up = False
        out.append(1 if eligible and lost <= n_sv else 0)
    return out


def T(*bits, tc=None):
    return BinaryTrace(np.array(bits), tc)


bit_arrays = arrays(np.uint8, st.integers(1, 300), elements=st.integers(0, 1))


class TestBinaryTrace:
    def test_rejects_bad_bits(self):
        with pytest.raises(InvalidInputError):
            BinaryTrace(np.array([0, 2]))
        with pytest.raises(InvalidInputError):
            BinaryTrace(np.array([], dtype=np.uint8))

    def test_immutable(self):
        src = np.array([1, 0, 1], dtype=np.uint8)
        t = BinaryTrace(src)
        src[0] = 0
        assert t.bits[0] == 1
        with pytest.raises(ValueError):
            t.bits[0] = 0


class TestPacketLog:
    def test_all_present(self):
        recs = [PacketLogRecord(i, 0.001) for i in range(5)]
        assert from_packet_log(recs, 5, 0.002).bits.tolist() == [1] * 5

    def test_missing(self):
        recs = [PacketLogRecord(i, 0.001) for i in (0, 1, 2, 4)]
        assert from_packet_log(recs, 5, 0.002).bits.tolist() == [1, 1, 1, 0, 1]

    def test_late_and_lost(self):
        recs = [PacketLogRecord(0, 0.001), PacketLogRecord(1, None), PacketLogRecord(2, 0.0025),
                PacketLogRecord(3, 0.002)]
        assert from_packet_log(recs, 5, 0.002).bits.tolist() == [1, 0, 0, 1, 0]

    @pytest.mark.parametrize("seqs", [(0, 0), (0, 5)])
    def test_bad_seq(self, seqs):
        with pytest.raises(InvalidInputError):
            from_packet_log([PacketLogRecord(s, 0.001) for s in seqs], 5, 0.002)

    def test_csv(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("seq,delay_us\n0,900\n1,\n2,2500\n", encoding="utf-8")
        recs = read_packet_log(path)
        assert recs[1].delay is None
        assert recs[2].delay == pytest.approx(0.0025)
        assert from_packet_log(recs, 4, 0.002).bits.tolist() == [1, 0, 0, 0]

    def test_csv_bad_header(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("sequence,delay\n0,1\n", encoding="utf-8")
        with pytest.raises(InvalidInputError):
            read_packet_log(path)


class TestRunStats:
    def test_example(self):
        st_ = run_stats(T(1, 1, 0, 1, 0, 0, 1))
        assert (st_.n_total, st_.n_failed) == (7, 3)
        assert st_.per == 3 / 7
        assert sorted(st_.down_runs.tolist()) == [1, 2]
        assert st_.mean_down == 1.5
        assert sorted(st_.up_runs.tolist()) == [1, 1, 2]
        assert st_.mean_up == pytest.approx(4 / 3)

    def test_all_ones(self):
        st_ = run_stats(T(1, 1, 1))
        assert st_.per == 0 and st_.mean_down is None and st_.mean_up == 3

    def test_all_zeros(self):
        st_ = run_stats(T(0, 0))
        assert st_.per == 1 and st_.mean_up is None

    def test_strict(self):
        st_ = run_stats(T(0, 1, 1, 0, 0, 0, 1, 0), strict=True)
        assert st_.down_runs.tolist() == [3]
        assert st_.up_runs.tolist() == [2, 1]
        assert st_.n_failed == 5

    @given(bit_arrays)
    def test_rle_roundtrip(self, bits):
        values, _, lengths = run_lengths(bits)
        np.testing.assert_array_equal(from_runs(values, lengths), bits)
        st_ = run_stats(BinaryTrace(bits))
        assert st_.up_runs.sum() + st_.down_runs.sum() == st_.n_total
        assert st_.n_failed == st_.down_runs.sum()


class TestSurvivalFilter:
    def test_short_burst_vanishes(self):
        assert survival_filter(T(1, 0, 1), 1).bits.tolist() == [1, 1, 1]

    def test_long_burst_shrinks(self):
        assert survival_filter(T(1, 0, 0, 0, 1), 1).bits.tolist() == [1, 1, 0, 0, 1]

    def test_identity(self):
        t = T(0, 1, 0, 0)
        assert survival_filter(t, 0) == t

    def test_leading_burst(self):
        assert survival_filter(T(0, 0, 1), 1).bits.tolist() == [1, 0, 1]
        assert survival_filter(T(0, 0, 1), 1, assume_up_before=False).bits.tolist() == [0, 0, 1]

    @given(bit_arrays, st.integers(0, 5), st.booleans())
    def test_matches_reference(self, bits, n_sv, up_before):
        got = survival_filter(BinaryTrace(bits), n_sv, up_before).bits.tolist()
        assert got == reference_filter(bits.tolist(), n_sv, up_before)

    @given(bit_arrays, st.integers(0, 5))
    def test_run_multiset(self, bits, n_sv):
        before = run_stats(BinaryTrace(bits)).down_runs
        after = run_stats(survival_filter(BinaryTrace(bits), n_sv)).down_runs
        assert sorted(after.tolist()) == sorted(int(k) - n_sv for k in before if k > n_sv)

    @given(bit_arrays, st.integers(0, 4))
    def test_monotone_in_nsv(self, bits, n_sv):
        t = BinaryTrace(bits)
        assert survival_filter(t, n_sv + 1).bits.sum() >= survival_filter(t, n_sv).bits.sum()

    @given(bit_arrays)
    def test_survivable_trace_becomes_all_ones(self, bits):
        t = BinaryTrace(bits)
        longest = run_stats(t).down_runs.max(initial=0)
        assert survival_filter(t, int(longest)).bits.all()


class TestAppMetrics:
    def test_survived(self):
        rep = app_metrics_from_trace(T(1, 0, 1, 1), 1)
        assert rep.app_availability == 1.0
        assert rep.app_reliability is UNBOUNDED
        assert rep.network_availability == 0.75

    def test_partial(self):
        rep = app_metrics_from_trace(T(1, 0, 0, 1), 1)
        assert rep.app_availability == 0.75
        assert rep.app_mean_downtime == 1.0
        assert rep.network_mean_downtime == 2.0
        assert rep.per == 0.5
        assert rep.transition_rate == 0.25
        # up runs of the filtered trace 1,1,0,1 are {2, 1}
        assert rep.app_reliability == 1.5

    @given(bit_arrays, st.integers(0, 5))
    def test_flow_balance(self, bits, n_sv):
        rep = app_metrics_from_trace(BinaryTrace(bits), n_sv)
        if rep.transition_rate > 0:
            assert 1 - rep.transition_rate * rep.app_mean_downtime == pytest.approx(
                rep.app_availability, abs=1e-12
            )
        assert rep.network_availability <= rep.app_availability


class TestCdf:
    def test_example(self):
        cdf = downtime_cdf(T(1, 0, 0, 1, tc=0.002))
        assert cdf == [(0.0, 0.5), (0.002, 0.5), (0.004, 1.0)]

    def test_all_ones(self):
        assert downtime_cdf(T(1, 1)) == [(0.0, 1.0)]

    @given(bit_arrays)
    def test_shape(self, bits):
        t = BinaryTrace(bits)
        cdf = downtime_cdf(t)
        ys = [y for _, y in cdf]
        assert ys[0] == pytest.approx(1 - run_stats(t).per)
        assert all(b >= a for a, b in zip(ys, ys[1:]))
        assert ys[-1] == pytest.approx(1.0)

    def test_csv(self):
        buf = io.StringIO()
        write_cdf(downtime_cdf(T(1, 0, 0, 0, 1, tc=0.002)), buf)
        assert buf.getvalue().splitlines() == [
            "downtime_ms,cdf", "0.0,0.4", "2.0,0.4", "4.0,0.4", "6.0,1.0",
        ]


class TestTraceFile:
    def test_roundtrip(self):
        t = T(1, 0, 0, 1, 1)
        buf = io.StringIO()
        write_trace(t, buf)
        assert buf.getvalue() == "1\n0\n0\n1\n1\n"
        assert parse_trace("# comment\n" + buf.getvalue()) == t

    def test_no_trailing_newline(self):
        assert parse_trace("1\n0").bits.tolist() == [1, 0]

    @pytest.mark.parametrize("text", ["", "# only\n", "1\n2\n", "10\n"])
    def test_rejects(self, text):
        with pytest.raises(InvalidInputError):
            parse_trace(text)
