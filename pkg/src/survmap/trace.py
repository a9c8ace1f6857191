"""Binary reception traces: construction from packet logs, run statistics,
the survival-time filter and trace-based application metrics.

A trace holds one bit per cycle, ``1`` for a packet received within its
delay bound and ``0`` otherwise.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from survmap.core import UNBOUNDED, ReliabilityReport, _check_nsv
from survmap.errors import InvalidInputError


@dataclass(frozen=True)
class PacketLogRecord:
    seq: int
    delay: float | None  # seconds; None means never received


@dataclass(frozen=True, eq=False)
class BinaryTrace:
    bits: np.ndarray
    cycle_period: float | None = None

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size == 0:
            raise InvalidInputError("trace must be a non-empty 1-D sequence")
        if bits.dtype != np.uint8:
            if not np.all((bits == 0) | (bits == 1)):
                raise InvalidInputError("trace bits must be 0 or 1")
            bits = bits.astype(np.uint8)
        elif bits.max(initial=0) > 1:
            raise InvalidInputError("trace bits must be 0 or 1")
        if bits.flags.writeable:
            bits = bits.copy() if bits is self.bits else bits
            bits.setflags(write=False)
        if self.cycle_period is not None and not self.cycle_period > 0:
            raise InvalidInputError("cycle period must be > 0")
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return int(self.bits.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryTrace):
            return NotImplemented
        return self.cycle_period == other.cycle_period and np.array_equal(self.bits, other.bits)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class RunStats:
    n_total: int
    n_failed: int
    up_runs: np.ndarray
    down_runs: np.ndarray

    @property
    def per(self) -> float:
        return self.n_failed / self.n_total

    @property
    def mean_up(self) -> float | None:
        return float(self.up_runs.mean()) if self.up_runs.size else None

    @property
    def mean_down(self) -> float | None:
        return float(self.down_runs.mean()) if self.down_runs.size else None


def run_lengths(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run-length encode ``bits``; returns ``(values, starts, lengths)``."""
    bits = np.asarray(bits)
    n = bits.size
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        return np.zeros(0, dtype=np.uint8), empty, empty
    change = np.flatnonzero(bits[1:] != bits[:-1]) + 1
    starts = np.concatenate(([0], change)).astype(np.int64)
    lengths = np.diff(np.concatenate((starts, [n])))
    return bits[starts], starts, lengths


def from_runs(values: Sequence[int], lengths: Sequence[int]) -> np.ndarray:
    return np.repeat(np.asarray(values, dtype=np.uint8), np.asarray(lengths, dtype=np.int64))


def from_packet_log(
    records: Iterable[PacketLogRecord],
    expected_count: int,
    delay_bound: float,
    cycle_period: float | None = None,
) -> BinaryTrace:
    """Bit ``i`` is 1 iff packet ``i`` arrived with delay at most ``delay_bound``.

    Length comes from ``expected_count`` so that packets lost at the tail of
    the log still count as failures.
    """
    if expected_count < 1:
        raise InvalidInputError("expected_count must be >= 1")
    if not delay_bound > 0:
        raise InvalidInputError("delay bound must be > 0")
    bits = np.zeros(expected_count, dtype=np.uint8)
    seen = np.zeros(expected_count, dtype=bool)
    for rec in records:
        if not 0 <= rec.seq < expected_count:
            raise InvalidInputError(f"sequence number {rec.seq} outside [0, {expected_count})")
        if seen[rec.seq]:
            raise InvalidInputError(f"duplicate sequence number {rec.seq}")
        seen[rec.seq] = True
        if rec.delay is not None and rec.delay <= delay_bound:
            bits[rec.seq] = 1
    return BinaryTrace(bits, cycle_period)


def run_stats(trace: BinaryTrace, strict: bool = False) -> RunStats:
    """Maximal run statistics of ``trace``.

    With ``strict=True`` the first and last runs, which may be truncated by
    the observation window, are dropped from the run multisets (counts of
    cycles are unaffected).
    """
    values, _, lengths = run_lengths(trace.bits)
    if strict:
        values, lengths = values[1:-1], lengths[1:-1]
    n = len(trace)
    n_failed = n - int(np.count_nonzero(trace.bits))
    return RunStats(
        n_total=n,
        n_failed=n_failed,
        up_runs=lengths[values == 1],
        down_runs=lengths[values == 0],
    )


def survival_filter(trace: BinaryTrace, n_sv: int, assume_up_before: bool = True) -> BinaryTrace:
    """Turn the first ``n_sv`` zeros of every failure burst into ones.

    Bursts of at most ``n_sv`` cycles disappear; longer ones shrink by
    ``n_sv``. A burst at the very start of the trace is filtered too unless
    ``assume_up_before`` is False.
    """
    _check_nsv(n_sv)
    if n_sv == 0:
        return trace
    values, starts, lengths = run_lengths(trace.bits)
    down = values == 0
    if not assume_up_before and values[0] == 0:
        down[0] = False
    d_starts = starts[down]
    d_fill = np.minimum(lengths[down], n_sv)
    if d_fill.size == 0:
        return trace
    offsets = np.arange(int(d_fill.sum())) - np.repeat(np.cumsum(d_fill) - d_fill, d_fill)
    out = trace.bits.copy()
    out[np.repeat(d_starts, d_fill) + offsets] = 1
    return BinaryTrace(out, trace.cycle_period)


def app_metrics_from_trace(
    trace: BinaryTrace, n_sv: int, assume_up_before: bool = True
) -> ReliabilityReport:
    """Empirical application and network metrics of one trace (durations in cycles)."""
    net = run_stats(trace)
    app = run_stats(survival_filter(trace, n_sv, assume_up_before))
    n = net.n_total
    app_down_events = app.down_runs.size
    if app_down_events == 0:
        reliability = UNBOUNDED
    else:
        reliability = app.mean_up
    return ReliabilityReport(
        app_availability=1.0 - app.n_failed / n,
        app_unavailability=app.n_failed / n,
        app_reliability=reliability,
        network_availability=1.0 - net.per,
        transition_rate=app_down_events / n,
        app_mean_downtime=app.mean_down,
        network_mean_downtime=net.mean_down,
        per=net.per,
        n_sv=n_sv,
        cycle_period=trace.cycle_period,
    )


def downtime_cdf(trace: BinaryTrace) -> list[tuple[float, float]]:
    """Packet-weighted CDF of down-run lengths, one step per cycle.

    The value at ``k`` cycles is the share of cycles that were either
    successful or part of a down run of at most ``k`` cycles. Durations are
    returned in seconds, or in cycles if the trace has no cycle period.
    """
    st = run_stats(trace)
    n = st.n_total
    max_k = int(st.down_runs.max()) if st.down_runs.size else 0
    weight = np.bincount(st.down_runs, weights=st.down_runs, minlength=max_k + 1)
    weight[0] = n - st.n_failed
    cum = np.cumsum(weight) / n
    scale = trace.cycle_period if trace.cycle_period is not None else 1.0
    return [(k * scale, float(c)) for k, c in enumerate(cum)]


# -- file formats -------------------------------------------------------------


def parse_trace(text: str, cycle_period: float | None = None) -> BinaryTrace:
    bits = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line not in ("0", "1"):
            raise InvalidInputError(f"line {lineno}: expected 0 or 1, got {line!r}")
        bits.append(line == "1")
    if not bits:
        raise InvalidInputError("trace file contains no bits")
    return BinaryTrace(np.array(bits, dtype=np.uint8), cycle_period)


def read_trace(path: str | Path, cycle_period: float | None = None) -> BinaryTrace:
    return parse_trace(Path(path).read_text(encoding="utf-8"), cycle_period)


def write_trace(trace: BinaryTrace, fh: io.TextIOBase) -> None:
    # ~2 bytes per cycle; 10^7 cycles is 20 MB
    lut = np.array([ord("0"), ord("1")], dtype=np.uint8)
    buf = np.empty(2 * len(trace), dtype=np.uint8)
    buf[0::2] = lut[trace.bits]
    buf[1::2] = ord("\n")
    fh.write(buf.tobytes().decode("ascii"))


def read_packet_log(path: str | Path) -> list[PacketLogRecord]:
    """CSV with header ``seq,delay_us``; an empty delay means never received."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["seq", "delay_us"]:
            raise InvalidInputError("packet log header must be 'seq,delay_us'")
        for lineno, row in enumerate(reader, 2):
            try:
                seq = int(row["seq"])
                raw = (row["delay_us"] or "").strip()
                delay = float(raw) * 1e-6 if raw else None
            except (TypeError, ValueError) as exc:
                raise InvalidInputError(f"line {lineno}: {exc}") from exc
            if delay is not None and not (math.isfinite(delay) and delay >= 0):
                raise InvalidInputError(f"line {lineno}: delay must be a non-negative number")
            records.append(PacketLogRecord(seq, delay))
    return records


def write_cdf(points: Sequence[tuple[float, float]], fh: io.TextIOBase) -> None:
    """CSV with header ``downtime_ms,cdf``; ``points`` durations are in seconds."""
    fh.write("downtime_ms,cdf\n")
    for x, c in points:
        # 3 * 0.002 * 1e3 == 6.000000000000001
        fh.write(f"{round(x * 1e3, 9)!r},{c!r}\n")
