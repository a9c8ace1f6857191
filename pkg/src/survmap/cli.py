"""Command-line front end.

Every command writes one report (JSON by default) to ``--out`` or stdout;
diagnostics go to stderr. Exit codes: 0 ok, 2 invalid input,
3 infeasible requirement, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from collections.abc import Sequence
from typing import Any

import numpy as np

from survmap import __version__
from survmap.chansim import (
    RNG_ALGORITHM,
    gilbert_from_network_params,
    generate_with,
    make_rng,
    bernoulli_with,
    monte_carlo_validate,
)
from survmap.core import (
    UNBOUNDED,
    NetworkParams,
    ReliabilityReport,
    app_availability,
    app_reliability,
    full_report,
    independent_app_availability,
    survival_cycles,
)
from survmap.errors import InfeasibleError, InvalidInputError
from survmap.fsmc import build_chain, steady_state, write_csv
from survmap.trace import (
    app_metrics_from_trace,
    downtime_cdf,
    from_packet_log,
    read_packet_log,
    read_trace,
    run_stats,
    write_cdf,
    write_trace,
)
from survmap.translate import (
    FeasibilityResult,
    Kind,
    max_per_for_availability,
    max_per_for_reliability,
    max_tau_dn_for_availability,
    tau_dn_intervals_for_reliability,
    joint_solve,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

_DURATION = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(us|ms|s)\s*$")
_SCALE = {"us": 1e-6, "ms": 1e-3, "s": 1.0}


class UsageError(InvalidInputError):
    pass


def duration(text: str) -> float:
    """Parse ``"6ms"``, ``"0.5s"`` or ``"250us"`` into seconds."""
    m = _DURATION.match(text)
    if not m:
        raise argparse.ArgumentTypeError(
            f"duration {text!r} needs a unit suffix (us, ms or s)"
        )
    return float(m.group(1)) * _SCALE[m.group(2)]


class _TauDnAction(argparse.Action):
    # a bare number is a count of cycles, a suffixed one is a time
    def __call__(self, parser, namespace, values, option_string=None):
        try:
            setattr(namespace, "tau_dn_cycles", float(values))
        except ValueError:
            try:
                setattr(namespace, self.dest, duration(values))
            except argparse.ArgumentTypeError as exc:
                raise argparse.ArgumentError(self, str(exc)) from None


# -- report helpers -------------------------------------------------------------


def _num(v: Any) -> Any:
    if v is UNBOUNDED:
        return "unbounded"
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return "unbounded" if v > 0 else None
    return v


def _put(d: dict, key: str, value: Any, unit: str | None) -> None:
    d[key] = _num(value)
    if unit is not None:
        d[key + "_unit"] = unit


def report_fields(rep: ReliabilityReport) -> dict:
    out: dict[str, Any] = {}
    _put(out, "app_availability", rep.app_availability, "probability")
    _put(out, "app_unavailability", rep.app_unavailability, "probability")
    _put(out, "app_reliability_cycles", rep.app_reliability, "cycles")
    _put(out, "network_availability", rep.network_availability, "probability")
    _put(out, "per", rep.per, "probability")
    _put(out, "transition_rate", rep.transition_rate, "events_per_cycle")
    _put(out, "app_mean_downtime_cycles", rep.app_mean_downtime, "cycles")
    _put(out, "network_mean_downtime_cycles", rep.network_mean_downtime, "cycles")
    if rep.cycle_period is not None:
        _put(out, "app_reliability_seconds", rep.app_reliability_seconds, "s")
        _put(out, "app_mean_downtime_seconds", rep.app_mean_downtime_seconds, "s")
        _put(out, "network_mean_downtime_seconds", rep.network_mean_downtime_seconds, "s")
    return out


def feasibility_fields(res: FeasibilityResult, unit: str) -> dict:
    out: dict[str, Any] = {"kind": res.kind.value}
    if res.value is not None:
        _put(out, "value", res.value, unit)
    if res.intervals:
        out["intervals"] = [[_num(lo), _num(hi)] for lo, hi in res.intervals]
        out["intervals_unit"] = unit
    out["diagnostic"] = res.diagnostic
    return out


def _flatten(prefix: str, obj: Any, rows: list[tuple[str, Any, str]]) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k.endswith("_unit"):
                continue
            unit = obj.get(k + "_unit", "")
            key = f"{prefix}.{k}" if prefix else k
            if isinstance(v, (dict, list)):
                _flatten(key, v, rows)
            else:
                rows.append((key, v, unit))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj, ""))


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    rows: list[tuple[str, Any, str]] = []
    _flatten("", doc, rows)
    buf = io.StringIO()
    buf.write("key,value,unit\n")
    for k, v, u in rows:
        buf.write(f"{k},{_csv_cell(v)},{u}\n")
    return buf.getvalue()


def document(command: str, args: argparse.Namespace, inputs: dict, results: dict,
             rng: dict | None = None) -> dict:
    meta: dict[str, Any] = {"tool": "survmap", "version": __version__, "command": command}
    skip = {"func", "command", "out", "format", "cdf_out", "trace_out", "fsmc_csv", "workers"}
    meta["arguments"] = {k: _num(v) for k, v in sorted(vars(args).items()) if k not in skip}
    if rng is not None:
        meta["rng"] = rng
    return {"meta": meta, "inputs": inputs, "results": results}


# -- parameter resolution ----------------------------------------------------------


def _cycle_period(args) -> float | None:
    if getattr(args, "cycle_ms", None) is None:
        return None
    if not args.cycle_ms > 0:
        raise UsageError("--cycle-ms must be > 0")
    return args.cycle_ms * 1e-3


def _tau_dn_cycles(args, required: bool = True) -> float | None:
    if getattr(args, "tau_dn_cycles", None) is not None:
        return args.tau_dn_cycles
    if getattr(args, "tau_dn", None) is not None:
        tc = _cycle_period(args)
        if tc is None:
            raise UsageError("--tau-dn with a time unit needs --cycle-ms")
        return args.tau_dn / tc
    if required:
        raise UsageError("one of --tau-dn or --tau-dn-cycles is required")
    return None


def _nsv(args) -> int:
    if args.nsv is not None:
        if args.nsv < 0:
            raise UsageError("--nsv must be >= 0")
        return args.nsv
    if getattr(args, "survival", None) is not None:
        tc = _cycle_period(args)
        if tc is None:
            raise UsageError("--survival needs --cycle-ms")
        return survival_cycles(args.survival, tc)
    raise UsageError("one of --nsv or --survival is required")


def _availability(args) -> float:
    if args.availability is not None:
        return args.availability
    if args.nines is not None:
        if not args.nines > 0:
            raise UsageError("--nines must be > 0")
        return 1.0 - 10.0 ** (-args.nines)
    raise UsageError("one of --availability or --nines is required")


def _network_params(args) -> NetworkParams:
    tau_dn = _tau_dn_cycles(args)
    if getattr(args, "tau_un_cycles", None) is not None:
        return NetworkParams.from_durations(args.tau_un_cycles, tau_dn)
    if args.per is None:
        raise UsageError("--per is required")
    return NetworkParams.from_per(args.per, tau_dn)


def _params_inputs(params: NetworkParams) -> dict:
    out: dict[str, Any] = {}
    _put(out, "per", params.p, "probability")
    _put(out, "tau_un_cycles", params.tau_un, "cycles")
    _put(out, "tau_dn_cycles", params.tau_dn, "cycles")
    _put(out, "r_u", params.r_u, "probability_per_cycle")
    _put(out, "r_d", params.r_d, "probability_per_cycle")
    return out


# -- commands ----------------------------------------------------------------------


def cmd_map(args) -> tuple[dict, int]:
    params = _network_params(args)
    n_sv = _nsv(args)
    tc = _cycle_period(args)
    rep = full_report(params, n_sv, tc)
    inputs = _params_inputs(params)
    _put(inputs, "n_sv", n_sv, "cycles")
    if tc is not None:
        _put(inputs, "cycle_period", tc, "s")
    results = report_fields(rep)
    _put(results, "independent_app_availability",
         independent_app_availability(params.p, n_sv), "probability")
    if args.fsmc_csv:
        model = build_chain(params, n_sv)
        with open(args.fsmc_csv, "w", encoding="utf-8", newline="\n") as fh:
            write_csv(model, steady_state(model), fh)
    return document("map", args, inputs, results), EXIT_OK


def cmd_invert(args) -> tuple[dict, int]:
    a_req = _availability(args)
    n_sv = _nsv(args)
    r_req = args.reliability_cycles
    inputs: dict[str, Any] = {}
    _put(inputs, "availability_target", a_req, "probability")
    if r_req is not None:
        _put(inputs, "reliability_target_cycles", r_req, "cycles")
    _put(inputs, "n_sv", n_sv, "cycles")
    tau_dn = _tau_dn_cycles(args, required=False)
    if args.per is not None and tau_dn is not None:
        raise UsageError("give at most one of --per and --tau-dn-cycles")

    results: dict[str, Any] = {}
    code = EXIT_OK
    if args.per is not None:
        _put(inputs, "per", args.per, "probability")
        res = max_tau_dn_for_availability(a_req, args.per, n_sv)
        results["max_tau_dn_for_availability"] = feasibility_fields(res, "cycles")
        if res.kind is Kind.INFEASIBLE:
            code = EXIT_INFEASIBLE
        if r_req is not None:
            res = tau_dn_intervals_for_reliability(r_req, args.per, n_sv)
            results["tau_dn_intervals_for_reliability"] = feasibility_fields(res, "cycles")
            if res.kind is Kind.INFEASIBLE:
                code = EXIT_INFEASIBLE
    elif tau_dn is not None:
        _put(inputs, "tau_dn_cycles", tau_dn, "cycles")
        res = max_per_for_availability(a_req, tau_dn, n_sv)
        results["max_per_for_availability"] = feasibility_fields(res, "probability")
        if r_req is not None:
            res = max_per_for_reliability(r_req, tau_dn, n_sv)
            results["max_per_for_reliability"] = feasibility_fields(res, "probability")
    elif r_req is not None:
        try:
            p, tau = joint_solve(a_req, r_req, n_sv)
        except InfeasibleError as exc:
            results["joint"] = {"kind": Kind.INFEASIBLE.value, "diagnostic": str(exc)}
            code = EXIT_INFEASIBLE
        else:
            params = NetworkParams.from_per(p, tau)
            joint: dict[str, Any] = {"kind": "solution"}
            _put(joint, "p", p, "probability")
            _put(joint, "tau_dn", tau, "cycles")
            _put(joint, "tau_un", params.tau_un, "cycles")
            _put(joint, "check_app_availability", app_availability(params, n_sv), "probability")
            _put(joint, "check_app_reliability", app_reliability(params, n_sv), "cycles")
            results["joint"] = joint
    else:
        raise UsageError("invert needs --reliability-cycles, --per or --tau-dn-cycles")
    if code == EXIT_INFEASIBLE:
        print("survmap: requirement is infeasible", file=sys.stderr)
    return document("invert", args, inputs, results), code


def _mc_fields(mc) -> dict:
    out: dict[str, Any] = {}
    _put(out, "replications", mc.replications, "replications")
    _put(out, "cycles_per_rep", mc.cycles_per_rep, "cycles")
    _put(out, "mean_app_availability", mc.mean_a, "probability")
    _put(out, "stderr_app_availability", mc.stderr_a, "probability")
    _put(out, "mean_app_unavailability", mc.mean_unavailability, "probability")
    _put(out, "mean_app_reliability", mc.mean_r if mc.mean_r is not None else UNBOUNDED, "cycles")
    _put(out, "stderr_app_reliability", mc.stderr_r, "cycles")
    _put(out, "failure_event_count", mc.failure_event_count, "events")
    _put(out, "per_rep_app_availability", [_num(r.app_availability) for r in mc.per_rep], "probability")
    _put(out, "per_rep_app_reliability", [_num(r.app_reliability) for r in mc.per_rep], "cycles")
    return out


def cmd_simulate(args) -> tuple[dict, int]:
    n_sv = _nsv(args)
    if args.independent:
        if args.per is None:
            raise UsageError("--per is required")
        # any burst length gives the same loss ratio; use the Bernoulli-equivalent one
        params = NetworkParams.from_per(args.per, 1.0 / (1.0 - args.per))
    else:
        params = _network_params(args)
    mc = monte_carlo_validate(params, n_sv, args.cycles, args.reps, args.seed,
                              independent=args.independent, workers=args.workers)
    inputs = _params_inputs(params) if not args.independent else {}
    if args.independent:
        _put(inputs, "per", params.p, "probability")
    _put(inputs, "n_sv", n_sv, "cycles")
    inputs["channel"] = mc.channel
    analytic: dict[str, Any] = {}
    if args.independent:
        _put(analytic, "app_availability", independent_app_availability(params.p, n_sv), "probability")
    else:
        _put(analytic, "app_availability", app_availability(params, n_sv), "probability")
        _put(analytic, "app_reliability_cycles", app_reliability(params, n_sv), "cycles")
    results = {"monte_carlo": _mc_fields(mc), "analytic": analytic}
    if args.trace_out:
        rng = make_rng(args.seed, 0)
        tc = _cycle_period(args)
        if args.independent:
            trace = bernoulli_with(params.p, args.cycles, rng, tc)
        else:
            trace = generate_with(gilbert_from_network_params(params), args.cycles, rng, cycle_period=tc)
        with open(args.trace_out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"# survmap {mc.channel} trace, replication 0, seed {args.seed}\n")
            write_trace(trace, fh)
    rng = {"algorithm": RNG_ALGORITHM, "seed": args.seed,
           "replication_stream": "SeedSequence(seed, spawn_key=(rep,))"}
    return document("simulate", args, inputs, results, rng), EXIT_OK


def cmd_analyze(args) -> tuple[dict, int]:
    n_sv = _nsv(args)
    tc = _cycle_period(args)
    inputs: dict[str, Any] = {}
    if args.packet_log:
        if args.expected is None or args.delay_bound_ms is None:
            raise UsageError("--packet-log needs --expected and --delay-bound-ms")
        trace = from_packet_log(read_packet_log(args.packet_log), args.expected,
                                args.delay_bound_ms * 1e-3, tc)
        inputs["source"] = "packet_log"
        _put(inputs, "delay_bound", args.delay_bound_ms * 1e-3, "s")
    elif args.trace:
        trace = read_trace(args.trace, tc)
        inputs["source"] = "trace"
    else:
        raise UsageError("one of --trace or --packet-log is required")
    _put(inputs, "n_cycles", len(trace), "cycles")
    _put(inputs, "n_sv", n_sv, "cycles")
    rep = app_metrics_from_trace(trace, n_sv, assume_up_before=not args.start_down_unfiltered)
    st = run_stats(trace, strict=args.strict)
    net: dict[str, Any] = {}
    _put(net, "n_total", st.n_total, "cycles")
    _put(net, "n_failed", st.n_failed, "cycles")
    _put(net, "per", st.per, "probability")
    _put(net, "up_run_count", int(st.up_runs.size), "runs")
    _put(net, "down_run_count", int(st.down_runs.size), "runs")
    _put(net, "mean_up_cycles", st.mean_up, "cycles")
    _put(net, "mean_down_cycles", st.mean_down, "cycles")
    net["boundary_runs"] = "excluded" if args.strict else "included"
    results = {"application": report_fields(rep), "network_runs": net}
    if args.cdf_out:
        if tc is None:
            raise UsageError("--cdf-out needs --cycle-ms")
        with open(args.cdf_out, "w", encoding="utf-8", newline="\n") as fh:
            write_cdf(downtime_cdf(trace), fh)
    return document("analyze", args, inputs, results), EXIT_OK


def _sweep_value(params: NetworkParams, n_sv: int, metric: str) -> Any:
    if metric == "availability":
        return app_availability(params, n_sv)
    if metric == "unavailability":
        return 1.0 - app_availability(params, n_sv)
    return app_reliability(params, n_sv)


def _sub_seed(seed: int, index: int) -> int:
    state = np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def sweep_rows(args) -> list[list[Any]]:
    if args.var == "nsv":
        if args.start != int(args.start) or args.stop != int(args.stop):
            raise UsageError("--from/--to must be integers when sweeping nsv")
        grid: list[float] = list(range(int(args.start), int(args.stop) + 1))
        if grid and grid[0] < 0:
            raise UsageError("nsv grid must be >= 0")
    else:
        if args.steps is None or args.steps < 1 or args.start > args.stop:
            grid = []
        elif args.steps == 1:
            grid = [args.start]
        else:
            grid = [float(x) for x in np.linspace(args.start, args.stop, args.steps)]
    if not grid:
        raise UsageError("sweep grid is empty")
    if args.per is None:
        raise UsageError("--per is required")

    rows = []
    for i, x in enumerate(grid):
        if args.var == "nsv":
            n_sv, tau = int(x), _tau_dn_cycles(args)
        else:
            n_sv, tau = _nsv(args), x
        try:
            params = NetworkParams.from_per(args.per, tau)
            value: Any = _sweep_value(params, n_sv, args.metric)
        except InfeasibleError:
            rows.append([x, "infeasible"] + (["", ""] if args.monte_carlo else []))
            continue
        row = [x, value]
        if args.monte_carlo:
            mc = monte_carlo_validate(params, n_sv, args.cycles, args.reps,
                                      _sub_seed(args.seed, i), independent=args.independent)
            if args.metric == "availability":
                row += [mc.mean_a, mc.stderr_a]
            elif args.metric == "unavailability":
                row += [mc.mean_unavailability, mc.stderr_a]
            else:
                row += [mc.mean_r if mc.mean_r is not None else UNBOUNDED, mc.stderr_r]
        rows.append(row)
    return rows


def cmd_sweep(args) -> tuple[dict | str, int]:
    rows = sweep_rows(args)
    header = ["swept_value", "analytic_value"] + (["mc_mean", "mc_stderr"] if args.monte_carlo else [])
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_csv_cell(_num(v)) for v in row) + "\n")
        return buf.getvalue(), EXIT_OK
    inputs: dict[str, Any] = {"var": args.var, "metric": args.metric}
    unit = {"availability": "probability", "unavailability": "probability",
            "reliability": "cycles"}[args.metric]
    results = {"columns": header, "rows": [[_num(v) for v in r] for r in rows],
               "swept_value_unit": "cycles", "analytic_value_unit": unit}
    rng = None
    if args.monte_carlo:
        rng = {"algorithm": RNG_ALGORITHM, "seed": args.seed,
               "point_stream": "SeedSequence(seed, spawn_key=(point,))"}
    return document("sweep", args, inputs, results, rng), EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="survmap",
        description="Translate application availability/reliability under a survival "
                    "time to network-level loss parameters and back.",
    )
    parser.add_argument("--version", action="version", version=f"survmap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str = "json") -> None:
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--cycle-ms", type=float, help="cycle period in milliseconds")

    def nsv(p: argparse.ArgumentParser) -> None:
        p.add_argument("--nsv", type=int, help="survival time in cycles")
        p.add_argument("--survival", type=duration, help="survival time, e.g. 6ms (needs --cycle-ms)")

    def tau_dn(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tau-dn", action=_TauDnAction,
                       help="mean down time: cycles (e.g. 2) or a time such as 4ms (needs --cycle-ms)")
        p.add_argument("--tau-dn-cycles", type=float, help="mean down time in cycles")

    p = sub.add_parser("map", help="network parameters -> application metrics")
    p.add_argument("--per", type=float, help="packet error ratio")
    p.add_argument("--tau-un-cycles", type=float, help="mean up time in cycles (instead of --per)")
    tau_dn(p)
    nsv(p)
    p.add_argument("--fsmc-csv", help="also dump the chain matrix and steady state to this CSV")
    common(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("invert", help="application requirements -> network bounds")
    p.add_argument("--availability", type=float, help="availability target in (0, 1)")
    p.add_argument("--nines", type=float, help="availability target as a number of nines")
    p.add_argument("--reliability-cycles", type=float, help="reliability target in cycles")
    p.add_argument("--per", type=float, help="fix the packet error ratio")
    tau_dn(p)
    nsv(p)
    common(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("simulate", help="Monte Carlo check of the closed forms")
    p.add_argument("--per", type=float)
    p.add_argument("--tau-un-cycles", type=float)
    tau_dn(p)
    p.add_argument("--independent", action="store_true", help="Bernoulli losses instead of bursts")
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace-out", help="write replication 0 as a trace file")
    nsv(p)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="metrics from a binary trace or packet log")
    p.add_argument("--trace")
    p.add_argument("--packet-log")
    p.add_argument("--expected", type=int, help="number of transmitted packets")
    p.add_argument("--delay-bound-ms", type=float)
    p.add_argument("--cdf-out", help="write the packet-weighted downtime CDF here")
    p.add_argument("--strict", action="store_true",
                   help="exclude boundary-truncated runs from run statistics")
    p.add_argument("--start-down-unfiltered", action="store_true",
                   help="do not apply survival time to a burst at the start of the trace")
    nsv(p)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="metric against tau_dn or nsv, as CSV")
    p.add_argument("--var", choices=("tau_dn", "nsv"), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--metric", choices=("availability", "unavailability", "reliability"),
                   default="availability")
    p.add_argument("--per", type=float)
    tau_dn(p)
    nsv(p)
    p.add_argument("--monte-carlo", action="store_true")
    p.add_argument("--independent", action="store_true")
    p.add_argument("--cycles", type=int, default=10**6)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    common(p, default_format="csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        doc, code = args.func(args)
    except (InvalidInputError, ValueError) as exc:
        print(f"survmap: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleError as exc:
        print(f"survmap: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"survmap: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = doc if isinstance(doc, str) else render(doc, args.format)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"survmap: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
