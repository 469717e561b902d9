"""Headless driver: generate combinations, solve one, export CSV, benchmark.

Exit codes: 0 success, 2 infeasible parameters, 3 memory guard refusal,
4 unreadable combination file, 1 anything else.
"""

from __future__ import annotations

import argparse
import sys
import time

from .model import (
    AssignmentMatrix,
    BooleanShiftArray,
    GenerationMode,
    InfeasibleError,
    MemoryGuardError,
    ParseError,
    ScheduleParams,
    SchedulerError,
    ShiftType,
    SolveMethod,
    ValidationError,
    VersionError,
    estimate_memory_bytes,
    format_bytes,
)
from .phase1 import GenerationRequest, generate
from .phase2 import SolveRequest, solve
from .schedule_io import load_combinations, merge_schedules, save_combinations

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_MEMORY_GUARD = 3
EXIT_PARSE = 4


def _parse_shift(text: str) -> tuple:
    """Parse LABEL@START or LABEL@STARTxDURATION, e.g. 'E@14' or 'N@22x8.33'."""
    label, _, rest = text.partition("@")
    if not label or not rest:
        raise argparse.ArgumentTypeError(f"expected LABEL@START[xDURATION], got {text!r}")
    start, _, duration = rest.partition("x")
    try:
        return label, float(start), float(duration) if duration else None
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad numbers in shift spec {text!r}")


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("schedule parameters")
    g.add_argument("--shift-types", type=int, default=2, metavar="N",
                   help="number of shift species per day (default 2)")
    g.add_argument("--workdays", type=int, default=7, metavar="D",
                   help="schedulable days per week, 1..7 (default 7)")
    g.add_argument("--weeks", type=int, default=4, metavar="W",
                   help="weeks in the rotation cycle (default 4)")
    g.add_argument("--shift-hours", type=float, default=8.33,
                   help="length of one shift in hours (default 8.33)")
    g.add_argument("--weekly-hours", type=float, default=36.0,
                   help="working hours per worker per week (default 36)")
    g.add_argument("--weekly-rest", type=float, default=36.0,
                   help="minimum single continuous weekly rest in hours (default 36)")
    g.add_argument("--free-cluster", type=int, default=2, metavar="K",
                   help="minimum free-day cluster size when clustering is on (default 2)")
    g.add_argument("--min-rest", type=float, default=11.0,
                   help="minimum rest between consecutive shifts in hours (default 11)")
    g.add_argument("--min-workers", type=int, default=1,
                   help="minimum workers per (day, shift type) (default 1)")
    g.add_argument("--anchor-hour", type=float, default=8.0,
                   help="nominal start hour used for phase-1 rest arithmetic (default 8)")
    g.add_argument("--shift", action="append", type=_parse_shift, default=None,
                   metavar="LABEL@START[xDUR]",
                   help="catalog entry, repeatable (default: D@6, E@14, N@22 as needed)")


def _params_from_args(args) -> ScheduleParams:
    catalog = ()
    if args.shift:
        catalog = tuple(
            ShiftType(label, start, args.shift_hours if duration is None else duration)
            for label, start, duration in args.shift
        )
    return ScheduleParams(
        n_shift_types=args.shift_types,
        workdays_per_week=args.workdays,
        weeks=args.weeks,
        shift_hours=args.shift_hours,
        weekly_hours=args.weekly_hours,
        weekly_rest_hours=args.weekly_rest,
        min_free_cluster=args.free_cluster,
        shift_catalog=catalog,
        min_rest_between_shifts=args.min_rest,
        min_workers_per_shift=args.min_workers,
        anchor_start_hour=args.anchor_hour,
    )


def _cmd_generate(args) -> int:
    params = _params_from_args(args)
    mode = GenerationMode.FAST if args.fast else GenerationMode.FULL
    request = GenerationRequest(
        params=params,
        mode=mode,
        fast_limit=args.fast_limit,
        cluster_free_days=args.cluster,
    )
    result = generate(request, threads=args.threads)
    if args.out:
        written = save_combinations(result, request, args.out)
        print(f"wrote {written} bytes to {args.out}")
    print(f"combinations examined: {result.combinations_examined}")
    print(f"solutions found:       {result.solutions_found}")
    print(f"elapsed [s]:           {result.elapsed:.4g}")
    if result.truncated:
        print("truncated:             yes")
    return EXIT_OK


def _cmd_solve(args) -> int:
    loaded = load_combinations(args.combinations)
    params = loaded.request.params
    arrays = loaded.result.arrays
    if not 0 <= args.index < len(arrays):
        print(f"index {args.index} outside 0..{len(arrays) - 1}", file=sys.stderr)
        return EXIT_ERROR
    template = AssignmentMatrix.from_boolean_array(arrays[args.index], params)
    request = SolveRequest(
        template=template,
        params=params,
        method=SolveMethod(args.method.upper()),
        confirm_memory=args.yes_memory,
        memory_threshold=args.memory_threshold,
    )
    solution_set = solve(request)
    print(f"method:               {solution_set.method.value}")
    print(f"candidates examined:  {solution_set.candidates_examined}")
    print(f"solutions found:      {len(solution_set.solutions)}")
    if args.out:
        if not solution_set.solutions:
            print("no solutions; nothing exported", file=sys.stderr)
            return EXIT_ERROR
        picks = args.solution if args.solution else [0]
        bad = [i for i in picks if not 0 <= i < len(solution_set.solutions)]
        if bad:
            print(f"no such solution: {bad}", file=sys.stderr)
            return EXIT_ERROR
        payload = merge_schedules([solution_set.solutions[i] for i in picks], params)
        with open(args.out, "wb") as fh:
            fh.write(payload)
        print(f"wrote {len(payload)} bytes to {args.out}")
    return EXIT_OK


_PHASE1_SUITE = (
    ("single-shift 5d/wk", 1, 5, 1),
    ("single-shift 7d/wk", 1, 7, 2),
    ("two-shift 7d/wk", 2, 7, 4),
    ("three-shift 7d/wk", 3, 7, 5),
)

_PHASE2_SUITE = (
    ("2-shift", 2, 3, 14),
    ("2-shift", 2, 4, 18),
    ("3-shift", 3, 3, 14),
    ("3-shift", 3, 4, 18),
)


def _bench_params(n_types: int, workdays: int, weeks: int, args) -> ScheduleParams:
    return ScheduleParams(
        n_shift_types=n_types,
        workdays_per_week=workdays,
        weeks=weeks,
        shift_hours=args.shift_hours,
        weekly_hours=args.weekly_hours,
        weekly_rest_hours=args.weekly_rest,
        min_free_cluster=1,
    )


def _balanced_array(params: ScheduleParams, working_days: int) -> BooleanShiftArray:
    """Deterministic pattern with `working_days` cells spread row by row."""
    bits = [0] * params.total_days
    for i in range(working_days):
        w, c = divmod(i, 7)
        bits[w * params.workdays_per_week + c] = 1
    return BooleanShiftArray.from_bits(bits, params.fingerprint())


def _fit_exponential(weeks: list, times: list):
    """Least-squares fit of time = a * exp(b * weeks); reported, never asserted."""
    import numpy as np

    pairs = [(w, t) for w, t in zip(weeks, times) if t > 0]
    if len(pairs) < 2:
        return None
    xs = np.array([w for w, _ in pairs], dtype=float)
    ys = np.log(np.array([t for _, t in pairs], dtype=float))
    b, log_a = np.polyfit(xs, ys, 1)
    return float(np.exp(log_a)), float(b)


def _cmd_bench(args) -> int:
    rows = []
    if args.suite == "phase1":
        fitted_weeks, fast_times, full_times = [], [], []
        for label, n_types, workdays, weeks in _PHASE1_SUITE:
            if weeks > args.max_weeks:
                continue
            if (n_types, weeks) == (3, 5) and not args.extreme:
                continue
            params = _bench_params(n_types, workdays, weeks, args)
            fast = generate(
                GenerationRequest(params, GenerationMode.FAST, fast_limit=args.fast_limit),
                threads=args.threads,
            )
            full = generate(
                GenerationRequest(params, GenerationMode.FULL), threads=args.threads
            )
            rows.append(
                (label, weeks, f"{fast.elapsed:.4g}", f"{full.elapsed:.4g}",
                 full.combinations_examined, full.solutions_found)
            )
            fitted_weeks.append(weeks)
            fast_times.append(fast.elapsed)
            full_times.append(full.elapsed)
        header = "type,weeks,time_fast,time_full,combinations,solutions"
        lines = [header] + [",".join(str(v) for v in row) for row in rows]
        for which, times in (("fast", fast_times), ("full", full_times)):
            fit = _fit_exponential(fitted_weeks, times)
            if fit:
                print(f"fit {which}: time ~= {fit[0]:.3g} * exp({fit[1]:.4g} * weeks)")
    else:
        lines = ["type,working_days,weeks,combinations,solutions,im_bytes,im,time_s"]
        for label, n_types, weeks, working_days in _PHASE2_SUITE:
            params = _bench_params(n_types, 7, weeks, args)
            combos = n_types**working_days
            im = estimate_memory_bytes(n_types, working_days)
            over_threshold = im > args.memory_threshold
            if over_threshold and not args.extreme:
                lines.append(
                    f"{label},{working_days},{weeks},{combos},-,{im},{format_bytes(im)},-"
                )
                continue
            array = _balanced_array(params, working_days)
            template = AssignmentMatrix.from_boolean_array(array, params)
            started = time.perf_counter()
            result = solve(
                SolveRequest(
                    template=template,
                    params=params,
                    method=SolveMethod.CARTESIAN,
                )
            )
            elapsed = time.perf_counter() - started
            lines.append(
                f"{label},{working_days},{weeks},{result.candidates_examined},"
                f"{len(result.solutions)},{im},{format_bytes(im)},{elapsed:.4g}"
            )
    report = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report)
        print(f"wrote report to {args.out}")
    else:
        print(report, end="")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceSettings, create_app

    app = create_app(
        ServiceSettings(
            memory_threshold=args.memory_threshold,
            default_fast_limit=args.fast_limit,
        )
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotagen",
        description="Generate N-shift rotational workforce schedules in two phases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="enumerate boolean work/off patterns")
    _add_param_flags(p_gen)
    mode = p_gen.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true",
                      help="stop after the first --fast-limit accepted patterns")
    mode.add_argument("--full", action="store_true", help="examine every combination (default)")
    p_gen.add_argument("--fast-limit", type=int, default=100)
    p_gen.add_argument("--cluster", action="store_true",
                       help="enforce the minimum free-day cluster size")
    p_gen.add_argument("--threads", type=int, default=1)
    p_gen.add_argument("--out", help="write a combination file here")
    p_gen.set_defaults(func=_cmd_generate)

    p_solve = sub.add_parser("solve", help="assign shift types to one saved pattern")
    p_solve.add_argument("--combinations", required=True, help="combination file from 'generate'")
    p_solve.add_argument("--index", type=int, required=True, help="pattern index within the file")
    p_solve.add_argument("--method", choices=["auto", "cartesian", "recursive"], default="auto")
    p_solve.add_argument("--yes-memory", action="store_true",
                         help="proceed even when the memory pre-estimate exceeds the threshold")
    p_solve.add_argument("--memory-threshold", type=int, default=10**9)
    p_solve.add_argument("--solution", type=int, action="append",
                         help="solution index to export (repeat to merge; default 0)")
    p_solve.add_argument("--out", help="write the schedule CSV here")
    p_solve.set_defaults(func=_cmd_solve)

    p_bench = sub.add_parser("bench", help="run the benchmark suite and emit CSV")
    p_bench.add_argument("--suite", choices=["phase1", "phase2"], required=True)
    p_bench.add_argument("--max-weeks", type=int, default=4)
    p_bench.add_argument("--extreme", action="store_true",
                         help="include the desk-hostile cases (hours of runtime)")
    p_bench.add_argument("--fast-limit", type=int, default=100)
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.add_argument("--memory-threshold", type=int, default=10**9)
    p_bench.add_argument("--shift-hours", type=float, default=8.33)
    p_bench.add_argument("--weekly-hours", type=float, default=36.0)
    p_bench.add_argument("--weekly-rest", type=float, default=36.0)
    p_bench.add_argument("--out", help="write the CSV report here")
    p_bench.set_defaults(func=_cmd_bench)

    p_serve = sub.add_parser("serve", help="run the planning service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--memory-threshold", type=int, default=10**9)
    p_serve.add_argument("--fast-limit", type=int, default=100)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except MemoryGuardError as exc:
        print(f"memory guard: {exc}", file=sys.stderr)
        print("rerun with --yes-memory to continue, or --method recursive", file=sys.stderr)
        return EXIT_MEMORY_GUARD
    except (ParseError, ValidationError, VersionError) as exc:
        print(f"cannot read combinations: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SchedulerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
