"""Command-line experiment runner.

Simulation experiments::

    dcsched -r 32 -w 4 -s setup.json trace.gwf

Mapping reproductions::

    dcsched mapping groups
    dcsched mapping origin-diff -k 10
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .engine import SimulationError, simulate
from .mapping import MappingParseError, diff_report, groups_report, load_bundled_mapping, parse_mapping
from .metrics import (
    compute_metrics,
    emit_job_csv,
    emit_stage_csv,
    emit_summary_csv,
    emit_task_csv,
    summarize,
)
from .pipeline import ALL_CONFIGS, SchedulerConfig
from .topology import ConfigError, parse_setup
from .workload import CANONICAL_COLUMNS, TraceParseError, parse_trace, validate_workload

log = logging.getLogger("dcsched")

_worker_inputs = None


def _columns(text: str) -> tuple:
    try:
        cols = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("columns must be comma-separated integers") from None
    if len(cols) != 6 or min(cols) < 0:
        raise argparse.ArgumentTypeError("columns needs 6 non-negative indices")
    return cols


def _positive(minimum):
    def check(text):
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}")
        return value
    return check


def experiment_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dcsched",
        description="Trace-driven simulation of a staged datacenter scheduler. "
        "Use 'dcsched mapping --help' for the mapping reports.",
    )
    p.add_argument("-r", "--repeat", type=_positive(1), default=32,
                   help="recorded repetitions per scheduler (default 32)")
    p.add_argument("-w", "--warm-up", type=_positive(0), default=4,
                   help="discarded warm-up runs per scheduler (default 4)")
    p.add_argument("-p", "--parallelism", type=_positive(1), default=1,
                   help="simulations to run in parallel (default 1)")
    p.add_argument("--schedulers", nargs="+", metavar="SCHEDULER",
                   default=[c.name for c in ALL_CONFIGS],
                   help="SORT-ALLOCATION names, e.g. SRTF-BESTFIT (default: all nine)")
    p.add_argument("-s", "--setup", required=True, help="topology JSON file")
    p.add_argument("--seed", type=int, default=0, help="base seed; repetition r uses seed + r")
    p.add_argument("--columns", type=_columns, default=CANONICAL_COLUMNS,
                   help="0-based field indices of task_id,submit,runtime,cores,job_id,parents")
    p.add_argument("--out", default="data", help="output directory (default data/)")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("trace", help="workload trace file")
    return p


def mapping_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dcsched mapping",
                                description="Aggregate scheduler mapping matrices.")
    p.add_argument("report", choices=["groups", "origin-diff", "era-diff"])
    p.add_argument("-k", type=_positive(1), default=10, help="stages in diff reports (default 10)")
    p.add_argument("--mapping", help="mapping CSV (default: bundled transcription)")
    return p


def _init_worker(trace, topology):
    global _worker_inputs
    _worker_inputs = (trace, topology)


def _run_one(config_name: str, seed: int, repetition: int, warm_up: bool):
    trace, topology = _worker_inputs
    try:
        result = simulate(trace, topology, SchedulerConfig.from_name(config_name), seed)
    except SimulationError as exc:
        run = f"warm-up {repetition}" if warm_up else f"repetition {repetition}"
        raise SimulationError(exc.code, f"{config_name} {run}: {exc.message}", exc.details) from None
    if warm_up:
        return None
    report = compute_metrics(result, trace, repetition)
    stages = emit_stage_csv(result.timings, config_name, repetition, header=False)
    return report, stages


def run_experiments(args: argparse.Namespace) -> int:
    try:
        configs = [SchedulerConfig.from_name(n) for n in args.schedulers]
        topology = parse_setup(Path(args.setup).read_text(encoding="utf-8"))
        trace_path = Path(args.trace)
        trace = parse_trace(trace_path.read_text(encoding="utf-8"), trace_path.name, args.columns)
    except (OSError, ValueError) as exc:
        print(f"dcsched: error: {exc}", file=sys.stderr)
        return 2

    violations = validate_workload(trace, topology)
    errors = [v for v in violations if not v.is_warning]
    if errors:
        for v in errors[:20]:
            print(f"dcsched: error: {v.kind}({v.subject}) {v.detail}", file=sys.stderr)
        return 2
    if violations:
        log.warning("%d task(s) submitted before a parent", len(violations))

    jobs = []
    for config in configs:
        for w in range(args.warm_up):
            jobs.append((config.name, args.seed + w, w, True))
        for rep in range(args.repeat):
            jobs.append((config.name, args.seed + rep, rep, False))
    log.info("%d simulations of %d tasks on %d machines", len(jobs), len(trace), len(topology.machines))

    try:
        if args.parallelism > 1:
            with ProcessPoolExecutor(args.parallelism, initializer=_init_worker,
                                     initargs=(trace, topology)) as pool:
                futures = [pool.submit(_run_one, *job) for job in jobs]
                outputs = [f.result() for f in futures]
        else:
            _init_worker(trace, topology)
            outputs = [_run_one(*job) for job in jobs]
    except SimulationError as exc:
        print(f"dcsched: error: simulation failed: {exc}", file=sys.stderr)
        return 1

    by_config: dict[str, list] = {c.name: [] for c in configs}
    stage_parts = []
    for (name, _, _, warm), out in zip(jobs, outputs):
        if warm:
            continue
        report, stages = out
        by_config[name].append(report)
        stage_parts.append(stages)

    reports = [r for name in by_config for r in by_config[name]]
    tasks_csv = emit_task_csv(reports[0]) + "".join(emit_task_csv(r, header=False) for r in reports[1:])
    jobs_csv = emit_job_csv(reports[0]) + "".join(emit_job_csv(r, header=False) for r in reports[1:])
    stages_csv = emit_stage_csv([], "", 0) + "".join(stage_parts)
    summary_csv = emit_summary_csv(summarize(rs) for rs in by_config.values())

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in (("tasks.csv", tasks_csv), ("jobs.csv", jobs_csv),
                           ("stages.csv", stages_csv), ("summary.csv", summary_csv)):
            (out_dir / name).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"dcsched: error: {exc}", file=sys.stderr)
        return 2
    log.info("wrote results to %s", out_dir)
    return 0


def run_mapping_report(mapping_path, report: str, k: int = 10, out=None) -> int:
    out = out or sys.stdout
    try:
        if mapping_path:
            matrix = parse_mapping(Path(mapping_path).read_text(encoding="utf-8"))
        else:
            matrix = load_bundled_mapping()
    except (OSError, MappingParseError) as exc:
        print(f"dcsched: error: {exc}", file=sys.stderr)
        return 2
    if report == "groups":
        out.write(groups_report(matrix))
    else:
        out.write(diff_report(matrix, report.split("-")[0], k))
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "mapping":
        args = mapping_parser().parse_args(argv[1:])
        return run_mapping_report(args.mapping, args.report, args.k)
    args = experiment_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run_experiments(args)


if __name__ == "__main__":
    sys.exit(main())
