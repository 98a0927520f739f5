"""Task and job metrics, repetition summaries, and CSV emitters.

Per task: waiting time, execution time and response time (TRT). Per job:
makespan (JMS), makespan over critical path (NJSL) and waiting time (JWT).
Raw CSVs hold integer microseconds; summaries are in seconds.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, NamedTuple, Sequence

from .engine import SimulationResult
from .pipeline import StageTiming, stage_order
from .workload import US_PER_S, WorkloadTrace, critical_path_us

TASK_HEADER = ["config", "repetition", "task_id", "job_id", "submit_us", "start_us",
               "finish_us", "wait_us", "exec_us", "trt_us"]
JOB_HEADER = ["config", "repetition", "job_id", "jms_us", "njsl", "jwt_us"]
STAGE_HEADER = ["config", "repetition", "cycle_index", "sim_time_us", "stage",
                "duration_ns", "queue_length"]
SUMMARY_HEADER = ["config", "repetitions", "avg_jms_s", "avg_njsl", "avg_jwt_s", "avg_trt_s"]


class MetricsError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


class TaskMetrics(NamedTuple):
    task_id: int
    job_id: int
    submit_us: int
    start_us: int
    finish_us: int

    @property
    def wait_us(self) -> int:
        return self.start_us - self.submit_us

    @property
    def exec_us(self) -> int:
        return self.finish_us - self.start_us

    @property
    def trt_us(self) -> int:
        return self.finish_us - self.submit_us

    @property
    def trt(self) -> float:
        return self.trt_us / US_PER_S


class JobMetrics(NamedTuple):
    job_id: int
    jms_us: int
    njsl: float
    jwt_us: int

    @property
    def jms(self) -> float:
        return self.jms_us / US_PER_S

    @property
    def jwt(self) -> float:
        return self.jwt_us / US_PER_S


@dataclass
class MetricsReport:
    config: str
    repetition: int
    tasks: list = field(default_factory=list)
    jobs: list = field(default_factory=list)
    warm_up: bool = False

    @property
    def avg_trt(self) -> float:
        return fmean(t.trt_us for t in self.tasks) / US_PER_S if self.tasks else 0.0

    @property
    def avg_jms(self) -> float:
        return fmean(j.jms_us for j in self.jobs) / US_PER_S if self.jobs else 0.0

    @property
    def avg_njsl(self) -> float:
        return fmean(j.njsl for j in self.jobs) if self.jobs else 0.0

    @property
    def avg_jwt(self) -> float:
        return fmean(j.jwt_us for j in self.jobs) / US_PER_S if self.jobs else 0.0


def compute_metrics(
    result: SimulationResult,
    trace: WorkloadTrace,
    repetition: int = 0,
    warm_up: bool = False,
) -> MetricsReport:
    by_task = {r.task_id: r for r in result.records}
    missing = [tid for tid in trace.tasks if tid not in by_task]
    if missing:
        raise MetricsError("INCOMPLETE", f"{len(missing)} task(s) never completed")
    tasks = [
        TaskMetrics(r.task_id, r.job_id, r.submit_us, r.start_us, r.finish_us)
        for r in sorted(result.records, key=lambda r: r.task_id)
    ]
    jobs = []
    for job_id in sorted(trace.jobs):
        job = trace.jobs[job_id]
        members = [by_task[t] for t in job.task_ids]
        first_submit = min(r.submit_us for r in members)
        jms = max(r.finish_us for r in members) - first_submit
        jwt = min(r.start_us for r in members) - first_submit
        jobs.append(JobMetrics(job_id, jms, jms / critical_path_us(job, trace), jwt))
    return MetricsReport(result.config_name, repetition, tasks, jobs, warm_up)


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def emit_task_csv(report: MetricsReport, header: bool = True) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    if header:
        w.writerow(TASK_HEADER)
    for t in sorted(report.tasks, key=lambda t: t.task_id):
        w.writerow([report.config, report.repetition, t.task_id, t.job_id, t.submit_us,
                    t.start_us, t.finish_us, t.wait_us, t.exec_us, t.trt_us])
    return buf.getvalue()


def emit_job_csv(report: MetricsReport, header: bool = True) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    if header:
        w.writerow(JOB_HEADER)
    for j in sorted(report.jobs, key=lambda j: j.job_id):
        w.writerow([report.config, report.repetition, j.job_id, j.jms_us, repr(j.njsl), j.jwt_us])
    return buf.getvalue()


def emit_stage_csv(
    timings: Iterable[StageTiming], config: str, repetition: int, header: bool = True
) -> str:
    position = {s: i for i, s in enumerate(stage_order())}
    buf = io.StringIO()
    w = _writer(buf)
    if header:
        w.writerow(STAGE_HEADER)
    for row in sorted(timings, key=lambda r: (r.cycle_index, position[r.stage])):
        w.writerow([config, repetition, row.cycle_index, row.sim_time, row.stage.value,
                    row.duration_ns, row.queue_length])
    return buf.getvalue()


class SummaryRow(NamedTuple):
    config: str
    repetitions: int
    avg_jms: float
    avg_njsl: float
    avg_jwt: float
    avg_trt: float


def summarize(reports: Sequence[MetricsReport]) -> SummaryRow:
    """Mean over repetitions of each per-run average, for a single config."""
    if not reports:
        raise MetricsError("EMPTY", "no reports to summarize")
    configs = {r.config for r in reports}
    if len(configs) > 1:
        raise MetricsError("MIXED_CONFIGS", f"reports span configs {sorted(configs)}")
    if any(r.warm_up for r in reports):
        raise MetricsError("WARM_UP", "warm-up repetitions must be excluded")
    return SummaryRow(
        reports[0].config,
        len(reports),
        fmean(r.avg_jms for r in reports),
        fmean(r.avg_njsl for r in reports),
        fmean(r.avg_jwt for r in reports),
        fmean(r.avg_trt for r in reports),
    )


def emit_summary_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(SUMMARY_HEADER)
    for r in rows:
        w.writerow([r.config, r.repetitions, f"{r.avg_jms:.3f}", f"{r.avg_njsl:.3f}",
                    f"{r.avg_jwt:.3f}", f"{r.avg_trt:.3f}"])
    return buf.getvalue()
