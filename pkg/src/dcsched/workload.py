"""Workflow traces: parsing, validation and critical paths.

A trace row describes one task. Tasks sharing a ``job_id`` form a job, and the
``parents`` column encodes the precedence edges of the job's DAG.

Canonical line layout (whitespace separated)::

    task_id  submit_time  runtime  cores  job_id  parents

``parents`` is a comma-separated list of task ids without spaces, or ``-1``.
Times are seconds and are stored internally as integer microseconds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from .topology import Topology

US_PER_S = 1_000_000

#: Column positions of (task_id, submit_time, runtime, cores, job_id, parents).
CANONICAL_COLUMNS = (0, 1, 2, 3, 4, 5)


class TraceParseError(ValueError):
    """A trace line could not be turned into a task."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CycleError(ValueError):
    """A job's precedence graph contains a cycle."""

    def __init__(self, job_id: int):
        self.job_id = job_id
        super().__init__(f"CYCLE: job {job_id} has cyclic dependencies")


@dataclass(frozen=True)
class Task:
    task_id: int
    job_id: int
    submit_us: int
    runtime_us: int
    cores: int
    parents: frozenset = frozenset()

    @property
    def submit_time(self) -> float:
        return self.submit_us / US_PER_S

    @property
    def runtime(self) -> float:
        return self.runtime_us / US_PER_S


@dataclass(frozen=True)
class Job:
    job_id: int
    task_ids: tuple
    submit_us: int

    @property
    def submit_time(self) -> float:
        return self.submit_us / US_PER_S


@dataclass(frozen=True)
class WorkloadTrace:
    tasks: dict = field(default_factory=dict)
    jobs: dict = field(default_factory=dict)
    source_name: str = ""

    def __len__(self) -> int:
        return len(self.tasks)


@dataclass(frozen=True)
class Violation:
    """One finding of :func:`validate_workload`.

    ``kind`` is ``CYCLE`` (subject is a job id), ``UNSCHEDULABLE`` (task id) or
    ``SUBMIT_BEFORE_PARENT`` (task id). Only the last one is a warning.
    """

    kind: str
    subject: int
    detail: str = ""

    @property
    def is_warning(self) -> bool:
        return self.kind == "SUBMIT_BEFORE_PARENT"


def seconds_to_us(text: str) -> int:
    """Parse a decimal seconds string into microseconds, rounding half-up."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None
    if not value.is_finite():
        raise ValueError(f"not a finite number: {text!r}")
    return int((value * US_PER_S).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def us_to_seconds_text(us: int) -> str:
    """Shortest exact decimal rendering of a microsecond count, in seconds."""
    sign = "-" if us < 0 else ""
    whole, frac = divmod(abs(us), US_PER_S)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:06d}".rstrip("0")


def _parse_int(text: str, name: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise TraceParseError(f"{name} is not an integer: {text!r}", line) from None


def _parse_parents(text: str, line: int) -> frozenset:
    if text in ("-1", ""):
        return frozenset()
    ids = []
    for part in text.split(","):
        pid = _parse_int(part, "parent id", line)
        if pid < 0:
            raise TraceParseError(f"negative parent id {pid}", line)
        ids.append(pid)
    return frozenset(ids)


def parse_trace(
    text: str,
    source_name: str = "",
    columns: Sequence[int] = CANONICAL_COLUMNS,
) -> WorkloadTrace:
    """Parse trace text into a linked :class:`WorkloadTrace`.

    ``columns`` gives the 0-based field index of task_id, submit_time, runtime,
    cores, job_id and parents. With the canonical mapping every data line must
    have exactly six fields; a remapped layout only needs enough fields to
    cover the largest index, so wider archive formats can be read directly.
    """
    if len(columns) != 6:
        raise ValueError("columns must name exactly 6 field indices")
    canonical = tuple(columns) == CANONICAL_COLUMNS
    needed = max(columns) + 1
    c_id, c_submit, c_runtime, c_cores, c_job, c_parents = columns

    tasks: dict[int, Task] = {}
    line_of: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if (canonical and len(fields) != 6) or len(fields) < needed:
            raise TraceParseError(
                f"expected {6 if canonical else f'at least {needed}'} fields, got {len(fields)}",
                lineno,
            )
        task_id = _parse_int(fields[c_id], "task_id", lineno)
        job_id = _parse_int(fields[c_job], "job_id", lineno)
        cores = _parse_int(fields[c_cores], "cores", lineno)
        try:
            submit_us = seconds_to_us(fields[c_submit])
            runtime_us = seconds_to_us(fields[c_runtime])
        except ValueError as exc:
            raise TraceParseError(str(exc), lineno) from None
        if task_id < 0 or job_id < 0:
            raise TraceParseError("task_id and job_id must be >= 0", lineno)
        if submit_us < 0:
            raise TraceParseError("submit_time must be >= 0", lineno)
        if runtime_us <= 0:
            raise TraceParseError("runtime must be positive (at least 1 microsecond)", lineno)
        if cores < 1:
            raise TraceParseError("cores must be >= 1", lineno)
        if task_id in tasks:
            raise TraceParseError(f"duplicate task_id {task_id}", lineno)
        parents = _parse_parents(fields[c_parents], lineno)
        tasks[task_id] = Task(task_id, job_id, submit_us, runtime_us, cores, parents)
        line_of[task_id] = lineno

    for task in tasks.values():
        for pid in sorted(task.parents):
            parent = tasks.get(pid)
            if parent is None:
                raise TraceParseError(
                    f"task {task.task_id} depends on unknown task {pid}", line_of[task.task_id]
                )
            if parent.job_id != task.job_id:
                raise TraceParseError(
                    f"task {task.task_id} depends on task {pid} of another job",
                    line_of[task.task_id],
                )
    return build_trace(tasks.values(), source_name)


def build_trace(tasks: Iterable[Task], source_name: str = "") -> WorkloadTrace:
    """Group tasks into jobs. Task order is preserved within each job."""
    task_map: dict[int, Task] = {}
    members: dict[int, list[int]] = {}
    for task in tasks:
        if task.task_id in task_map:
            raise ValueError(f"duplicate task_id {task.task_id}")
        task_map[task.task_id] = task
        members.setdefault(task.job_id, []).append(task.task_id)
    jobs = {
        job_id: Job(job_id, tuple(ids), min(task_map[t].submit_us for t in ids))
        for job_id, ids in members.items()
    }
    return WorkloadTrace(task_map, jobs, source_name)


def emit_trace(trace: WorkloadTrace) -> str:
    """Serialize a trace in the canonical layout."""
    lines = ["# task_id submit_time runtime cores job_id parents"]
    for task in trace.tasks.values():
        parents = ",".join(str(p) for p in sorted(task.parents)) or "-1"
        lines.append(
            f"{task.task_id} {us_to_seconds_text(task.submit_us)} "
            f"{us_to_seconds_text(task.runtime_us)} {task.cores} {task.job_id} {parents}"
        )
    return "\n".join(lines) + "\n"


def topological_order(job: Job, trace: WorkloadTrace) -> list[int]:
    """Kahn's algorithm over one job. Raises :class:`CycleError`."""
    indegree = {tid: len(trace.tasks[tid].parents) for tid in job.task_ids}
    children: dict[int, list[int]] = {tid: [] for tid in job.task_ids}
    for tid in job.task_ids:
        for pid in trace.tasks[tid].parents:
            if pid in children:
                children[pid].append(tid)
    ready = [tid for tid in job.task_ids if indegree[tid] == 0]
    order = []
    while ready:
        tid = ready.pop()
        order.append(tid)
        for child in children[tid]:
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(child)
    if len(order) != len(job.task_ids):
        raise CycleError(job.job_id)
    return order


def critical_path_us(job: Job, trace: WorkloadTrace) -> int:
    """Longest root-to-leaf runtime sum of ``job``, in microseconds."""
    finish: dict[int, int] = {}
    for tid in topological_order(job, trace):
        task = trace.tasks[tid]
        finish[tid] = task.runtime_us + max((finish[p] for p in task.parents), default=0)
    return max(finish.values(), default=0)


def critical_path_length(job: Job, trace: WorkloadTrace) -> float:
    """Shortest possible execution time of ``job`` on unlimited reference machines (s)."""
    return critical_path_us(job, trace) / US_PER_S


def validate_workload(trace: WorkloadTrace, topology: Topology) -> list[Violation]:
    violations: list[Violation] = []
    for job in trace.jobs.values():
        try:
            topological_order(job, trace)
        except CycleError:
            violations.append(Violation("CYCLE", job.job_id, "cyclic dependencies"))
    max_cores = max((m.cores for m in topology.machines), default=0)
    for task in trace.tasks.values():
        if task.cores > max_cores:
            violations.append(
                Violation("UNSCHEDULABLE", task.task_id, f"needs {task.cores} cores, max {max_cores}")
            )
        for pid in sorted(task.parents):
            if task.submit_us < trace.tasks[pid].submit_us:
                violations.append(
                    Violation("SUBMIT_BEFORE_PARENT", task.task_id, f"submitted before parent {pid}")
                )
    return violations
