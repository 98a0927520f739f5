"""Stage catalogue of the scheduling reference architecture and one
scheduling cycle built from it.

A cycle walks the job stages (J1-J5), builds the task list (T1-T2), and for
each task in order passes through the monolithic hierarchy stages (M1, M2)
and the resource stages (R1-R5) before submission (T4). Every stage is timed
separately; stages that repeat per job or per task are summed into one row
per cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from time import perf_counter_ns
from typing import TYPE_CHECKING, Callable, NamedTuple

from .policies import (
    Allocation,
    TaskSort,
    r4_sufficient_capacity,
    r5_select,
    t1_dependencies_finished,
    t2_sort,
)

if TYPE_CHECKING:
    from .engine import SimState


class StageId(str, Enum):
    J1 = "J1"
    J2 = "J2"
    J3 = "J3"
    J4 = "J4"
    J5 = "J5"
    J6 = "J6"
    J7 = "J7"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    T7 = "T7"
    T8 = "T8"
    T9 = "T9"
    T10 = "T10"
    T11 = "T11"
    T12 = "T12"
    B = "B"
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    M5 = "M5"
    M6 = "M6"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    R7 = "R7"

    def __str__(self) -> str:
        return self.value


STAGE_GROUPS = {
    "J": [StageId(f"J{i}") for i in range(1, 8)],
    "T": [StageId(f"T{i}") for i in range(1, 13)],
    "M": [StageId.B] + [StageId(f"M{i}") for i in range(1, 7)],
    "R": [StageId(f"R{i}") for i in range(1, 8)],
}

_CYCLE_ORDER = (
    StageId.J1, StageId.J2, StageId.J3, StageId.J4, StageId.J5,
    StageId.T1, StageId.T2, StageId.T3,
    StageId.M1, StageId.M2,
    StageId.R1, StageId.R2, StageId.R3, StageId.R4, StageId.R5,
    StageId.T4,
)
_POSITION = {s: i for i, s in enumerate(_CYCLE_ORDER)}


def stage_order() -> list[StageId]:
    """Stages executed by one cycle, in execution order."""
    return list(_CYCLE_ORDER)


class StageTiming(NamedTuple):
    cycle_index: int
    sim_time: int  # microseconds
    stage: StageId
    duration_ns: int
    queue_length: int


@dataclass(frozen=True)
class SchedulerConfig:
    """A task-sorting policy paired with an allocation policy.

    ``eligibility`` (T1) and ``capacity_filter`` (R4) can be swapped for other
    callables with the same signatures as the defaults.
    """

    task_sort: TaskSort = TaskSort.FIFO
    allocation: Allocation = Allocation.FIRSTFIT
    eligibility: Callable = field(default=t1_dependencies_finished, compare=False, repr=False)
    capacity_filter: Callable = field(default=r4_sufficient_capacity, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "task_sort", TaskSort(self.task_sort))
        object.__setattr__(self, "allocation", Allocation(self.allocation))

    @property
    def name(self) -> str:
        return f"{self.task_sort.value}-{self.allocation.value}"

    @classmethod
    def from_name(cls, name: str) -> SchedulerConfig:
        sort, sep, alloc = name.strip().upper().partition("-")
        try:
            if not sep:
                raise ValueError
            return cls(TaskSort(sort), Allocation(alloc))
        except ValueError:
            raise ValueError(
                f"unknown scheduler {name!r}; expected SORT-ALLOCATION with SORT in "
                f"{[s.value for s in TaskSort]} and ALLOCATION in {[a.value for a in Allocation]}"
            ) from None


#: The nine configurations compared in the experiments, in table order.
ALL_CONFIGS = tuple(
    SchedulerConfig(s, a)
    for s in (TaskSort.SRTF, TaskSort.FIFO, TaskSort.RANDOM)
    for a in (Allocation.BESTFIT, Allocation.FIRSTFIT, Allocation.WORSTFIT)
)


def _job_order(job):
    return (job.submit_us, job.job_id)


def run_cycle(state: SimState, config: SchedulerConfig):
    """Run one scheduling iteration on ``state``.

    Returns ``(placements, timings)`` where placements are ``(task_id,
    machine_id)`` pairs in submission order. Tasks that find no machine stay
    queued. The per-task loop stops early once no core is free anywhere,
    since every remaining task would fail R4.
    """
    now = state.clock
    cycle = state.cycle_count
    trace = state.trace
    spent = [0] * len(_CYCLE_ORDER)
    entered = [0] * len(_CYCLE_ORDER)
    reached = [False] * len(_CYCLE_ORDER)
    placements: list[tuple[int, int]] = []
    clock = perf_counter_ns

    def rows():
        return [
            StageTiming(cycle, now, stage, spent[i], entered[i])
            for i, stage in enumerate(_CYCLE_ORDER)
            if reached[i]
        ]

    n_queued = state.n_queued
    mark = clock()
    # J1: jobs with at least one queued task
    jobs = [trace.jobs[j] for j in state.queued_by_job]
    t = clock(); spent[0] += t - mark; mark = t
    # J2: pass-all eligibility
    jobs = list(jobs)
    t = clock(); spent[1] += t - mark; mark = t
    # J3: oldest job first
    jobs.sort(key=_job_order)
    t = clock(); spent[2] += t - mark; mark = t
    for i in range(3):
        reached[i] = True
        entered[i] = n_queued
    if not jobs:
        return placements, rows()

    candidates = []
    for job in jobs:
        # J4: hand the job to the rest of the pipeline
        queued = state.queued_by_job[job.job_id]
        t = clock(); spent[3] += t - mark; mark = t
        # J5: job setup (no side effects in simulation)
        candidates.extend(queued.values())
        t = clock(); spent[4] += t - mark; mark = t
    reached[3] = reached[4] = True
    entered[3] = entered[4] = len(candidates)

    # T1
    eligible = config.eligibility(candidates, state.finished)
    t = clock(); spent[5] += t - mark; mark = t
    # T2
    ordered = t2_sort(eligible, config.task_sort, state.rng)
    t = clock(); spent[6] += t - mark; mark = t
    reached[5] = reached[6] = True
    entered[5] = len(candidates)
    entered[6] = len(eligible)
    if not ordered:
        return placements, rows()

    reached[7] = True
    entered[7] = len(ordered)
    machines = state.topology.machines
    capacity_filter = config.capacity_filter
    allocation = config.allocation
    iterated = 0
    submitted = 0
    for task in ordered:
        # T3
        if state.free_cores == 0:
            break
        iterated += 1
        t = clock(); spent[7] += t - mark; mark = t
        # M1: no broker; M2: monolithic, control stays here
        t = clock(); spent[8] += t - mark; mark = t
        t = clock(); spent[9] += t - mark; mark = t
        # R1
        candidates_r = machines
        t = clock(); spent[10] += t - mark; mark = t
        # R2: no authorization constraints
        candidates_r = list(candidates_r)
        t = clock(); spent[11] += t - mark; mark = t
        # R3: static capacity
        need = task.cores
        candidates_r = [m for m in candidates_r if m.cores >= need]
        t = clock(); spent[12] += t - mark; mark = t
        # R4
        candidates_r = capacity_filter(candidates_r, task)
        t = clock(); spent[13] += t - mark; mark = t
        # R5
        chosen = r5_select(candidates_r, task, allocation)
        t = clock(); spent[14] += t - mark; mark = t
        if chosen is not None:
            # T4
            state.submit(task, chosen)
            placements.append((task.task_id, chosen.machine_id))
            submitted += 1
            t = clock(); spent[15] += t - mark; mark = t
    t = clock(); spent[7] += t - mark

    for i in range(8, 15):
        reached[i] = iterated > 0
        entered[i] = iterated
    reached[15] = submitted > 0
    entered[15] = submitted
    return placements, rows()
