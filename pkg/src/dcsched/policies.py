"""Policies for the configurable stages: eligibility (T1), task order (T2),
dynamic machine filtering (R4) and machine selection (R5)."""
from __future__ import annotations

from enum import Enum
from typing import Collection, Optional, Sequence

from .rng import SplitMix64
from .topology import Machine
from .workload import Task


class TaskSort(str, Enum):
    FIFO = "FIFO"
    SRTF = "SRTF"
    RANDOM = "RANDOM"


class Allocation(str, Enum):
    FIRSTFIT = "FIRSTFIT"
    BESTFIT = "BESTFIT"
    WORSTFIT = "WORSTFIT"


def fifo_key(task: Task):
    return (task.submit_us, task.task_id)


def srtf_key(task: Task):
    # no preemption, so remaining time is the full trace runtime
    return (task.runtime_us, task.submit_us, task.task_id)


def t1_dependencies_finished(queued: Sequence[Task], done: Collection[int]) -> list[Task]:
    """Tasks whose parents have all finished, in input order."""
    return [t for t in queued if not t.parents or t.parents.issubset(done)]


def t2_sort(tasks: Sequence[Task], policy: TaskSort | str, rng: Optional[SplitMix64] = None) -> list[Task]:
    policy = TaskSort(policy)
    if policy is TaskSort.FIFO:
        return sorted(tasks, key=fifo_key)
    if policy is TaskSort.SRTF:
        return sorted(tasks, key=srtf_key)
    if rng is None:
        raise ValueError("RANDOM ordering needs an rng")
    out = list(tasks)
    rng.shuffle(out)
    return out


def r4_sufficient_capacity(machines: Sequence[Machine], task: Task) -> list[Machine]:
    need = task.cores
    return [m for m in machines if m.available_cores >= need]


def r5_select(machines: Sequence[Machine], task: Task, policy: Allocation | str) -> Optional[Machine]:
    """Pick one machine from an R4-filtered list, or ``None`` if it is empty.

    Ties go to the lowest machine id for BESTFIT and WORSTFIT.
    """
    if not machines:
        return None
    policy = Allocation(policy)
    if policy is Allocation.FIRSTFIT:
        return machines[0]
    if policy is Allocation.BESTFIT:
        return min(machines, key=lambda m: (m.available_cores - task.cores, m.machine_id))
    return min(machines, key=lambda m: (-m.available_cores, m.machine_id))
