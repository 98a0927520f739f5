"""Discrete-event core: event queue, simulation clock and run loop.

Time is kept in integer microseconds. Events are ordered by ``(time, seq)``.
All events that share the earliest timestamp are applied as one batch
(completions before arrivals), then exactly one scheduling cycle runs.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple, Optional

from .pipeline import SchedulerConfig, StageTiming, run_cycle
from .rng import SplitMix64, derive_seed
from .topology import Machine, Topology, effective_duration_us
from .workload import Task, WorkloadTrace, validate_workload


class SimulationError(RuntimeError):
    def __init__(self, code: str, message: str, details=None):
        self.code = code
        self.message = message
        self.details = details or []
        super().__init__(f"{code}: {message}")


class EventKind(IntEnum):
    COMPLETION = 0
    ARRIVAL = 1


class SimEvent(NamedTuple):
    time: int
    seq: int
    kind: EventKind
    task_id: int


class TaskRecord(NamedTuple):
    task_id: int
    job_id: int
    submit_us: int
    start_us: int
    finish_us: int
    machine_id: int


@dataclass
class SimulationResult:
    config_name: str
    seed: int
    records: list = field(default_factory=list)
    timings: list = field(default_factory=list)
    cycle_count: int = 0


class SimState:
    """Mutable state of one simulation. Owned by a single thread."""

    def __init__(self, trace: WorkloadTrace, topology: Topology, config: SchedulerConfig, seed: int):
        self.trace = trace
        self.config = config
        self.seed = seed
        self.topology = topology.fresh_copy()
        self.reference_clock_mhz = self.topology.reference_clock_mhz
        self.rng = SplitMix64(derive_seed(seed, config.name))
        self.clock = 0
        self.cycle_count = 0
        self.pending_events: list[SimEvent] = []
        self._seq = itertools.count()
        # job_id -> {task_id: Task}, both in arrival order
        self.queued_by_job: dict[int, dict[int, Task]] = {}
        self.n_queued = 0
        self.running: dict[int, tuple[int, int]] = {}
        self.start_us: dict[int, int] = {}
        self.done: dict[int, TaskRecord] = {}
        self.finished: set[int] = set()
        self.free_cores = self.topology.total_cores
        self.timings: list[StageTiming] = []

    @property
    def queued_tasks(self) -> set[int]:
        return {tid for tasks in self.queued_by_job.values() for tid in tasks}

    def push_event(self, time: int, kind: EventKind, task_id: int) -> None:
        heapq.heappush(self.pending_events, SimEvent(time, next(self._seq), kind, task_id))

    def submit(self, task: Task, machine: Machine) -> None:
        """Reserve cores on ``machine`` and schedule the completion (stage T4)."""
        if machine.available_cores < task.cores:
            raise SimulationError("CAPACITY", f"machine {machine.machine_id} cannot host task {task.task_id}")
        machine.available_cores -= task.cores
        self.free_cores -= task.cores
        job_queue = self.queued_by_job[task.job_id]
        del job_queue[task.task_id]
        if not job_queue:
            del self.queued_by_job[task.job_id]
        self.n_queued -= 1
        duration = effective_duration_us(task, machine, self.topology)
        finish = self.clock + duration
        self.running[task.task_id] = (machine.machine_id, finish)
        self.start_us[task.task_id] = self.clock
        self.push_event(finish, EventKind.COMPLETION, task.task_id)

    def _arrive(self, task_id: int) -> None:
        task = self.trace.tasks[task_id]
        self.queued_by_job.setdefault(task.job_id, {})[task_id] = task
        self.n_queued += 1

    def _complete(self, task_id: int) -> None:
        # T7 marks the task finished, T8 releases its cores
        task = self.trace.tasks[task_id]
        machine_id, finish = self.running.pop(task_id)
        machine = self.topology.machines[machine_id]
        machine.available_cores += task.cores
        self.free_cores += task.cores
        self.finished.add(task_id)
        self.done[task_id] = TaskRecord(
            task_id, task.job_id, task.submit_us, self.start_us.pop(task_id), finish, machine_id
        )

    def check_capacity(self) -> None:
        used = [0] * len(self.topology.machines)
        for task_id, (machine_id, _) in self.running.items():
            used[machine_id] += self.trace.tasks[task_id].cores
        for machine, u in zip(self.topology.machines, used):
            if u != machine.cores - machine.available_cores or u > machine.cores:
                raise SimulationError("CAPACITY", f"machine {machine.machine_id} over-committed")


def create_simulation(
    trace: WorkloadTrace, topology: Topology, config: SchedulerConfig, seed: int = 0
) -> SimState:
    errors = [v for v in validate_workload(trace, topology) if not v.is_warning]
    if errors:
        raise SimulationError("SETUP", f"{len(errors)} workload violation(s)", errors)
    state = SimState(trace, topology, config, seed)
    for task in trace.tasks.values():
        state.push_event(task.submit_us, EventKind.ARRIVAL, task.task_id)
    return state


def run_to_completion(state: SimState, check_invariants: bool = False) -> SimulationResult:
    events = state.pending_events
    config = state.config
    while events or state.n_queued:
        if not events:
            blocked = sorted(state.queued_tasks)
            raise SimulationError(
                "STUCK",
                f"{len(blocked)} task(s) queued with nothing running (first: {blocked[:10]})",
                blocked,
            )
        now = events[0].time
        batch = []
        while events and events[0].time == now:
            batch.append(heapq.heappop(events))
        state.clock = now
        batch.sort(key=lambda e: (e.kind, e.seq))
        for event in batch:
            if event.kind is EventKind.COMPLETION:
                state._complete(event.task_id)
            else:
                state._arrive(event.task_id)
        _, timings = run_cycle(state, config)
        state.timings.extend(timings)
        state.cycle_count += 1
        if check_invariants:
            state.check_capacity()
    records = [state.done[tid] for tid in sorted(state.done)]
    return SimulationResult(config.name, state.seed, records, state.timings, state.cycle_count)


def simulate(
    trace: WorkloadTrace,
    topology: Topology,
    config: SchedulerConfig,
    seed: int = 0,
    check_invariants: bool = False,
) -> SimulationResult:
    return run_to_completion(create_simulation(trace, topology, config, seed), check_invariants)
