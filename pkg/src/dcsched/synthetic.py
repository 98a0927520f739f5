"""Seeded generator of workflow workloads with heavy-tailed task runtimes."""
from __future__ import annotations

import random

from .workload import US_PER_S, Task, WorkloadTrace, build_trace


def generate_workflows(
    n_workflows: int,
    seed: int = 0,
    *,
    mean_interarrival: float = 10.0,
    max_tasks: int = 8,
    runtime_scale: float = 10.0,
    runtime_alpha: float = 1.5,
    runtime_cap: float = 5000.0,
    core_choices: tuple = (1, 1, 1, 2, 2, 4),
    staggered_submits: bool = True,
    max_width: int = 3,
    single_entry: bool = False,
    burst_size: int = 1,
    entry_runtime_scale: float | None = None,
    source_name: str = "synthetic",
) -> WorkloadTrace:
    """Layered random DAGs arriving as a Poisson stream of bursts.

    Workflows arrive in bursts of ``burst_size`` sharing one arrival time;
    bursts are spaced so the mean gap per workflow is ``mean_interarrival``.

    With ``staggered_submits`` a task's submit time is the moment its parents
    would all have finished on an idle reference system, the way archive
    traces log per-task submissions; otherwise every task of a workflow is
    submitted when the workflow arrives. Runtimes
    are Pareto(``runtime_alpha``) scaled by ``runtime_scale`` seconds and
    capped at ``runtime_cap``; entry tasks use ``entry_runtime_scale`` when
    given. Each non-root task depends on one or two tasks
    of the previous layer. Layers hold up to ``max_width`` tasks, and with
    ``single_entry`` the first layer is a single task.
    """
    rnd = random.Random(seed)
    tasks = []
    now = 0.0
    next_id = 0
    for job_id in range(n_workflows):
        if job_id % burst_size == 0:
            now += rnd.expovariate(1.0 / (mean_interarrival * burst_size))
        submit_us = round(now * US_PER_S)
        size = rnd.randint(1, max_tasks)
        layers: list[list[int]] = []
        remaining = size
        while remaining:
            width = 1 if single_entry and not layers else rnd.randint(1, min(remaining, max_width))
            layers.append(list(range(next_id, next_id + width)))
            next_id += width
            remaining -= width
        ready_at: dict[int, int] = {}
        for depth, layer in enumerate(layers):
            for tid in layer:
                if depth == 0:
                    parents = frozenset()
                else:
                    prev = layers[depth - 1]
                    parents = frozenset(rnd.sample(prev, rnd.randint(1, min(2, len(prev)))))
                scale = runtime_scale if depth or entry_runtime_scale is None else entry_runtime_scale
                runtime = min(scale * rnd.paretovariate(runtime_alpha), runtime_cap)
                runtime_us = max(1, round(runtime * US_PER_S))
                task_submit = submit_us
                if staggered_submits and parents:
                    task_submit = max(ready_at[p] for p in parents)
                ready_at[tid] = task_submit + runtime_us
                tasks.append(
                    Task(tid, job_id, task_submit, runtime_us, rnd.choice(core_choices), parents)
                )
    return build_trace(tasks, source_name)
