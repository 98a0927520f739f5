"""Random instance generators shared by the oracle and property tests."""
import random

from dcsched.topology import build_topology
from dcsched.workload import Task, build_trace

US = 1_000_000


def two_machine_topology():
    # one 4-core 4100 MHz machine and one 2-core 3500 MHz machine
    return build_topology([("mixed", [[1], [2]])])


def random_topology(rnd: random.Random):
    machines = [[rnd.choice((1, 2))] for _ in range(rnd.randint(1, 4))]
    if not any(m == [1] for m in machines):
        machines[0] = [1]  # keep 4-core tasks schedulable
    return build_topology([("rand", machines)])


def dag_edges(n):
    """All edge sets over nodes 0..n-1 with edges i -> j for i < j."""
    pairs = [(i, j) for j in range(n) for i in range(j)]
    for mask in range(1 << len(pairs)):
        yield [p for k, p in enumerate(pairs) if mask >> k & 1]


def trace_from_dag(n, edges, rnd: random.Random, job_id=0, first_id=0):
    parents = {j: set() for j in range(n)}
    for i, j in edges:
        parents[j].add(first_id + i)
    tasks = []
    for j in range(n):
        tasks.append(Task(
            first_id + j,
            job_id,
            rnd.choice((0, 0, 1, 2)) * US,
            rnd.choice((1, 2, 3, 5)) * US,
            rnd.choice((1, 1, 2, 3, 4)),
            frozenset(parents[j]),
        ))
    return tasks


def exhaustive_dags(max_tasks=5, seed=0):
    """Every labelled DAG with at most ``max_tasks`` nodes, each with seeded
    random submit times, runtimes and core counts drawn from small sets so
    that event times collide often."""
    rnd = random.Random(seed)
    for n in range(1, max_tasks + 1):
        for edges in dag_edges(n):
            yield build_trace(trace_from_dag(n, edges, rnd))


def random_instance(rnd: random.Random, max_tasks=5, max_jobs=3, coarse=True):
    """A trace of 1..max_tasks tasks over up to ``max_jobs`` jobs.

    With ``coarse`` times are whole seconds (many ties); otherwise they are
    arbitrary microsecond values.
    """
    n = rnd.randint(1, max_tasks)
    n_jobs = rnd.randint(1, min(max_jobs, n))
    owner = [rnd.randrange(n_jobs) for _ in range(n)]
    tasks = []
    ids = list(range(n))
    rnd.shuffle(ids)
    for pos in range(n):
        earlier = [q for q in range(pos) if owner[q] == owner[pos]]
        parents = frozenset(ids[q] for q in earlier if rnd.random() < 0.4)
        if coarse:
            submit = rnd.randint(0, 4) * US
            runtime = rnd.randint(1, 4) * US
        else:
            submit = rnd.randint(0, 5 * US)
            runtime = rnd.randint(1, 5 * US)
        tasks.append(Task(ids[pos], owner[pos], submit, runtime, rnd.choice((1, 1, 2, 3, 4)), parents))
    return build_trace(tasks)

