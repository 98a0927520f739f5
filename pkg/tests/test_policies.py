import pytest

from dcsched.policies import (
    Allocation,
    TaskSort,
    r4_sufficient_capacity,
    r5_select,
    t1_dependencies_finished,
    t2_sort,
)
from dcsched.rng import SplitMix64
from dcsched.topology import Machine
from dcsched.workload import Task


def T(tid, submit=0, runtime=1, cores=1, parents=()):
    return Task(tid, 0, submit, runtime, cores, frozenset(parents))


def machines(*avail, cores=4):
    out = []
    for i, a in enumerate(avail):
        m = Machine(i, "c", cores, 4100)
        m.available_cores = a
        out.append(m)
    return out


def test_t1_no_parents_passes_everything():
    tasks = [T(0), T(1), T(2)]
    assert t1_dependencies_finished(tasks, set()) == tasks


def test_t1_chain():
    a, b = T(0), T(1, parents=[0])
    assert t1_dependencies_finished([a, b], set()) == [a]


def test_t1_diamond_after_root():
    a, b, c, d = T(0), T(1, parents=[0]), T(2, parents=[0]), T(3, parents=[1, 2])
    assert t1_dependencies_finished([b, c, d], {0}) == [b, c]


def test_fifo_orders_by_submit():
    tasks = [T(0, submit=3), T(1, submit=1), T(2, submit=2)]
    assert [t.submit_us for t in t2_sort(tasks, TaskSort.FIFO)] == [1, 2, 3]


def test_fifo_ties_by_task_id():
    tasks = [T(5, submit=1), T(2, submit=1), T(9, submit=0)]
    assert [t.task_id for t in t2_sort(tasks, "FIFO")] == [9, 2, 5]


def test_srtf_orders_by_runtime():
    tasks = [T(0, runtime=5), T(1, runtime=1), T(2, runtime=3)]
    assert [t.runtime_us for t in t2_sort(tasks, TaskSort.SRTF)] == [1, 3, 5]


def test_srtf_ties_by_submit_then_id():
    tasks = [T(3, submit=2, runtime=1), T(1, submit=2, runtime=1), T(2, submit=0, runtime=1)]
    assert [t.task_id for t in t2_sort(tasks, "SRTF")] == [2, 1, 3]


def test_random_is_seeded_permutation():
    tasks = [T(i) for i in range(20)]
    a = t2_sort(tasks, TaskSort.RANDOM, SplitMix64(4))
    b = t2_sort(tasks, TaskSort.RANDOM, SplitMix64(4))
    assert a == b
    assert sorted(t.task_id for t in a) == list(range(20))
    assert a != tasks
    with pytest.raises(ValueError):
        t2_sort(tasks, TaskSort.RANDOM)


def test_r4_examples():
    ms = machines(4, 4, 4)
    assert r4_sufficient_capacity(ms, T(0)) == ms
    ms = machines(4, 2, 0)
    assert r4_sufficient_capacity(ms, T(0, cores=4)) == [ms[0]]
    assert r4_sufficient_capacity(machines(0, 0), T(0)) == []


def test_r5_examples():
    assert r5_select([], T(0), Allocation.BESTFIT) is None
    ms = machines(3, 2, 4)
    task = T(0, cores=2)
    assert r5_select(ms, task, Allocation.BESTFIT).available_cores == 2
    assert r5_select(ms, task, Allocation.WORSTFIT).available_cores == 4
    assert r5_select(ms, task, Allocation.FIRSTFIT).available_cores == 3


def test_r5_ties_go_to_lowest_id():
    ms = machines(2, 3, 3, 2)
    assert r5_select(ms, T(0, cores=2), "BESTFIT").machine_id == 0
    assert r5_select(ms, T(0, cores=2), "WORSTFIT").machine_id == 1
