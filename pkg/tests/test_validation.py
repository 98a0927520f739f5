import pytest

from dcsched.pipeline import SchedulerConfig
from dcsched.topology import ConfigError, default_topology
from dcsched.validation import check_scheduler_config, check_topology, check_trace
from dcsched.workload import Task, parse_trace


def test_check_trace():
    trace = parse_trace("0 0 1 1 0 -1")
    assert check_trace(trace) is trace
    assert check_trace("0 0 1 1 0 -1").tasks == trace.tasks
    assert check_trace([Task(0, 0, 0, 1_000_000, 1, frozenset())]).tasks == trace.tasks
    with pytest.raises(TypeError):
        check_trace([1, 2])
    with pytest.raises(TypeError):
        check_trace(3.5)


def test_check_topology():
    assert len(check_topology().machines) == 32
    topo = default_topology()
    assert check_topology(topo) is topo
    assert check_topology('{"clusters": [{"machines": [{"cpus": [1]}]}]}').total_cores == 4
    assert check_topology({"clusters": [{"machines": [{"cpus": [2]}]}]}).total_cores == 2
    assert check_topology([("a", [[1], [1]])]).total_cores == 8
    with pytest.raises(ConfigError):
        check_topology(4)


def test_check_scheduler_config():
    c = SchedulerConfig("SRTF", "BESTFIT")
    assert check_scheduler_config(c) is c
    assert check_scheduler_config("SRTF-BESTFIT") == c
    assert check_scheduler_config(("SRTF", "BESTFIT")) == c
    with pytest.raises(TypeError):
        check_scheduler_config(7)
