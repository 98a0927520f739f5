"""Coercion helpers that turn loosely typed inputs into the core objects."""
from __future__ import annotations

import json
from collections.abc import Iterable

from .pipeline import SchedulerConfig
from .topology import ConfigError, Topology, build_topology, default_topology, parse_setup
from .workload import Task, WorkloadTrace, build_trace, parse_trace


def check_trace(trace) -> WorkloadTrace:
    """Accept a parsed trace, trace text, or an iterable of Task objects."""
    if isinstance(trace, WorkloadTrace):
        return trace
    if isinstance(trace, str):
        return parse_trace(trace)
    if isinstance(trace, Iterable):
        tasks = list(trace)
        if not all(isinstance(t, Task) for t in tasks):
            raise TypeError("iterable traces must contain Task objects")
        return build_trace(tasks)
    raise TypeError(f"cannot interpret {type(trace).__name__} as a workload trace")


def check_topology(topology=None) -> Topology:
    """None gives the default 32-machine topology; JSON text and dicts are parsed."""
    if topology is None:
        return default_topology()
    if isinstance(topology, Topology):
        return topology
    if isinstance(topology, str):
        return parse_setup(topology)
    if isinstance(topology, dict):
        return parse_setup(json.dumps(topology))
    if isinstance(topology, (list, tuple)):
        return build_topology(topology)
    raise ConfigError("MALFORMED", f"cannot interpret {type(topology).__name__} as a topology")


def check_scheduler_config(config) -> SchedulerConfig:
    if isinstance(config, SchedulerConfig):
        return config
    if isinstance(config, str):
        return SchedulerConfig.from_name(config)
    if isinstance(config, tuple) and len(config) == 2:
        return SchedulerConfig(*config)
    raise TypeError(f"cannot interpret {config!r} as a scheduler configuration")
