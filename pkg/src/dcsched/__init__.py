"""Trace-driven simulation of a staged datacenter scheduler, plus the
scheduler-mapping analysis that motivates the stage catalogue."""
from .engine import SimulationError, SimulationResult, TaskRecord, create_simulation, run_to_completion, simulate
from .mapping import load_bundled_mapping, parse_mapping
from .metrics import compute_metrics, summarize
from .pipeline import ALL_CONFIGS, SchedulerConfig, StageId, run_cycle, stage_order
from .policies import Allocation, TaskSort
from .topology import Topology, build_topology, default_topology, parse_setup
from .workload import Task, WorkloadTrace, build_trace, parse_trace

__all__ = [
    "ALL_CONFIGS", "Allocation", "SchedulerConfig", "SimulationError", "SimulationResult",
    "StageId", "Task", "TaskRecord", "TaskSort", "Topology", "WorkloadTrace",
    "build_topology", "build_trace", "compute_metrics", "create_simulation",
    "load_bundled_mapping", "default_topology", "parse_mapping", "parse_setup",
    "parse_trace", "run_cycle", "run_to_completion", "simulate", "stage_order", "summarize",
]
