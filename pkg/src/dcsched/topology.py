"""Datacenter machines and the setup file that describes them."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .workload import US_PER_S, Task


class ConfigError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class CpuSpec:
    cpu_type_id: int
    cores: int
    clock_mhz: int


#: CPU types selectable from a setup file: i7 (4 cores @ 4100 MHz), i5 (2 cores @ 3500 MHz).
CPU_TYPES = {
    1: CpuSpec(1, 4, 4100),
    2: CpuSpec(2, 2, 3500),
}


@dataclass
class Machine:
    machine_id: int
    cluster_name: str
    cores: int
    clock_mhz: int
    available_cores: int = -1

    def __post_init__(self):
        if self.available_cores < 0:
            self.available_cores = self.cores


@dataclass
class Topology:
    machines: list = field(default_factory=list)

    @property
    def reference_clock_mhz(self) -> int:
        return max(m.clock_mhz for m in self.machines)

    @property
    def total_cores(self) -> int:
        return sum(m.cores for m in self.machines)

    def fresh_copy(self) -> Topology:
        """Copy with every machine idle; simulations own their copy."""
        return Topology([replace(m, available_cores=m.cores) for m in self.machines])


def build_topology(clusters) -> Topology:
    """Build a topology from ``[(name, [[cpu_type_id, ...], ...]), ...]``."""
    machines = []
    for name, cpu_lists in clusters:
        for cpus in cpu_lists:
            if not cpus:
                raise ConfigError("MALFORMED", f"machine in cluster {name!r} lists no CPUs")
            specs = []
            for cpu_id in cpus:
                if cpu_id not in CPU_TYPES:
                    raise ConfigError("UNKNOWN_CPU", f"unknown cpu_type_id {cpu_id!r}")
                specs.append(CPU_TYPES[cpu_id])
            machines.append(
                Machine(
                    machine_id=len(machines),
                    cluster_name=name,
                    cores=sum(s.cores for s in specs),
                    clock_mhz=min(s.clock_mhz for s in specs),
                )
            )
    if not machines:
        raise ConfigError("EMPTY_TOPOLOGY", "topology has no machines")
    return Topology(machines)


def parse_setup(text: str) -> Topology:
    """Parse a setup JSON document.

    Schema: ``{"clusters": [{"name": str, "machines": [{"cpus": [int, ...]}]}]}``.
    Machines are numbered in file order, cluster by cluster.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("MALFORMED", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("clusters"), list):
        raise ConfigError("MALFORMED", 'expected an object with a "clusters" array')
    clusters = []
    for i, cluster in enumerate(doc["clusters"]):
        if not isinstance(cluster, dict) or not isinstance(cluster.get("machines"), list):
            raise ConfigError("MALFORMED", f'cluster {i} needs a "machines" array')
        cpu_lists = []
        for machine in cluster["machines"]:
            cpus = machine.get("cpus") if isinstance(machine, dict) else None
            if not isinstance(cpus, list):
                raise ConfigError("MALFORMED", f'cluster {i}: machine needs a "cpus" array')
            cpu_lists.append(cpus)
        clusters.append((str(cluster.get("name", f"cluster-{i}")), cpu_lists))
    return build_topology(clusters)


def default_topology() -> Topology:
    """16 four-core 4.1 GHz machines followed by 16 two-core 3.5 GHz machines."""
    return build_topology([("i7", [[1]] * 16), ("i5", [[2]] * 16)])


def effective_duration_us(task: Task, machine: Machine, topology: Topology) -> int:
    """Runtime dilated by clock ratio, rounded half-up to whole microseconds."""
    num = task.runtime_us * topology.reference_clock_mhz
    den = machine.clock_mhz
    return (2 * num + den) // (2 * den)


def effective_duration(task: Task, machine: Machine, topology: Topology) -> float:
    return task.runtime_us * topology.reference_clock_mhz / machine.clock_mhz / US_PER_S
