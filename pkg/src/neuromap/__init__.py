"""neuromap: energy-aware mapping of spiking neural networks onto
crossbar-based neuromorphic hardware, with a mesh interconnect simulator
for latency validation."""

__version__ = "0.1.0"

from .model import (
    Cluster,
    ClusteredSnn,
    ClusterLink,
    ClusterSynapse,
    CrossbarPlacement,
    EnergyReport,
    HardwareModel,
    InfeasibleError,
    Mapping,
    Placement,
    SnnGraph,
    Synapse,
    derive_cluster_stats,
    mapping_violations,
    placement_violations,
    validate,
)
from .workload import WorkloadSpec, WorkloadError, generate, parse_snn, serialize_snn
from .clustering import cluster, cluster_util_max, decompose
from .energy import (
    CurrentModel,
    cell_current,
    comm_energy,
    hop_distance,
    spike_energy,
    total_energy,
)
from .placement import assign_cluster, placement_energy_gap
from .mapper import (
    MapperConfig,
    baseline_comm_min,
    baseline_random,
    brute_force_optimal,
    hill_climb,
)
from .nocsim import LatencyReport, SpikeEvent, simulate
from .hwconfig import HardwareConfigError, default_hardware, load_hardware_config

__all__ = [
    "Cluster", "ClusteredSnn", "ClusterLink", "ClusterSynapse",
    "CrossbarPlacement", "CurrentModel", "EnergyReport", "HardwareModel",
    "HardwareConfigError", "InfeasibleError", "LatencyReport", "Mapping",
    "MapperConfig", "Placement", "SnnGraph", "SpikeEvent", "Synapse",
    "WorkloadError", "WorkloadSpec", "assign_cluster", "baseline_comm_min",
    "baseline_random", "brute_force_optimal", "cell_current", "cluster",
    "cluster_util_max", "comm_energy", "decompose", "default_hardware",
    "derive_cluster_stats", "generate", "hill_climb", "hop_distance",
    "load_hardware_config", "mapping_violations", "parse_snn",
    "placement_energy_gap", "placement_violations", "serialize_snn",
    "simulate", "spike_energy", "total_energy", "validate",
]
