"""Cluster-to-tile mapping by random-restart pairwise-swap hill climbing.

Each restart draws a random injective cluster-to-tile assignment, then
sweeps every cluster pair once, keeping a tile swap whenever it strictly
lowers the objective. The best assignment over all restarts wins, with
ties resolved in favor of the earlier restart, so a fixed seed yields one
reproducible answer and the answer can only improve as restarts are added
(restart k always draws from substream k of the seed).

Crossbars are identical across tiles, so per-cluster placements -- and
with them the spike-energy component -- do not depend on which tile a
cluster lands on. Placements are computed once per call; re-placing a
swapped pair would reproduce the same rows and columns. The search
therefore moves only the communication component, while reports always
carry both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .energy import CurrentModel, hop_distance, link_energy, spike_energy, total_energy
from .model import ClusteredSnn, HardwareModel, InfeasibleError, Mapping
from .placement import place_all
from .rng import substream

# Relative margin for "strictly improves": guards against swap cycling on
# floating-point ties.
IMPROVE_RTOL = 1e-12


@dataclass(frozen=True)
class MapperConfig:
    max_iter: int = 100
    seed: int = 0
    objective: str = "total"  # "total" = spike + communication, "comm" = communication only

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.objective not in ("total", "comm"):
            raise ValueError(f"unknown objective {self.objective!r}")


@dataclass(frozen=True)
class RestartTrace:
    """Objective values seen in one restart: the initial random mapping's,
    each accepted swap's, and the final one."""

    restart: int
    initial: float
    accepted: tuple
    final: float


def _improves(new: float, current: float) -> bool:
    return new < current * (1.0 - IMPROVE_RTOL)


class _Evaluator:
    """Shared state for scoring assignments of one instance."""

    def __init__(self, csnn: ClusteredSnn, hw: HardwareModel):
        if len(csnn.clusters) > hw.n_tiles:
            raise InfeasibleError(
                f"{len(csnn.clusters)} clusters exceed {hw.n_tiles} tiles")
        self.csnn = csnn
        self.hw = hw
        self.cm = CurrentModel.from_hardware(hw)
        self.placement = place_all(csnn, hw.crossbar_dim, self.cm)
        self.e_spk, _ = spike_energy(csnn, self.placement, self.cm, hw.e_neuron)
        self.cluster_ids = csnn.cluster_ids()
        self.tiles = list(hw.tiles())

    def comm(self, assignment: dict) -> float:
        e = 0.0
        for link in self.csnn.links:
            h = hop_distance(assignment[link.src], assignment[link.dst])
            e += link_energy(link.spikes, h, self.hw.e_switch, self.hw.e_wire)
        return e

    def objective(self, assignment: dict, kind: str) -> float:
        e = self.comm(assignment)
        return e if kind == "comm" else self.e_spk + e

    def random_assignment(self, seed: int, restart: int) -> dict:
        rng = substream(seed, restart)
        chosen = rng.sample_prefix(self.tiles, len(self.cluster_ids))
        return dict(zip(self.cluster_ids, chosen))

    def report(self, assignment: dict) -> tuple:
        mapping = Mapping(dict(assignment))
        return mapping, total_energy(self.csnn, mapping, self.placement, self.hw)


def hill_climb(csnn: ClusteredSnn, hw: HardwareModel, cfg: MapperConfig) -> tuple:
    """Run the restart hill climber; returns (mapping, placement, report, trace).

    Within a restart the accepted objective values are strictly decreasing;
    across restarts the reported best is non-increasing in max_iter for a
    fixed seed.
    """
    ev = _Evaluator(csnn, hw)
    pairs = list(itertools.combinations(ev.cluster_ids, 2))
    best_obj = None
    best_assignment = None
    trace = []

    for r in range(cfg.max_iter):
        assignment = ev.random_assignment(cfg.seed, r)
        current = ev.objective(assignment, cfg.objective)
        initial = current
        accepted = []
        for x, y in pairs:
            assignment[x], assignment[y] = assignment[y], assignment[x]
            candidate = ev.objective(assignment, cfg.objective)
            if _improves(candidate, current):
                current = candidate
                accepted.append(candidate)
            else:
                assignment[x], assignment[y] = assignment[y], assignment[x]
        trace.append(RestartTrace(restart=r, initial=initial,
                                  accepted=tuple(accepted), final=current))
        if best_obj is None or current < best_obj:
            best_obj = current
            best_assignment = dict(assignment)

    mapping, report = ev.report(best_assignment)
    return mapping, ev.placement, report, trace


def brute_force_optimal(csnn: ClusteredSnn, hw: HardwareModel) -> tuple:
    """Global optimum by exhaustive enumeration of injective assignments.

    Guarded to at most 8 clusters (factorial blowup). Ties resolve to the
    lexicographically smallest assignment in row-major tile order; returns
    (mapping, report).
    """
    if len(csnn.clusters) > 8:
        raise InfeasibleError(
            f"brute force capped at 8 clusters, got {len(csnn.clusters)}")
    ev = _Evaluator(csnn, hw)
    best = None
    best_assignment = None
    for combo in itertools.permutations(ev.tiles, len(ev.cluster_ids)):
        assignment = dict(zip(ev.cluster_ids, combo))
        obj = ev.objective(assignment, "total")
        if best is None or obj < best:
            best = obj
            best_assignment = assignment
    mapping, report = ev.report(best_assignment)
    return mapping, report


def baseline_random(csnn: ClusteredSnn, hw: HardwareModel, seed: int) -> tuple:
    """One random injective mapping with greedy placement, no search.

    Draws exactly the assignment hill climbing would start restart 0 from,
    so for equal seeds the climber can never do worse.
    """
    ev = _Evaluator(csnn, hw)
    assignment = ev.random_assignment(seed, 0)
    return ev.report(assignment)


def baseline_comm_min(csnn: ClusteredSnn, hw: HardwareModel, cfg: MapperConfig) -> tuple:
    """Hill climbing on communication energy alone (spike energy ignored
    during the search); the traffic-volume-first comparison point."""
    return hill_climb(csnn, hw, replace(cfg, objective="comm"))


def sequential_mapping(csnn: ClusteredSnn, hw: HardwareModel) -> tuple:
    """Clusters laid onto tiles in row-major order, no optimization.

    Models a mapper that packs for utilization and is blind to traffic;
    returns (mapping, placement, report).
    """
    ev = _Evaluator(csnn, hw)
    assignment = dict(zip(ev.cluster_ids, ev.tiles))
    mapping, report = ev.report(assignment)
    return mapping, ev.placement, report
