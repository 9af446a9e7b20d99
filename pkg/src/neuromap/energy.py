"""Energy model: per-cell crossbar currents, spike energy, hop distances,
and interconnect communication energy.

Cell current follows a series-parasitic model

    I(r, c, w) = V_drive / (R_ON + 1/w + (r + c) * R_par)

with the drive voltage derived so that a cell at the bottom-left corner
(0, 0) programmed with the nominal conductance draws the nominal read
current. Every wire segment between the drivers and a cell adds R_par, so
current falls monotonically toward the top-right corner (M-1, M-1) --
placing hot synapses there is what the greedy placement exploits.

A spike emitted by a neuron costs `e_neuron` once, plus Joule heating
I^2 * t_spk * (R_ON + 1/w) in every crossbar cell it traverses. Spikes
crossing tiles additionally pay per-hop switch and wire energy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ClusteredSnn, EnergyReport, HardwareModel, Mapping, Placement


@dataclass(frozen=True)
class CurrentModel:
    """Electrical parameters of one crossbar's read path."""

    v_drive: float
    r_on: float
    r_par: float
    t_spk: float

    def __post_init__(self):
        if self.v_drive < 0 or self.r_on < 0 or self.r_par < 0 or self.t_spk < 0:
            raise ValueError("current model parameters must be >= 0")

    @classmethod
    def from_nominal(cls, i_prog_nominal: float, w_nominal: float,
                     r_on: float, r_par: float, t_spk: float) -> "CurrentModel":
        """Derive V_drive so the (0, 0) cell at nominal conductance draws
        `i_prog_nominal`."""
        if w_nominal <= 0:
            raise ValueError("nominal conductance must be > 0")
        v = i_prog_nominal * (r_on + 1.0 / w_nominal)
        return cls(v_drive=v, r_on=r_on, r_par=r_par, t_spk=t_spk)

    @classmethod
    def from_hardware(cls, hw: HardwareModel) -> "CurrentModel":
        return cls.from_nominal(hw.i_prog_nominal, hw.w_nominal,
                                hw.r_on, hw.r_par, hw.t_spk)


def cell_current(cm: CurrentModel, row: int, col: int, weight: float) -> float:
    """Read current through the cell at (row, col) holding conductance `weight`."""
    if weight <= 0:
        raise ValueError(f"conductance must be > 0, got {weight}")
    if row < 0 or col < 0:
        raise ValueError(f"cell ({row}, {col}) outside the crossbar")
    return cm.v_drive / (cm.r_on + 1.0 / weight + (row + col) * cm.r_par)


def synapse_joule_energy(cm: CurrentModel, row: int, col: int,
                         weight: float, spikes: int) -> float:
    """Joule heating of `spikes` traversals of one cell."""
    i = cell_current(cm, row, col, weight)
    return spikes * (i * i) * cm.t_spk * (cm.r_on + 1.0 / weight)


def cluster_spike_energy(cluster, cp, cm: CurrentModel, e_neuron: float) -> float:
    """Spike energy of one cluster under a concrete crossbar placement.

    Accumulation order is fixed: member neuron terms in member order, then
    synapse Joule terms in synapse order.
    """
    e = 0.0
    for count in cluster.member_spikes:
        e += count * e_neuron
    e += cluster_synapse_energy(cluster, cp, cm)
    return e


def cluster_synapse_energy(cluster, cp, cm: CurrentModel) -> float:
    """Placement-dependent part of a cluster's spike energy (cell Joule heating)."""
    e = 0.0
    for s in cluster.synapses:
        row, col = cp.cell(s.pre, s.post)
        e += synapse_joule_energy(cm, row, col, s.weight, s.spikes)
    return e


def spike_energy(csnn: ClusteredSnn, placement: Placement, cm: CurrentModel,
                 e_neuron: float) -> tuple:
    """Total spike energy and its per-cluster breakdown.

    Clusters accumulate in ascending id order so reports reproduce
    byte-exactly.
    """
    per_cluster = {}
    total = 0.0
    for cl in csnn.clusters:
        cp = placement.by_cluster.get(cl.id)
        if cp is None:
            raise KeyError(f"cluster {cl.id} has no placement")
        e = cluster_spike_energy(cl, cp, cm, e_neuron)
        per_cluster[cl.id] = e
        total += e
    return total, per_cluster


def hop_distance(a, b) -> int:
    """Manhattan distance between two tile coordinates (X-Y mesh routing)."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def link_energy(spikes: int, hops: int, e_switch: float, e_wire: float) -> float:
    """Energy to move `spikes` events over `hops` mesh hops.

    Each spike traverses hops wire segments and hops-1 intermediate
    switches; a zero-hop link (only possible under relaxed, non-injective
    mappings) costs nothing.
    """
    return spikes * (e_switch * max(hops - 1, 0) + e_wire * hops)


def comm_energy(csnn: ClusteredSnn, mapping: Mapping,
                e_switch: float, e_wire: float) -> tuple:
    """Total interconnect energy and its per-link breakdown.

    Links accumulate in ascending (src, dst) order.
    """
    per_link = {}
    total = 0.0
    for link in csnn.links:
        try:
            src_tile = mapping.assignment[link.src]
            dst_tile = mapping.assignment[link.dst]
        except KeyError as exc:
            raise KeyError(f"link ({link.src} -> {link.dst}) references unmapped cluster {exc}") from exc
        h = hop_distance(src_tile, dst_tile)
        e = link_energy(link.spikes, h, e_switch, e_wire)
        per_link[(link.src, link.dst)] = e
        total += e
    return total, per_link


def total_energy(csnn: ClusteredSnn, mapping: Mapping, placement: Placement,
                 hw: HardwareModel) -> EnergyReport:
    """Full energy report for a mapped, placed workload."""
    cm = CurrentModel.from_hardware(hw)
    e_spk, per_cluster = spike_energy(csnn, placement, cm, hw.e_neuron)
    e_comm, per_link = comm_energy(csnn, mapping, hw.e_switch, hw.e_wire)
    return EnergyReport(e_spk_total=e_spk, e_comm_total=e_comm,
                        per_cluster_spk=per_cluster, per_link_comm=per_link)
