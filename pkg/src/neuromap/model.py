"""Domain model shared by every stage of the toolchain.

Workload side: a spiking network (`SnnGraph`) whose neurons carry spike
counts for one representative input, partitioned into crossbar-sized
clusters (`ClusteredSnn`). Hardware side: a mesh of tiles, each holding an
M x M crossbar (`HardwareModel`). The bridge between the two is a
cluster-to-tile `Mapping` plus a per-crossbar row/column `Placement`.

All types are immutable after construction and safe to share across
threads. Construction normalizes ordering (sorted neurons, synapses sorted
by endpoints, clusters by id) so downstream reports are byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple


class InfeasibleError(Exception):
    """A problem instance cannot be realized on the given hardware."""


class Synapse(NamedTuple):
    src: str
    dst: str
    weight: float  # conductance in siemens, > 0


class ClusterSynapse(NamedTuple):
    pre: str
    post: str
    weight: float  # conductance in siemens
    spikes: int    # spikes emitted by `pre`, i.e. traversals of this cell


class ClusterLink(NamedTuple):
    src: int
    dst: int
    spikes: int


@dataclass(frozen=True)
class SnnGraph:
    """Spiking network with per-neuron spike counts.

    Normalized on construction: neurons sorted, synapses sorted by
    (src, dst), spike counts filled with 0 for unlisted neurons. Invariants
    (endpoint existence, positive weights, non-negative counts, no duplicate
    edges) are inspected by :func:`validate` rather than enforced here, so
    a malformed graph can be constructed to report findings on.
    """

    neurons: tuple
    synapses: tuple
    spike_count: dict

    def __post_init__(self):
        object.__setattr__(self, "neurons", tuple(sorted(self.neurons)))
        syns = tuple(sorted((Synapse(*s) for s in self.synapses),
                            key=lambda s: (s.src, s.dst)))
        object.__setattr__(self, "synapses", syns)
        counts = dict(self.spike_count)
        for n in self.neurons:
            counts.setdefault(n, 0)
        object.__setattr__(self, "spike_count", counts)

    @property
    def neuron_set(self) -> frozenset:
        return frozenset(self.neurons)

    def incoming(self) -> dict:
        """Map neuron -> list of synapses targeting it (sorted by src)."""
        inc = {n: [] for n in self.neurons}
        for s in self.synapses:
            if s.dst in inc:
                inc[s.dst].append(s)
        return inc

    def outgoing(self) -> dict:
        """Map neuron -> list of synapses leaving it (sorted by dst)."""
        out = {n: [] for n in self.neurons}
        for s in self.synapses:
            if s.src in out:
                out[s.src].append(s)
        return out

    def fan_in(self, neuron: str) -> int:
        return sum(1 for s in self.synapses if s.dst == neuron)


def validate(snn: SnnGraph) -> list:
    """Check all SnnGraph invariants; return one finding per violation.

    An empty list means the graph is valid. Each finding names the rule and
    the offending element so callers can surface precise diagnostics.
    """
    findings = []
    known = snn.neuron_set
    seen = set()
    for s in snn.synapses:
        if s.src not in known:
            findings.append(f"synapse ({s.src} -> {s.dst}): unknown source neuron {s.src!r}")
        if s.dst not in known:
            findings.append(f"synapse ({s.src} -> {s.dst}): unknown target neuron {s.dst!r}")
        if not s.weight > 0:
            findings.append(f"synapse ({s.src} -> {s.dst}): weight must be a positive conductance, got {s.weight}")
        if (s.src, s.dst) in seen:
            findings.append(f"synapse ({s.src} -> {s.dst}): duplicate edge")
        seen.add((s.src, s.dst))
    for n, c in sorted(snn.spike_count.items()):
        if c < 0:
            findings.append(f"neuron {n!r}: spike count must be >= 0, got {c}")
        if n not in known:
            findings.append(f"spike count for unknown neuron {n!r}")
    return findings


@dataclass(frozen=True)
class Cluster:
    """A crossbar-sized partition cell of the network.

    `members` are the neurons computed on this cluster's tile;
    `pre_neurons` the distinct sources driving the crossbar rows (members
    or spikes arriving from other tiles); `post_neurons` the distinct
    members receiving synapses (crossbar columns). `synapses` are exactly
    the synapses stored in this crossbar: every synapse whose target is a
    member. `internal_spike_events` is the total number of spikes emitted
    by members.
    """

    id: int
    members: tuple
    member_spikes: tuple
    pre_neurons: tuple
    post_neurons: tuple
    synapses: tuple

    def __post_init__(self):
        if len(self.members) != len(self.member_spikes):
            raise ValueError("members and member_spikes must align")

    @property
    def internal_spike_events(self) -> int:
        return sum(self.member_spikes)

    def emitted_spikes(self) -> dict:
        """Spikes emitted by each pre-neuron of this crossbar."""
        out = {}
        for s in self.synapses:
            out[s.pre] = s.spikes
        return out

    def received_spikes(self) -> dict:
        """Spike traffic received by each post-neuron (sum over its inputs)."""
        out = {}
        for s in self.synapses:
            out[s.post] = out.get(s.post, 0) + s.spikes
        return out


def derive_cluster_stats(cluster: Cluster, snn: SnnGraph) -> tuple:
    """Recompute (In, Out, S) for a cluster against its source graph.

    In = number of pre-synaptic neurons, Out = number of post-synaptic
    neurons, S = total spikes emitted by the cluster's member neurons.
    """
    for n in cluster.members:
        if n not in snn.neuron_set:
            raise KeyError(f"cluster {cluster.id}: unknown neuron {n!r}")
    s = sum(snn.spike_count[n] for n in cluster.members)
    return len(cluster.pre_neurons), len(cluster.post_neurons), s


@dataclass(frozen=True)
class ClusteredSnn:
    """Clusters plus inter-cluster links with accumulated spike traffic."""

    clusters: tuple
    links: tuple

    def __post_init__(self):
        clusters = tuple(sorted(self.clusters, key=lambda c: c.id))
        links = tuple(sorted((ClusterLink(*l) for l in self.links),
                             key=lambda l: (l.src, l.dst)))
        object.__setattr__(self, "clusters", clusters)
        object.__setattr__(self, "links", links)
        ids = {c.id for c in clusters}
        if len(ids) != len(clusters):
            raise ValueError("duplicate cluster ids")
        seen = set()
        for l in links:
            if l.src not in ids or l.dst not in ids:
                raise ValueError(f"link ({l.src} -> {l.dst}) references unknown cluster")
            if l.src == l.dst:
                raise ValueError(f"link ({l.src} -> {l.dst}) must join distinct clusters")
            if (l.src, l.dst) in seen:
                raise ValueError(f"duplicate link ({l.src} -> {l.dst}); parallel traffic must be pre-summed")
            seen.add((l.src, l.dst))

    def cluster_ids(self) -> list:
        return [c.id for c in self.clusters]

    def total_link_spikes(self) -> int:
        return sum(l.spikes for l in self.links)


@dataclass(frozen=True)
class HardwareModel:
    """Mesh of identical tiles, each with an M x M crossbar.

    Electrical parameters are SI units throughout: joules, amperes, ohms,
    seconds, siemens, events/second. Buffer sizes are event counts and are
    consumed only by the interconnect simulator as queue capacities.
    """

    mesh_width: int = 2
    mesh_height: int = 2
    crossbar_dim: int = 128
    in_buffer: int = 1024
    out_buffer: int = 1024
    bandwidth: float = 1.8e9
    e_neuron: float = 50e-12
    e_switch: float = 49e-12
    e_wire: float = 49e-12
    i_prog_nominal: float = 50e-6
    t_spk: float = 1e-3
    r_on: float = 1e3
    r_par: float = 50.0
    w_nominal: float = 1e-4

    def __post_init__(self):
        if self.mesh_width < 1 or self.mesh_height < 1:
            raise ValueError("mesh dimensions must be positive")
        if self.crossbar_dim < 1:
            raise ValueError("crossbar dimension must be >= 1")
        if self.bandwidth <= 0:
            raise ValueError("link bandwidth must be > 0")
        if self.in_buffer < 1 or self.out_buffer < 1:
            raise ValueError("buffer sizes must be >= 1")
        for name in ("e_neuron", "e_switch", "e_wire", "i_prog_nominal",
                     "t_spk", "r_on", "r_par", "w_nominal"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def n_tiles(self) -> int:
        return self.mesh_width * self.mesh_height

    def tiles(self) -> Iterator:
        """All tile coordinates in row-major order: (0,0), (1,0), ..."""
        for y in range(self.mesh_height):
            for x in range(self.mesh_width):
                yield (x, y)

    def tile_index(self, coord) -> int:
        x, y = coord
        if not (0 <= x < self.mesh_width and 0 <= y < self.mesh_height):
            raise ValueError(f"tile {coord} outside {self.mesh_width}x{self.mesh_height} mesh")
        return y * self.mesh_width + x


@dataclass(frozen=True)
class Mapping:
    """Injective, total assignment of clusters to tile coordinates."""

    assignment: dict

    def tile_of(self, cluster_id: int):
        return self.assignment[cluster_id]

    def to_matrix(self, cluster_ids, hw: HardwareModel) -> tuple:
        """Logical 0/1 matrix: rows follow `cluster_ids`, columns row-major tiles."""
        rows = []
        for cid in cluster_ids:
            row = [0] * hw.n_tiles
            row[hw.tile_index(self.assignment[cid])] = 1
            rows.append(tuple(row))
        return tuple(rows)

    @classmethod
    def from_matrix(cls, matrix, cluster_ids, hw: HardwareModel) -> "Mapping":
        """Inverse of :meth:`to_matrix`; rejects rows without exactly one 1."""
        tiles = list(hw.tiles())
        assignment = {}
        for cid, row in zip(cluster_ids, matrix):
            ones = [j for j, v in enumerate(row) if v == 1]
            if len(ones) != 1 or sum(row) != 1:
                raise ValueError(f"cluster {cid}: mapping row must contain exactly one 1")
            assignment[cid] = tiles[ones[0]]
        return cls(assignment)


def mapping_violations(mapping: Mapping, csnn: ClusteredSnn, hw: HardwareModel) -> list:
    """Check totality, injectivity, and mesh containment of a mapping."""
    findings = []
    used = {}
    for c in csnn.clusters:
        if c.id not in mapping.assignment:
            findings.append(f"cluster {c.id} is unmapped")
    for cid, coord in sorted(mapping.assignment.items()):
        x, y = coord
        if not (0 <= x < hw.mesh_width and 0 <= y < hw.mesh_height):
            findings.append(f"cluster {cid}: tile {coord} outside mesh")
        if coord in used:
            findings.append(f"clusters {used[coord]} and {cid} share tile {coord}")
        used[coord] = cid
    return findings


@dataclass(frozen=True)
class CrossbarPlacement:
    """Row/column assignment of one cluster inside its crossbar.

    A synapse (pre, post) occupies cell (row_of[pre], col_of[post]); sharing
    a pre-neuron means sharing a row, sharing a post-neuron a column. The
    coordinate convention has (0, 0) at the bottom-left (highest cell
    current) and (M-1, M-1) at the top-right (lowest).
    """

    row_of: dict
    col_of: dict

    def cell(self, pre: str, post: str) -> tuple:
        return (self.row_of[pre], self.col_of[post])


@dataclass(frozen=True)
class Placement:
    """Per-cluster crossbar placements, keyed by cluster id."""

    by_cluster: dict

    def cell(self, cluster_id: int, pre: str, post: str) -> tuple:
        return self.by_cluster[cluster_id].cell(pre, post)


def placement_violations(placement: Placement, csnn: ClusteredSnn, m: int) -> list:
    """Check row/column injectivity, index ranges, and synapse coverage."""
    findings = []
    for c in csnn.clusters:
        cp = placement.by_cluster.get(c.id)
        if cp is None:
            findings.append(f"cluster {c.id} has no placement")
            continue
        for kind, table in (("row", cp.row_of), ("column", cp.col_of)):
            seen = {}
            for neuron, idx in sorted(table.items()):
                if not 0 <= idx < m:
                    findings.append(f"cluster {c.id}: {kind} {idx} of {neuron!r} outside [0, {m})")
                if idx in seen:
                    findings.append(f"cluster {c.id}: {kind} {idx} assigned to both {seen[idx]!r} and {neuron!r}")
                seen[idx] = neuron
        for s in c.synapses:
            if s.pre not in cp.row_of:
                findings.append(f"cluster {c.id}: synapse ({s.pre} -> {s.post}) has no row for {s.pre!r}")
            if s.post not in cp.col_of:
                findings.append(f"cluster {c.id}: synapse ({s.pre} -> {s.post}) has no column for {s.post!r}")
    return findings


@dataclass(frozen=True)
class EnergyReport:
    """Energy split into crossbar spike energy and interconnect energy.

    `total` is always the exact float sum of the two components; per-cluster
    and per-link breakdowns sum to their respective totals up to the fixed
    accumulation order (ascending cluster id, then ascending link id).
    """

    e_spk_total: float
    e_comm_total: float
    per_cluster_spk: dict = field(default_factory=dict)
    per_link_comm: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.e_spk_total + self.e_comm_total

    def to_dict(self) -> dict:
        return {
            "e_spk_j": self.e_spk_total,
            "e_comm_j": self.e_comm_total,
            "total_j": self.total,
            "per_cluster_spk_j": {str(k): v for k, v in sorted(self.per_cluster_spk.items())},
            "per_link_comm_j": [
                {"src": src, "dst": dst, "energy_j": v}
                for (src, dst), v in sorted(self.per_link_comm.items())
            ],
        }
