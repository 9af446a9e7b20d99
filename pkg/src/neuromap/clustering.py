"""Fan-in decomposition and crossbar-sized partitioning.

Workflow: neurons whose fan-in exceeds the crossbar dimension are first
unrolled into sequential chains (:func:`decompose`), then the graph is
partitioned into clusters that respect the crossbar's row/column limits.
Two partitioners are provided: :func:`cluster` grows clusters along
connectivity and refines the partition with pairwise swaps to minimize
inter-cluster spike traffic, while :func:`cluster_util_max` packs for the
fewest clusters regardless of traffic (the utilization-first baseline).

A cluster owns every synapse that targets one of its member neurons; a
synapse whose source lives in another cluster contributes its source's
spike count to the inter-cluster link between the two.
"""

from __future__ import annotations

from .model import (
    Cluster,
    ClusteredSnn,
    ClusterLink,
    ClusterSynapse,
    InfeasibleError,
    SnnGraph,
    Synapse,
    validate,
)

CARRY_WEIGHT = 1.0  # siemens; chain carries are plain pass-through conductances
KL_MAX_SWEEPS = 10


def chain_length(fan_in: int, m: int) -> int:
    """Units needed to absorb `fan_in` inputs: the first takes M, the rest M-1
    originals plus one carry each."""
    if fan_in <= m:
        return 1
    return -(-(fan_in - 1) // (m - 1))  # ceil((fan_in - 1) / (m - 1))


def decompose(snn: SnnGraph, m: int) -> SnnGraph:
    """Rewrite every neuron with fan-in > m into a sequential chain of units.

    Each chain unit absorbs a slice of the original inputs plus a carry
    synapse from its predecessor; the final unit keeps the original neuron
    id, so outgoing synapses and reachability are untouched. Chain units
    inherit the original neuron's spike count, which the carry synapses
    therefore transport. Idempotent: a graph with all fan-ins <= m is
    returned unchanged.
    """
    if m < 2:
        raise InfeasibleError(f"crossbar dimension {m} cannot host carry chains (need >= 2)")
    incoming = snn.incoming()
    oversized = [n for n in snn.neurons if len(incoming[n]) > m]
    if not oversized:
        return snn

    neurons = set(snn.neurons)
    spike_count = dict(snn.spike_count)
    keep = [s for s in snn.synapses if len(incoming[s.dst]) <= m]
    new_synapses = []

    for n in oversized:
        inputs = incoming[n]  # sorted by src already
        units = chain_length(len(inputs), m)
        unit_ids = []
        for k in range(units - 1):
            uid = f"{n}#{k}"
            if uid in neurons:
                raise InfeasibleError(f"decomposition id collision on {uid!r}")
            unit_ids.append(uid)
            neurons.add(uid)
            spike_count[uid] = snn.spike_count[n]
        unit_ids.append(n)  # final unit keeps the original identity

        pos = 0
        for k, uid in enumerate(unit_ids):
            take = m if k == 0 else m - 1
            for s in inputs[pos:pos + take]:
                new_synapses.append(Synapse(s.src, uid, s.weight))
            pos += take
            if k + 1 < len(unit_ids):
                new_synapses.append(Synapse(uid, unit_ids[k + 1], CARRY_WEIGHT))
        assert pos >= len(inputs), f"chain for {n!r} dropped inputs"

    return SnnGraph(neurons=tuple(neurons),
                    synapses=tuple(keep + new_synapses),
                    spike_count=spike_count)


class _Partition:
    """Mutable partition state with incremental feasibility bookkeeping.

    Per cluster we track member set, a source reference counter (how many
    member-targeting synapses each source drives: its keys are the crossbar
    rows) and a target counter (keys are the columns).
    """

    def __init__(self, snn: SnnGraph, m: int):
        self.snn = snn
        self.m = m
        self.incoming = snn.incoming()
        self.outgoing = snn.outgoing()
        self.of = {}        # neuron -> cluster index
        self.members = []   # cluster index -> set of neurons
        self.srcs = []      # cluster index -> {source: refcount}
        self.posts = []     # cluster index -> {target member: refcount}

    def solo_feasible(self, neuron: str) -> None:
        fan_in = len(self.incoming[neuron])
        if fan_in > self.m:
            raise InfeasibleError(
                f"neuron {neuron!r} has fan-in {fan_in} > crossbar dimension {self.m}; "
                f"decompose the graph first")

    def new_cluster(self, neuron: str) -> int:
        self.solo_feasible(neuron)
        idx = len(self.members)
        self.members.append(set())
        self.srcs.append({})
        self.posts.append({})
        self._add(idx, neuron)
        return idx

    def _add(self, idx: int, neuron: str) -> None:
        self.members[idx].add(neuron)
        self.of[neuron] = idx
        srcs, posts = self.srcs[idx], self.posts[idx]
        for s in self.incoming[neuron]:
            srcs[s.src] = srcs.get(s.src, 0) + 1
            posts[neuron] = posts.get(neuron, 0) + 1

    def _remove(self, idx: int, neuron: str) -> None:
        self.members[idx].discard(neuron)
        del self.of[neuron]
        srcs, posts = self.srcs[idx], self.posts[idx]
        for s in self.incoming[neuron]:
            srcs[s.src] -= 1
            if srcs[s.src] == 0:
                del srcs[s.src]
            posts[neuron] -= 1
            if posts[neuron] == 0:
                del posts[neuron]

    def fits(self, idx: int, neuron: str) -> bool:
        srcs = self.srcs[idx]
        extra_rows = len({s.src for s in self.incoming[neuron]} - srcs.keys())
        extra_cols = 1 if self.incoming[neuron] and neuron not in self.posts[idx] else 0
        return (len(srcs) + extra_rows <= self.m
                and len(self.posts[idx]) + extra_cols <= self.m)

    def add(self, idx: int, neuron: str) -> None:
        self._add(idx, neuron)

    def affinity(self, idx: int, neuron: str) -> int:
        """Spike traffic that becomes cluster-internal if `neuron` joins."""
        members = self.members[idx]
        spk = self.snn.spike_count
        gain = 0
        for s in self.incoming[neuron]:
            if s.src in members:
                gain += spk[s.src]
        for s in self.outgoing[neuron]:
            if s.dst in members:
                gain += spk[neuron]
        return gain

    def cut_spikes(self) -> int:
        spk = self.snn.spike_count
        return sum(spk[s.src] for s in self.snn.synapses
                   if self.of[s.src] != self.of[s.dst])

    def swap_cut_delta(self, u: str, v: str) -> int:
        """Change in cut traffic if u and v exchange clusters."""
        spk = self.snn.spike_count
        cu, cv = self.of[u], self.of[v]

        def side(neuron, before, after):
            delta = 0
            for s in self.incoming[neuron]:
                if s.src in (u, v):
                    continue  # handled by the pair terms below
                before_cross = self.of[s.src] != before
                after_cross = self.of[s.src] != after
                delta += spk[s.src] * (after_cross - before_cross)
            for s in self.outgoing[neuron]:
                if s.dst in (u, v):
                    continue
                before_cross = self.of[s.dst] != before
                after_cross = self.of[s.dst] != after
                delta += spk[neuron] * (after_cross - before_cross)
            return delta

        delta = side(u, cu, cv) + side(v, cv, cu)
        # Synapses directly between u and v stay crossing either way
        # (a swap keeps them in different clusters), so contribute 0.
        return delta

    def exchange(self, u: str, v: str) -> None:
        """Unconditionally swap the cluster membership of u and v."""
        cu, cv = self.of[u], self.of[v]
        self._remove(cu, u)
        self._remove(cv, v)
        self._add(cv, u)
        self._add(cu, v)

    def swap_feasible(self, u: str, v: str) -> bool:
        """Apply the swap and keep it iff both clusters stay within bounds."""
        cu, cv = self.of[u], self.of[v]
        self.exchange(u, v)
        ok = (len(self.srcs[cu]) <= self.m and len(self.posts[cu]) <= self.m
              and len(self.srcs[cv]) <= self.m and len(self.posts[cv]) <= self.m)
        if not ok:
            self.exchange(u, v)
        return ok


def _seed_affinity_growth(snn: SnnGraph, m: int) -> _Partition:
    """Grow each cluster from the lowest unassigned neuron, repeatedly
    absorbing the best related neuron that still fits.

    Preference order: highest spike-traffic affinity first (those
    admissions shrink the cut); when no traffic-connected neuron fits,
    neurons sharing input sources with the cluster (they reuse existing
    crossbar rows, so they pack densely -- sibling units of a decomposed
    fan-in chain are the typical case). Unrelated neurons never merge.
    Candidate affinities are maintained incrementally: admitting a neuron
    only touches its graph neighbors.
    """
    part = _Partition(snn, m)
    spk = snn.spike_count
    unassigned = set(snn.neurons)

    def admit(idx, neuron, affinity):
        part.add(idx, neuron)
        unassigned.discard(neuron)
        affinity.pop(neuron, None)
        for s in part.incoming[neuron]:
            if s.src in unassigned:
                affinity[s.src] = affinity.get(s.src, 0) + spk[s.src]
        for s in part.outgoing[neuron]:
            if s.dst in unassigned:
                affinity[s.dst] = affinity.get(s.dst, 0) + spk[neuron]

    def admit_source_sharing(idx, affinity) -> bool:
        overlap = {}
        for src in part.srcs[idx]:
            for s in part.outgoing.get(src, ()):
                if s.dst in unassigned:
                    overlap[s.dst] = overlap.get(s.dst, 0) + 1
        for cand in sorted(overlap, key=lambda n: (-overlap[n], n)):
            if part.fits(idx, cand):
                admit(idx, cand, affinity)
                return True
        return False

    for seed in snn.neurons:
        if seed not in unassigned:
            continue
        idx = part.new_cluster(seed)
        unassigned.discard(seed)
        affinity = {}
        for s in part.incoming[seed]:
            if s.src in unassigned:
                affinity[s.src] = affinity.get(s.src, 0) + spk[s.src]
        for s in part.outgoing[seed]:
            if s.dst in unassigned:
                affinity[s.dst] = affinity.get(s.dst, 0) + spk[seed]
        while True:
            added = False
            for cand in sorted(affinity, key=lambda n: (-affinity[n], n)):
                if part.fits(idx, cand):
                    admit(idx, cand, affinity)
                    added = True
                    break
            if not added:
                added = admit_source_sharing(idx, affinity)
            if not added:
                break
    return part


def _seed_first_fit(snn: SnnGraph, m: int) -> _Partition:
    """Pack neurons in id order into existing clusters whenever one fits,
    preferring the highest-affinity fit (ties to the oldest cluster)."""
    part = _Partition(snn, m)
    for neuron in snn.neurons:
        best = None
        for idx in range(len(part.members)):
            if part.fits(idx, neuron):
                key = (-part.affinity(idx, neuron), idx)
                if best is None or key < best[0]:
                    best = (key, idx)
        if best is None:
            part.new_cluster(neuron)
        else:
            part.add(best[1], neuron)
    return part


KL_CANDIDATES_PER_SIDE = 16


def _kl_refine(part: _Partition, max_sweeps: int = KL_MAX_SWEEPS) -> list:
    """Pairwise swap refinement; returns the cut-traffic history.

    Each accepted swap strictly reduces inter-cluster spike traffic and
    preserves feasibility. Swapping out an interior neuron cannot pay for
    itself, so only boundary neurons are candidates; per cluster pair the
    search examines the most externally active boundary neurons on each
    side, and only pairs that actually exchange traffic. Runs until a
    sweep accepts no swap or the sweep limit is hit.
    """
    history = [part.cut_spikes()]
    n_clusters = len(part.members)
    for _ in range(max_sweeps):
        improved = False
        for ci in range(n_clusters):
            for cj in range(ci + 1, n_clusters):
                if not _pair_has_traffic(part, ci, cj):
                    continue
                swapped = True
                while swapped:
                    swapped = False
                    for u in _boundary_candidates(part, ci):
                        for v in _boundary_candidates(part, cj):
                            if part.swap_cut_delta(u, v) < 0 and part.swap_feasible(u, v):
                                history.append(part.cut_spikes())
                                improved = swapped = True
                                break
                        if swapped:
                            break
        if not improved:
            break
    return history


def _pair_has_traffic(part: _Partition, ci: int, cj: int) -> bool:
    small, other = ((ci, cj) if len(part.members[ci]) <= len(part.members[cj])
                    else (cj, ci))
    members = part.members[other]
    for u in part.members[small]:
        for s in part.incoming[u]:
            if s.src in members:
                return True
        for s in part.outgoing[u]:
            if s.dst in members:
                return True
    return False


def _external_traffic(part: _Partition, neuron: str) -> int:
    c = part.of[neuron]
    spk = part.snn.spike_count
    t = 0
    for s in part.incoming[neuron]:
        if part.of[s.src] != c:
            t += spk[s.src]
    for s in part.outgoing[neuron]:
        if part.of[s.dst] != c:
            t += spk[neuron]
    return t


def _boundary_candidates(part: _Partition, idx: int) -> list:
    scored = [(-_external_traffic(part, n), n) for n in part.members[idx]]
    scored = [(score, n) for score, n in scored if score < 0]
    scored.sort()
    return [n for _, n in scored[:KL_CANDIDATES_PER_SIDE]]


def _build(part: _Partition) -> ClusteredSnn:
    """Freeze a partition into a ClusteredSnn with deterministic ids.

    Clusters are numbered by their smallest member id; link traffic
    accumulates the source neuron's spike count once per crossing synapse.
    """
    snn = part.snn
    groups = sorted((sorted(ms) for ms in part.members if ms), key=lambda g: g[0])
    index_of = {}
    for cid, group in enumerate(groups):
        for n in group:
            index_of[n] = cid

    clusters = []
    for cid, group in enumerate(groups):
        member_set = set(group)
        syns = [ClusterSynapse(s.src, s.dst, s.weight, snn.spike_count[s.src])
                for s in snn.synapses if s.dst in member_set]
        pre = tuple(sorted({s.pre for s in syns}))
        post = tuple(sorted({s.post for s in syns}))
        clusters.append(Cluster(
            id=cid,
            members=tuple(group),
            member_spikes=tuple(snn.spike_count[n] for n in group),
            pre_neurons=pre,
            post_neurons=post,
            synapses=tuple(syns),
        ))

    traffic = {}
    for s in snn.synapses:
        a, b = index_of[s.src], index_of[s.dst]
        if a != b:
            traffic[(a, b)] = traffic.get((a, b), 0) + snn.spike_count[s.src]
    links = tuple(ClusterLink(a, b, spk) for (a, b), spk in sorted(traffic.items()))
    return ClusteredSnn(clusters=tuple(clusters), links=links)


def _check_input(snn: SnnGraph, m: int) -> None:
    if m < 1:
        raise InfeasibleError(f"crossbar dimension must be >= 1, got {m}")
    findings = validate(snn)
    if findings:
        raise ValueError("invalid graph: " + "; ".join(findings))


def cluster(snn: SnnGraph, m: int) -> ClusteredSnn:
    """Partition into feasible clusters minimizing inter-cluster spikes.

    Connectivity-driven greedy seeding followed by pairwise swap
    refinement. Requires all fan-ins <= m (run :func:`decompose` first);
    a single neuron that cannot fit any crossbar raises InfeasibleError.
    """
    _check_input(snn, m)
    part = _seed_affinity_growth(snn, m)
    _kl_refine(part)
    return _build(part)


def cluster_util_max(snn: SnnGraph, m: int) -> ClusteredSnn:
    """Partition minimizing the cluster count (utilization-first baseline).

    Ties between packings are broken by inter-cluster spike traffic. Never
    produces more clusters than :func:`cluster`.
    """
    _check_input(snn, m)
    candidates = [_build(_seed_first_fit(snn, m)), _build(_seed_affinity_growth(snn, m))]
    return min(candidates, key=lambda c: (len(c.clusters), c.total_link_spikes()))


def spike_conservation_sides(snn: SnnGraph, csnn: ClusteredSnn) -> tuple:
    """(link spikes + internal traversals, total per-synapse source spikes).

    The two sides are equal for any valid partition of `snn`.
    """
    internal = 0
    for c in csnn.clusters:
        members = set(c.members)
        internal += sum(s.spikes for s in c.synapses if s.pre in members)
    lhs = csnn.total_link_spikes() + internal
    rhs = sum(snn.spike_count[s.src] for s in snn.synapses)
    return lhs, rhs
