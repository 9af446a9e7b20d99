"""In-crossbar synapse placement.

A crossbar cannot position synapses independently: a synapse's cell is the
intersection of its pre-neuron's row and its post-neuron's column. The
greedy placement therefore permutes whole rows and columns by traffic,
pushing the most active pre-neurons and the most spiked-at post-neurons
toward the top-right corner where the cell current -- and hence the Joule
heating per traversal -- is lowest.
"""

from __future__ import annotations

import itertools

from .energy import CurrentModel, cluster_synapse_energy
from .model import Cluster, ClusteredSnn, CrossbarPlacement, InfeasibleError, Placement
from .rng import SplitMix64, substream


def assign_cluster(cluster: Cluster, m: int, cm: CurrentModel) -> CrossbarPlacement:
    """Greedy traffic-sorted placement of one cluster.

    Pre-neurons sorted by emitted spike count (descending, ties by id) take
    rows M-1, M-2, ...; post-neurons sorted by received spike traffic take
    columns M-1, M-2, ... The busiest synapses land at the largest row+col
    offsets, which under the monotone current model (`cm`, non-negative
    parasitics) are the cheapest cells.
    """
    pres = cluster.pre_neurons
    posts = cluster.post_neurons
    if len(pres) > m or len(posts) > m:
        raise InfeasibleError(
            f"cluster {cluster.id} needs {len(pres)} rows / {len(posts)} columns "
            f"but the crossbar is {m}x{m}")
    emitted = cluster.emitted_spikes()
    received = cluster.received_spikes()
    row_order = sorted(pres, key=lambda n: (-emitted.get(n, 0), n))
    col_order = sorted(posts, key=lambda n: (-received.get(n, 0), n))
    row_of = {n: m - 1 - k for k, n in enumerate(row_order)}
    col_of = {n: m - 1 - k for k, n in enumerate(col_order)}
    return CrossbarPlacement(row_of=row_of, col_of=col_of)


def place_all(csnn: ClusteredSnn, m: int, cm: CurrentModel) -> Placement:
    """Greedy placement for every cluster."""
    return Placement(by_cluster={c.id: assign_cluster(c, m, cm) for c in csnn.clusters})


def random_placement(cluster: Cluster, m: int, rng: SplitMix64) -> CrossbarPlacement:
    """Uniformly random valid placement (row and column injections)."""
    if len(cluster.pre_neurons) > m or len(cluster.post_neurons) > m:
        raise InfeasibleError(
            f"cluster {cluster.id} does not fit a {m}x{m} crossbar")
    rows = rng.sample_prefix(range(m), len(cluster.pre_neurons))
    cols = rng.sample_prefix(range(m), len(cluster.post_neurons))
    return CrossbarPlacement(
        row_of=dict(zip(cluster.pre_neurons, rows)),
        col_of=dict(zip(cluster.post_neurons, cols)),
    )


def placement_energy_gap(cluster: Cluster, m: int, cm: CurrentModel,
                         trials: int, seed: int) -> tuple:
    """(min, max) placement-dependent energy over random valid placements.

    Samples `trials` placements from the fixed generator and evaluates the
    cluster's synapse Joule energy for each. The per-spike neuron cost is
    placement-independent and excluded. With zero parasitic resistance the
    gap collapses to zero.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = substream(seed, cluster.id)
    lo = hi = None
    for _ in range(trials):
        cp = random_placement(cluster, m, rng)
        e = cluster_synapse_energy(cluster, cp, cm)
        lo = e if lo is None else min(lo, e)
        hi = e if hi is None else max(hi, e)
    return lo, hi


def enumerate_placements(cluster: Cluster, m: int):
    """Yield every valid placement of the cluster (row injections x column
    injections). Exhaustive oracle; factorial in m, keep m small."""
    pres = cluster.pre_neurons
    posts = cluster.post_neurons
    for rows in itertools.permutations(range(m), len(pres)):
        row_of = dict(zip(pres, rows))
        for cols in itertools.permutations(range(m), len(posts)):
            yield CrossbarPlacement(row_of=row_of, col_of=dict(zip(posts, cols)))


def min_energy_placement(cluster: Cluster, m: int, cm: CurrentModel) -> tuple:
    """Exhaustively find the cheapest placement; returns (energy, placement)."""
    best = None
    for cp in enumerate_placements(cluster, m):
        e = cluster_synapse_energy(cluster, cp, cm)
        if best is None or e < best[0]:
            best = (e, cp)
    if best is None:
        raise ValueError("cluster admits no placement")
    return best
