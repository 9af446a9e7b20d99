"""Shared builders for the test suite."""

from __future__ import annotations

import pytest

from neuromap.model import (
    Cluster,
    ClusteredSnn,
    ClusterLink,
    ClusterSynapse,
    HardwareModel,
    SnnGraph,
    Synapse,
)
from neuromap.rng import substream


def make_graph(synapses, spikes, extra_neurons=()):
    """SnnGraph from (src, dst, weight) triples and a spike-count dict."""
    neurons = set(extra_neurons) | set(spikes)
    for src, dst, _ in synapses:
        neurons.add(src)
        neurons.add(dst)
    return SnnGraph(neurons=tuple(neurons),
                    synapses=tuple(Synapse(*s) for s in synapses),
                    spike_count=dict(spikes))


def two_in_one_out_graph(w1=1e-4, w2=2e-4):
    """The 2-input / 1-output example network: spikes 5 and 3 in, 2 out."""
    return make_graph(
        synapses=[("a", "c", w1), ("b", "c", w2)],
        spikes={"a": 5, "b": 3, "c": 2},
    )


def make_cluster(cid, synapses, spikes, members=None):
    """Self-contained cluster: members default to all endpoint neurons."""
    if members is None:
        members = sorted({n for s in synapses for n in (s[0], s[1])})
    syns = tuple(ClusterSynapse(pre, post, w, spikes.get(pre, 0))
                 for pre, post, w in synapses)
    return Cluster(
        id=cid,
        members=tuple(members),
        member_spikes=tuple(spikes.get(m, 0) for m in members),
        pre_neurons=tuple(sorted({s.pre for s in syns})),
        post_neurons=tuple(sorted({s.post for s in syns})),
        synapses=syns,
    )


def random_cluster(cid, rng, n_pre=None, single_post=True, uniform_weight=None,
                   max_pre=3, spike_max=20):
    """Random self-contained cluster for oracle tests."""
    if n_pre is None:
        n_pre = rng.randint(1, max_pre)
    pres = [f"c{cid}p{i}" for i in range(n_pre)]
    posts = [f"c{cid}o"] if single_post else [f"c{cid}o{i}" for i in range(rng.randint(1, 2))]
    spikes = {p: rng.randint(0, spike_max) for p in pres}
    synapses = []
    for p in pres:
        for o in posts:
            if single_post or rng.uniform() < 0.8:
                w = uniform_weight if uniform_weight is not None else 1e-4 * rng.randint(1, 9)
                synapses.append((p, o, w))
    if not synapses:
        synapses.append((pres[0], posts[0],
                         uniform_weight if uniform_weight is not None else 1e-4))
    return make_cluster(cid, synapses, spikes)


def random_clustered(seed, min_clusters=2, max_clusters=5, link_density=0.6,
                     spike_max=20):
    """Random ClusteredSnn instance for mapper and simulator studies."""
    rng = substream(seed, 17)
    k = rng.randint(min_clusters, max_clusters)
    clusters = tuple(random_cluster(cid, rng, spike_max=spike_max) for cid in range(k))
    links = []
    for a in range(k):
        for b in range(k):
            if a != b and rng.uniform() < link_density:
                links.append(ClusterLink(a, b, rng.randint(1, spike_max)))
    if not links and k >= 2:
        links.append(ClusterLink(0, 1, rng.randint(1, spike_max)))
    return ClusteredSnn(clusters=clusters, links=tuple(links))


@pytest.fixture
def hw_2x2():
    return HardwareModel(mesh_width=2, mesh_height=2, crossbar_dim=4)


@pytest.fixture
def hw_2x3():
    return HardwareModel(mesh_width=3, mesh_height=2, crossbar_dim=4)


@pytest.fixture
def hw_row3():
    return HardwareModel(mesh_width=3, mesh_height=1, crossbar_dim=4)
