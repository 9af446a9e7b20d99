"""Discrete-event simulator of the tile mesh interconnect.

Spikes are address events routed X-then-Y between the tiles of the mapped
clusters. Every directed mesh link is a FIFO server that forwards one
event per 1/BW seconds; switch traversal is folded into link service.
Buffers are finite: a mesh link's queue holds at most `in_buffer` waiting
events and a tile's injection queue at most `out_buffer`. A full queue
exerts backpressure -- the upstream event holds its server (and the
generator holds its spikes) until a slot frees; nothing is ever dropped.

Per inter-cluster link, spikes are injected as a deterministic uniform
train over the horizon (Poisson and all-at-once burst schedules are
available behind the `injection` flag). Simulation stops at the horizon;
events still traveling are reported as in-flight, events stalled behind a
full buffer as blocked. Simultaneous happenings resolve by
(time, link id, event id), so runs are bit-reproducible.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field

from .model import ClusteredSnn, HardwareModel, Mapping
from .rng import substream

INJECTION_MODES = ("uniform", "poisson", "burst")


@dataclass(frozen=True)
class SpikeEvent:
    """One delivered or undelivered spike, for inspection and tests."""

    source_cluster: int
    dest_cluster: int
    injection_time: float
    path: tuple  # directed mesh links as ((x, y), (x, y)) pairs
    delivery_time: float | None


@dataclass(frozen=True)
class LinkService:
    """Trace record of one service: event id, link id, queue entry,
    service start, service end."""

    event: int
    link: int
    enqueued: float
    started: float
    ended: float


@dataclass(frozen=True)
class LatencyReport:
    mean_latency_s: float
    max_latency_s: float
    injected: int
    delivered: int
    in_flight: int
    blocked: int
    horizon_s: float
    link_utilization: dict = field(default_factory=dict)
    saturated_links: tuple = ()
    spikes: tuple | None = None
    services: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "mean_latency_s": self.mean_latency_s,
            "max_latency_s": self.max_latency_s,
            "injected": self.injected,
            "delivered": self.delivered,
            "in_flight": self.in_flight,
            "blocked": self.blocked,
            "horizon_s": self.horizon_s,
            "link_utilization": [
                {"from": list(a), "to": list(b), "utilization": u}
                for (a, b), u in sorted(self.link_utilization.items())
            ],
            "saturated_links": [
                {"from": list(a), "to": list(b)} for a, b in self.saturated_links
            ],
        }


def xy_route(src, dst) -> list:
    """Directed mesh links from src tile to dst tile, X first, then Y."""
    path = []
    x, y = src
    while x != dst[0]:
        nx = x + (1 if dst[0] > x else -1)
        path.append(((x, y), (nx, y)))
        x = nx
    while y != dst[1]:
        ny = y + (1 if dst[1] > y else -1)
        path.append(((x, y), (x, ny)))
        y = ny
    return path


class _Event:
    __slots__ = ("seq", "src", "dst", "t_inject", "links", "hop", "mesh_path")

    def __init__(self, seq, src, dst, t_inject, links, mesh_path):
        self.seq = seq
        self.src = src
        self.dst = dst
        self.t_inject = t_inject
        self.links = links  # link ids: injection pseudo-link then mesh links
        self.hop = 0
        self.mesh_path = mesh_path


class _Link:
    __slots__ = ("lid", "service", "cap", "queue", "server", "stalled",
                 "busy", "waiters", "backlog", "desc")

    def __init__(self, lid, service, cap, desc=None):
        self.lid = lid
        self.service = service
        self.cap = cap
        self.queue = deque()
        self.server = None
        self.stalled = False
        self.busy = 0.0
        self.waiters = []   # (stall_time, upstream lid, event seq)
        self.backlog = deque()  # (generation time, event); injection links only
        self.desc = desc


def simulate(csnn: ClusteredSnn, mapping: Mapping, hw: HardwareModel,
             horizon: float, seed: int = 0, injection: str = "uniform",
             collect_trace: bool = False) -> LatencyReport:
    """Simulate spike traffic for one mapped workload.

    Deterministic for fixed inputs and seed (the seed only matters for the
    Poisson schedule). Returns latency statistics over delivered spikes,
    per-link utilization, and the injected/delivered/in-flight/blocked
    event accounting.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    if injection not in INJECTION_MODES:
        raise ValueError(f"unknown injection mode {injection!r}")
    for link in csnn.links:
        if link.src not in mapping.assignment or link.dst not in mapping.assignment:
            raise KeyError(f"link ({link.src} -> {link.dst}) references an unmapped cluster")

    sim = _SimCore(csnn, mapping, hw, horizon, collect_trace)
    sim.generate(injection, seed)
    sim.run()
    return sim.report()


class _SimCore:
    def __init__(self, csnn, mapping, hw, horizon, collect_trace):
        self.csnn = csnn
        self.mapping = mapping
        self.hw = hw
        self.horizon = horizon
        self.collect = collect_trace
        self.heap = []
        self.latencies = []
        self.spike_records = []
        self.trace = []
        self.enq_time = {}
        self.service_time = 1.0 / hw.bandwidth

        mesh = set()
        for a in hw.tiles():
            for b in hw.tiles():
                if abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1:
                    mesh.add((a, b))
        self.links = []
        self.mesh_lid = {}
        for a, b in sorted(mesh):
            lid = len(self.links)
            self.mesh_lid[(a, b)] = lid
            self.links.append(_Link(lid, self.service_time, hw.in_buffer, desc=(a, b)))
        self.inject_lid = {}
        for tile in hw.tiles():
            lid = len(self.links)
            self.inject_lid[tile] = lid
            self.links.append(_Link(lid, 0.0, hw.out_buffer))

        self.events = []
        self.offered = {}
        for link in csnn.links:
            path = xy_route(mapping.assignment[link.src], mapping.assignment[link.dst])
            for seg in path:
                self.offered[seg] = self.offered.get(seg, 0) + link.spikes

    def generate(self, injection, seed):
        for idx, link in enumerate(self.csnn.links):
            if link.spikes == 0:
                continue
            src_tile = self.mapping.assignment[link.src]
            dst_tile = self.mapping.assignment[link.dst]
            mesh_path = xy_route(src_tile, dst_tile)
            lids = [self.inject_lid[src_tile]] + [self.mesh_lid[seg] for seg in mesh_path]
            for t in self._schedule(injection, seed, idx, link.spikes):
                ev = _Event(len(self.events), link.src, link.dst, t, lids, tuple(mesh_path))
                self.events.append(ev)
                heapq.heappush(self.heap, (t, lids[0], ev.seq, 0, ev.seq))

    def _schedule(self, injection, seed, link_index, count):
        if injection == "uniform":
            return [i * self.horizon / count for i in range(count)]
        if injection == "burst":
            return [0.0] * count
        rng = substream(seed, link_index)
        rate = count / self.horizon
        times, t = [], 0.0
        while True:
            t += -math.log(1.0 - rng.uniform()) / rate
            if t >= self.horizon:
                break
            times.append(t)
        return times

    # Event engine -------------------------------------------------------

    def run(self):
        while self.heap and self.heap[0][0] <= self.horizon:
            t, lid, _seq, kind, ev_seq = heapq.heappop(self.heap)
            ev = self.events[ev_seq]
            link = self.links[lid]
            if kind == 0:  # generated spike arrives at its injection queue
                if len(link.queue) < link.cap:
                    self._enqueue(link, ev, t)
                else:
                    link.backlog.append((t, ev))
            else:  # service end
                self._end(link, ev, t)

    def _enqueue(self, link, ev, t):
        link.queue.append(ev)
        if self.collect:
            self.enq_time[(ev.seq, link.lid)] = t
        self._kick(link, t)

    def _kick(self, link, t):
        if link.server is not None or not link.queue:
            return
        ev = link.queue.popleft()
        link.server = ev
        link.stalled = False
        end = t + link.service
        link.busy += max(0.0, min(end, self.horizon) - min(t, self.horizon))
        if self.collect:
            self.trace.append(LinkService(
                event=ev.seq, link=link.lid,
                enqueued=self.enq_time.get((ev.seq, link.lid), t),
                started=t, ended=end))
        heapq.heappush(self.heap, (end, link.lid, ev.seq, 1, ev.seq))
        self._slot_freed(link, t)

    def _end(self, link, ev, t):
        ev.hop += 1
        if ev.hop == len(ev.links):
            link.server = None
            self.latencies.append(t - ev.t_inject)
            self.spike_records.append((ev, t))
            self._kick(link, t)
            return
        nxt = self.links[ev.links[ev.hop]]
        if len(nxt.queue) < nxt.cap:
            link.server = None
            self._enqueue(nxt, ev, t)
            self._kick(link, t)
        else:
            link.stalled = True
            nxt.waiters.append((t, link.lid, ev.seq))

    def _slot_freed(self, link, t):
        while len(link.queue) < link.cap:
            claimant = None
            if link.waiters:
                claimant = min(link.waiters)
            if link.backlog:
                head_t, head_ev = link.backlog[0]
                key = (head_t, link.lid, head_ev.seq)
                if claimant is None or key < claimant:
                    link.backlog.popleft()
                    self._enqueue(link, head_ev, t)
                    continue
            if claimant is None:
                return
            link.waiters.remove(claimant)
            upstream = self.links[claimant[1]]
            ev = upstream.server
            upstream.server = None
            upstream.stalled = False
            self._enqueue(link, ev, t)
            self._kick(upstream, t)

    # Reporting ----------------------------------------------------------

    def report(self) -> LatencyReport:
        delivered = len(self.latencies)
        injected = len(self.events)
        in_flight = 0
        blocked = 0
        for link in self.links:
            in_flight += len(link.queue)
            if link.server is not None:
                if link.stalled:
                    blocked += 1
                else:
                    in_flight += 1
            blocked += len(link.backlog)
        mean = sum(self.latencies) / delivered if delivered else 0.0
        peak = max(self.latencies) if delivered else 0.0
        utilization = {
            link.desc: link.busy / self.horizon
            for link in self.links if link.desc is not None
        }
        saturated = tuple(sorted(
            seg for seg, count in self.offered.items()
            if count > self.hw.bandwidth * self.horizon))

        spikes = None
        if self.collect:
            done = {ev.seq: t for ev, t in self.spike_records}
            spikes = tuple(SpikeEvent(
                source_cluster=ev.src, dest_cluster=ev.dst,
                injection_time=ev.t_inject, path=ev.mesh_path,
                delivery_time=done.get(ev.seq)) for ev in self.events)

        return LatencyReport(
            mean_latency_s=mean,
            max_latency_s=peak,
            injected=injected,
            delivered=delivered,
            in_flight=in_flight,
            blocked=blocked,
            horizon_s=self.horizon,
            link_utilization=utilization,
            saturated_links=saturated,
            spikes=spikes,
            services=tuple(self.trace) if self.collect else None,
        )
