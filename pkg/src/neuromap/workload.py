"""Workload ingestion and synthesis.

The on-disk workload format is JSON::

    {
      "version": 1,
      "neurons": ["n00", "n01", ...],
      "synapses": [{"src": "n00", "dst": "n02", "weight": 1e-4}, ...],
      "spikes": {"n00": 5, ...}
    }

Neuron ids are strings, weights are conductances in siemens, spike counts
are event counts for one representative input. Negative weights are
accepted but folded to their magnitude with a warning (the energy model
only consumes 1/w, so the excitatory/inhibitory sign carries no
information here); fractional spike counts are rounded half-up.

Synthetic workloads mirror the common application shapes at desk scale:
layered feedforward nets, recurrent reservoirs, and random DAGs.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .model import SnnGraph, Synapse, validate
from .rng import substream


class WorkloadError(ValueError):
    """Raised when a workload document is malformed or violates invariants."""


_KINDS = ("feedforward", "reservoir", "random")


@dataclass(frozen=True)
class WorkloadSpec:
    """Parameters of a synthetic workload; generation is a pure function of this."""

    kind: str
    layers: tuple = ()
    n: int = 0
    density: float = 1.0
    fan_in: int | None = None
    weight_min: float = 1e-5
    weight_max: float = 1e-3
    spike_min: int = 0
    spike_max: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise WorkloadError(f"unknown workload kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "feedforward":
            if len(self.layers) < 2:
                raise WorkloadError("feedforward workload needs at least two layers")
            if any(s < 1 for s in self.layers):
                raise WorkloadError("layer sizes must be >= 1")
        else:
            if self.n < 1:
                raise WorkloadError("neuron count must be >= 1")
            if not 0.0 < self.density <= 1.0:
                raise WorkloadError(f"density must be in (0, 1], got {self.density}")
        if self.fan_in is not None and self.fan_in < 1:
            raise WorkloadError("fan_in must be >= 1 when given")
        if not 0 < self.weight_min <= self.weight_max:
            raise WorkloadError("weight range must satisfy 0 < min <= max")
        if not 0 <= self.spike_min <= self.spike_max:
            raise WorkloadError("spike range must satisfy 0 <= min <= max")
        if not 0 <= self.seed < (1 << 64):
            raise WorkloadError("seed must be a 64-bit value")


def _neuron_ids(count: int) -> list:
    width = max(1, len(str(count - 1)))
    return [f"n{i:0{width}d}" for i in range(count)]


def generate(spec: WorkloadSpec) -> SnnGraph:
    """Build a synthetic SnnGraph; deterministic for a fixed spec (seed included).

    Three independent substreams drive topology, weights, and spike counts,
    in that order, so the draws are insensitive to each other's volume.
    """
    topo = substream(spec.seed, 0)
    weights = substream(spec.seed, 1)
    spikes = substream(spec.seed, 2)

    edges = []
    if spec.kind == "feedforward":
        ids = _neuron_ids(sum(spec.layers))
        offsets = [0]
        for size in spec.layers:
            offsets.append(offsets[-1] + size)
        layers = [ids[offsets[i]:offsets[i + 1]] for i in range(len(spec.layers))]
        for prev, cur in zip(layers, layers[1:]):
            for dst in cur:
                if spec.fan_in is None or spec.fan_in >= len(prev):
                    sources = prev
                else:
                    sources = sorted(topo.sample_prefix(prev, spec.fan_in))
                for src in sources:
                    edges.append((src, dst))
    elif spec.kind == "reservoir":
        ids = _neuron_ids(spec.n)
        for src in ids:
            for dst in ids:
                if src == dst:
                    continue
                if topo.uniform() < spec.density:
                    edges.append((src, dst))
    else:  # random DAG: edges only from lower to higher id
        ids = _neuron_ids(spec.n)
        for i, src in enumerate(ids):
            for dst in ids[i + 1:]:
                if topo.uniform() < spec.density:
                    edges.append((src, dst))

    span = spec.weight_max - spec.weight_min
    synapses = [Synapse(src, dst, spec.weight_min + weights.uniform() * span)
                for src, dst in edges]
    spike_count = {n: spikes.randint(spec.spike_min, spec.spike_max) for n in ids}
    return SnnGraph(neurons=tuple(ids), synapses=tuple(synapses), spike_count=spike_count)


def _round_half_up(value) -> int:
    return int(Decimal(str(value)).quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def parse_snn(data) -> SnnGraph:
    """Parse and validate a workload document (bytes or str).

    Rejects any invariant violation with a message locating the offending
    element (synapse index or neuron id).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise WorkloadError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise WorkloadError("workload document must be a JSON object")
    version = doc.get("version")
    if version != 1:
        raise WorkloadError(f"unknown workload version {version!r}; expected 1")

    neurons = doc.get("neurons", [])
    if not isinstance(neurons, list) or any(not isinstance(n, str) for n in neurons):
        raise WorkloadError("'neurons' must be a list of string ids")
    if len(set(neurons)) != len(neurons):
        dupes = sorted({n for n in neurons if neurons.count(n) > 1})
        raise WorkloadError(f"duplicate neuron ids: {dupes}")
    known = set(neurons)

    raw_synapses = doc.get("synapses", [])
    if not isinstance(raw_synapses, list):
        raise WorkloadError("'synapses' must be a list")
    synapses = []
    seen = set()
    for i, entry in enumerate(raw_synapses):
        if not isinstance(entry, dict) or not {"src", "dst", "weight"} <= set(entry):
            raise WorkloadError(f"synapse {i}: expected object with src, dst, weight")
        src, dst, weight = entry["src"], entry["dst"], entry["weight"]
        if src not in known:
            raise WorkloadError(f"synapse {i}: unknown source neuron {src!r}")
        if dst not in known:
            raise WorkloadError(f"synapse {i}: unknown target neuron {dst!r}")
        if not isinstance(weight, (int, float)):
            raise WorkloadError(f"synapse {i}: weight must be a number")
        if weight < 0:
            warnings.warn(
                f"synapse {i} ({src} -> {dst}): negative weight {weight} folded to "
                f"{abs(weight)}; the energy model is sign-blind",
                stacklevel=2,
            )
            weight = abs(weight)
        if weight == 0:
            raise WorkloadError(f"synapse {i}: weight must be a positive conductance")
        if (src, dst) in seen:
            raise WorkloadError(f"synapse {i}: duplicate edge ({src} -> {dst})")
        seen.add((src, dst))
        synapses.append(Synapse(src, dst, float(weight)))

    raw_spikes = doc.get("spikes", {})
    if not isinstance(raw_spikes, dict):
        raise WorkloadError("'spikes' must be an object mapping neuron id to count")
    spike_count = {}
    for name, value in raw_spikes.items():
        if name not in known:
            raise WorkloadError(f"spike count for unknown neuron {name!r}")
        if not isinstance(value, (int, float)):
            raise WorkloadError(f"spike count for {name!r} must be a number")
        count = value if isinstance(value, int) else _round_half_up(value)
        if count < 0:
            raise WorkloadError(f"spike count for {name!r} must be >= 0, got {value}")
        spike_count[name] = count

    graph = SnnGraph(neurons=tuple(neurons), synapses=tuple(synapses), spike_count=spike_count)
    findings = validate(graph)
    if findings:
        raise WorkloadError("; ".join(findings))
    return graph


def serialize_snn(graph: SnnGraph) -> bytes:
    """Canonical UTF-8 encoding; parse(serialize(g)) == g for valid graphs."""
    doc = {
        "version": 1,
        "neurons": list(graph.neurons),
        "synapses": [{"src": s.src, "dst": s.dst, "weight": s.weight} for s in graph.synapses],
        "spikes": {n: graph.spike_count[n] for n in graph.neurons if graph.spike_count[n] != 0},
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def load_workload(path) -> SnnGraph:
    with open(path, "rb") as fh:
        return parse_snn(fh.read())


def save_workload(graph: SnnGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_snn(graph))
