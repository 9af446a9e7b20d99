"""Experiment harness: cluster -> map -> place -> energy -> simulate.

A pipeline run takes a workload file plus a hardware description and
produces machine-readable reports: `energy.json` and `latency.json` in the
output directory and one row in `summary.csv`. Methods:

    hillclimb  connectivity clustering + total-energy hill climbing
    comm_min   connectivity clustering + communication-only hill climbing
    random     connectivity clustering + one seeded random mapping
    util_max   fewest-clusters packing + row-major sequential mapping

All methods use the greedy traffic-sorted crossbar placement. Reports are
regenerable byte-exactly from (inputs, seed, version); the measured
`mapping_time_s` column in the CSV is the one wall-clock quantity outside
that guarantee.

Sweeps re-run the pipeline across crossbar sizes or restart budgets and
emit comparison CSVs with energies normalized to the first setting. Cells
of a sweep may execute in parallel (NEUROMAP_THREADS caps the pool);
results are merged in fixed order so parallelism never changes output.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .clustering import cluster, cluster_util_max, decompose
from .energy import CurrentModel
from .hwconfig import default_hardware, load_hardware_config
from .mapper import (
    MapperConfig,
    baseline_comm_min,
    baseline_random,
    hill_climb,
    sequential_mapping,
)
from .model import EnergyReport, HardwareModel
from .nocsim import simulate
from .placement import place_all
from .workload import load_workload

METHODS = ("hillclimb", "comm_min", "random", "util_max")

CSV_COLUMNS = ("app", "method", "clusters", "E_spk_J", "E_comm_J", "total_J",
               "mean_latency_s", "max_latency_s", "mapping_time_s")

XBAR_COLUMNS = ("app", "crossbar_dim", "clusters", "inter_cluster_spikes",
                "E_spk_J", "E_comm_J", "total_J", "normalized_total")

MAXITER_COLUMNS = ("app", "max_iter", "mapping_time_s", "E_spk_J", "E_comm_J",
                   "total_J", "normalized_total")


@dataclass(frozen=True)
class PipelineResult:
    app: str
    method: str
    csnn: object
    mapping: object
    placement: object
    energy: EnergyReport
    latency: object
    mapping_time_s: float
    seed: int
    max_iter: int


def run_method(snn, hw: HardwareModel, method: str, seed: int, max_iter: int):
    """Cluster and map one workload with one method.

    Returns (csnn, mapping, placement, energy report, mapping seconds).
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    decomposed = decompose(snn, hw.crossbar_dim)
    if method == "util_max":
        csnn = cluster_util_max(decomposed, hw.crossbar_dim)
    else:
        csnn = cluster(decomposed, hw.crossbar_dim)

    started = time.perf_counter()
    if method == "hillclimb":
        mapping, placement, report, _ = hill_climb(csnn, hw, MapperConfig(max_iter=max_iter, seed=seed))
    elif method == "comm_min":
        mapping, placement, report, _ = baseline_comm_min(csnn, hw, MapperConfig(max_iter=max_iter, seed=seed))
    elif method == "random":
        mapping, report = baseline_random(csnn, hw, seed)
        placement = None
    else:
        mapping, placement, report = sequential_mapping(csnn, hw)
    elapsed = time.perf_counter() - started

    if placement is None:
        placement = place_all(csnn, hw.crossbar_dim, CurrentModel.from_hardware(hw))
    return csnn, mapping, placement, report, elapsed


def run_pipeline(workload_path, hw_path, method: str, out_dir,
                 seed: int = 0, max_iter: int = 100, horizon: float = 1e-3,
                 app: str | None = None) -> PipelineResult:
    """Full pipeline for one (workload, method) cell, writing all reports."""
    workload_path = Path(workload_path)
    snn = load_workload(workload_path)
    hw = load_hardware_config(hw_path) if hw_path else default_hardware()
    if app is None:
        app = workload_path.stem

    csnn, mapping, placement, energy, elapsed = run_method(snn, hw, method, seed, max_iter)
    latency = simulate(csnn, mapping, hw, horizon=horizon, seed=seed)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_energy_json(out / "energy.json", app, method, csnn, mapping, energy, seed, max_iter)
    _write_latency_json(out / "latency.json", app, method, latency)
    result = PipelineResult(app=app, method=method, csnn=csnn, mapping=mapping,
                            placement=placement, energy=energy, latency=latency,
                            mapping_time_s=elapsed, seed=seed, max_iter=max_iter)
    _append_csv(out / "summary.csv", CSV_COLUMNS, [_summary_row(result)])
    return result


def _summary_row(r: PipelineResult) -> dict:
    return {
        "app": r.app,
        "method": r.method,
        "clusters": len(r.csnn.clusters),
        "E_spk_J": repr(r.energy.e_spk_total),
        "E_comm_J": repr(r.energy.e_comm_total),
        "total_J": repr(r.energy.total),
        "mean_latency_s": repr(r.latency.mean_latency_s),
        "max_latency_s": repr(r.latency.max_latency_s),
        "mapping_time_s": repr(r.mapping_time_s),
    }


def _write_energy_json(path, app, method, csnn, mapping, energy, seed, max_iter):
    doc = {
        "version": __version__,
        "app": app,
        "method": method,
        "seed": seed,
        "max_iter": max_iter,
        "clusters": len(csnn.clusters),
        "inter_cluster_spikes": csnn.total_link_spikes(),
        "mapping": [
            {"cluster": cid, "tile": list(mapping.assignment[cid])}
            for cid in sorted(mapping.assignment)
        ],
    }
    doc.update(energy.to_dict())
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _write_latency_json(path, app, method, latency):
    doc = {"version": __version__, "app": app, "method": method}
    doc.update(latency.to_dict())
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _append_csv(path, columns, rows):
    new = not Path(path).exists()
    with open(path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns))
        if new:
            writer.writeheader()
        writer.writerows(rows)


def _thread_pool_size() -> int:
    raw = os.environ.get("NEUROMAP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"NEUROMAP_THREADS must be an integer, got {raw!r}")


def _run_cells(jobs):
    """Run pipeline cells, possibly in parallel; results keep job order."""
    workers = _thread_pool_size()
    if workers == 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


def sweep_crossbar(workload_path, hw_path, out_dir, sizes=(128, 256, 512),
                   seed: int = 0, max_iter: int = 100, horizon: float = 1e-3,
                   app: str | None = None) -> list:
    """Re-cluster and re-map the workload for each crossbar size.

    Emits `sweep_xbar.csv` with energies normalized to the first size
    listed (so the 128 column of the default sweep is exactly 1.0).
    """
    workload_path = Path(workload_path)
    if app is None:
        app = workload_path.stem
    base_hw = load_hardware_config(hw_path) if hw_path else default_hardware()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def make_job(size):
        def job():
            hw_sized = replace(base_hw, crossbar_dim=size)
            snn = load_workload(workload_path)
            csnn, mapping, placement, energy, elapsed = run_method(
                snn, hw_sized, "hillclimb", seed, max_iter)
            return (size, csnn, energy)
        return job

    results = _run_cells([make_job(size) for size in sizes])
    base_total = results[0][2].total
    rows = []
    for size, csnn, energy in results:
        if base_total == 0.0:
            normalized = 1.0 if energy.total == 0.0 else float("inf")
        else:
            normalized = energy.total / base_total
        rows.append({
            "app": app,
            "crossbar_dim": size,
            "clusters": len(csnn.clusters),
            "inter_cluster_spikes": csnn.total_link_spikes(),
            "E_spk_J": repr(energy.e_spk_total),
            "E_comm_J": repr(energy.e_comm_total),
            "total_J": repr(energy.total),
            "normalized_total": repr(normalized),
        })
    _append_csv(out / "sweep_xbar.csv", XBAR_COLUMNS, rows)
    return rows


def sweep_maxiter(workload_path, hw_path, out_dir, iters=(10, 100, 1000),
                  seed: int = 0, horizon: float = 1e-3,
                  app: str | None = None) -> list:
    """Map the workload at several restart budgets with a fixed seed stream.

    Because restart k of the climb always draws from substream k, larger
    budgets explore a superset of restarts and the best energy can only
    stay or improve. Emits `sweep_maxiter.csv` with energies normalized to
    the first budget listed.
    """
    workload_path = Path(workload_path)
    if app is None:
        app = workload_path.stem
    hw = load_hardware_config(hw_path) if hw_path else default_hardware()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    snn = load_workload(workload_path)

    def make_job(budget):
        def job():
            csnn, mapping, placement, energy, elapsed = run_method(
                snn, hw, "hillclimb", seed, budget)
            return (budget, energy, elapsed)
        return job

    results = _run_cells([make_job(budget) for budget in iters])
    base_total = results[0][1].total
    rows = []
    for budget, energy, elapsed in results:
        if base_total == 0.0:
            normalized = 1.0 if energy.total == 0.0 else float("inf")
        else:
            normalized = energy.total / base_total
        rows.append({
            "app": app,
            "max_iter": budget,
            "mapping_time_s": repr(elapsed),
            "E_spk_J": repr(energy.e_spk_total),
            "E_comm_J": repr(energy.e_comm_total),
            "total_J": repr(energy.total),
            "normalized_total": repr(normalized),
        })
    _append_csv(out / "sweep_maxiter.csv", MAXITER_COLUMNS, rows)
    return rows
