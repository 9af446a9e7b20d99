"""Command line harness.

    neuromap run           one (workload, method) pipeline cell
    neuromap sweep-xbar    crossbar-size study
    neuromap sweep-maxiter restart-budget / mapping-time study
    neuromap gen-workload  synthesize a workload file

Exit codes: 0 ok, 1 infeasible instance, 2 usage or input error.
"""

from __future__ import annotations

import sys

import click

from . import __version__
from .hwconfig import HardwareConfigError
from .model import InfeasibleError
from .pipeline import METHODS, run_pipeline, sweep_crossbar, sweep_maxiter
from .workload import WorkloadError, WorkloadSpec, generate, save_workload

EXIT_INFEASIBLE = 1
EXIT_USAGE = 2


def _run_guarded(fn):
    try:
        return fn()
    except InfeasibleError as exc:
        click.echo(f"error: infeasible instance: {exc}", err=True)
        sys.exit(EXIT_INFEASIBLE)
    except (WorkloadError, HardwareConfigError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)


def _int_list(_ctx, _param, value):
    try:
        return tuple(int(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


@click.group()
@click.version_option(__version__)
def main():
    """Energy-aware SNN-to-neuromorphic-hardware mapping toolchain."""


@main.command("run")
@click.option("--workload", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--hw", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Hardware TOML; defaults to a 2x2 mesh of 128x128 crossbars.")
@click.option("--method", type=click.Choice(METHODS), default="hillclimb")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-iter", type=int, default=100, show_default=True)
@click.option("--horizon", type=float, default=1e-3, show_default=True,
              help="Simulated injection horizon in seconds.")
@click.option("--out", type=click.Path(file_okay=False), default="out", show_default=True)
@click.option("--app", default=None, help="Application label; defaults to the workload stem.")
def run_cmd(workload, hw, method, seed, max_iter, horizon, out, app):
    """Cluster, map, place, and simulate one workload; write reports."""
    def body():
        result = run_pipeline(workload, hw, method, out, seed=seed,
                              max_iter=max_iter, horizon=horizon, app=app)
        click.echo(f"{result.app} [{result.method}] clusters={len(result.csnn.clusters)} "
                   f"E_spk={result.energy.e_spk_total:.6e} J "
                   f"E_comm={result.energy.e_comm_total:.6e} J "
                   f"total={result.energy.total:.6e} J "
                   f"mean_latency={result.latency.mean_latency_s:.6e} s")
        click.echo(f"reports written to {out}")
    _run_guarded(body)


@main.command("sweep-xbar")
@click.option("--workload", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--hw", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--sizes", callback=_int_list, default="128,256,512", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-iter", type=int, default=100, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default="out", show_default=True)
@click.option("--app", default=None)
def sweep_xbar_cmd(workload, hw, sizes, seed, max_iter, out, app):
    """Compare energy across crossbar sizes (normalized to the first size)."""
    def body():
        rows = sweep_crossbar(workload, hw, out, sizes=sizes, seed=seed,
                              max_iter=max_iter, app=app)
        for row in rows:
            click.echo(f"M={row['crossbar_dim']:>4} clusters={row['clusters']:>3} "
                       f"cut_spikes={row['inter_cluster_spikes']:>6} "
                       f"total={row['total_J']} norm={row['normalized_total']}")
        click.echo(f"sweep written to {out}/sweep_xbar.csv")
    _run_guarded(body)


@main.command("sweep-maxiter")
@click.option("--workload", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--hw", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--iters", callback=_int_list, default="10,100,1000", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default="out", show_default=True)
@click.option("--app", default=None)
def sweep_maxiter_cmd(workload, hw, iters, seed, out, app):
    """Trade mapping time against solution quality over restart budgets."""
    def body():
        rows = sweep_maxiter(workload, hw, out, iters=iters, seed=seed, app=app)
        for row in rows:
            click.echo(f"max_iter={row['max_iter']:>5} time={row['mapping_time_s']}s "
                       f"total={row['total_J']} norm={row['normalized_total']}")
        click.echo(f"sweep written to {out}/sweep_maxiter.csv")
    _run_guarded(body)


@main.command("gen-workload")
@click.option("--kind", type=click.Choice(("feedforward", "reservoir", "random")),
              default="feedforward", show_default=True)
@click.option("--layers", callback=_int_list, default="784,100,10", show_default=True,
              help="Layer sizes (feedforward only).")
@click.option("--n", type=int, default=100, show_default=True,
              help="Neuron count (reservoir/random).")
@click.option("--density", type=float, default=0.1, show_default=True)
@click.option("--fan-in", type=int, default=None,
              help="Cap on per-neuron inputs from the previous layer (feedforward).")
@click.option("--spike-max", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def gen_workload_cmd(kind, layers, n, density, fan_in, spike_max, seed, out):
    """Generate a synthetic workload file."""
    def body():
        spec = WorkloadSpec(kind=kind, layers=layers if kind == "feedforward" else (),
                            n=n, density=density, fan_in=fan_in,
                            spike_max=spike_max, seed=seed)
        graph = generate(spec)
        save_workload(graph, out)
        click.echo(f"{kind} workload with {len(graph.neurons)} neurons and "
                   f"{len(graph.synapses)} synapses written to {out}")
    _run_guarded(body)


if __name__ == "__main__":
    main()
