"""Command-line front end: generate, detect, distance, benchmark.

stdout carries machine-parseable results (JSON, or a bare scalar for
`distance`); diagnostics go to stderr. Exit codes: 0 success, 1 runtime
failure, 2 usage or validation error.
"""
from __future__ import annotations

import dataclasses
import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bench import ExperimentConfig, run_sweep
from .distance import DistanceParams, empirical_distance
from .estimators import find_changepoints, list_estimator
from .generators import PiecewiseSpec, gen_piecewise
from .validation import ParameterError


def _reporting_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParameterError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (click.ClickException, SystemExit, KeyboardInterrupt):
            raise
        except Exception as exc:  # runtime failure, not a usage problem
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    return wrapper


def _load_series(path: str) -> np.ndarray:
    try:
        return np.loadtxt(path, dtype=np.float64, ndmin=1)
    except (OSError, ValueError) as exc:
        raise ParameterError(f"cannot read data file {path}: {exc}") from exc


def _write_series(path: str, x: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in x:
            v = float(v)
            fh.write(f"{int(v)}\n" if v.is_integer() else f"{v!r}\n")


def _distance_params(mode, m_max, l_max) -> DistanceParams | None:
    if mode is None and m_max is None and l_max is None:
        return None
    return DistanceParams(mode=mode, m_max=m_max, l_max=l_max)


_threads_option = click.option(
    "--threads", type=int, default=1, envvar="CHEST_THREADS",
    show_default=True, help="Worker threads; results do not depend on it.")


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Nonparametric changepoint estimation from pattern frequencies."""


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="RNG seed.")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output data file; truth goes to <out>.truth.json.")
@_reporting_errors
def generate(spec_file: str, seed: int | None, out: str) -> None:
    """Sample a piecewise spec into a newline-delimited data file."""
    spec = PiecewiseSpec.from_json(Path(spec_file).read_text(encoding="utf-8"))
    x, taus = gen_piecewise(spec, seed)
    _write_series(out, x)
    truth_path = out + ".truth.json"
    truth = {"taus": taus, "m": spec.process_count,
             "lambda": spec.min_segment_fraction}
    Path(truth_path).write_text(json.dumps(truth), encoding="utf-8")
    click.echo(json.dumps({"data": out, "truth": truth_path,
                           "n": int(x.size), **truth}))


@main.command()
@click.argument("data_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--min-distance", type=float, required=True,
              help="Lower bound on the normalized segment length.")
@click.option("--process-count", type=int, default=None,
              help="Number of distinct generating processes.")
@click.option("--list-only", is_flag=True,
              help="Emit scored candidates instead of changepoints.")
@click.option("--mode", type=click.Choice(["discrete", "real"]), default=None)
@click.option("--m-max", type=int, default=None,
              help="Longest pattern length compared.")
@click.option("--l-max", type=int, default=None,
              help="Deepest quantization level (real mode).")
@_threads_option
@_reporting_errors
def detect(data_file: str, min_distance: float, process_count: int | None,
           list_only: bool, mode: str | None, m_max: int | None,
           l_max: int | None, threads: int) -> None:
    """Estimate changepoints in a newline-delimited data file."""
    if not list_only and process_count is None:
        raise click.UsageError("--process-count is required unless --list-only")
    x = _load_series(data_file)
    params = _distance_params(mode, m_max, l_max)
    if list_only:
        cl = list_estimator(x, min_distance, params, threads=threads)
        click.echo(json.dumps({"candidates": [
            {"index": c.index, "score": c.score} for c in cl]}))
    else:
        cps = find_changepoints(x, min_distance, process_count, params,
                                threads=threads)
        click.echo(json.dumps({"changepoints": cps}))


@main.command()
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["discrete", "real"]), default=None)
@click.option("--m-max", type=int, default=None)
@click.option("--l-max", type=int, default=None)
@_reporting_errors
def distance(file_a: str, file_b: str, mode: str | None,
             m_max: int | None, l_max: int | None) -> None:
    """Empirical distributional distance between two sample files."""
    a = _load_series(file_a)
    b = _load_series(file_b)
    d = empirical_distance(a, b, _distance_params(mode, m_max, l_max))
    click.echo(f"{d:.12g}")


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True,
              help="Output prefix; writes <out>.csv and <out>.json.")
@click.option("--seed", type=int, default=None,
              help="Override the config's seed_base.")
@_threads_option
@_reporting_errors
def benchmark(config_file: str, out: str, seed: int | None,
              threads: int) -> None:
    """Run a sweep config; emits per-run CSV plus a JSON aggregate."""
    try:
        doc = json.loads(Path(config_file).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ParameterError(f"cannot parse config: {exc}") from exc
    config = ExperimentConfig.from_json_dict(doc)
    if seed is not None:
        config = dataclasses.replace(config, seed_base=seed)
    result = run_sweep(config, threads=threads)
    result.to_csv(out + ".csv")
    agg = result.aggregate_json()
    Path(out + ".json").write_text(agg, encoding="utf-8")
    click.echo(agg)
