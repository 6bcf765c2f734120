"""Command-line interface.

Exit codes for `solve`: 0 feasible, 1 infeasible, 2 invalid input,
3 internal failure.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .benchmarks import example_names, example_text, list_examples
from .config import build_system, load_config_file
from .errors import BarrierCertError, ConfigError
from .results import (
    EXIT_FAILURE,
    EXIT_INVALID_INPUT,
    barrier_from_document,
    execute_config,
)
from .simulate import level_set_grid, simulate_trajectory
from .synth import SynthOptions, validate_certificate
from .systems import Certificate


def _write_output(document: dict, out_path: str | None):
    text = json.dumps(document, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _load_config_or_exit(path: str):
    try:
        return load_config_file(path)
    except FileNotFoundError:
        click.echo(f"error: config file not found: {path}", err=True)
        sys.exit(EXIT_INVALID_INPUT)
    except ConfigError as exc:
        click.echo(f"error: invalid config: {exc}", err=True)
        sys.exit(EXIT_INVALID_INPUT)


@click.group()
@click.version_option(version=__version__)
def main():
    """Synthesize and validate polynomial safety barrier certificates."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(),
              help="Configuration document (JSON).")
@click.option("--out", "out_path", type=click.Path(), help="Write the result document here.")
@click.option("--parallel/--serial", "parallel", default=None,
              help="Override the config's parallel flag.")
@click.option("--degrees", help="Comma-separated even degrees, e.g. 2,4,6.")
@click.option("--max-degree", type=int, help="Search degrees {2,4,...,P}.")
@click.option("--feas-tol", type=float, default=1e-8, show_default=True,
              help="Solver feasibility tolerance.")
@click.option("--max-iter", type=int, default=200, show_default=True,
              help="Solver iteration limit.")
@click.option("--quiet", is_flag=True, help="Suppress the summary line.")
def solve(config_path, out_path, parallel, degrees, max_degree, feas_tol, max_iter, quiet):
    """Search for a barrier certificate for the configured system."""
    config = _load_config_or_exit(config_path)
    degree_list = None
    if degrees:
        try:
            degree_list = [int(d) for d in degrees.split(",") if d.strip()]
        except ValueError:
            click.echo(f"error: --degrees must be integers, got {degrees!r}", err=True)
            sys.exit(EXIT_INVALID_INPUT)
    options = SynthOptions(feas_tol=feas_tol, max_iter=max_iter)
    try:
        result = execute_config(config, parallel=parallel, degrees=degree_list,
                                max_degree=max_degree, options=options)
    except BarrierCertError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FAILURE)
    _write_output(result.to_dict(), out_path)
    if not quiet and out_path:
        summary = f"{result.status}"
        if result.confidence is not None:
            summary += f" (confidence {result.confidence:.6g})"
        if result.status == "feasible":
            summary += f" at degree {result.degree}: gamma={result.gamma:.6g}, lambda={result.lam:.6g}"
        click.echo(summary, err=True)
    sys.exit(result.exit_code)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--certificate", "certificate_path", required=True, type=click.Path(),
              help="A result document produced by `solve` (or a bare certificate).")
@click.option("--samples", type=int, default=10_000, show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--seed", type=int, default=2024, show_default=True)
def validate(config_path, certificate_path, samples, tol, seed):
    """Re-validate a stored certificate against its configuration."""
    config = _load_config_or_exit(config_path)
    try:
        with open(certificate_path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read certificate: {exc}", err=True)
        sys.exit(EXIT_INVALID_INPUT)
    try:
        system, prob = build_system(config)
        certificate = _certificate_from_document(document)
        report = validate_certificate(certificate, system, prob,
                                      samples=samples, tol=tol, seed=seed)
    except BarrierCertError as exc:
        click.echo(f"invalid certificate: {exc}", err=True)
        sys.exit(1)
    _write_output(report.to_dict(), None)
    sys.exit(0 if report.ok else 1)


def _certificate_from_document(document: dict) -> Certificate:
    if "barrier" not in document or document["barrier"] is None:
        raise ConfigError("barrier", "certificate document has no barrier polynomial")
    return Certificate(
        barrier=barrier_from_document(document["barrier"]),
        gamma=float(document["gamma"]),
        lam=float(document["lambda"]),
        c=float(document.get("c") or 0.0),
        confidence=document.get("confidence"),
        degree=int(document.get("degree") or 0),
    )


@main.command("plot-data")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--certificate", "certificate_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path())
@click.option("--resolution", type=int, default=101, show_default=True)
def plot_data(config_path, certificate_path, out_path, resolution):
    """Emit a level-set evaluation grid for a 2-D system."""
    config = _load_config_or_exit(config_path)
    with open(certificate_path, "r", encoding="utf-8") as fh:
        document = json.load(fh)
    try:
        _, prob = build_system(config)
        certificate = _certificate_from_document(document)
        grid = level_set_grid(certificate.barrier, certificate.gamma,
                              certificate.lam, prob.space, resolution)
    except BarrierCertError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INVALID_INPUT)
    _write_output(grid.to_dict(), out_path)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--x0", required=True, help="Comma-separated initial state, e.g. 0.3,0.2.")
@click.option("--steps", type=int, help="Steps (discrete) / horizon override.")
@click.option("--dt-step", type=float, default=0.01, show_default=True,
              help="Integrator step for continuous-time classes.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path())
def simulate(config_path, x0, steps, dt_step, seed, out_path):
    """Simulate one seeded trajectory of the configured system."""
    config = _load_config_or_exit(config_path)
    try:
        system, prob = build_system(config)
        point = [float(v) for v in x0.split(",")]
        horizon = steps if steps is not None else (config.t or 100)
        trajectory = simulate_trajectory(system, point, horizon,
                                         dt_step=dt_step, seed=seed,
                                         space=prob.space)
    except (BarrierCertError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INVALID_INPUT)
    _write_output(trajectory.to_dict(), out_path)


@main.group()
def examples():
    """List or export the bundled benchmark configurations."""


@examples.command("list")
def examples_list():
    for entry in list_examples():
        click.echo(f"{entry['name']:22s} {entry['mode']:6s} dim={entry['dim']} "
                   f"b_degree={entry['b_degree']}  {entry['description'][:80]}")


@examples.command("export")
@click.argument("name")
@click.option("--out", "out_path", type=click.Path())
def examples_export(name, out_path):
    if name not in example_names():
        click.echo(f"error: no bundled example named {name!r}; "
                   f"try `barriercert examples list`", err=True)
        sys.exit(EXIT_INVALID_INPUT)
    text = example_text(name)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--job-cap", type=int, default=4, show_default=True,
              help="Maximum concurrent solve jobs.")
@click.option("--timeout", type=float, default=300.0, show_default=True,
              help="Per-job wall-clock limit in seconds.")
def serve(host, port, job_cap, timeout):
    """Run the HTTP service that backs the web companion."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(job_cap=job_cap, timeout=timeout), host=host, port=port)


if __name__ == "__main__":
    main()
