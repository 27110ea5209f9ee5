"""Command-line entry points.

Mesh arguments accept either a path to an STL file or ``fixture:<name>``
for one of the built-in test parts.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import fixtures
from .configspace import default_config, to_dict, to_flat
from .errors import PrintOptError
from .evaluator import Evaluator
from .guidance import NullProvider, RemoteProvider, ScriptedProvider
from .guidance.prompt import diagnostics_text
from .harness import (
    best_so_far_curves,
    load_results_dir,
    parse_config_document,
    summarize,
    win_rate_matrix,
)
from .harness.baselines import baseline_default, baseline_external, baseline_reorient
from .mesh import parse_mesh
from .optimizer import run_optimization


def _load_mesh(spec: str):
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        try:
            return fixtures.make(name)
        except KeyError:
            raise click.ClickException(
                f"unknown fixture {name!r}; choices: {', '.join(sorted(fixtures.FIXTURES))}"
            )
    path = Path(spec)
    if not path.exists():
        raise click.ClickException(f"mesh file not found: {spec}")
    return parse_mesh(path)


def _load_config(path: str | None):
    if path is None:
        return default_config()
    return parse_config_document(Path(path).read_text())


def _parse_axis(text: str | None):
    if text is None:
        return None
    try:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError
    except ValueError:
        raise click.ClickException("--load-axis expects three comma-separated numbers")
    return tuple(parts)


class _Group(click.Group):
    """Surface domain errors as clean CLI messages, not tracebacks."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PrintOptError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=_Group)
def main() -> None:
    """Pick printable FDM configurations by evaluator-driven search."""


@main.command()
@click.argument("mesh")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Config document (JSON or key=value); defaults to stock settings.")
@click.option("--load-axis", default=None, help="Load direction as x,y,z.")
@click.option("--as-json", is_flag=True, help="Emit the full report as JSON.")
def evaluate(mesh, config_path, load_axis, as_json):
    """Score one configuration on one part."""
    m = _load_mesh(mesh)
    config = _load_config(config_path)
    report = Evaluator(m).evaluate(config, load_axis=_parse_axis(load_axis))
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        click.echo(diagnostics_text(report))


@main.command()
@click.argument("mesh")
@click.option("--provider", type=click.Choice(["remote", "scripted", "none"]),
              default="scripted", show_default=True)
@click.option("--model", default="gpt-4o", show_default=True,
              help="Remote model name (remote provider only).")
@click.option("--base-url", default="https://api.openai.com/v1", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--eta", type=float, default=4.0, show_default=True,
              help="Sharpness of the guidance discount.")
@click.option("--iters", type=int, default=40, show_default=True)
@click.option("--warm-start", type=int, default=16, show_default=True)
@click.option("--budget-actions", type=click.IntRange(0, 2), default=2, show_default=True)
@click.option("--load-axis", default=None, help="Load direction as x,y,z.")
@click.option("--trace", "trace_path", type=click.Path(), default=None,
              help="Write the run trace JSONL here.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the chosen config document here.")
def optimize(mesh, provider, model, base_url, seed, eta, iters, warm_start,
             budget_actions, load_axis, trace_path, out_path):
    """Search for a good configuration on one part."""
    m = _load_mesh(mesh)
    if provider == "remote":
        prov = RemoteProvider(model=model, base_url=base_url)
    elif provider == "scripted":
        prov = ScriptedProvider()
    else:
        prov = NullProvider()
    result = run_optimization(
        m,
        seed=seed,
        provider=prov,
        budget=budget_actions,
        iterations=iters,
        warm=warm_start,
        eta=eta,
        trace_path=trace_path,
        load_axis=_parse_axis(load_axis),
    )
    report = result.best_report
    click.echo(f"best objective {report.objective:.4f} "
               f"(time {report.time_s:.0f} s, material {report.cost_g:.2f} g, "
               f"quality {report.quality:.4f})")
    click.echo(to_flat(result.best_config))
    if out_path is not None:
        Path(out_path).write_text(
            json.dumps(to_dict(result.best_config), indent=2, sort_keys=True) + "\n"
        )
        click.echo(f"config written to {out_path}")


@main.command()
@click.argument("mesh")
@click.option("--method", type=click.Choice(["default", "reorient", "external"]),
              required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Required for the external method.")
def baseline(mesh, method, config_path):
    """Score a single-shot baseline on one part."""
    m = _load_mesh(mesh)
    if method == "default":
        outcome = baseline_default(m)
    elif method == "reorient":
        outcome = baseline_reorient(m)
    else:
        if config_path is None:
            raise click.ClickException("--method external requires --config")
        outcome = baseline_external(m, Path(config_path).read_text())
    tag = " (brim adjusted)" if outcome.brim_adjusted else ""
    click.echo(f"[{outcome.method}]{tag} objective {outcome.report.objective:.4f}")
    click.echo(diagnostics_text(outcome.report))
    click.echo(to_flat(outcome.config))


@main.command()
@click.argument("results_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--tie-tol", type=float, default=1e-3, show_default=True)
def compare(results_dir, tie_tol):
    """Pairwise win rates between persisted methods (aligned seeds only)."""
    results = load_results_dir(results_dir)
    if len(results) < 2:
        raise click.ClickException("need at least two method directories")
    matrix = win_rate_matrix(results, tie_tol=tie_tol)
    click.echo(matrix.to_text())
    out = Path(results_dir) / "win_rate.csv"
    out.write_text(matrix.to_csv())
    click.echo(f"matrix written to {out}")


@main.command()
@click.argument("results_dir", type=click.Path(exists=True, file_okay=False))
def report(results_dir):
    """Summary table and best-so-far curves for persisted results."""
    results = load_results_dir(results_dir)
    if not results:
        raise click.ClickException("no method directories found")
    table = summarize(results)
    click.echo(table.to_text())
    base = Path(results_dir)
    (base / "summary.csv").write_text(table.to_csv())
    (base / "summary.txt").write_text(table.to_text())
    for mr in results:
        if mr.curves is None:
            continue
        band = best_so_far_curves(mr.curves)
        (base / f"curve_{mr.method}.csv").write_text(band.to_csv())
        click.echo(f"curve written for {mr.method}")


@main.command("fixtures")
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--name", "names", multiple=True,
              help="Subset of fixtures to write; default writes the acceptance set.")
def fixtures_cmd(out_dir, names):
    """Write built-in part meshes as binary STL files."""
    chosen = tuple(names) if names else fixtures.ACCEPTANCE_NAMES
    paths = fixtures.write_fixture_dir(out_dir, chosen)
    for p in paths:
        click.echo(str(p))


if __name__ == "__main__":
    main()
