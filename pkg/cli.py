import json
import os
from pathlib import Path
from typing import Optional

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from src.driver import (
    analyze,
    dumps_metrics,
    final_cell_positions,
    load_config,
    load_placement,
    run_pipeline,
    write_outputs,
)
from src.errors import MacroForgeError
from src.evaluator import evaluate_placement, render_svg
from src.netlist import ChipOutline, generate_synthetic, load_design, save_design
from src.observability import MetricsCollector, RunLogger, RunTracer, setup_logging
from src.tuner import TuneSpec, tune as run_tune

load_dotenv()
cli = typer.Typer(help="macroforge - fixed-outline macro placement")
console = Console(stderr=True)


def _setup() -> None:
    setup_logging(
        level=os.getenv("LOG_LEVEL", "INFO"),
        json_output=os.getenv("LOG_FORMAT", "").lower() == "json",
        log_file=os.getenv("LOG_FILE") or None,
    )


def _fail(error: MacroForgeError) -> None:
    console.print(Panel(str(error), title=type(error).__name__, border_style="red"))
    raise typer.Exit(code=1)


def _placed_metrics(design_path: Path, placement_path: Path, config_path: Optional[Path]):
    design = load_design(design_path)
    config = load_config(config_path)
    rects = load_placement(design, placement_path)
    analysis = analyze(design, config)
    cells = final_cell_positions(design, config, analysis, rects, k=1)
    metrics = evaluate_placement(
        design,
        rects,
        cells,
        io_regions=analysis.io_regions,
        notch_threshold=analysis.notch_threshold,
        halo=config.halo,
    )
    return design, rects, analysis, metrics


@cli.command()
def place(
    design: Path = typer.Option(..., help="Design JSON file"),
    out: Path = typer.Option(..., help="Output directory"),
    config: Optional[Path] = typer.Option(None, help="Pipeline config JSON (or a tune result)"),
    seed: Optional[int] = typer.Option(None, help="Random seed"),
    prototype: Optional[str] = typer.Option(None, help="internal | file:<path>"),
    abplace_lambda: Optional[float] = typer.Option(None, help="ABPlace overlap weight"),
    abplace_iters: Optional[int] = typer.Option(None, help="ABPlace iteration cap"),
    abplace_tol: Optional[float] = typer.Option(None, help="ABPlace relative tolerance"),
    trace: bool = typer.Option(False, "--trace", help="Write trace files under <out>/trace"),
    dump_connectivity: bool = typer.Option(False, "--dump-connectivity", help="Write connectivity.json"),
):
    """Place every macro of a design."""
    _setup()
    try:
        cfg = load_config(
            config,
            seed=seed,
            prototype=prototype,
            abplace_lambda=abplace_lambda,
            abplace_max_iters=abplace_iters,
            abplace_tol=abplace_tol,
        )
        loaded = load_design(design)
        console.print(
            f"[bold blue]Placing {loaded.macro_count} macros, {loaded.cell_count} cells "
            f"(seed {cfg.seed})...[/bold blue]"
        )
        metrics = MetricsCollector()
        final = run_pipeline(
            loaded,
            cfg,
            tracer=RunTracer(out / "trace" if trace else None),
            metrics=metrics,
            run_logger=RunLogger(run_id=f"seed{cfg.seed}", name="place"),
        )
        write_outputs(final, out, dump_connectivity=dump_connectivity)
    except MacroForgeError as e:
        _fail(e)

    table = Table(title="Placement metrics")
    table.add_column("metric")
    table.add_column("value", justify="right")
    for key, value in final.metrics.to_dict().items():
        if isinstance(value, (int, float)):
            table.add_row(key, f"{value:.6g}")
    console.print(table)
    console.print(f"[bold green]Wrote {out}[/bold green]")


@cli.command(name="eval")
def eval_(
    design: Path = typer.Option(..., help="Design JSON file"),
    placement: Path = typer.Option(..., help="placement.json to score"),
    config: Optional[Path] = typer.Option(None, help="Pipeline config JSON"),
):
    """Print metrics of an existing placement as JSON."""
    _setup()
    try:
        _, _, _, metrics = _placed_metrics(design, placement, config)
    except MacroForgeError as e:
        _fail(e)
    typer.echo(dumps_metrics(metrics.to_dict()), nl=False)


@cli.command()
def render(
    design: Path = typer.Option(..., help="Design JSON file"),
    placement: Path = typer.Option(..., help="placement.json to draw"),
    out: Path = typer.Option(Path("layout.svg"), help="SVG output file"),
    config: Optional[Path] = typer.Option(None, help="Pipeline config JSON"),
):
    """Render a placement as SVG."""
    _setup()
    try:
        loaded = load_design(design)
        cfg = load_config(config)
        rects = load_placement(loaded, placement)
        analysis = analyze(loaded, cfg)
    except MacroForgeError as e:
        _fail(e)
    out.write_text(render_svg(loaded, rects, groups=analysis.groups, keepouts=analysis.io_regions.rects))
    console.print(f"[bold green]Wrote {out}[/bold green]")


@cli.command()
def tune(
    design: Path = typer.Option(..., help="Design JSON file"),
    out: Path = typer.Option(Path("tune_result.json"), help="Result JSON file"),
    budget: int = typer.Option(50, help="Number of pipeline runs"),
    seed: int = typer.Option(1, help="Random seed"),
    config: Optional[Path] = typer.Option(None, help="Base pipeline config JSON"),
):
    """Tune lambda and w1..w7 with Bayesian optimization."""
    _setup()
    try:
        loaded = load_design(design)
        base = load_config(config)
        console.print(f"[bold blue]Tuning with {budget} runs (seed {seed})...[/bold blue]")
        result = run_tune(loaded, TuneSpec(budget=budget), seed=seed, base_config=base)
    except MacroForgeError as e:
        _fail(e)
    out.write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n")
    console.print(Panel(
        f"objective {result.best_objective:.6g}\n{out}",
        title="Best configuration",
        border_style="green",
    ))


@cli.command()
def generate(
    out: Path = typer.Option(..., help="Design JSON file to write"),
    seed: int = typer.Option(1, help="Random seed"),
    macros: int = typer.Option(16, help="Number of macros"),
    cells: int = typer.Option(400, help="Number of standard cells"),
    nets: int = typer.Option(600, help="Number of nets"),
    width: float = typer.Option(1000.0, help="Outline width"),
    height: float = typer.Option(1000.0, help="Outline height"),
    utilization: float = typer.Option(0.3, help="Macro area over outline area"),
):
    """Write a reproducible synthetic design."""
    _setup()
    try:
        design = generate_synthetic(
            seed, macros, cells, nets, ChipOutline(width, height), utilization=utilization,
        )
    except MacroForgeError as e:
        _fail(e)
    save_design(design, out)
    console.print(f"[bold green]Wrote {out} ({design.macro_count} macros)[/bold green]")


if __name__ == "__main__":
    cli()
