"""
Command Line Interface for transducersim
"""

import dataclasses
import logging
import math
from typing import Any, Dict, Optional

import click
import yaml

from transducersim import __version__
from transducersim.exceptions import TransducerError
from transducersim.explore.figures import FIGURE_IDS, figure_data, figure_provenance
from transducersim.explore.optimize import OptimizeSpec, optimize_geometry
from transducersim.explore.sweep import load_sweep_spec, run_sweep
from transducersim.materials.registry import MaterialRegistry, load_material_db
from transducersim.transducer.device import evaluate
from transducersim.utils.config import (
    OCCUPANCY_BRANCHES,
    OUTPUT_FORMATS,
    RunConfig,
    load_config,
    load_run_config,
    load_yaml,
    validate_config,
)
from transducersim.utils.io import dumps_table, records_to_frame, write_provenance, write_table
from transducersim.utils.logging import setup_logging

EXIT_CONFIG = 1
EXIT_DIAGNOSTIC = 2


class TransducerGroup(click.Group):
    """Command group reporting usage errors with the configuration-error exit code"""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_CONFIG
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_CONFIG
            raise


@click.group(cls=TransducerGroup)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.option(
    "--materials",
    type=click.Path(),
    default=None,
    help="Material override document (default: $TRANSDUCER_MATERIALS)",
)
@click.option("--jobs", "-j", type=int, default=None, help="Worker processes for sweeps")
@click.version_option(__version__, prog_name="transducer-sim")
@click.pass_context
def main(ctx, verbose, materials, jobs):
    """transducer-sim - efficiency and thermal noise of microwave-to-optical transducers"""
    config = load_config()
    log_level = "DEBUG" if verbose else config.get("log_level", "INFO")
    setup_logging(log_level, config.get("log_file"))

    if not validate_config(config):
        click.echo(
            "Error: invalid environment configuration (TRANSDUCER_*/LOG_* variables)", err=True
        )
        raise click.Abort()

    ctx.ensure_object(dict)
    ctx.obj.update(
        {
            "verbose": verbose,
            "materials": materials or config.get("materials"),
            "jobs": jobs if jobs is not None else int(config.get("jobs", 1)),
            "format": config.get("output_format", "csv"),
        }
    )


def _run_config(config_path: Optional[str], occupancy_branch: Optional[str]) -> RunConfig:
    run_config = load_run_config(config_path)
    if not occupancy_branch:
        return run_config
    defaults = tuple(d for d in run_config.defaults_applied if not d.startswith("model.occupancy"))
    return dataclasses.replace(
        run_config, occupancy_branch=occupancy_branch, defaults_applied=defaults
    )


def _registry(ctx, run_config: Optional[RunConfig] = None) -> MaterialRegistry:
    source = ctx.obj.get("materials")
    if source is None and run_config is not None:
        source = run_config.materials
    return load_material_db(source)


def _output_format(ctx, option: Optional[str], run_config: RunConfig) -> str:
    if option:
        return option
    if "output.format = csv" in run_config.defaults_applied:
        return ctx.obj["format"]
    return run_config.output_format


def _provenance(
    command: str, run_config: RunConfig, registry: MaterialRegistry, **extra
) -> Dict[str, Any]:
    return {
        "tool": "transducersim",
        "version": __version__,
        "command": command,
        "config": run_config.to_dict(),
        "materials": {name: registry.provenance(name) for name in registry.names()},
        **extra,
    }


def _emit(frame, out: Optional[str], fmt: str, provenance: Dict[str, Any]):
    if out:
        write_table(frame, out, fmt)
        write_provenance(out, provenance)
        click.echo(f"Data written to {out}", err=True)
    else:
        click.echo(dumps_table(frame, fmt), nl=False)


@main.command()
@click.option(
    "--config", "-c", "config_path", type=click.Path(), help="Run configuration"
)
@click.option("--format", "-f", "fmt", type=click.Choice(OUTPUT_FORMATS), help="Output format")
@click.option("--out", "-o", type=click.Path(), help="Output file path")
@click.option("--occupancy-branch", type=click.Choice(OCCUPANCY_BRANCHES), help="Bath weighting")
@click.pass_context
def point(ctx, config_path, fmt, out, occupancy_branch):
    """Evaluate one design point"""
    logger = logging.getLogger(__name__)

    try:
        run_config = _run_config(config_path, occupancy_branch)
        registry = _registry(ctx, run_config)
        result = evaluate(run_config, registry)
        record = result.to_record()
        _emit(
            records_to_frame([record]),
            out,
            _output_format(ctx, fmt, run_config),
            _provenance("point", run_config, registry),
        )
        if ctx.obj["verbose"]:
            click.echo(
                f"n_total physical = {result.n_total_physical:.6g}, "
                f"as_printed = {result.n_total_as_printed:.6g}",
                err=True,
            )
    except (TransducerError, OSError) as e:
        logger.error(f"Point evaluation failed: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()

    if result.flags["runaway"]:
        logger.warning("Thermal runaway: values reported at the solver cap are not physical")
        ctx.exit(EXIT_DIAGNOSTIC)


@main.command()
@click.argument("spec_file", type=click.Path())
@click.option(
    "--config", "-c", "config_path", type=click.Path(), help="Base run configuration"
)
@click.option("--format", "-f", "fmt", type=click.Choice(OUTPUT_FORMATS), help="Output format")
@click.option("--out", "-o", type=click.Path(), help="Output file path")
@click.option("--occupancy-branch", type=click.Choice(OCCUPANCY_BRANCHES), help="Bath weighting")
@click.pass_context
def sweep(ctx, spec_file, config_path, fmt, out, occupancy_branch):
    """Run a parameter sweep described by SPEC_FILE"""
    logger = logging.getLogger(__name__)

    try:
        spec = load_sweep_spec(load_yaml(spec_file))
        run_config = _run_config(config_path, occupancy_branch)
        registry = _registry(ctx, run_config)
        frame = run_sweep(spec, registry, run_config, jobs=ctx.obj["jobs"])
        _emit(
            frame,
            out,
            _output_format(ctx, fmt, run_config),
            _provenance("sweep", run_config, registry, spec=spec.to_dict()),
        )
    except (TransducerError, OSError) as e:
        logger.error(f"Sweep failed: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()


@main.command()
@click.argument("figure_id", type=click.Choice(FIGURE_IDS))
@click.option(
    "--config", "-c", "config_path", type=click.Path(), help="Base run configuration"
)
@click.option("--format", "-f", "fmt", type=click.Choice(OUTPUT_FORMATS), help="Output format")
@click.option("--out", "-o", type=click.Path(), help="Output file path")
@click.option("--resolution", "-r", type=int, help="Points per swept axis (preview)")
@click.option("--occupancy-branch", type=click.Choice(OCCUPANCY_BRANCHES), help="Bath weighting")
@click.pass_context
def figure(ctx, figure_id, config_path, fmt, out, resolution, occupancy_branch):
    """Generate the dataset of a reference figure"""
    logger = logging.getLogger(__name__)

    try:
        run_config = _run_config(config_path, occupancy_branch)
        registry = _registry(ctx, run_config)
        data = figure_data(
            figure_id, registry, jobs=ctx.obj["jobs"], resolution=resolution, base_config=run_config
        )
        _emit(
            data.table,
            out,
            _output_format(ctx, fmt, run_config),
            _provenance("figure", run_config, registry, **figure_provenance(data)),
        )
    except (TransducerError, OSError) as e:
        logger.error(f"Figure generation failed: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()


@main.command()
@click.argument("spec_file", type=click.Path())
@click.option(
    "--config", "-c", "config_path", type=click.Path(), help="Base run configuration"
)
@click.option("--format", "-f", "fmt", type=click.Choice(OUTPUT_FORMATS), help="Output format")
@click.option("--out", "-o", type=click.Path(), help="Best-point output file")
@click.option("--trace", "trace_path", type=click.Path(), help="Search trace output file")
@click.option("--occupancy-branch", type=click.Choice(OCCUPANCY_BRANCHES), help="Bath weighting")
@click.pass_context
def optimize(ctx, spec_file, config_path, fmt, out, trace_path, occupancy_branch):
    """Search the geometry maximizing efficiency under a noise bound"""
    logger = logging.getLogger(__name__)

    try:
        spec = OptimizeSpec.from_document(load_yaml(spec_file))
        run_config = _run_config(config_path, occupancy_branch)
        registry = _registry(ctx, run_config)
        result = optimize_geometry(spec, registry, run_config, jobs=ctx.obj["jobs"])
        output_format = _output_format(ctx, fmt, run_config)
        provenance = _provenance(
            "optimize",
            run_config,
            registry,
            spec=spec.to_dict(),
            evaluations=result.evaluations,
            feasible=result.feasible,
        )
        if trace_path:
            write_table(result.trace, trace_path, output_format)
            write_provenance(trace_path, provenance)
        if result.feasible:
            _emit(records_to_frame([result.best.to_record()]), out, output_format, provenance)
        click.echo(result.message, err=True)
    except (TransducerError, OSError) as e:
        logger.error(f"Optimization failed: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()

    if not result.feasible:
        ctx.exit(EXIT_DIAGNOSTIC)


@main.group()
def materials():
    """Inspect the material database"""


@materials.command("list")
@click.pass_context
def materials_list(ctx):
    """List materials with their provenance"""
    logger = logging.getLogger(__name__)

    try:
        registry = _registry(ctx)
        for name in registry.names():
            click.echo(f"{name}\t{registry.provenance(name)}")
    except (TransducerError, OSError) as e:
        logger.error(f"Failed to list materials: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()


@materials.command("show")
@click.argument("name")
@click.pass_context
def materials_show(ctx, name):
    """Show the merged parameters of one material"""
    logger = logging.getLogger(__name__)

    try:
        registry = _registry(ctx)
        material = registry.get(name)
        click.echo(f"{material.name} ({material.provenance})")
        click.echo(yaml.safe_dump(registry.describe(name), sort_keys=False).rstrip())
        if material.optical is not None and material.optical.d33 is not None:
            click.echo(f"d33 = {material.optical.d33 * 1e12:g} pm/V")
        if material.superconductor is not None:
            sc = material.superconductor
            pair_breaking_thz = sc.pair_breaking_omega / (2.0 * math.pi) / 1e12
            click.echo(f"gap0 = {sc.gap0:.6g} J, pair-breaking above {pair_breaking_thz:.4g} THz")
    except (TransducerError, OSError) as e:
        logger.error(f"Failed to show material: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()


@materials.command("validate")
@click.pass_context
def materials_validate(ctx):
    """Check every material law on a 1 mK - 10 K grid"""
    logger = logging.getLogger(__name__)

    try:
        registry = _registry(ctx)
        problems = registry.validate()
    except (TransducerError, OSError) as e:
        logger.error(f"Material validation failed: {str(e)}")
        click.echo(f"Error: {str(e)}", err=True)
        raise click.Abort()

    if problems:
        for problem in problems:
            click.echo(f"Error: {problem}", err=True)
        raise click.Abort()
    click.echo(f"{len(registry)} materials valid")


if __name__ == "__main__":
    main()
