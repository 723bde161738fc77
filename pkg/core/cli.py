"""
Command-line front end.

Commands:
    - rate-scan: W_p(m, m_h) / h for a measure read from JSON, over a geometric h-grid.
    - cantor: the same quotient for a Cantor approximant along its critical scales.
    - porosity: a porosity profile with a three-valued verdict.
    - verify: the acceptance suite, with a JSON report.

Options given on the command line override those read with --config. Errors exit with
the code their class carries: 2 for input errors, 3 for numeric errors, 1 for failed
acceptance criteria.
"""



import functools
import json
import logging

import click
import pandas as pd

from .acceptance import run_suite, suite_report
from .cantor import generation, matched_scales
from .errors import AcceptanceFailure, LabError
from .measure1d import load_measure
from .models import ExperimentConfig, IntervalSet
from .porosity import class_A_diagnostic, porosity_profile
from .rates import cantor_scan, geometric_grid, rate_scan
from .settings import VERSION, get_settings
from .utils import FileUtils, SeedUtils



logger = logging.getLogger(__name__)

LEVELS = ["WARNING", "INFO", "DEBUG"]


def handle_errors(command):
    """Reports LabErrors on stderr and exits with their code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except LabError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            raise SystemExit(e.exit_code) from None
    return wrapper


def build_config(ctx: click.Context, command: str, **options):
    """Merges the --config document with the command-line options and validates the result."""
    data = {}
    path = ctx.obj.get("config_path") if ctx.obj else None
    if path:
        loaded, _ = FileUtils.read_json(path)
        if not isinstance(loaded, dict):
            loaded = {}
        data.update(loaded)

    data["command"] = command
    for key, value in options.items():
        if value is None or value == ():
            continue
        data[key] = list(value) if isinstance(value, tuple) else value

    config = ExperimentConfig.from_dict(data)
    logger.info("Running %s", config)
    return config


def manifest(config: ExperimentConfig):
    return {"config_hash": SeedUtils.config_hash(config.to_dict()), "version": VERSION, "seed": config.seed}


def emit_csv(config: ExperimentConfig, frame: pd.DataFrame, trailer=None):
    """Writes the table to config.out, or to stdout without one."""
    if config.out:
        FileUtils.write_csv(config.out, frame, manifest(config), trailer)
    else:
        click.echo(FileUtils.csv_text(frame, manifest(config), trailer), nl=False)


def cantor_options(command):
    for option in reversed([
            click.option("--depth", type=int, help="Depth of the Cantor approximant."),
            click.option("--alpha-kind", type=click.Choice(["constant", "vector", "harmonic"]), help="Gap-ratio rule."),
            click.option("--alpha-c", type=float, help="Constant ratio, or offset of the harmonic rule."),
            click.option("--alpha-values", type=float, multiple=True, help="Leading ratios of the vector rule."),
            click.option("--n-min", type=int, help="First generation of the critical scales."),
            click.option("--n-max", type=int, help="Last generation of the critical scales.")]):
        command = option(command)
    return command


def common_options(command):
    for option in reversed([
            click.option("--out", type=click.Path(dir_okay=False), help="Output file; stdout when omitted."),
            click.option("--seed", type=int, help="Seed for randomized checks.")]):
        command = option(command)
    return command


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON experiment configuration.")
@click.option("-v", "--verbose", count=True, help="Increase logging verbosity (-v info, -vv debug).")
@click.version_option(VERSION)
@click.pass_context
def cli(ctx: click.Context, config_path, verbose):
    """Rates of shift-superposition perturbations in one-dimensional optimal transport."""
    level = LEVELS[min(verbose, 2)] if verbose else get_settings().log_level
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    ctx.obj = {"config_path": config_path}


@cli.command("rate-scan")
@click.option("--measure", "measure_path", type=click.Path(dir_okay=False), help="JSON measure spec.")
@click.option("--p", "p", type=float, multiple=True, help="Transport exponent; repeatable.")
@click.option("--h-min", type=float, help="Smallest scale.")
@click.option("--h-max", type=float, help="Largest scale.")
@click.option("--h-count", type=int, help="Number of scales; ratio 1/2 steps when omitted.")
@common_options
@click.pass_context
@handle_errors
def rate_scan_command(ctx, **options):
    """Scan W_p(m, m_h) / h over a geometric grid of scales."""
    config = build_config(ctx, "rate-scan", **options)
    if not config.measure_path:
        raise click.UsageError("A measure spec is required (--measure or measure_path in --config)")

    measure = load_measure(config.measure_path)
    hs = geometric_grid(config.h_min, config.h_max, config.h_count)

    rows = []
    for p in config.p:
        rows += [sample.to_row() for sample in rate_scan(measure, hs, p)]
    emit_csv(config, pd.DataFrame(rows, columns=["h", "p", "distance", "quotient", "trunc_bound"]))


@cli.command("cantor")
@cantor_options
@click.option("--p", "p", type=float, multiple=True, help="Transport exponent; repeatable.")
@common_options
@click.pass_context
@handle_errors
def cantor_command(ctx, **options):
    """Scan the rate of a Cantor approximant along its critical scales."""
    config = build_config(ctx, "cantor", **options)
    spec = config.cantor_spec()

    rows = []
    for p in config.p:
        for n, regime, sample in cantor_scan(spec, range(config.n_min, config.n_max + 1), p):
            rows.append({"n": n, "regime": regime, **sample.to_row()})
    columns = ["n", "regime", "h", "p", "distance", "quotient", "trunc_bound"]
    emit_csv(config, pd.DataFrame(rows, columns=columns))


@cli.command("porosity")
@click.option("--set", "set_path", type=click.Path(dir_okay=False), help="JSON interval set; a Cantor generation otherwise.")
@click.option("--scales", type=float, multiple=True, help="Porosity scale; repeatable, strictly decreasing.")
@click.option("--threshold", type=float, help="Threshold of the verdict.")
@click.option("--h-min", type=float, help="Smallest default scale for an interval set.")
@click.option("--h-max", type=float, help="Largest default scale for an interval set.")
@click.option("--h-count", type=int, help="Number of default scales for an interval set.")
@cantor_options
@common_options
@click.pass_context
@handle_errors
def porosity_command(ctx, **options):
    """Porosity profile of an interval set or a Cantor generation."""
    config = build_config(ctx, "porosity", **options)

    if config.set_path:
        data, lines = FileUtils.read_json(config.set_path)
        A = IntervalSet.from_dict(data, lines)
        scales = config.scales or geometric_grid(config.h_min, config.h_max, config.h_count)
    else:
        spec = config.cantor_spec()
        A = generation(spec, config.depth)
        scales = config.scales or matched_scales(spec, range(config.n_min, config.n_max + 1))

    profile = porosity_profile(A, scales, cross_check=True, seed=config.seed)
    verdict = class_A_diagnostic(profile, config.threshold)
    frame = pd.DataFrame({"s": profile.scales, "tau": profile.taus})
    emit_csv(config, frame, trailer=[f"verdict: {verdict}"])


@cli.command("verify")
@click.option("--suite", "suites", multiple=True, help="Criterion to run; repeatable. All when omitted.")
@click.option("--report", "out", type=click.Path(dir_okay=False), help="JSON report file; stdout when omitted.")
@click.option("--seed", type=int, help="Seed for randomized checks.")
@click.pass_context
@handle_errors
def verify_command(ctx, **options):
    """Run the acceptance suite; exit 0 only if every criterion passes."""
    config = build_config(ctx, "verify", **options)
    results = run_suite(config.suites, seed=config.seed)
    report = {**suite_report(results, seed=config.seed), "manifest": manifest(config)}

    if config.out:
        FileUtils.write_json(config.out, report)
    else:
        click.echo(json.dumps(report, indent=2, sort_keys=True))

    for result in results:
        click.echo(f"{'PASS' if result.passed else 'FAIL'} {result.name} (margin {result.margin:.3g})", err=True)
    if not report["passed"]:
        raise AcceptanceFailure(report["failed"])
