"""Click commands for running laboratory experiments.

Available as ``flask lab <command>`` through ``register_cli`` and as a
standalone program through ``cli_main``. Reports go to stdout (and to
``--output``); logs go to stderr.
"""

import json
import sys
from functools import wraps
from pathlib import Path

import click
from pydantic import ValidationError

from app.helper import logger as app_logger
from app.helper.error_handler import EXIT_GATE_FAILURE, EXIT_OK, EXIT_USAGE, LabError, UsageError
from app.helper.report_writer import write_report, write_samples_csv, write_trail_csv, write_trial_log_csv
from app.schema.experiment_schema import ExperimentConfig
from app.services import experiment_service, postulate_service
from config import Config


def _load_config(config_path, **overrides) -> ExperimentConfig:
    """Config file values, overridden by every flag that was given."""
    data = {}
    if config_path:
        try:
            data = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"Cannot read config {config_path}: {e}", message="Invalid config")
    data.update({key: value for key, value in overrides.items() if value not in (None, ())})
    return ExperimentConfig(**data)


def _parse_angles(text):
    if text is None or text == "canonical":
        return text
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise click.BadParameter("use 'canonical' or four comma-separated radians", param_hint="--angles")


def _emit(report, output, passed: bool = True):
    click.echo(write_report(report, output), nl=False)
    click.get_current_context().exit(EXIT_OK if passed else EXIT_GATE_FAILURE)


def lab_command(f):
    """Map laboratory and validation errors to exit codes with a message on stderr."""

    @wraps(f)
    def decorated(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ValidationError as e:
            click.echo(f"Error: invalid experiment config\n{e}", err=True)
            click.get_current_context().exit(EXIT_USAGE)
        except LabError as e:
            app_logger.json_logger.warning(f"{e.message}: {e.error}")
            click.echo(f"Error: {e.message}: {e.error}", err=True)
            click.get_current_context().exit(e.exit_code)

    return decorated


def experiment_options(f):
    f = click.option("--config", "config_path", type=click.Path(), help="ExperimentConfig JSON file.")(f)
    f = click.option("--n", type=int, help="Samples (per setting).")(f)
    f = click.option("--seed", type=click.IntRange(min=0), help=f"Seed (default {Config.SEED}).")(f)
    f = click.option("--partitions", type=int, help="Independent sampling streams.")(f)
    f = click.option("--output", type=click.Path(), help="Write the JSON report here too.")(f)
    return f


def model_options(f):
    f = click.option("--model", help="qubit | singlet | oscillator | path/to/model.json")(f)
    f = click.option("--levels", type=int, help="Oscillator truncation.")(f)
    f = click.option("--state", help="Named state or label such as 'sz=1'.")(f)
    return f


@click.group("lab")
@click.option("--log-level", default=None, help="Override LOG_LEVEL.")
def lab(log_level):
    """Operator-algebra laboratory experiments."""
    app_logger.init_logger(level=log_level or Config.LOG_LEVEL)


@lab.command("epr")
@experiment_options
@lab_command
def epr(config_path, n, seed, partitions, output):
    """EPR–Bohm anticorrelation on the singlet."""
    cfg = _load_config(config_path, model="singlet", n=n, seed=seed, partitions=partitions, output=output)
    report = experiment_service.run_epr_bohm(cfg.n, cfg.seed, partitions=cfg.partitions)
    _emit(report, cfg.output, report.passed)


@lab.command("chsh")
@experiment_options
@click.option("--angles", help="'canonical' or a,a',b,b' in radians.")
@lab_command
def chsh(config_path, n, seed, partitions, output, angles):
    """CHSH combination from four disjoint relevant sets."""
    cfg = _load_config(
        config_path,
        model="singlet",
        n=n,
        seed=seed,
        partitions=partitions,
        output=output,
        angles=_parse_angles(angles),
    )
    report = experiment_service.run_chsh(cfg.angles, cfg.n, cfg.seed, partitions=cfg.partitions)
    _emit(report, cfg.output, report.passed)


@lab.command("average")
@experiment_options
@model_options
@click.option("--observable", help="Observable expression such as '0.5*sx+sz'.")
@click.option("--trail-csv", type=click.Path(), help="Write the doubling trail as CSV.")
@click.option("--samples-csv", type=click.Path(), help="Write trial_id,observable,value rows.")
@click.option("--trial-log-csv", type=click.Path(), help="Write trial_id,context,generator,value rows.")
@lab_command
def average(
    config_path, n, seed, partitions, output, model, levels, state, observable, trail_csv, samples_csv, trial_log_csv
):
    """Empirical mean of a relevant set against the quantum average."""
    cfg = _load_config(
        config_path,
        n=n,
        seed=seed,
        partitions=partitions,
        output=output,
        model=model,
        levels=levels,
        state=state,
        observable=observable,
    )
    samples = [] if samples_csv else None
    coordinates = [] if trial_log_csv else None
    report = experiment_service.run_average(cfg, samples_out=samples, trial_log_out=coordinates)
    if trail_csv:
        write_trail_csv(trail_csv, report.trail)
    if samples_csv:
        write_samples_csv(samples_csv, report.observable, samples)
    if trial_log_csv:
        write_trial_log_csv(trial_log_csv, coordinates)
    _emit(report, cfg.output, report.passed)


@lab.command("gns")
@experiment_options
@model_options
@click.option("--pairs", type=int, default=50, show_default=True, help="Random pairs for the checks.")
@lab_command
def gns(config_path, n, seed, partitions, output, model, levels, state, pairs):
    """GNS representation of a named state, with verification."""
    cfg = _load_config(
        config_path, n=n, seed=seed, partitions=partitions, output=output, model=model, levels=levels, state=state
    )
    report = experiment_service.run_gns(cfg, pairs=pairs)
    _emit(report, cfg.output, report.passed)


@lab.command("inspect-context")
@click.option("--model", default="qubit", show_default=True)
@click.option("--levels", type=int)
@click.option("--observable", "observables", multiple=True, required=True, help="Generator; repeatable.")
@click.option("--output", type=click.Path())
@lab_command
def inspect_context(model, levels, observables, output):
    """Joint eigenbasis and generator values of the context of commuting observables."""
    report = experiment_service.inspect_context(model, list(observables), levels)
    _emit(report, output)


@lab.command("postulates")
@click.option("--dim", "dims", type=int, multiple=True, help="Matrix size; repeatable (default 2..8).")
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--output", type=click.Path())
@lab_command
def postulates(dims, trials, seed, output):
    """Randomized invariant suite."""
    cfg = ExperimentConfig(dims=list(dims) or None, trials=trials, seed=seed if seed is not None else Config.SEED)
    report = postulate_service.run_postulate_suite(
        dims=cfg.dims or postulate_service.DEFAULT_DIMS, trials=cfg.trials, seed=cfg.seed
    )
    _emit(report, output, report.passed)


def cli_main(argv=None) -> int:
    """Run the laboratory CLI and return its exit code (0 pass, 1 gate failure, 2 usage)."""
    try:
        result = lab.main(args=argv, prog_name="operator-lab", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE if isinstance(e, click.UsageError) else e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_GATE_FAILURE
    return result if isinstance(result, int) else EXIT_OK


def register_cli(app):
    """Register all CLI commands with the Flask app."""
    app.cli.add_command(lab)


if __name__ == "__main__":
    sys.exit(cli_main())
