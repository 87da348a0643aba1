"""Command line interface.

Four subcommands: ``assess`` (per-region coverage table), ``aggregate``
(group summaries plus boxplot data), ``correlate`` (coverage vs external
metrics), and ``synth`` (seeded synthetic datasets).

Exit codes: 0 success, 1 command-line usage error, 2 data error (bad
manifest, missing or malformed raster, metrics that do not join, ...).
Reports are rendered completely in memory before anything is written,
so a failing run never leaves partial output on stdout.  Every run logs
dataset name, filter, thresholds, region count, and wall time to stderr.
"""

from __future__ import annotations

import io
import json
import logging
import sys
import time
from pathlib import Path

import click

from . import report
from .coverage import AssessmentConfig
from .errors import BadFilterSpec, SclCoverError
from .ingest import load_manifest
from .pipeline import assess_dataset
from .scl import parse_filter, render_filter
from .stats import correlation_report, load_metrics_csv
from .synth import DEFAULT_CADENCE_DAYS, DEFAULT_START_DATE, build_dataset

logger = logging.getLogger("sclcover")

#: Threshold presets: the 70% regime and the 50% regime.
PRESETS = {"ai4eo": 0.7, "landcovernet": 0.5}


def _parse_filter_opt(spec: str):
    try:
        return parse_filter(spec)
    except BadFilterSpec as exc:
        raise click.BadParameter(str(exc), param_hint="'--filter'") from None


def _resolve_config(filter_spec, sc_thresh, step_thresh, tc_thresh, preset) -> AssessmentConfig:
    """Fill unset thresholds from the preset; step falls back to tc."""
    base = PRESETS[preset]
    return AssessmentConfig(
        label_filter=_parse_filter_opt(filter_spec),
        sc_thresh=base if sc_thresh is None else sc_thresh,
        step_thresh=step_thresh,
        tc_thresh=base if tc_thresh is None else tc_thresh,
    )


def _assessment_options(fn):
    options = [
        click.option(
            "--manifest", "manifest_path", required=True,
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="Dataset manifest JSON.",
        ),
        click.option(
            "--filter", "filter_spec", default="all-but-cloud", show_default=True,
            help="Clean-label set: all-but-cloud, veg-non-veg, or codes like '4,5'.",
        ),
        click.option(
            "--sc-thresh", type=click.FloatRange(0, 1), default=None,
            help="Spatial coverage threshold for the SCA label [default: preset].",
        ),
        click.option(
            "--step-thresh", type=click.FloatRange(0, 1), default=None,
            help="Per-timestep coverage cut inside TC [default: --tc-thresh].",
        ),
        click.option(
            "--tc-thresh", type=click.FloatRange(0, 1), default=None,
            help="Temporal coverage threshold for the TCA label [default: preset].",
        ),
        click.option(
            "--preset", type=click.Choice(sorted(PRESETS)), default="ai4eo",
            show_default=True,
            help="Threshold preset: ai4eo=0.7, landcovernet=0.5.",
        ),
        click.option(
            "--mode", type=click.Choice(["strict", "lax"]), default="strict",
            show_default=True,
            help="strict rejects label codes >11; lax counts them as unclean.",
        ),
        click.option(
            "--parallelism", type=click.IntRange(0), default=0, show_default=True,
            help="Worker processes; 0 = one per CPU, 1 = in-process.",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _deliver(text: str, out: Path | None) -> None:
    """Write an already-rendered report to a file or stdout, atomically
    from the caller's point of view (nothing was printed before this)."""
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8", newline="")


def _log_run(dataset_name, config, mode, n_regions, wall_s) -> None:
    logger.info(
        "dataset=%s filter=%s sc_thresh=%g step_thresh=%g tc_thresh=%g "
        "mode=%s regions=%d wall_s=%.3f",
        dataset_name, render_filter(config.label_filter), config.sc_thresh,
        config.step_thresh, config.tc_thresh, mode, n_regions, wall_s,
    )


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="sclcover", prog_name="sclcover")
def cli() -> None:
    """Clean spatio-temporal coverage assessment of SCL time series."""


@cli.command("assess")
@_assessment_options
@click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Output file [default: stdout].",
)
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
    show_default=True, help="Output format.",
)
def cmd_assess(manifest_path, filter_spec, sc_thresh, step_thresh, tc_thresh,
               preset, mode, parallelism, out, fmt):
    """Per-region coverage table: sc, tc, and high/low labels."""
    config = _resolve_config(filter_spec, sc_thresh, step_thresh, tc_thresh, preset)
    started = time.perf_counter()
    manifest = load_manifest(manifest_path)
    assessments = assess_dataset(manifest, config, mode=mode, parallelism=parallelism)
    buf = io.StringIO()
    if fmt == "csv":
        report.write_assessments_csv(assessments, manifest.groups(), buf)
    else:
        report.write_assessments_json(assessments, manifest.groups(), buf)
    _deliver(buf.getvalue(), out)
    _log_run(manifest.dataset_name, config, mode, len(assessments),
             time.perf_counter() - started)


@cli.command("aggregate")
@_assessment_options
@click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Summary output file [default: stdout].",
)
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
    show_default=True, help="Summary output format.",
)
@click.option(
    "--plot-out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Also write per-group boxplot data (JSON) to this file.",
)
def cmd_aggregate(manifest_path, filter_spec, sc_thresh, step_thresh, tc_thresh,
                  preset, mode, parallelism, out, fmt, plot_out):
    """Group summaries: distribution stats and low-label tallies."""
    config = _resolve_config(filter_spec, sc_thresh, step_thresh, tc_thresh, preset)
    started = time.perf_counter()
    manifest = load_manifest(manifest_path)
    assessments = assess_dataset(manifest, config, mode=mode, parallelism=parallelism)
    groups = manifest.groups()
    summaries = report.aggregate(assessments, groups)
    buf = io.StringIO()
    if fmt == "csv":
        report.write_summaries_csv(summaries, buf)
    else:
        report.write_summaries_json(summaries, buf)
    plot_buf = None
    if plot_out is not None:
        plot_buf = io.StringIO()
        report.write_plot_json(assessments, groups, plot_buf)
    _deliver(buf.getvalue(), out)
    if plot_out is not None:
        plot_out.write_text(plot_buf.getvalue(), encoding="utf-8", newline="")
    _log_run(manifest.dataset_name, config, mode, len(assessments),
             time.perf_counter() - started)


@cli.command("correlate")
@_assessment_options
@click.option(
    "--metrics", "metrics_path", required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Metrics CSV with columns region_id,metric_name,value.",
)
@click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Output file [default: stdout].",
)
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="json",
    show_default=True, help="Output format.",
)
def cmd_correlate(manifest_path, filter_spec, sc_thresh, step_thresh, tc_thresh,
                  preset, mode, parallelism, metrics_path, out, fmt):
    """Correlate external per-region metrics with coverage."""
    config = _resolve_config(filter_spec, sc_thresh, step_thresh, tc_thresh, preset)
    started = time.perf_counter()
    manifest = load_manifest(manifest_path)
    assessments = assess_dataset(manifest, config, mode=mode, parallelism=parallelism)
    metrics = load_metrics_csv(metrics_path)
    doc = correlation_report(assessments, metrics)
    if fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = _correlation_csv(doc)
    _deliver(text, out)
    _log_run(manifest.dataset_name, config, mode, len(assessments),
             time.perf_counter() - started)


def _correlation_csv(doc: dict) -> str:
    """The correlation report as one wide row per metric."""
    def fmt(value):
        return "" if value is None else f"{value:.6f}"

    lines = [
        "metric,n,r_sc,r_sc_x100,r_tc,r_tc_x100,"
        "sca_high_n,sca_high_mean,sca_low_n,sca_low_mean,"
        "tca_high_n,tca_high_mean,tca_low_n,tca_low_mean"
    ]
    for name in sorted(doc["metrics"]):
        m = doc["metrics"][name]
        pearson_sc, pearson_tc = m["pearson"]["sc"], m["pearson"]["tc"]
        sca, tca = m["splits"]["sca"], m["splits"]["tca"]
        lines.append(
            ",".join(
                [
                    name,
                    str(m["n"]),
                    fmt(pearson_sc["r"]), fmt(pearson_sc["r_x100"]),
                    fmt(pearson_tc["r"]), fmt(pearson_tc["r_x100"]),
                    str(sca["high"]["n"]), fmt(sca["high"]["mean"]),
                    str(sca["low"]["n"]), fmt(sca["low"]["mean"]),
                    str(tca["high"]["n"]), fmt(tca["high"]["mean"]),
                    str(tca["low"]["n"]), fmt(tca["low"]["mean"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _validate_date(ctx, param, value):
    import datetime as dt

    try:
        dt.date.fromisoformat(value)
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a YYYY-MM-DD date") from None
    return value


def _validate_groups(ctx, param, value):
    if value is None:
        return None
    names = [g.strip() for g in value.split(",")]
    if not all(names):
        raise click.BadParameter("group names must be non-empty")
    return names


@cli.command("synth")
@click.option(
    "--out", "out_dir", required=True,
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory to write rasters and manifest.json into.",
)
@click.option("--regions", "n_regions", type=click.IntRange(1), default=10,
              show_default=True, help="Number of regions.")
@click.option("--width", type=click.IntRange(1), default=64, show_default=True)
@click.option("--height", type=click.IntRange(1), default=64, show_default=True)
@click.option("--steps", "n_steps", type=click.IntRange(1), default=12,
              show_default=True, help="Timesteps per region.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Master seed; region k uses sub-stream k.")
@click.option("--clean-prob", type=click.FloatRange(0, 1), default=0.7,
              show_default=True, help="Per-pixel probability of a clean label.")
@click.option("--filter", "filter_spec", default="all-but-cloud", show_default=True,
              help="Label set clean pixels draw from; unclean draw from its complement.")
@click.option("--groups", callback=_validate_groups, default=None,
              help="Comma-separated group names, assigned round-robin.")
@click.option("--dataset-name", default="synthetic", show_default=True)
@click.option("--start-date", callback=_validate_date, default=DEFAULT_START_DATE,
              show_default=True)
@click.option("--cadence-days", type=click.IntRange(0), default=DEFAULT_CADENCE_DAYS,
              show_default=True, help="Days between consecutive timesteps.")
@click.option("--parallelism", type=click.IntRange(0), default=1, show_default=True,
              help="Worker processes; 0 = one per CPU, 1 = in-process.")
def cmd_synth(out_dir, n_regions, width, height, n_steps, seed, clean_prob,
              filter_spec, groups, dataset_name, start_date, cadence_days,
              parallelism):
    """Write a seeded synthetic dataset (byte-reproducible)."""
    label_filter = _parse_filter_opt(filter_spec)
    started = time.perf_counter()
    try:
        build_dataset(
            out_dir,
            n_regions=n_regions,
            width=width,
            height=height,
            n_steps=n_steps,
            seed=seed,
            clean_prob=clean_prob,
            label_filter=label_filter,
            groups=groups,
            dataset_name=dataset_name,
            start_date=start_date,
            cadence_days=cadence_days,
            parallelism=parallelism,
        )
    except ValueError as exc:
        # e.g. clean pixels with an empty filter: a bad flag combination
        raise click.UsageError(str(exc)) from None
    click.echo(str(out_dir / "manifest.json"))
    logger.info(
        "dataset=%s filter=%s regions=%d size=%dx%dx%d seed=%d clean_prob=%g "
        "wall_s=%.3f",
        dataset_name, render_filter(label_filter), n_regions, width, height,
        n_steps, seed, clean_prob, time.perf_counter() - started,
    )


def main(argv=None) -> int:
    """Run the CLI programmatically and return its exit code."""
    if not logging.getLogger().handlers:
        logging.basicConfig(
            level=logging.INFO, format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except SclCoverError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entry() -> None:
    """Console-script entry point."""
    sys.exit(main())
