"""Command-line interface for lowlying-lab.

Entry point: `lowlying-lab [GLOBAL OPTIONS] COMMAND [OPTIONS]`.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Callable
from pathlib import Path

import click
from click.core import ParameterSource

from .config import (
    FAMILIES,
    FORMATS,
    GROUPS,
    KINDS,
    MAX_SEED,
    MODES,
    STATS,
    SUITES,
    THEOREMS,
)

# Numerical modules are imported lazily to keep startup and --help quick.

PREFIX = "[lowlying-lab]"
_RENAMED = {"fmt": "format"}
_NOT_CONFIG = {"config_path", "debug"}


def _eprint(msg: str) -> None:
    """Print to stderr.

    Args:
        msg: Message to print.
    """
    print(msg, file=sys.stderr)


def _explicit(ctx: click.Context) -> dict:
    """Parameters of ``ctx`` the user passed on the command line."""
    out = {}
    for name, value in ctx.params.items():
        if name in _NOT_CONFIG:
            continue
        if ctx.get_parameter_source(name) is ParameterSource.COMMANDLINE:
            out[_RENAMED.get(name, name)] = value
    return out


def _configure_logging(debug: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _run(ctx: click.Context, command: str, build: Callable) -> None:
    """Resolve the config, build the report rows, write the report, exit."""
    from .config import ConfigManager
    from .report import Report

    flags = {**ctx.obj["flags"], **_explicit(ctx)}
    try:
        config = ConfigManager().resolve(command, ctx.obj["config_path"], flags)
    except OSError as exc:
        _eprint(f"{PREFIX} Cannot read config file: {exc}")
        raise SystemExit(2) from exc
    except (KeyError, ValueError) as exc:
        message = exc.args[0] if exc.args else exc
        raise click.UsageError(str(message)) from exc

    try:
        rows = build(config)
    except (KeyError, ValueError) as exc:
        _eprint(f"{PREFIX} {command}: {exc}")
        raise SystemExit(2) from exc

    report = Report(command, config.to_dict(), rows)
    if config.output:
        path = report.write(Path(config.output), config.format)
        _eprint(f"{PREFIX} Wrote {config.format} report to: {path}")
    else:
        click.echo(report.render(config.format), nl=False)

    for row in report.results:
        if row.predicted is not None and row.passed is not None:
            verdict = "PASS" if row.passed else "FAIL"
            se = f" +- {row.stderr:.3g}" if row.stderr is not None else ""
            _eprint(
                f"{PREFIX} {row.name}: {row.value:.6g}{se} "
                f"vs {row.predicted:.6g} {verdict}"
            )
    failures = report.failures
    checked = sum(1 for row in report.results if row.passed is not None)
    _eprint(f"{PREFIX} {command}: {checked} checks, {len(failures)} failed")
    for row in failures:
        _eprint(f"{PREFIX} FAILED {row.name}")
    if not report.passed:
        raise SystemExit(1)


def _family_option(func):
    return click.option(
        "--family",
        type=click.Choice(FAMILIES),
        default="fejer",
        show_default=True,
        help="Test function family.",
    )(func)


def _nu_option(func):
    return click.option(
        "--nu",
        type=float,
        default=0.5,
        show_default=True,
        help="Support half-width of the Fourier transform.",
    )(func)


def _kappa_option(func):
    return click.option(
        "--kappa", type=int, default=12, show_default=True, help="Even weight."
    )(func)


def _q_option(func):
    return click.option(
        "--q", type=int, default=101, show_default=True, help="Prime level."
    )(func)


def _tol_option(func):
    return click.option(
        "--tol",
        type=float,
        default=1e-8,
        show_default=True,
        help="Truncation budget of every Delta-symbol.",
    )(func)


def _theta_option(func):
    return click.option(
        "--theta",
        type=float,
        default=7.0 / 64.0,
        show_default=True,
        help="Exponent towards Ramanujan-Petersson, in [0, 7/64].",
    )(func)


def _run_options(func):
    """--seed and --workers, also accepted after the command name."""
    func = click.option(
        "--workers",
        type=click.IntRange(min=1),
        help="Worker processes; overrides the group option.",
    )(func)
    return click.option(
        "--seed",
        type=click.IntRange(0, MAX_SEED),
        help="Seed of every random draw; overrides the group option.",
    )(func)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Config file (JSON object or key = value lines), applied before flags.",
)
@click.option(
    "--seed",
    type=click.IntRange(0, MAX_SEED),
    default=0,
    show_default=True,
    help="Seed of every random draw.",
)
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Worker processes for Monte Carlo (else LOWLYING_LAB_WORKERS).",
)
@click.option(
    "--output",
    type=click.Path(dir_okay=False),
    help="Write the report here instead of stdout.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(FORMATS),
    default="json",
    show_default=True,
    help="Report format.",
)
@click.option("--debug", is_flag=True, help="Enable debug logging.")
@click.version_option(package_name="lowlying-lab")
@click.pass_context
def main(
    ctx: click.Context,
    config_path: Path | None,
    seed: int,
    workers: int,
    output: str | None,
    fmt: str,
    debug: bool,
) -> None:
    """Verification lab for low-lying zeros of symmetric power L-functions.

    Every command writes a JSON or CSV report and exits with status 1 when a
    check fails.
    """
    _configure_logging(debug)
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["flags"] = _explicit(ctx)


@main.command()
@click.option(
    "--theorem",
    type=click.Choice(THEOREMS),
    default="all",
    show_default=True,
    help="Which table of predictions to print.",
)
@_family_option
@_nu_option
@_kappa_option
@click.option("--m", type=int, default=4, show_default=True, help="Moment order.")
@_theta_option
@_run_options
@click.pass_context
def predict(ctx: click.Context, **_: object) -> None:
    """Tables of density predictions, root numbers and support thresholds."""
    from .experiments import MOMENT_NOTE, predict_rows

    if ctx.params["theorem"] in ("F", "all"):
        _eprint(f"{PREFIX} {MOMENT_NOTE}")
    _run(ctx, "predict", predict_rows)


@main.command("rmt-sim")
@click.option(
    "--group",
    type=click.Choice(GROUPS),
    default="sp",
    show_default=True,
    help="Symmetry class of the Haar ensemble.",
)
@click.option(
    "--size", type=int, default=100, show_default=True, help="Rank parameter N."
)
@click.option(
    "--samples", type=int, default=10_000, show_default=True, help="Matrices drawn."
)
@_family_option
@_nu_option
@click.option(
    "--stat",
    type=click.Choice(STATS),
    default="d1",
    show_default=True,
    help="Statistic to estimate.",
)
@_run_options
@click.pass_context
def rmt_sim(ctx: click.Context, **_: object) -> None:
    """Monte Carlo over Haar matrices, empirical against predicted."""
    from .experiments import rmt_rows

    _run(ctx, "rmt-sim", rmt_rows)


@main.command()
@click.option(
    "--kappa", type=int, default=12, show_default=True, help="Weight, 10 or 12."
)
@click.option(
    "--n-max", type=int, default=20, show_default=True, help="Grid size (<= 30)."
)
@_tol_option
@_run_options
@click.pass_context
def petersson(ctx: click.Context, **_: object) -> None:
    """Level-one Petersson checks: vanishing at weight 10, tau ratios at 12."""
    from .experiments import petersson_rows

    _run(ctx, "petersson", petersson_rows)


@main.command()
@click.option("--m", type=int, default=4, show_default=True, help="First frequency.")
@click.option("--n", type=int, default=1, show_default=True, help="Second frequency.")
@click.option("--c", type=int, default=9, show_default=True, help="Modulus.")
@_run_options
@click.pass_context
def kloosterman(ctx: click.Context, **_: object) -> None:
    """One Kloosterman sum with its identity checks."""
    from .experiments import kloosterman_rows

    _run(ctx, "kloosterman", kloosterman_rows)


@main.command()
@_q_option
@_kappa_option
@click.option(
    "--n-max", type=int, default=20, show_default=True, help="Grid 1 <= m, n <= N."
)
@_tol_option
@_run_options
@click.pass_context
def delta(ctx: click.Context, **_: object) -> None:
    """Grid of Delta-symbols Delta_q(m, n)."""
    from .experiments import delta_rows

    _run(ctx, "delta", delta_rows)


@main.command("prime-sums")
@_q_option
@_kappa_option
@click.option("--r", type=int, default=2, show_default=True, help="Symmetric power.")
@_family_option
@_nu_option
@click.option(
    "--mode",
    type=click.Choice(MODES),
    default="harmonic_average",
    show_default=True,
    help="Part of the averaged prime sums to evaluate.",
)
@_tol_option
@_theta_option
@_run_options
@click.pass_context
def prime_sums(ctx: click.Context, **_: object) -> None:
    """Averaged prime sums of the explicit formula and their envelopes."""
    from .experiments import prime_sum_rows

    _run(ctx, "prime-sums", prime_sum_rows)


@main.command()
@click.option(
    "--suite",
    type=click.Choice(SUITES),
    default="all",
    show_default=True,
    help="Suite to run.",
)
@click.option(
    "--size", type=int, default=100, show_default=True, help="Rank parameter N."
)
@click.option(
    "--samples", type=int, default=10_000, show_default=True, help="Matrices drawn."
)
@_family_option
@_nu_option
@_tol_option
@_run_options
@click.pass_context
def verify(ctx: click.Context, **_: object) -> None:
    """Run the property suites; one pass/fail row per invariant."""
    from .performance import PerformanceMonitor
    from .suites import run_suites

    monitor = PerformanceMonitor()

    def build(config):
        rows = run_suites(config, monitor)
        logging.getLogger(__name__).info("timings\n%s", monitor.get_summary())
        return rows

    _run(ctx, "verify", build)


@main.command()
@click.option(
    "--kind",
    type=click.Choice(KINDS),
    default="picard",
    show_default=True,
    help="Which bound to monitor.",
)
@_q_option
@_kappa_option
@click.option(
    "--x", type=float, default=100.0, show_default=True, help="Extra Picard X."
)
@_family_option
@_nu_option
@_theta_option
@_tol_option
@_run_options
@click.pass_context
def monitor(ctx: click.Context, **_: object) -> None:
    """Record monitored bounds (ratios only, no constants asserted)."""
    from .experiments import monitor_rows

    _run(ctx, "monitor", monitor_rows)


if __name__ == "__main__":  # pragma: no cover
    main()
