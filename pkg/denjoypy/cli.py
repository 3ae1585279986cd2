"""
Command-line front end.

Every subcommand writes exactly one report (CSV or JSON) to standard output or to ``--out``;
diagnostics and progress go to standard error. ``main`` returns the exit code: 0 on success,
2 on usage errors (bad flags, spec strings or config files), 1 when a computation fails and 3 when
``verify`` finds a failed cross-check.
"""
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import click
import numpy as np
import pandas as pd

from denjoypy import __version__
from denjoypy.classes.reports import BoundSeries
from denjoypy.exceptions.exceptions import ConfigFileError, SpecParsingError
from denjoypy.oracle.verify import run_verification
from denjoypy.parser.constants import (
    ALPHA_GRAMMAR,
    BOUND_METHODS,
    DEFAULT_TOLERANCE,
    MODEL_GRAMMAR,
    OFFSET_POLICIES,
    ORDER_STATISTICS,
    OUTPUT_FORMATS,
    SERIES_COLUMNS,
)
from denjoypy.parser.file_loaders import load_config
from denjoypy.parser.parse_specs import (
    parse_alpha,
    parse_index_list,
    parse_methods,
    parse_model,
    parse_number_list,
    parse_window,
)
from denjoypy.shared.intervals import format_endpoint
from denjoypy.shared.utilities import IndexWindow, as_rational, geometric_grid
from denjoypy.solvers.bounds import lower_bound_series
from denjoypy.solvers.continued_fractions import convergents, diophantine_class_estimate
from denjoypy.solvers.dimension import (
    auto_window,
    build_dimension_report,
    liminf_report,
    reference_constants,
)
from denjoypy.solvers.gap_lengths import denjoy_class_estimate, normalization_check
from denjoypy.solvers.threegap import (
    analytic_gap_structure,
    forward_gap_structure,
    symmetric_gap_structure,
    threshold_check,
)
from denjoypy.solvers.upper import upper_corollary_check, upper_cover_series

__all__ = ["cli", "main", "run", "RunConfig"]


@dataclass
class RunConfig:
    """
    The resolved configuration of one command-line run, echoed into JSON reports so that a report
    records how it was produced.
    """

    command: str
    alpha: Optional[str] = None
    model: Optional[str] = None
    beta: List[str] = field(default_factory=list)
    n: Optional[str] = None
    L: int = 0
    method: List[str] = field(default_factory=list)
    offsets: Optional[str] = None
    statistic: Optional[str] = None
    format: str = OUTPUT_FORMATS.CSV.value
    out: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if self.L < 0:
            raise click.BadParameter(f"L must be non-negative, found {self.L}", param_hint="--L")
        for beta in self.beta:
            if as_rational(beta) <= 0:
                raise click.BadParameter(
                    f"beta must be positive, found {beta}", param_hint="--beta"
                )

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None and k != "out"}


# ---------------------------------------------------------------------------- option helpers

# config keys that name a flag rather than its parameter
CONFIG_ALIASES = {"format": "output_format"}


def _load_config_file(ctx: click.Context, param: click.Parameter, value: Optional[str]):
    if value is None:
        return None
    try:
        values = load_config(value)
    except (OSError, ConfigFileError) as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)

    values = {CONFIG_ALIASES.get(key, key): v for key, v in values.items()}
    ctx.default_map = {**(ctx.default_map or {}), **values}
    return value


def _check_with(parser):
    """Option callback that validates a spec string with ``parser`` and keeps the string."""

    def callback(ctx, param, value):
        if value is None:
            return None
        try:
            parser(value)
        except ValueError as e:
            raise click.BadParameter(str(e), ctx=ctx, param=param)
        return value

    return callback


config_option = click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    is_eager=True,
    expose_value=False,
    callback=_load_config_file,
    help="File of key=value lines mirroring the flags; flags given on the command line win.",
)
alpha_option = click.option(
    "--alpha",
    default="golden",
    show_default=True,
    callback=_check_with(parse_alpha),
    help=ALPHA_GRAMMAR,
)
model_option = click.option("--model", default=None, help=MODEL_GRAMMAR)
delta_option = click.option(
    "--delta",
    default="1/2",
    show_default=True,
    help="Class of the classical model used when --model is not given.",
)
window_option = click.option(
    "--n",
    "n",
    default=None,
    callback=_check_with(parse_window),
    help="Convergent indices A..B; automatic when omitted.",
)
eps_option = click.option(
    "--eps",
    default="0.05",
    show_default=True,
    callback=_check_with(parse_number_list),
    help="Comma list of eps for the tail-exponent check.",
)
format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(OUTPUT_FORMATS.values()),
    default=OUTPUT_FORMATS.CSV.value,
    show_default=True,
)
out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write the report to this file instead of standard output.",
)
jobs_option = click.option("--n-jobs", "n_jobs", type=int, default=1, show_default=True)
verbose_option = click.option("--verbose", is_flag=True, help="Progress on standard error.")


def _model_spec(model: Optional[str], delta: str) -> str:
    return model if model is not None else f"classical:{delta}"


def _build_model(spec: str):
    try:
        return parse_model(spec, base_dir=os.getcwd())
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--model")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, IndexWindow):
        return str(obj)
    return str(obj)


def _csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False)


def _emit(text: str, out: Optional[str]):
    if out is None:
        click.echo(text, nl=False)
        return
    with click.open_file(out, "w") as file:
        file.write(text)
    click.echo(f"Report written to {out}", err=True)


# ---------------------------------------------------------------------------- commands


@click.group()
@click.version_option(version=__version__, prog_name="denjoy")
def cli():
    """
    Finite-stage bounds on the Hausdorff measure and dimension of Denjoy minimal sets.
    """


@cli.command()
@config_option
@alpha_option
@click.option(
    "--n",
    "n",
    default="1..10",
    show_default=True,
    callback=_check_with(parse_window),
    help="Convergent indices, A..B.",
)
@format_option
@out_option
def cf(alpha: str, n: str, output_format: str, out: Optional[str]) -> int:
    """Partial quotients, convergents, ||q_n alpha|| and the Diophantine class estimate."""
    rotation = parse_alpha(alpha)
    window = parse_window(n)
    config = RunConfig("cf", alpha=alpha, n=n, format=output_format, out=out)

    rows = []
    for c in convergents(rotation, window.stop):
        if c.n not in window:
            continue
        rows.append(
            {
                "n": c.n,
                "a_n": rotation.a(c.n),
                "p_n": c.p,
                "q_n": c.q,
                "theta_lo": float(c.theta.lo),
                "theta_hi": float(c.theta.hi),
                "N_n": c.N,
                "Q_n": c.Q,
                "chain_ok": c.satisfies_chain(),
            }
        )

    if output_format == OUTPUT_FORMATS.CSV.value:
        _emit(_csv(pd.DataFrame(rows)), out)
        return 0

    report = {"config": config.to_dict(), "alpha": rotation.name, "convergents": rows}
    if window.stop >= 2:
        nu_window = IndexWindow(max(2, window.start), window.stop)
        report["diophantine"] = diophantine_class_estimate(rotation, nu_window).to_dict()
    _emit(_json(report), out)
    return 0


@cli.command()
@config_option
@model_option
@delta_option
@click.option(
    "--n",
    "n",
    default="0..20",
    show_default=True,
    callback=_check_with(lambda spec: parse_window(spec, minimum=0)),
    help="Gap indices, A..B.",
)
@format_option
@out_option
def gaps(model: Optional[str], delta: str, n: str, output_format: str, out: Optional[str]) -> int:
    """Certified gap lengths and tail sums, with the normalization and class estimates."""
    spec = _model_spec(model, delta)
    seq = _build_model(spec)
    window = parse_window(n, minimum=0)
    config = RunConfig("gaps", model=spec, n=n, format=output_format, out=out)

    rows = []
    for i in window:
        length, tail = seq.length(i), seq.tail_sum(i)
        rows.append(
            {
                "n": i,
                "length_lo": format_endpoint(length, "lower"),
                "length_hi": format_endpoint(length, "upper"),
                "tail_lo": format_endpoint(tail, "lower"),
                "tail_hi": format_endpoint(tail, "upper"),
                "exception": seq.is_exception(i),
            }
        )

    if output_format == OUTPUT_FORMATS.CSV.value:
        _emit(_csv(pd.DataFrame(rows)), out)
        return 0

    total = normalization_check(seq)
    report = {
        "config": config.to_dict(),
        "model": seq.name,
        "structure": seq.structure,
        "rows": rows,
        "normalization": {
            "lo": format_endpoint(total, "lower"),
            "hi": format_endpoint(total, "upper"),
            "tolerance": seq.normalization_tolerance,
        },
    }
    if window.start >= 1:
        report["denjoy_class"] = denjoy_class_estimate(seq, window).to_dict()
    _emit(_json(report), out)
    return 0


@cli.command()
@config_option
@alpha_option
@click.option("--k", "k", type=int, default=None, help="Forward orbit {k alpha : 0 <= k <= K}.")
@click.option("--symmetric", "symmetric", type=int, default=None, help="Symmetric orbit |t| <= N.")
@click.option("--analytic", "analytic", type=int, default=None, help="Analytic report at index n.")
@click.option(
    "--check",
    "check",
    default=None,
    callback=_check_with(parse_window),
    help="Threshold check over convergent indices A..B.",
)
@click.option("--plot-data", "plot_data", is_flag=True, help="Emit the orbit positions as CSV.")
@format_option
@out_option
def threegap(
    alpha: str,
    k: Optional[int],
    symmetric: Optional[int],
    analytic: Optional[int],
    check: Optional[str],
    plot_data: bool,
    output_format: str,
    out: Optional[str],
) -> int:
    """Exact gap classes of rotation orbits and the threshold lemma check."""
    chosen = [v is not None for v in (k, symmetric, analytic, check)]
    if sum(chosen) != 1:
        raise click.UsageError("Give exactly one of --k, --symmetric, --analytic or --check.")

    rotation = parse_alpha(alpha)
    if check is not None:
        frame = threshold_check(rotation, parse_window(check))
        if output_format == OUTPUT_FORMATS.CSV.value:
            _emit(_csv(frame), out)
        else:
            _emit(_json({"alpha": rotation.name, "threshold_check": frame.to_dict("records")}), out)
        return 0

    if k is not None:
        report = forward_gap_structure(rotation, k)
    elif symmetric is not None:
        report = symmetric_gap_structure(rotation, symmetric)
    else:
        report = analytic_gap_structure(rotation, analytic)

    if plot_data:
        _emit(_csv(report.plot_frame()), out)
    elif output_format == OUTPUT_FORMATS.CSV.value:
        _emit(_csv(pd.DataFrame([c.to_dict() for c in report.classes])), out)
    else:
        _emit(_json(report.to_dict()), out)
    return 0


def _series_report(series: Sequence[BoundSeries], config: RunConfig, output_format: str) -> str:
    if output_format == OUTPUT_FORMATS.CSV.value:
        frame = pd.concat([s.to_frame() for s in series], ignore_index=True)
        return _csv(frame[SERIES_COLUMNS])
    return _json({"config": config.to_dict(), "series": [s.to_dict() for s in series]})


@cli.command()
@config_option
@alpha_option
@model_option
@delta_option
@click.option(
    "--beta",
    default="1/2",
    show_default=True,
    callback=_check_with(parse_number_list),
    help="Exponent or comma list of exponents.",
)
@click.option(
    "--method",
    default="a",
    show_default=True,
    callback=_check_with(parse_methods),
    help=" | ".join(BOUND_METHODS.values()) + ", comma separated.",
)
@window_option
@click.option("--L", "L", type=int, default=0, show_default=True, help="Block-sum truncation.")
@click.option("--m", "m", type=int, default=2, show_default=True, help="Order-statistic depth.")
@click.option(
    "--offsets",
    type=click.Choice(OFFSET_POLICIES.values()),
    default=None,
    help="Block placement; auto for c and outer for order-stat when omitted.",
)
@click.option(
    "--statistic",
    type=click.Choice(ORDER_STATISTICS.values()),
    default=ORDER_STATISTICS.KTH.value,
    show_default=True,
    help="Order-stat block value: m-th smallest length (kth) or sum of the m smallest (sum).",
)
@format_option
@out_option
@jobs_option
@verbose_option
def lower(
    alpha: str,
    model: Optional[str],
    delta: str,
    beta: str,
    method: str,
    n: Optional[str],
    L: int,
    m: int,
    offsets: Optional[str],
    statistic: str,
    output_format: str,
    out: Optional[str],
    n_jobs: int,
    verbose: bool,
) -> int:
    """Lower-bound series q_n (...)^beta for the chosen estimators."""
    rotation = parse_alpha(alpha)
    spec = _model_spec(model, delta)
    seq = _build_model(spec)
    betas = parse_number_list(beta)
    methods = parse_methods(method)
    window = auto_window(rotation) if n is None else parse_window(n)

    config = RunConfig(
        "lower",
        alpha=alpha,
        model=spec,
        beta=[str(b) for b in betas],
        n=str(window),
        L=L,
        method=methods,
        offsets=offsets,
        statistic=statistic if BOUND_METHODS.ORDER_STAT.value in methods else None,
        format=output_format,
        out=out,
    )

    series = []
    for b in betas:
        for name in methods:
            item = lower_bound_series(
                rotation,
                seq,
                b,
                window,
                method=name,
                L=L,
                m=m,
                offsets=offsets,
                statistic=statistic,
                n_jobs=n_jobs,
                verbose=verbose,
            )
            summary = liminf_report(item, window)
            click.echo(
                f"{item.method} beta={float(b):g}: empirical liminf over {window} is "
                f"{summary.infimum:.6g} (trend {summary.trend_slope:+.3g})",
                err=True,
            )
            series.append(item)

    if BOUND_METHODS.ORDER_STAT.value in methods and seq.delta is not None:
        constants = reference_constants(seq.delta)
        click.echo(
            f"Window constant 8/5 c^delta (1+sqrt5)^-2 for a single window: "
            f"{constants['order_stat_constant']:.6g} (normalized lengths), "
            f"{constants['order_stat_constant_printed']:.6g} (printed)",
            err=True,
        )

    _emit(_series_report(series, config, output_format), out)
    return 0


@cli.command()
@config_option
@alpha_option
@model_option
@delta_option
@click.option("--method", type=click.Choice(["a", "b", "c"]), default="a", show_default=True)
@window_option
@click.option("--L", "L", type=int, default=0, show_default=True, help="Block-sum truncation.")
@click.option("--tol", type=float, default=DEFAULT_TOLERANCE, show_default=True)
@eps_option
@format_option
@out_option
@jobs_option
@verbose_option
def dim(
    alpha: str,
    model: Optional[str],
    delta: str,
    method: str,
    n: Optional[str],
    L: int,
    tol: float,
    eps: str,
    output_format: str,
    out: Optional[str],
    n_jobs: int,
    verbose: bool,
) -> int:
    """Dimension lower bounds (bisection, delta/nu) and upper-bound evidence."""
    rotation = parse_alpha(alpha)
    spec = _model_spec(model, delta)
    seq = _build_model(spec)
    window = None if n is None else parse_window(n)
    config = RunConfig(
        "dim", alpha=alpha, model=spec, n=n, L=L, method=[method], format=output_format, out=out
    )

    report = build_dimension_report(
        rotation,
        seq,
        method=method,
        n_window=window,
        tol=tol,
        L=L,
        eps_list=[float(e) for e in parse_number_list(eps)],
        n_jobs=n_jobs,
        verbose=verbose,
    )
    bisection = report.beta_star_lower
    click.echo(
        f"dim_H >= beta in [{bisection.beta_lo:.4g}, {bisection.beta_hi:.4g}] ({bisection.status})",
        err=True,
    )

    payload = {"config": config.to_dict(), **report.to_dict()}
    if output_format == OUTPUT_FORMATS.CSV.value:
        _emit(_csv(pd.json_normalize(payload, sep=".")), out)
    else:
        _emit(_json(payload), out)
    return 0


@cli.command()
@config_option
@model_option
@delta_option
@click.option(
    "--n",
    "n",
    default=None,
    callback=_check_with(lambda spec: parse_index_list(spec, minimum=2)),
    help="Indices of the cover, a comma list of N and A..B; a geometric sample when omitted.",
)
@click.option(
    "--n-max",
    "n_max",
    type=int,
    default=1000,
    show_default=True,
    help="Largest n of the default geometric sample.",
)
@click.option(
    "--nu-hat",
    "nu_hat",
    type=float,
    default=None,
    help="Diophantine class estimate; the conclusion is stated only when it is close to 1.",
)
@eps_option
@format_option
@out_option
def upper(
    model: Optional[str],
    delta: str,
    n: Optional[str],
    n_max: int,
    nu_hat: Optional[float],
    eps: str,
    output_format: str,
    out: Optional[str],
) -> int:
    """Covering upper bounds on H_delta and the tail-exponent check."""
    spec = _model_spec(model, delta)
    seq = _build_model(spec)
    if seq.delta is None:
        raise click.UsageError("The upper bound needs a model with a smoothness class delta.")

    if n is not None:
        n_values = parse_index_list(n, minimum=2)
    else:
        n_values = [int(v) for v in geometric_grid(10, n_max, 8)]
    config = RunConfig("upper", model=spec, n=n, format=output_format, out=out)

    summary = upper_cover_series(seq, seq.delta, n_values, nu_hat=nu_hat)
    if summary.conclusion is not None:
        click.echo(summary.conclusion, err=True)

    if output_format == OUTPUT_FORMATS.CSV.value:
        _emit(_csv(summary.series.to_frame()), out)
        return 0

    check = upper_corollary_check(seq, seq.delta, [float(e) for e in parse_number_list(eps)])
    payload = {"config": config.to_dict(), **summary.to_dict(), "corollary_check": check.to_dict()}
    _emit(_json(payload), out)
    return 0


@cli.command()
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the base points.")
@click.option("--q-max", "q_max", type=int, default=10**5, show_default=True)
@out_option
def verify(seed: int, q_max: int, out: Optional[str]) -> int:
    """Run the oracle cross-checks; one JSON line per check."""
    lines, failures = [], 0
    for result in run_verification(seed=seed, q_max=q_max):
        failures += int(not result["passed"])
        lines.append(json.dumps(result, sort_keys=True, default=_json_default))

    _emit("\n".join(lines) + "\n", out)
    if failures:
        click.echo(f"{failures} of {len(lines)} checks failed", err=True)
        return 3
    click.echo(f"All {len(lines)} checks passed", err=True)
    return 0


# ---------------------------------------------------------------------------- entry points


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line and return its exit code instead of exiting.
    """
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="denjoy",
            standalone_mode=False,
        )
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except (SpecParsingError, ConfigFileError) as e:
        click.echo(f"Error: {e}", err=True)
        return 2
    except (ValueError, ArithmeticError) as e:
        click.echo(f"Error: {e}", err=True)
        return 1

    return result if isinstance(result, int) else 0


def run():
    sys.exit(main())
