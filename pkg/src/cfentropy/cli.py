"""Command line interface: ``cfentropy <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on invalid
input.  Rationals are written ``p/q`` (``-1/2``, ``3``); ``inf`` and ``-inf``
are accepted wherever a point of the line is expected.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from fractions import Fraction

import click

from .cfmap import OutOfParameterSpace, validate_params
from .explorer import (
    METHODS,
    PRESETS,
    MethodFailed,
    SweepSpec,
    check_conjectures,
    csv_text,
    entropy_record,
    preset,
    run_sweep,
    to_json,
)
from .lapcount import DEFAULT_DEPTH, DepthTooLarge, entropy_estimate, gauss_lap_counts, lap_counts
from .markov import DEFAULT_MAX_POINTS
from .parry import InadmissibleWord, psi
from .projective import as_cut
from .recode import RecodingError, recode_by_blocks, recode_by_tracking
from .verify import SUITES, run_all, run_suite

EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2


class RationalType(click.ParamType):
    name = "p/q"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational p/q", param, ctx)


class RangeType(click.ParamType):
    name = "lo:hi"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        parts = str(value).split(":")
        try:
            lo, hi = (Fraction(p.strip()) for p in parts)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a range lo:hi of rationals", param, ctx)
        if lo > hi:
            self.fail(f"empty range {value!r}", param, ctx)
        return lo, hi


RATIONAL = RationalType()
RANGE = RangeType()


def _invalid(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_INVALID)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _params(a, b):
    if a is None or b is None:
        _invalid("both -a and -b are required")
    try:
        return validate_params(a, b)
    except OutOfParameterSpace as exc:
        _invalid(str(exc))


budget_options = [
    click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_MAX_POINTS, show_default=True,
                 help="Maximum orbit-closure size (and iterations) for the Markov search."),
    click.option("--depth", type=click.IntRange(min=4), default=DEFAULT_DEPTH, show_default=True,
                 help="Lap-count depth."),
    click.option("--tol", type=float, default=1e-12, show_default=True,
                 help="Largest accepted width of the Markov entropy bracket."),
    click.option("--method", type=click.Choice(METHODS), default="auto", show_default=True),
]


def with_budget(fn):
    for opt in reversed(budget_options):
        fn = opt(fn)
    return fn


format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                             show_default=True)
out_option = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                          help="Write to this file instead of stdout.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Topological entropy of the (a, b)-continued-fraction boundary maps."""


@main.command()
@click.option("-a", type=RATIONAL, required=False, help="Left parameter a <= 0.")
@click.option("-b", type=RATIONAL, required=False, help="Right parameter b >= 0.")
@with_budget
@format_option
@out_option
def entropy(a, b, budget, depth, tol, method, fmt, out):
    """Entropy of f_{a,b} at one parameter."""
    params = _params(a, b)
    try:
        rec = entropy_record(params, method, budget, budget, depth, tol)
    except MethodFailed as exc:
        _invalid(str(exc))
    text = json.dumps(rec.to_dict(), indent=2) + "\n" if fmt == "json" else csv_text([rec])
    _emit(text, out)


def _sweep_spec(preset_name, a_range, b_range, step, max_den, budget, depth, tol, method) -> SweepSpec:
    settings = dict(method=method, max_points=budget, max_iter=budget, depth=depth, tol=tol, max_den=max_den)
    if preset_name:
        if step is not None:
            settings["step"] = step
        return preset(preset_name, **settings)
    spec = SweepSpec(**settings)
    if a_range:
        spec = replace(spec, a_range=a_range)
    if b_range:
        spec = replace(spec, b_range=b_range)
    if step is not None:
        spec = replace(spec, step=step)
    return spec


def sweep_options(fn):
    opts = [
        click.option("--preset", "preset_name", type=click.Choice(PRESETS), default=None),
        click.option("--a-range", type=RANGE, default=None, help="Grid range for a, e.g. -3/2:0."),
        click.option("--b-range", type=RANGE, default=None, help="Grid range for b, e.g. 0:3/2."),
        click.option("--step", type=RATIONAL, default=None, help="Grid step (default 1/20)."),
        click.option("--max-den", type=click.IntRange(min=1), default=64, show_default=True,
                     help="Skip grid points whose denominators exceed this."),
        click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return with_budget(fn)


@main.command()
@sweep_options
@format_option
@out_option
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Also render the sweep as a figure (png, pdf or svg).")
def sweep(preset_name, a_range, b_range, step, max_den, jobs, budget, depth, tol, method, fmt, out, plot):
    """Entropy over a grid or a named preset; rows in lexicographic (a, b) order."""
    try:
        spec = _sweep_spec(preset_name, a_range, b_range, step, max_den, budget, depth, tol, method)
    except ValueError as exc:
        _invalid(str(exc))
    result = run_sweep(spec, jobs)
    _emit(to_json(result) if fmt == "json" else csv_text(result.records), out)
    click.echo(f"{spec.name}: {result.n_candidates} points, {len(result.records)} records, "
               f"{len(result.skipped)} skipped", err=True)
    if plot:
        from .plotting import plot_sweep

        plot_sweep(result, plot)
        click.echo(f"figure written to {plot}", err=True)


@main.command()
@click.option("--step", type=RATIONAL, default=None, help="Step of the surface grid (default 1/20).")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@with_budget
@out_option
def conjectures(step, jobs, budget, depth, tol, method, out):
    """Check the surface, fixed-b and families sweeps against the conjectured bounds,
    monotonicity, plateau and symmetry.  Reports; does not fail on violations."""
    settings = dict(method=method, max_points=budget, max_iter=budget, depth=depth, tol=tol)
    surface = preset("surface", **settings, **({"step": step} if step is not None else {}))
    results = [run_sweep(s, jobs) for s in (surface, preset("fixed-b", **settings), preset("families", **settings))]
    report = check_conjectures(*results)
    report["settings"] = {"step": str(surface.step), "method": method, "budget": budget, "depth": depth, "tol": tol}
    _emit(json.dumps(report, indent=2) + "\n", out)


@main.command()
@click.argument("suite", type=click.Choice(SUITES), default="all")
@click.option("--seed", type=int, default=42, show_default=True)
def verify(suite, seed):
    """Run a verification suite; exit status 1 if any check fails."""
    reports = run_all(seed) if suite == "all" else [run_suite(suite, seed)]
    for rep in reports:
        click.echo("\n".join(rep.lines()))
    ok = all(r.passed for r in reports)
    click.echo(f"seed {seed}: {'PASS' if ok else 'FAIL'}")
    if not ok:
        sys.exit(EXIT_VERIFY_FAILED)


@main.command("psi")
@click.option("-x", "x", required=True, help="Point p/q, inf or -inf.")
@click.option("--regime", type=click.Choice(["artin", "hurwitz", "both"]), default="both", show_default=True)
@click.option("--depth", type=click.IntRange(min=1), default=30, show_default=True)
def psi_cmd(x, regime, depth):
    """Bracket psi(x) by descending the cylinder tree."""
    try:
        point = as_cut(x.strip())
    except (ValueError, ZeroDivisionError):
        _invalid(f"{x!r} is not a point of the line")
    names = ["artin", "hurwitz"] if regime == "both" else [regime]
    for name in names:
        br = psi(name, point, depth)
        click.echo(f"{name}\t{br.lower!r}\t{br.upper!r}\twidth={br.width:.3e}")


def _parse_word(word: str) -> tuple[int, ...]:
    text = word.replace(",", " ").split()
    digits = text if len(text) > 1 else list(word.strip())
    try:
        return tuple(int(d) for d in digits)
    except ValueError:
        _invalid(f"{word!r} is not a word over 1..8")


@main.command()
@click.option("--word", required=True, help="Artin-admissible word, e.g. 3751 or 3,7,5,1.")
def recode(word):
    """Hurwitz itinerary of the same cylinder as an Artin word ending in 1, 2, 7 or 8."""
    symbols = _parse_word(word)
    try:
        t, b = recode_by_tracking(symbols), recode_by_blocks(symbols)
    except (InadmissibleWord, ValueError) as exc:
        _invalid(str(exc))
    except RecodingError as exc:
        click.echo(f"FAIL {exc}", err=True)
        sys.exit(EXIT_VERIFY_FAILED)
    lo, hi = t.interval.endpoints
    click.echo(f"artin\t{''.join(map(str, t.omega.symbols))}")
    click.echo(f"hurwitz\t{''.join(map(str, t.tau.symbols))}")
    click.echo(f"interval\t[{lo}, {hi}]")
    if t.tau != b.tau:
        click.echo(f"FAIL block recoder gave {''.join(map(str, b.tau.symbols))}", err=True)
        sys.exit(EXIT_VERIFY_FAILED)


@main.command()
@click.option("-a", type=RATIONAL, default=None)
@click.option("-b", type=RATIONAL, default=None)
@click.option("--gauss", is_flag=True, help="Use the slow Gauss map instead of f_{a,b}.")
@click.option("--depth", type=click.IntRange(min=4), default=DEFAULT_DEPTH, show_default=True)
def laps(a, b, gauss, depth):
    """Lap counts L_1..L_depth and the entropy estimate from their growth."""
    try:
        series = gauss_lap_counts(depth) if gauss else lap_counts(_params(a, b), depth)
    except DepthTooLarge as exc:
        _invalid(str(exc))
    for k, c in enumerate(series.counts, 1):
        click.echo(f"{k}\t{c}")
    est = entropy_estimate(series)
    click.echo(f"entropy\t{est.value:.12g}\t+-{est.uncertainty:.3g}")


if __name__ == "__main__":  # pragma: no cover
    main()
