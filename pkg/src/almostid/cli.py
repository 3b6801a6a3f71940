"""Command-line front end: verification runs, scans, Mellin checks, gallery.

Usage examples:

    almostid verify --n 4 --base 2 --digits 40 --format json
    almostid scan --n 1..6 --bases 2 --digits 30 --format csv
    almostid mellin --functions g1,g2,fn3 --s 1/8,1/4 --digits 30
    almostid dual --n 1..2 --x 0.1,0.3 --digits 30
    almostid lemma --n 3..6 --k 0..2 --u 0,2.5 --digits 30
    almostid gallery --item ramanujan163 --digits 50

Exit status: 0 when every per-item check passed, 1 on any verification
failure, 2 on usage or domain errors.  All numerics print as decimal strings;
repeated runs with the same configuration emit byte-identical reports.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click
from mpmath import mp, mpf

from . import gallery as gallery_mod
from . import mellin as mellin_mod
from . import report as report_mod
from . import series as series_mod
from .errors import ConvergenceError, DomainError
from .precision import PrecisionContext, wrap

_GALLERY_ITEMS = (
    "all", "ramanujan37", "ramanujan58", "ramanujan163",
    "triangle_l", "e_pi_minus_pi", "borwein", "hickerson",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    digits: int = 40
    format: str = "text"
    out_path: Optional[str] = None
    n_range: tuple = ()
    bases: tuple = (2,)
    functions: tuple = ()
    s_values: tuple = ()
    x_values: tuple = ()
    k_range: tuple = ()
    u_values: tuple = ()
    item: str = "all"
    harmonic: bool = False
    residual_tol: Optional[str] = None
    h_override: Optional[str] = None
    extras: dict = field(default_factory=dict)


def parse_int_range(text: str):
    """'7' -> [7]; 'a..b' -> [a..b] inclusive (empty when b < a)."""
    text = text.strip()
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError:
            raise DomainError(f"bad range {text!r}, expected 'a..b'")
        return list(range(lo, hi + 1))
    try:
        return [int(text)]
    except ValueError:
        raise DomainError(f"bad integer {text!r}")


def parse_int_list(text: str):
    values = []
    for piece in text.split(","):
        values.extend(parse_int_range(piece))
    if not values:
        raise DomainError("empty integer list")
    return values


def parse_str_list(text: str):
    values = [piece.strip() for piece in text.split(",") if piece.strip()]
    if not values:
        raise DomainError("empty value list")
    return values


def _parse_s(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"bad s value {text!r}, expected a fraction or decimal")


def _parse_decimal(text: str, what: str):
    try:
        return mpf(text)
    except ValueError:
        raise DomainError(f"bad {what} {text!r}, expected a decimal")


def _identity_ok(rows, results, config):
    ok = all(row["pass"] for row in rows)
    if config.residual_tol is not None:
        ctx = PrecisionContext(digits=config.digits)
        with mp.workdps(ctx.working_digits):
            # parse even when already failing so junk input is always rejected
            gate = _parse_decimal(config.residual_tol, "residual tolerance")
            for item in results:
                if isinstance(item, series_mod.IdentityReport):
                    if not abs(item.residual.value) <= gate:
                        ok = False
    return ok


def _run_verify(config: RunConfig, ctx: PrecisionContext):
    (n,) = config.n_range
    (base,) = config.bases
    report = series_mod.verify_identity(n, base, ctx)
    rows = [report_mod.identity_row(report)]
    ok = _identity_ok(rows, [report], config)
    return rows[0], rows, report_mod.IDENTITY_COLUMNS, ok


def _run_scan(config: RunConfig, ctx: PrecisionContext):
    results = series_mod.scan(config.n_range, config.bases, ctx)
    rows = [report_mod.identity_row(item) for item in results]
    ok = _identity_ok(rows, results, config)
    return rows, rows, report_mod.IDENTITY_COLUMNS, ok


def _run_mellin(config: RunConfig, ctx: PrecisionContext):
    rows = []
    threshold = mellin_mod.pass_threshold(ctx)
    for fid in config.functions:
        for s_text in config.s_values:
            s = _parse_s(s_text)
            try:
                rows.append(report_mod.mellin_row(mellin_mod.mellin_check(fid, s, ctx)))
            except ConvergenceError as exc:
                rows.append(report_mod.error_row(
                    report_mod.MELLIN_COLUMNS, kind="transform", function=fid,
                    s=s_text, error=str(exc)))
    if config.harmonic:
        for fid in config.functions:
            if fid not in ("g1", "g2"):
                continue
            for s_text in config.s_values:
                s = _parse_s(s_text)
                try:
                    err = mellin_mod.harmonic_factor_check(fid, s, ctx)
                    with mp.workdps(ctx.working_digits):
                        s_big = wrap(mpf(s.numerator) / s.denominator, ctx)
                        passed = bool(err.value < threshold)
                    rows.append(report_mod.harmonic_row(fid, s_big, err, passed))
                except ConvergenceError as exc:
                    rows.append(report_mod.error_row(
                        report_mod.MELLIN_COLUMNS, kind="harmonic", function=fid,
                        s=s_text, error=str(exc)))
    ok = all(row["pass"] for row in rows)
    return rows, rows, report_mod.MELLIN_COLUMNS, ok


def _run_dual(config: RunConfig, ctx: PrecisionContext):
    rows = []
    for n in config.n_range:
        for x_text in config.x_values:
            try:
                rows.append(report_mod.dual_row(mellin_mod.dual_check(n, x_text, ctx)))
            except ConvergenceError as exc:
                rows.append(report_mod.error_row(
                    report_mod.DUAL_COLUMNS, n=n, x=x_text, error=str(exc)))
    ok = all(row["pass"] for row in rows)
    return rows, rows, report_mod.DUAL_COLUMNS, ok


def _run_lemma(config: RunConfig, ctx: PrecisionContext):
    rows = []
    with mp.workdps(ctx.working_digits):
        h_value = (
            mpf(10) ** (-mpf(ctx.digits) / 3)
            if config.h_override is None
            else _parse_decimal(config.h_override, "step h")
        )
        bound = wrap(10 * h_value**2, ctx)
        h_big = wrap(h_value, ctx)
    for n in config.n_range:
        for k in config.k_range:
            for u_text in config.u_values:
                residual = mellin_mod.lemma_check(n, k, u_text, ctx, h=h_big)
                passed = bool(residual.value < bound.value)
                rows.append(report_mod.lemma_row(
                    n, k, u_text, h_big, residual, bound, passed))
    ok = all(row["pass"] for row in rows)
    return rows, rows, report_mod.LEMMA_COLUMNS, ok


def _gallery_work_items(item: str):
    if item == "hickerson":
        return [("hickerson", n) for n in range(1, 18)]
    if item != "all":
        return [(item, None)]
    items = [("ramanujan37", None), ("ramanujan58", None), ("ramanujan163", None),
             ("triangle_l", None), ("e_pi_minus_pi", None), ("borwein", None)]
    items += [("hickerson", n) for n in range(1, 18)]
    return items


def _run_gallery(config: RunConfig, ctx: PrecisionContext):
    rows = []
    for item, sub in _gallery_work_items(config.item):
        try:
            if item.startswith("ramanujan"):
                entry = gallery_mod.ramanujan_constant(int(item[len("ramanujan"):]), ctx)
            elif item in ("triangle_l", "e_pi_minus_pi"):
                entry = gallery_mod.misc_constant(item, ctx)
            elif item == "borwein":
                entry = gallery_mod.borwein_sum(ctx)
            else:
                entry = gallery_mod.hickerson(sub, ctx)
            rows.append(report_mod.gallery_row(entry))
        except ConvergenceError as exc:
            label = item if sub is None else f"{item}{sub}"
            rows.append(report_mod.error_row(
                report_mod.GALLERY_COLUMNS, item=label, digits=ctx.digits,
                error=str(exc)))
    ok = all(row["pass"] for row in rows)
    return rows, rows, report_mod.GALLERY_COLUMNS, ok


def run(config: RunConfig) -> int:
    """Execute a configuration; returns the process exit status (0 or 1).

    DomainError propagates to the caller, which maps it to usage status 2.
    """
    if config.digits < 20 and config.command in ("verify", "scan"):
        raise DomainError(
            f"{config.command} needs digits >= 20 to resolve the deltas, got {config.digits}")
    if config.command == "gallery" and config.item in (
            "all", "ramanujan37", "ramanujan58", "ramanujan163") and config.digits < 40:
        raise DomainError(f"gallery ramanujan entries need digits >= 40, got {config.digits}")
    ctx = PrecisionContext(digits=config.digits)

    runner = {
        "verify": _run_verify,
        "scan": _run_scan,
        "mellin": _run_mellin,
        "dual": _run_dual,
        "lemma": _run_lemma,
        "gallery": _run_gallery,
    }[config.command]
    payload, rows, columns, ok = runner(config, ctx)

    if config.format == "json":
        text = report_mod.render_json(payload) + "\n"
    elif config.format == "csv":
        text = report_mod.render_csv(rows, columns)
    else:
        text = report_mod.render_text(rows, columns)

    if config.out_path:
        Path(config.out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    return 0 if ok else 1


def _common_options(fn):
    fn = click.option("--digits", type=int, default=40, show_default=True,
                      envvar="ALMOSTID_DIGITS",
                      help="Requested decimal digits (guard digits added on top).")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]),
                      default="text", show_default=True)(fn)
    fn = click.option("--out", "out_path", type=click.Path(dir_okay=False),
                      default=None, help="Write the report to a file instead of stdout.")(fn)
    return fn


def _dispatch(build):
    # build() parses free-form option strings, so it must sit inside the
    # DomainError -> usage-status-2 guard together with run() itself
    try:
        code = run(build())
    except DomainError as exc:
        raise click.UsageError(str(exc))
    sys.exit(code)


@click.group()
@click.version_option(package_name="almostid")
def main():
    """High-precision verification of almost-identity sums and their errors."""


@main.command()
@click.option("--n", "n_text", required=True, help="Index n (single integer).")
@click.option("--base", type=int, default=2, show_default=True)
@click.option("--residual-tol", default=None,
              help="Extra exit-status gate: fail unless |residual| <= this decimal.")
@_common_options
def verify(n_text, base, residual_tol, digits, fmt, out_path):
    """Verify u_n = target + chained correction for one (n, base) cell."""
    def build():
        values = parse_int_list(n_text)
        if len(values) != 1:
            raise DomainError("verify takes a single n; use scan for ranges")
        return RunConfig(command="verify", digits=digits, format=fmt, out_path=out_path,
                         n_range=tuple(values), bases=(base,), residual_tol=residual_tol)
    _dispatch(build)


@main.command()
@click.option("--n", "n_text", required=True, help="Range 'a..b' or single n.")
@click.option("--bases", "bases_text", default="2", show_default=True,
              help="Comma list of bases m >= 2.")
@click.option("--residual-tol", default=None,
              help="Extra exit-status gate: fail unless every |residual| <= this decimal.")
@_common_options
def scan(n_text, bases_text, residual_tol, digits, fmt, out_path):
    """Verify a grid of cells ordered by (base, n)."""
    _dispatch(lambda: RunConfig(
        command="scan", digits=digits, format=fmt, out_path=out_path,
        n_range=tuple(parse_int_range(n_text)),
        bases=tuple(parse_int_list(bases_text)),
        residual_tol=residual_tol))


@main.command()
@click.option("--functions", "functions_text", default="g1,g2,fn3,fn4,fn5,fn6,fn7",
              show_default=True, help="Comma list from g1, g2, fn<n>.")
@click.option("--s", "s_text", default="1/8,1/4,3/8", show_default=True,
              help="Comma list of s values (fractions or decimals).")
@click.option("--harmonic", is_flag=True, default=False,
              help="Also check the dilate-sum transform against closed/(2^s-1) for g1, g2.")
@_common_options
def mellin(functions_text, s_text, harmonic, digits, fmt, out_path):
    """Compare quadrature against closed forms for the transform family."""
    _dispatch(lambda: RunConfig(
        command="mellin", digits=digits, format=fmt, out_path=out_path,
        functions=tuple(parse_str_list(functions_text)),
        s_values=tuple(parse_str_list(s_text)), harmonic=harmonic))


@main.command()
@click.option("--n", "n_text", default="1..2", show_default=True)
@click.option("--x", "x_text", default="0.1,0.2,0.3,0.45", show_default=True,
              help="Comma list of x values in (0, 1/2).")
@_common_options
def dual(n_text, x_text, digits, fmt, out_path):
    """Compare the dilate sums G_n against their residue expansions."""
    _dispatch(lambda: RunConfig(
        command="dual", digits=digits, format=fmt, out_path=out_path,
        n_range=tuple(parse_int_range(n_text)),
        x_values=tuple(parse_str_list(x_text))))


@main.command()
@click.option("--n", "n_text", default="3..6", show_default=True)
@click.option("--k", "k_text", default="0..2", show_default=True)
@click.option("--u", "u_text", default="0,2.5", show_default=True)
@click.option("--h", "h_text", default=None,
              help="Finite-difference step override (default 10^(-digits/3)).")
@_common_options
def lemma(n_text, k_text, u_text, h_text, digits, fmt, out_path):
    """Check the antiderivative identity by central finite differences."""
    _dispatch(lambda: RunConfig(
        command="lemma", digits=digits, format=fmt, out_path=out_path,
        n_range=tuple(parse_int_range(n_text)),
        k_range=tuple(parse_int_range(k_text)),
        u_values=tuple(parse_str_list(u_text)), h_override=h_text))


@main.command()
@click.option("--item", type=click.Choice(_GALLERY_ITEMS), default="all", show_default=True)
@_common_options
def gallery(item, digits, fmt, out_path):
    """Recompute the catalogue of famous almost identities."""
    _dispatch(lambda: RunConfig(
        command="gallery", digits=digits, format=fmt, out_path=out_path, item=item))


if __name__ == "__main__":
    main()
