"""Command-line front end.

Exit codes: 0 when every checked identity holds, 1 when a mathematical
identity fails, 2 for usage, validation, or size-guard errors.  All
outputs are deterministic: identical invocations produce byte-identical
files.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from . import suite as suite_mod
from .algebra import element_from_json, parse_tensor
from .conjugacy import (
    MODE_GENERAL,
    MODE_NO_CANCEL,
    ConjugacyProblem,
    solve_brute,
    solve_structural,
)
from .radial import (
    cond_exp,
    radial_basis_element,
    radial_norm_squared,
    verify_recurrence_range,
)
from .algebra import norm2_squared
from .series import rows_to_csv, rows_to_json, series_partial_sums
from .words import (
    DEFAULT_GUARD_LIMIT,
    InvalidLetterError,
    ShapeMismatchError,
    SizeGuardError,
    enumerate_words,
    parse_word,
)

EXIT_OK = 0
EXIT_IDENTITY_FAILED = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the verification workflows."""
    N: int = 2
    k: int = 1
    n_max: int = 6
    size_guard_limit: int = DEFAULT_GUARD_LIMIT
    output_path: str | None = None
    output_format: str = "json"

    def validate(self) -> None:
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.n_max < 0:
            raise ValueError(f"n-max must be >= 0, got {self.n_max}")
        if self.size_guard_limit < 1:
            raise ValueError(
                f"guard-limit must be >= 1, got {self.size_guard_limit}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(
                f"format must be json or csv, got {self.output_format!r}")


def read_config_file(path: str) -> dict[str, str]:
    """Parse a simple key=value config file ('#' starts a comment)."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _fail_usage(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_USAGE)


def _fail_identity(message: str) -> None:
    click.echo(f"FAIL: {message}", err=True)
    sys.exit(EXIT_IDENTITY_FAILED)


def _write_output(path: str | None, content: str) -> None:
    if path:
        Path(path).write_text(content)


def _infer_rank(*texts: str) -> int:
    top = 2
    for t in texts:
        for part in t.replace(";", ",").split(","):
            part = part.strip()
            if part:
                try:
                    top = max(top, abs(int(part)))
                except ValueError:
                    pass  # reported properly by the parser later
    return top


def _guard_opts(fn):
    fn = click.option(
        "--guard-limit", type=int, default=DEFAULT_GUARD_LIMIT,
        show_default=True,
        help="Refuse enumerations larger than this many words.")(fn)
    fn = click.option(
        "--override-guard", is_flag=True, default=False,
        help="Proceed even past the size guard.")(fn)
    return fn


@click.group()
@click.version_option()
def main():
    """Exact-arithmetic checks for radial-subalgebra identities over
    free group algebras."""


# -- words --------------------------------------------------------------------


@main.command("words")
@click.option("--N", "rank", type=int, default=2, show_default=True,
              help="Rank of the free group.")
@click.option("--len", "length", type=int, required=True,
              help="Word length to enumerate.")
@click.option("--list/--no-list", "do_list", default=True,
              help="Print the words, not just the count.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the listing to a file.")
@click.option("--format", "out_format",
              type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="Output file format.")
@_guard_opts
def cmd_words(rank, length, do_list, out_path, out_format, guard_limit,
              override_guard):
    """Enumerate all reduced words of a given length."""
    try:
        words = enumerate_words(rank, length, guard_limit, override_guard)
    except SizeGuardError as exc:
        _fail_usage(str(exc))
    except ValueError as exc:
        _fail_usage(str(exc))
    click.echo(f"count: {len(words)}")
    if do_list:
        for w in words:
            click.echo(w.text())
    if out_path:
        if out_format == "json":
            content = json.dumps(
                {"N": rank, "n": length, "count": len(words),
                 "words": [w.text() for w in words]}, indent=2) + "\n"
        else:
            content = "word\n" + "".join(w.text() + "\n" for w in words)
        _write_output(out_path, content)
    sys.exit(EXIT_OK)


# -- radial -------------------------------------------------------------------


@main.group("radial")
def cmd_radial():
    """Radial basis elements and the conditional expectation."""


@cmd_radial.command("norm")
@click.option("--N", "rank", type=int, default=2, show_default=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "depth", type=int, default=1, show_default=True,
              help="Tensor depth for the enumeration cross-check.")
@_guard_opts
def cmd_radial_norm(rank, n, depth, guard_limit, override_guard):
    """Closed-form squared norm of the n-th radial basis element, with an
    enumeration cross-check."""
    try:
        want = radial_norm_squared(rank, n)
        got = norm2_squared(radial_basis_element(rank, depth, n, guard_limit,
                                                 override_guard))
    except SizeGuardError as exc:
        _fail_usage(str(exc))
    except ValueError as exc:
        _fail_usage(str(exc))
    click.echo(str(want))
    if got != want:
        _fail_identity(
            f"enumeration at depth {depth} gives {got}, closed form {want}")
    click.echo(f"cross-check (enumeration at depth {depth}): OK")
    sys.exit(EXIT_OK)


@cmd_radial.command("recurrence")
@click.option("--N", "rank", type=int, default=2, show_default=True)
@click.option("--k", "depth", type=int, default=1, show_default=True)
@click.option("--max-n", "max_n", type=int, required=True)
@_guard_opts
def cmd_radial_recurrence(rank, depth, max_n, guard_limit, override_guard):
    """Verify the degree-1 product recurrence for n = 1 .. max-n (n = 1 is
    the boundary identity with multiplicity 2N)."""
    if max_n < 1:
        _fail_usage("--max-n must be >= 1")
    try:
        reports = verify_recurrence_range(rank, depth, max_n, guard_limit,
                                          override_guard)
    except SizeGuardError as exc:
        _fail_usage(str(exc))
    bad = [r for r in reports if not r.holds]
    boundary = reports[0]
    body = f"OK (n=2..{max_n}), " if max_n >= 2 else ""
    click.echo(
        f"{body}boundary n=1: {boundary.identity_text()} "
        f"{'OK' if boundary.holds else 'FAIL'}")
    if bad:
        for r in bad:
            click.echo(f"FAIL at n={r.n}: commutes={r.commutes} "
                       f"matches={r.matches}", err=True)
        sys.exit(EXIT_IDENTITY_FAILED)
    sys.exit(EXIT_OK)


@cmd_radial.command("expect")
@click.option("--in", "in_path", type=click.Path(exists=True), default=None,
              help="JSON element file (default: stdin).")
@click.option("--out", "out_path", type=click.Path(), default=None)
def cmd_radial_expect(in_path, out_path):
    """Conditional expectation of a JSON-encoded algebra element onto the
    radial span, as a coefficient vector."""
    text = Path(in_path).read_text() if in_path else sys.stdin.read()
    try:
        element = element_from_json(text)
    except (KeyError, ValueError, ShapeMismatchError,
            InvalidLetterError) as exc:
        _fail_usage(f"cannot parse element: {exc}")
    coeffs = cond_exp(element)
    payload = coeffs.to_json()
    click.echo(payload, nl=False)
    _write_output(out_path, payload)
    sys.exit(EXIT_OK)


# -- conjugacy ----------------------------------------------------------------


@main.command("conjugacy")
@click.option("--a", "a_text", required=True, help="Word a, e.g. '2,1'.")
@click.option("--b", "b_text", required=True, help="Word b.")
@click.option("--N", "rank", type=int, default=None,
              help="Rank (default: smallest rank fitting a and b).")
@click.option("--len", "length", type=int, default=None,
              help="Solve at this solution length.")
@click.option("--lmax", "l_max", type=int, default=None,
              help="Count solutions for every length 1..lmax.")
@click.option("--mode", type=click.Choice([MODE_NO_CANCEL, MODE_GENERAL]),
              default=MODE_NO_CANCEL, show_default=True)
@click.option("--solver", type=click.Choice(["structural", "brute", "both"]),
              default="both", show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@_guard_opts
def cmd_conjugacy(a_text, b_text, rank, length, l_max, mode, solver,
                  out_path, guard_limit, override_guard):
    """Solve x.a = b.x (no-cancel) or xa = bx (general) at fixed solution
    length, or count solutions per length with --lmax."""
    if (length is None) == (l_max is None):
        _fail_usage("give exactly one of --len or --lmax")
    rank = rank if rank is not None else _infer_rank(a_text, b_text)
    try:
        a = parse_word(a_text, rank)
        b = parse_word(b_text, rank)
    except InvalidLetterError as exc:
        _fail_usage(str(exc))
    try:
        if l_max is not None:
            counts = []
            disagreements = []
            for l in range(1, l_max + 1):
                problem = ConjugacyProblem(a, b, l, mode)
                brute = solve_brute(problem, guard_limit, override_guard)
                counts.append(len(brute.solutions))
                if solver in ("structural", "both"):
                    structural = solve_structural(problem, guard_limit,
                                                  override_guard)
                    if structural.solutions != brute.solutions:
                        disagreements.append(l)
            click.echo(f"counts: {counts}")
            payload = json.dumps(
                {"a": a.text(), "b": b.text(), "mode": mode,
                 "counts": counts}, indent=2) + "\n"
            _write_output(out_path, payload)
            if disagreements:
                _fail_identity(
                    f"solver disagreement at lengths {disagreements}")
            sys.exit(EXIT_OK)
        problem = ConjugacyProblem(a, b, length, mode)
        reports = {}
        if solver in ("structural", "both"):
            reports["structural"] = solve_structural(problem, guard_limit,
                                                     override_guard)
        if solver in ("brute", "both"):
            reports["brute"] = solve_brute(problem, guard_limit,
                                           override_guard)
        chosen = reports.get("structural") or reports["brute"]
        payload = json.dumps(chosen.to_json_dict(), indent=2) + "\n"
        click.echo(payload, nl=False)
        _write_output(out_path, payload)
        if len(reports) == 2 and (reports["structural"].solutions
                                  != reports["brute"].solutions):
            _fail_identity("structural and brute solvers disagree")
        sys.exit(EXIT_OK)
    except SizeGuardError as exc:
        _fail_usage(str(exc))
    except ValueError as exc:
        _fail_usage(str(exc))


# -- series -------------------------------------------------------------------


@main.command("series")
@click.option("--xs", "xs_text", required=True,
              help="Left tensor, semicolon-joined words, e.g. '1,-2;2,1'.")
@click.option("--ys", "ys_text", required=True, help="Right tensor.")
@click.option("--N", "rank", type=int, default=None,
              help="Rank (default: smallest rank fitting the tensors).")
@click.option("--n-max", "n_max", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--format", "out_format",
              type=click.Choice(["json", "csv"]), default="csv",
              show_default=True)
@_guard_opts
def cmd_series(xs_text, ys_text, rank, n_max, out_path, out_format,
               guard_limit, override_guard):
    """Exact series rows term-by-term with partial sums and the
    structural decay certificate."""
    rank = rank if rank is not None else _infer_rank(xs_text, ys_text)
    try:
        xs = parse_tensor(xs_text, rank)
        ys = parse_tensor(ys_text, rank)
    except InvalidLetterError as exc:
        _fail_usage(str(exc))
    if xs.depth != ys.depth:
        _fail_usage(f"tensor depth mismatch: {xs.depth} vs {ys.depth}")
    try:
        report = series_partial_sums(xs, ys, n_max, guard_limit,
                                     override_guard)
    except SizeGuardError as exc:
        _fail_usage(str(exc))
    except ValueError as exc:
        _fail_usage(str(exc))
    click.echo(f"depth: {report.depth}  horizon: {report.horizon}  "
               f"split-case: {report.split_case}")
    if report.split_case:
        if report.unique_beyond_horizon:
            click.echo("solution census <= 1 beyond the horizon: yes")
        else:
            click.echo("solution census <= 1 beyond the horizon: NO, "
                       f"violated at radii {list(report.bound_violations)}")
        if report.partial_bound_ok is not None:
            click.echo("partial sums within the structural bound: "
                       + ("yes" if report.partial_bound_ok else "NO"))
        if report.tail_bound_beyond is not None:
            click.echo(f"certified tail bound beyond n={n_max} "
                       f"(census <= 1 persisting): "
                       f"{report.tail_bound_beyond}")
    click.echo(f"final partial sum: {report.final_sum()}")
    content = rows_to_csv(report.rows) if out_format == "csv" \
        else rows_to_json(report.rows)
    _write_output(out_path, content)
    if report.split_case and report.bound_violations:
        sys.exit(EXIT_IDENTITY_FAILED)
    sys.exit(EXIT_OK)


# -- verify-all ---------------------------------------------------------------


def _build_run_config(config_path, rank, depth, n_max, guard_limit,
                      override_guard, out_path, out_format, explicit):
    file_values: dict[str, str] = {}
    if config_path:
        try:
            file_values = read_config_file(config_path)
        except (OSError, ValueError) as exc:
            _fail_usage(f"cannot read config: {exc}")

    def pick(flag_name, flag_value, key, cast):
        if flag_name in explicit:
            return flag_value
        if key in file_values:
            raw = file_values[key]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return cast(raw)
        return flag_value

    try:
        cfg = RunConfig(
            N=pick("rank", rank, "N", int),
            k=pick("depth", depth, "k", int),
            n_max=pick("n_max", n_max, "n-max", int),
            size_guard_limit=pick("guard_limit", guard_limit, "guard-limit",
                                  int),
            output_path=pick("out_path", out_path, "out", str),
            output_format=pick("out_format", out_format, "format", str),
        )
        cfg.validate()
    except ValueError as exc:
        _fail_usage(str(exc))
    return cfg, pick("override_guard", override_guard, "override-guard", bool)


@main.command("verify-all")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="key=value config file; flags win.")
@click.option("--N", "rank", type=int, default=2, show_default=True)
@click.option("--k", "depth", type=int, default=1, show_default=True)
@click.option("--n-max", "n_max", type=int, default=6, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--format", "out_format",
              type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@_guard_opts
@click.pass_context
def cmd_verify_all(ctx, config_path, rank, depth, n_max, out_path,
                   out_format, guard_limit, override_guard):
    """Run the whole acceptance battery (fixed desk-scale parameters) and
    print one status line per criterion."""
    explicit = {
        name for name in ("rank", "depth", "n_max", "guard_limit",
                          "override_guard", "out_path", "out_format")
        if ctx.get_parameter_source(name)
        == click.core.ParameterSource.COMMANDLINE
    }
    cfg, override = _build_run_config(
        config_path, rank, depth, n_max, guard_limit, override_guard,
        out_path, out_format, explicit)
    result = suite_mod.run_all(suite_mod.SuiteConfig(
        guard_limit=cfg.size_guard_limit, override_guard=override))
    click.echo(result.report_text, nl=False)
    if cfg.output_path:
        _write_output(cfg.output_path, result.report_json)
    skipped = [r for r in result.results if r.passed is None]
    if skipped:
        click.echo(f"notice: {len(skipped)} checks skipped under the "
                   f"size guard ({cfg.size_guard_limit})")
    sys.exit(EXIT_OK if result.all_passed else EXIT_IDENTITY_FAILED)


if __name__ == "__main__":
    main()
