"""The acceptance suite: every identity the tool certifies, run at fixed
desk-scale parameters with exact arithmetic.

Each criterion returns a CriterionResult; run_all executes the whole
battery twice and adds a byte-determinism check of the rendered report.
A criterion that cannot run under the configured size guard is reported
as skipped, not failed.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import (
    TensorWord,
    diagonal_tensor,
    multiply,
    norm2_squared,
    tensor_element,
    word_element,
)
from .conjugacy import (
    MODE_GENERAL,
    MODE_NO_CANCEL,
    CertificationSweep,
    ConjugacyProblem,
    solve_brute,
    solve_structural,
)
from .radial import (
    RadialCoeffs,
    cond_exp,
    radial_basis_element,
    radial_norm_squared,
    verify_recurrence,
)
from .series import (
    _depth_quantities,
    cancellation_table,
    series_partial_sums,
    short_factor_report,
    verify_depth_invariance,
)
from .words import (
    DEFAULT_GUARD_LIMIT,
    SizeGuardError,
    Word,
    enumerate_words,
    parse_word,
    sphere_size,
)

MAX_LISTED_FAILURES = 10


@dataclass(frozen=True)
class SuiteConfig:
    guard_limit: int = DEFAULT_GUARD_LIMIT
    override_guard: bool = False


@dataclass(frozen=True)
class CriterionResult:
    key: str
    title: str
    passed: bool | None  # None means skipped (size guard)
    details: str
    failures: tuple[str, ...] = ()

    @property
    def status(self) -> str:
        if self.passed is None:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"


def _guarded(key: str, title: str,
             fn: Callable[[], CriterionResult]) -> CriterionResult:
    try:
        return fn()
    except SizeGuardError as exc:
        return CriterionResult(key, title, None, f"skipped: {exc}")


def _result(key: str, title: str, failures: list[str],
            detail: str) -> CriterionResult:
    shown = tuple(failures[:MAX_LISTED_FAILURES])
    if len(failures) > MAX_LISTED_FAILURES:
        shown = shown + (
            f"... and {len(failures) - MAX_LISTED_FAILURES} more",)
    return CriterionResult(key, title, not failures, detail, shown)


# -- criterion 1: norm formula ---------------------------------------------


def criterion_norm_formula(cfg: SuiteConfig) -> CriterionResult:
    key, title = "1", "radial-norm-formula"

    def run() -> CriterionResult:
        failures = []
        checked = 0
        for rank in (2, 3):
            for depth in (1, 2, 3):
                for n in range(0, 7):
                    got = norm2_squared(radial_basis_element(
                        rank, depth, n, cfg.guard_limit, cfg.override_guard))
                    want = radial_norm_squared(rank, n)
                    checked += 1
                    if got != want:
                        failures.append(
                            f"N={rank} k={depth} n={n}: {got} != {want}")
        return _result(key, title, failures,
                       f"{checked} norms checked against 2N(2N-1)^(n-1)")

    return _guarded(key, title, run)


# -- criterion 2: product recurrence ---------------------------------------


def criterion_recurrence(cfg: SuiteConfig) -> CriterionResult:
    key, title = "2", "product-recurrence"

    def run() -> CriterionResult:
        failures = []
        checked = 0
        for rank in (2, 3):
            for depth in (1, 2):
                for n in range(1, 6):  # n=1 is the 2N boundary identity
                    rep = verify_recurrence(rank, depth, n, cfg.guard_limit,
                                            cfg.override_guard)
                    checked += 1
                    if not rep.holds:
                        failures.append(
                            f"N={rank} k={depth} n={n}: "
                            f"commutes={rep.commutes} matches={rep.matches}")
        return _result(
            key, title, failures,
            f"{checked} product identities checked (boundary multiplicity 2N)")

    return _guarded(key, title, run)


# -- criterion 3: simple-tensor expectation --------------------------------


def _random_word(rng: random.Random, rank: int, length: int) -> Word:
    letters: list[int] = []
    alphabet = [s for g in range(1, rank + 1) for s in (g, -g)]
    while len(letters) < length:
        choices = [s for s in alphabet
                   if not letters or s != -letters[-1]]
        letters.append(rng.choice(choices))
    return Word(rank, letters)


def criterion_simple_tensor_expectation(cfg: SuiteConfig) -> CriterionResult:
    key, title = "3", "simple-tensor-expectation"

    def run() -> CriterionResult:
        rng = random.Random(90125)
        failures = []
        for i in range(30):
            rank = rng.choice((2, 3))
            depth = rng.choice((1, 2, 3))
            p = rng.randint(0, 4)
            v = _random_word(rng, rank, p)
            rc = cond_exp(tensor_element(diagonal_tensor(v, depth)))
            want = [Fraction(0)] * p + [
                Fraction(1, radial_norm_squared(rank, p))]
            if list(rc.coeffs) != want:
                failures.append(
                    f"v={v.text() or 'e'} N={rank} k={depth}: {rc.coeffs}")
        return _result(key, title, failures,
                       "30 random diagonal tensors project to a single "
                       "coefficient 1/||basis_p||^2")

    return _guarded(key, title, run)


# -- criterion 4: expectation nonvanishing ---------------------------------


def criterion_nonvanishing(cfg: SuiteConfig) -> CriterionResult:
    key, title = "4", "expectation-nonvanishing"

    def run() -> CriterionResult:
        rank = 2
        pool = [w for n in range(0, 3)
                for w in enumerate_words(rank, n, cfg.guard_limit,
                                         cfg.override_guard)]
        failures = []
        checked = 0
        for depth in (2, 3):
            idx = [0] * depth
            while True:
                t = TensorWord(tuple(pool[i] for i in idx))
                nonzero = not cond_exp(tensor_element(t)).is_zero()
                if nonzero != t.is_diagonal():
                    failures.append(t.text())
                checked += 1
                j = depth - 1
                while j >= 0 and idx[j] == len(pool) - 1:
                    idx[j] = 0
                    j -= 1
                if j < 0:
                    break
                idx[j] += 1
        return _result(
            key, title, failures,
            f"{checked} tensors: expectation nonzero iff all factors equal")

    return _guarded(key, title, run)


# -- criterion 5: conjugacy uniqueness and solver agreement -----------------

_SWEEP_RANK = 2
_SWEEP_WORD_LEN = 3
_SWEEP_L_MAX = 8


def _sweep(cfg: SuiteConfig) -> CertificationSweep:
    return CertificationSweep(_SWEEP_RANK, _SWEEP_WORD_LEN, _SWEEP_L_MAX,
                              cfg.guard_limit, cfg.override_guard)


def criterion_conjugacy(cfg: SuiteConfig) -> list[CriterionResult]:
    t5a = "conjugacy-unique-no-cancel"
    t5b = "conjugacy-unique-general"
    t5c = "solver-agreement"
    try:
        sweep = _sweep(cfg)
    except SizeGuardError as exc:
        msg = f"skipped: {exc}"
        return [CriterionResult("5a", t5a, None, msg),
                CriterionResult("5b", t5b, None, msg),
                CriterionResult("5c", t5c, None, msg)]

    pairs = len(sweep.words_small) ** 2
    scope = (f"all {pairs} pairs |a|,|b| <= {_SWEEP_WORD_LEN}, "
             f"l <= {_SWEEP_L_MAX}, N = {_SWEEP_RANK}")

    nc_viol = sweep.no_cancel_violations()
    r5a = _result("5a", t5a, [v.describe() for v in nc_viol],
                  f"no-cancellation counts <= 1 over {scope}")

    gen_viol = sweep.general_violations_beyond_bound()
    r5b = _result(
        "5b", t5b, [v.describe() for v in gen_viol],
        f"general-mode counts <= 1 for l > |a|+|b| over {scope}; the "
        f"equation xa = bx has a coset of solutions, so conjugate pairs "
        f"with symmetric coset lengths genuinely carry two solutions per "
        f"length (see README)")

    mismatches: list[str] = []
    agree_checked = 0
    rank = _SWEEP_RANK
    for a_t in sweep.words_small:
        a = Word._make(rank, a_t)
        for b_t in sweep.words_small:
            b = Word._make(rank, b_t)
            for l in range(1, _SWEEP_L_MAX + 1):
                general_structural_applies = l > len(a_t) + len(b_t)
                for mode, applies in ((MODE_NO_CANCEL, True),
                                      (MODE_GENERAL,
                                       general_structural_applies)):
                    if not applies:
                        continue
                    got = solve_structural(
                        ConjugacyProblem(a, b, l, mode),
                        cfg.guard_limit, cfg.override_guard)
                    want = sorted(sweep.solutions(a_t, b_t, l, mode))
                    agree_checked += 1
                    if sorted(w.letters for w in got.solutions) != want:
                        mismatches.append(
                            f"a={a.text()} b={b.text()} l={l} {mode}")
    # the fallback regime (general, l <= |a|+|b|) delegates to the brute
    # solver by construction; re-execute a sample as a cross-check of the
    # sweep organization itself
    rng = random.Random(48271)
    sampled = 0
    while sampled < 40:
        a_t = rng.choice(sweep.words_small)
        b_t = rng.choice(sweep.words_small)
        l = rng.randint(1, min(len(a_t) + len(b_t), _SWEEP_L_MAX))
        mode = rng.choice((MODE_NO_CANCEL, MODE_GENERAL))
        rep = solve_brute(
            ConjugacyProblem(Word._make(rank, a_t), Word._make(rank, b_t),
                             l, mode),
            cfg.guard_limit, cfg.override_guard)
        want = sorted(sweep.solutions(a_t, b_t, l, mode))
        if sorted(w.letters for w in rep.solutions) != want:
            mismatches.append(
                f"brute sample a={a_t} b={b_t} l={l} {mode}")
        sampled += 1
    r5c = _result(
        "5c", t5c, mismatches,
        f"{agree_checked} structural solves match the exhaustive sweep; "
        f"40 sampled brute solves match it too")
    return [r5a, r5b, r5c]


# -- criteria 6 and 7: depth invariance and table reconstruction ------------


def _sample_pairs(rng: random.Random, count: int) -> list[tuple[Word, Word]]:
    rank = 2
    pool = (enumerate_words(rank, 2) + enumerate_words(rank, 3))
    pairs = [(x, y) for x in pool for y in pool]
    return rng.sample(pairs, count)


def criterion_depth_and_reconstruction(cfg: SuiteConfig
                                       ) -> list[CriterionResult]:
    t6 = "depth-invariance"
    t7 = "table-reconstruction"

    def run() -> list[CriterionResult]:
        rng = random.Random(61409)
        pairs = _sample_pairs(rng, 50)
        fail6: list[str] = []
        fail7: list[str] = []
        checked6 = 0
        checked7 = 0
        for x, y in pairs:
            lm = len(x) + len(y)
            for n in range(lm, 8):
                table = cancellation_table(x, y, n, cfg.guard_limit,
                                           cfg.override_guard)
                if table.total() != sphere_size(2, n):
                    fail7.append(
                        f"x={x.text()} y={y.text()} n={n}: total "
                        f"{table.total()} != {sphere_size(2, n)}")
                predicted = tuple(table.expectation_coeffs().coeffs)
                base = _depth_quantities(x, y, 1, n, cfg.guard_limit,
                                         cfg.override_guard)
                for depth in (2, 3):
                    q = _depth_quantities(x, y, depth, n, cfg.guard_limit,
                                          cfg.override_guard)
                    checked6 += 1
                    if (q.diff_norm, q.proj_norm, q.mixed_norm, q.cross) != \
                            (base.diff_norm, base.proj_norm,
                             base.mixed_norm, base.cross):
                        fail6.append(
                            f"x={x.text()} y={y.text()} k={depth} n={n}")
                    checked7 += 1
                    if tuple(q.projection.coeffs) != predicted:
                        fail7.append(
                            f"x={x.text()} y={y.text()} k={depth} n={n}: "
                            f"table prediction != expectation")
        r6 = _result(
            "6", t6, fail6,
            f"{checked6} instances: defect norm and all three polarization "
            f"components agree between depth k and depth 1 "
            f"(50 pairs, k in {{2,3}}, |x|+|y| <= n <= 7)")
        r7 = _result(
            "7", t7, fail7,
            f"{checked7} instances: cancellation-table expansion matches "
            f"the conditional expectation exactly; cell totals equal the "
            f"sphere size")
        return [r6, r7]

    try:
        return run()
    except SizeGuardError as exc:
        msg = f"skipped: {exc}"
        return [CriterionResult("6", t6, None, msg),
                CriterionResult("7", t7, None, msg)]


# -- criterion 8: series decay ----------------------------------------------

# Split-case instances (entries of length <= 2, N = 2) whose censuses were
# screened during development; the checks below re-verify everything.
SERIES_INSTANCES: tuple[tuple[str, str], ...] = (
    ("1;2", "1;2"),
    ("1;1,2", "2;2"),
    ("1;2", "1,1;2,2"),
    ("1,2;2,1", "1;2"),
    ("1;2,1", "1,2;2"),
    ("1,1;2,2", "1,1;2,2"),
    ("1,2;-2,1", "2;-2"),
    ("1;-2", "2,1;1,2"),
    ("-1;2,2", "1,2;2,-1"),
    ("1;2,-1", "1,-2;2"),
    ("1;1,1", "2;1,2"),
    ("2;1,1", "-2;2,2"),
    ("1,2;2,-1", "-1,2;1,1"),
    ("-2;1,1", "1,1;-2"),
    ("1;2;1", "1;2;1"),
    ("-2;1,1;-2", "1,1;-2;1,1"),
    ("1;2;1,1", "1;2;1,1"),
    ("1;2;2", "1;2;2"),
    ("1;2;-1", "1;2;-1"),
    ("1;2;1,2", "1;2;1,2"),
    ("1,2;2;1", "2,1;1;2"),
    ("1;2;2,2", "-1;-2;2,1"),
    ("1,1;2;1,2", "2,2;1;2,1"),
    ("-2;1,1;2", "1,1;-2;2"),
)

_SERIES_N_MAX = 8


def criterion_series_decay(cfg: SuiteConfig) -> CriterionResult:
    key, title = "8", "series-decay"

    def run() -> CriterionResult:
        from .algebra import parse_tensor
        failures = []
        rows_checked = 0
        for xs_text, ys_text in SERIES_INSTANCES:
            xs = parse_tensor(xs_text, 2)
            ys = parse_tensor(ys_text, 2)
            rep = series_partial_sums(xs, ys, _SERIES_N_MAX,
                                      cfg.guard_limit, cfg.override_guard)
            tag = f"xs={xs_text} ys={ys_text}"
            if not rep.split_case:
                failures.append(f"{tag}: not a split-case instance")
                continue
            if rep.bound_violations:
                failures.append(
                    f"{tag}: census count > 1 at radii "
                    f"{list(rep.bound_violations)}")
            for row in rep.rows:
                rows_checked += 1
                if row.cross_check_ok is False:
                    failures.append(f"{tag} n={row.n}: term formulas differ")
                if row.term_bound is not None and row.term > row.term_bound:
                    failures.append(
                        f"{tag} n={row.n}: term {row.term} exceeds bound "
                        f"{row.term_bound}")
            if rep.partial_bound_ok is False:
                failures.append(f"{tag}: partial-sum certificate failed")
            sums = [r.partial_sum for r in rep.rows]
            if any(sums[i] > sums[i + 1] for i in range(len(sums) - 1)):
                failures.append(f"{tag}: partial sums not monotone")
        return _result(
            key, title, failures,
            f"{len(SERIES_INSTANCES)} split-case instances, {rows_checked} "
            f"radii: census <= 1 beyond the horizon, both term formulas "
            f"agree, partial sums respect the structural bound")

    return _guarded(key, title, run)


# -- criterion 9: short-left-factor terms -----------------------------------

SHORT_FACTOR_INSTANCES: tuple[tuple[str, str, int], ...] = (
    ("1", "1", 1),
    ("1", "1", 2),
    ("1", "1", 3),
    ("1", "2", 2),
    ("-2", "1", 2),
    ("1", "1,2", 1),
    ("1", "1,2", 2),
    ("1", "2,2", 3),
    ("2", "2,1", 2),
    ("-1", "-1,2", 3),
)


def criterion_short_factor(cfg: SuiteConfig) -> CriterionResult:
    key, title = "9", "short-factor-terms"

    def run() -> CriterionResult:
        failures = []
        vanished = 0
        rows_total = 0
        for x_text, y_text, depth in SHORT_FACTOR_INSTANCES:
            x = parse_word(x_text, 2)
            y = parse_word(y_text, 2)
            rep = short_factor_report(x, y, depth, range(0, 5),
                                      cfg.guard_limit, cfg.override_guard)
            tag = f"x={x_text} y={y_text} k={depth}"
            for row in rep.rows:
                rows_total += 1
                if not row.paths_agree:
                    failures.append(
                        f"{tag} n={row.n}: accumulation paths disagree")
                if row.dropped_x_value != 0:
                    failures.append(
                        f"{tag} n={row.n}: dropped-factor value "
                        f"{row.dropped_x_value} != 0 (bimodularity)")
                if row.vanishes:
                    vanished += 1
        return _result(
            key, title, failures,
            f"{rows_total} terms computed two ways; {vanished} of them "
            f"vanish (the full short-factor defect is generically nonzero; "
            f"only the dropped-factor comparison value is identically 0)")

    return _guarded(key, title, run)


# -- report rendering and the determinism criterion --------------------------


def render_report(results: list[CriterionResult]) -> str:
    lines = ["acceptance suite report", "======================="]
    for r in results:
        lines.append(f"[{r.status}] {r.key} {r.title}: {r.details}")
        for f in r.failures:
            lines.append(f"    - {f}")
    counts = {
        "pass": sum(1 for r in results if r.passed is True),
        "fail": sum(1 for r in results if r.passed is False),
        "skip": sum(1 for r in results if r.passed is None),
    }
    lines.append(
        f"summary: {counts['pass']} passed, {counts['fail']} failed, "
        f"{counts['skip']} skipped")
    return "\n".join(lines) + "\n"


def render_report_json(results: list[CriterionResult]) -> str:
    payload = [
        {
            "key": r.key,
            "title": r.title,
            "status": r.status,
            "details": r.details,
            "failures": list(r.failures),
        }
        for r in results
    ]
    return json.dumps(payload, indent=2) + "\n"


@dataclass(frozen=True)
class SuiteResult:
    results: tuple[CriterionResult, ...]
    report_text: str
    report_json: str

    @property
    def all_passed(self) -> bool:
        return all(r.passed is not False for r in self.results)

    @property
    def any_failed(self) -> bool:
        return any(r.passed is False for r in self.results)


def _run_criteria(cfg: SuiteConfig) -> list[CriterionResult]:
    results: list[CriterionResult] = []
    results.append(criterion_norm_formula(cfg))
    results.append(criterion_recurrence(cfg))
    results.append(criterion_simple_tensor_expectation(cfg))
    results.append(criterion_nonvanishing(cfg))
    results.extend(criterion_conjugacy(cfg))
    results.extend(criterion_depth_and_reconstruction(cfg))
    results.append(criterion_series_decay(cfg))
    results.append(criterion_short_factor(cfg))
    return results


def run_all(cfg: SuiteConfig | None = None) -> SuiteResult:
    """Run criteria 1..9, rerun them, and certify that the two rendered
    reports are byte-identical (criterion 10)."""
    cfg = cfg or SuiteConfig()
    first = _run_criteria(cfg)
    text_first = render_report(first)
    second = _run_criteria(cfg)
    text_second = render_report(second)
    deterministic = text_first.encode() == text_second.encode()
    c10 = CriterionResult(
        "10", "determinism", deterministic,
        "two full runs rendered byte-identical reports" if deterministic
        else "reports differ between runs")
    results = first + [c10]
    return SuiteResult(tuple(results), render_report(results),
                       render_report_json(results))
