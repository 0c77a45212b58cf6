"""Cancellation-count tables, depth-invariance checks, and the exact
series diagnostics that feed the asymptotic-homomorphism criterion.

For words x, y and a sphere radius n >= |x| + |y|, every reduced word v
of length n cancels some prefix against x and some suffix against y in
the product x v y; the table of these (left, right) counts determines
the conditional expectation of x^(x)k basis_n y^(x)k in closed form.

The series rows evaluate, per radius n,
    term(n) = ||E(X basis_n Y) - E(X) E(Y) basis_n||_2^2 / ||basis_n||_2^2
for simple tensors X, Y, together with the number of middle words v
solving x_1 v y_1 = ... = x_k v y_k.  All quantities are exact
rationals; the decay certificate is structural (a per-term bound from
the solution count and the norm formula), never a float extrapolation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (
    AlgebraElement,
    TensorWord,
    multiply,
    tensor_element,
    word_element,
)
from .radial import (
    RadialCoeffs,
    cond_exp,
    radial_basis_element,
    radial_norm_squared,
    radial_to_element,
)
from .words import (
    DEFAULT_GUARD_LIMIT,
    ShapeMismatchError,
    Word,
    _concat_reduced,
    cancellation_profile,
    check_size_guard,
    iter_sphere_letters,
)

_ZERO = Fraction(0)


# -- cancellation tables -------------------------------------------------


@dataclass(frozen=True)
class CancellationTable:
    """Counts of length-n words by cancellation profile against (x, y).

    counts[(r, s)] is the number of reduced words v with |v| = n whose
    product x v y loses r letters of v on the left and s on the right.
    With n >= |x| + |y| the zones cannot interact, so every sphere word
    lands in exactly one cell and the counts sum to the sphere size.
    """
    x: Word
    y: Word
    n: int
    counts: dict[tuple[int, int], int]

    @property
    def rank(self) -> int:
        return self.x.rank

    def total(self) -> int:
        return sum(self.counts.values())

    def cell(self, r: int, s: int) -> int:
        return self.counts.get((r, s), 0)

    def sorted_cells(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self.counts.items())

    def expectation_coeffs(self) -> RadialCoeffs:
        """Radial coefficients of E(x^(x)k basis_n y^(x)k) predicted by
        the table: the cell (r, s) contributes its count at index
        |x| + |y| + n - 2(r + s), divided by that basis norm squared.
        The prediction does not depend on the tensor depth."""
        l, m = len(self.x), len(self.y)
        top = l + m + self.n
        vec = [Fraction(0)] * (top + 1)
        for (r, s), cnt in self.counts.items():
            j = top - 2 * (r + s)
            vec[j] += Fraction(cnt, radial_norm_squared(self.rank, j))
        return RadialCoeffs(self.rank, 1, vec)

    def to_json_dict(self) -> dict:
        return {
            "x": self.x.text(),
            "y": self.y.text(),
            "n": self.n,
            "cells": [
                {"r": r, "s": s, "count": c}
                for (r, s), c in self.sorted_cells()
            ],
            "total": self.total(),
        }


def cancellation_table(x: Word, y: Word, n: int,
                       guard_limit: int = DEFAULT_GUARD_LIMIT,
                       override_guard: bool = False) -> CancellationTable:
    """Exact cancellation-profile counts over the length-n sphere."""
    if x.rank != y.rank:
        raise ShapeMismatchError("x and y must share a rank")
    if x.is_identity() or y.is_identity():
        raise ValueError("x and y must be nontrivial")
    if n < len(x) + len(y):
        raise ValueError(
            f"need n >= |x| + |y| = {len(x) + len(y)}, got {n}")
    check_size_guard(x.rank, n, guard_limit, override_guard)
    counts: dict[tuple[int, int], int] = {}
    xl, yl = x.letters, y.letters
    lx, ly = len(xl), len(yl)
    for v in iter_sphere_letters(x.rank, n, guard_limit, override_guard):
        r = 0
        while r < lx and xl[lx - 1 - r] == -v[r]:
            r += 1
        s = 0
        while s < ly and v[n - 1 - s] == -yl[s]:
            s += 1
        key = (r, s)
        counts[key] = counts.get(key, 0) + 1
    return CancellationTable(x, y, n, counts)


def expectation_of_conjugated_basis(x: Word, y: Word, depth: int, n: int,
                                    guard_limit: int = DEFAULT_GUARD_LIMIT,
                                    override_guard: bool = False
                                    ) -> RadialCoeffs:
    """E(x^(x)depth basis_n y^(x)depth) computed through the algebra:
    explicit product, then conditional expectation."""
    X = word_element(x, depth)
    Y = word_element(y, depth)
    wn = radial_basis_element(x.rank, depth, n, guard_limit, override_guard)
    return cond_exp(multiply(multiply(X, wn), Y))


def verify_table_reconstruction(table: CancellationTable, depth: int,
                                guard_limit: int = DEFAULT_GUARD_LIMIT,
                                override_guard: bool = False) -> bool:
    """Whether the table's closed-form prediction matches the honest
    conditional expectation at the given depth, exactly."""
    predicted = table.expectation_coeffs()
    actual = expectation_of_conjugated_basis(
        table.x, table.y, depth, table.n, guard_limit, override_guard)
    return tuple(predicted.coeffs) == tuple(actual.coeffs)


# -- honest products of two radial basis elements -------------------------

_pair_cache: dict[tuple, RadialCoeffs] = {}


def radial_pair_product(rank: int, depth: int, l: int, m: int,
                        guard_limit: int = DEFAULT_GUARD_LIMIT,
                        override_guard: bool = False) -> RadialCoeffs:
    """Radial coefficients of basis_l basis_m, computed by explicit
    convolution at the given depth (not by the recurrence), with a
    round-trip check that the product really is radial."""
    key = (rank, depth, l, m)
    hit = _pair_cache.get(key)
    if hit is not None:
        return hit
    wl = radial_basis_element(rank, depth, l, guard_limit, override_guard)
    wm = radial_basis_element(rank, depth, m, guard_limit, override_guard)
    prod = multiply(wl, wm)
    coeffs = cond_exp(prod)
    if radial_to_element(coeffs, guard_limit, override_guard) != prod:
        raise ArithmeticError(
            f"basis_{l} basis_{m} at depth {depth} is not radial")
    _pair_cache[key] = coeffs
    return coeffs


# -- depth invariance ------------------------------------------------------


@dataclass(frozen=True)
class DepthQuantities:
    """The four exact quantities at one tensor depth.

    diff_norm   = ||E(X basis_n Y) - E(X) E(Y) basis_n||_2^2
    proj_norm   = ||E(X basis_n Y)||_2^2
    mixed_norm  = ||E(X) E(Y) basis_n||_2^2
    cross       = trace(E(X basis_n Y)* E(X) E(Y) basis_n)
    with X, Y the diagonal tensors of x, y at this depth.  The radial
    coefficient vectors of the two projected elements are kept for
    inspection.
    """
    depth: int
    diff_norm: Fraction
    proj_norm: Fraction
    mixed_norm: Fraction
    cross: Fraction
    projection: RadialCoeffs
    mixed: RadialCoeffs


@dataclass(frozen=True)
class DepthInvarianceReport:
    """Comparison of the four quantities at depth k against depth 1."""
    x: Word
    y: Word
    depth: int
    n: int
    at_depth: DepthQuantities
    at_one: DepthQuantities

    @property
    def holds_diff(self) -> bool:
        return self.at_depth.diff_norm == self.at_one.diff_norm

    @property
    def holds_proj(self) -> bool:
        return self.at_depth.proj_norm == self.at_one.proj_norm

    @property
    def holds_mixed(self) -> bool:
        return self.at_depth.mixed_norm == self.at_one.mixed_norm

    @property
    def holds_cross(self) -> bool:
        return self.at_depth.cross == self.at_one.cross

    @property
    def holds(self) -> bool:
        return (self.holds_diff and self.holds_proj and self.holds_mixed
                and self.holds_cross)


def _depth_quantities(x: Word, y: Word, depth: int, n: int,
                      guard_limit: int, override_guard: bool
                      ) -> DepthQuantities:
    rank = x.rank
    l, m = len(x), len(y)
    P = expectation_of_conjugated_basis(x, y, depth, n, guard_limit,
                                        override_guard)
    pair = radial_pair_product(rank, depth, l, m, guard_limit,
                               override_guard)
    scale = Fraction(1, radial_norm_squared(rank, l)
                     * radial_norm_squared(rank, m))
    Q = (pair * RadialCoeffs.unit(rank, depth, n)).scale(scale)
    diff = (P - Q).norm2_squared()
    proj = P.norm2_squared()
    mixed = Q.norm2_squared()
    cross = P.inner(Q)
    if diff != proj + mixed - 2 * cross:
        raise ArithmeticError("polarization identity failed (internal bug)")
    return DepthQuantities(depth, diff, proj, mixed, cross, P, Q)


def verify_depth_invariance(x: Word, y: Word, depth: int, n: int,
                            guard_limit: int = DEFAULT_GUARD_LIMIT,
                            override_guard: bool = False
                            ) -> DepthInvarianceReport:
    """Check that the projection-defect norm and its three polarization
    components agree between tensor depth k and depth 1.

    Requires |x| >= 2, |y| >= 2 and n >= |x| + |y|.
    """
    if x.rank != y.rank:
        raise ShapeMismatchError("x and y must share a rank")
    if len(x) < 2 or len(y) < 2:
        raise ValueError("need |x| >= 2 and |y| >= 2")
    if n < len(x) + len(y):
        raise ValueError(f"need n >= |x| + |y| = {len(x) + len(y)}")
    if depth < 1:
        raise ValueError("tensor depth must be >= 1")
    at_depth = _depth_quantities(x, y, depth, n, guard_limit, override_guard)
    at_one = at_depth if depth == 1 else _depth_quantities(
        x, y, 1, n, guard_limit, override_guard)
    return DepthInvarianceReport(x, y, depth, n, at_depth, at_one)


# -- series rows -----------------------------------------------------------


@dataclass(frozen=True)
class SeriesRow:
    """One radius of the series.

    term is the defect norm over the basis norm at this radius;
    solution_count is the number of sphere words v with all k products
    x_i v y_i equal.  partial_sum accumulates terms from radius 0 when
    the row was produced by series_partial_sums.  term_bound is the
    structural per-term bound (solution_count <= 1 regime), present for
    radii beyond the interaction horizon in the split case.
    cross_check_ok records agreement of the two term formulas where the
    solution-set formula applies.
    """
    n: int
    term: Fraction
    solution_count: int
    partial_sum: Fraction | None = None
    term_bound: Fraction | None = None
    cross_check_ok: bool | None = None


def _solution_census(xs: TensorWord, ys: TensorWord, n: int,
                     guard_limit: int, override_guard: bool
                     ) -> tuple[int, dict[int, int]]:
    """Count sphere words v solving x_1 v y_1 = ... = x_k v y_k, with a
    histogram of the common product length."""
    k = xs.depth
    xf = [w.letters for w in xs.factors]
    yf = [w.letters for w in ys.factors]
    count = 0
    lengths: dict[int, int] = {}
    for v in iter_sphere_letters(xs.rank, n, guard_limit, override_guard):
        first = _concat_reduced(_concat_reduced(xf[0], v), yf[0])
        ok = True
        for i in range(1, k):
            if _concat_reduced(_concat_reduced(xf[i], v), yf[i]) != first:
                ok = False
                break
        if ok:
            count += 1
            p = len(first)
            lengths[p] = lengths.get(p, 0) + 1
    return count, lengths


def interaction_horizon(xs: TensorWord, ys: TensorWord) -> int:
    """max |x_i| + max |y_j|; beyond this radius the middle word is long
    enough that all products share their central segment."""
    return (max(len(w) for w in xs.factors)
            + max(len(w) for w in ys.factors))


def term_bound(rank: int, n: int, horizon: int) -> Fraction:
    """Structural bound for a single-solution radius n > horizon: the one
    surviving product has length at least n - horizon, so the term is at
    most 1 / (||basis_n||^2 ||basis_(n-horizon)||^2)."""
    if n <= horizon:
        raise ValueError("bound applies only beyond the horizon")
    return Fraction(1, radial_norm_squared(rank, n)
                    * radial_norm_squared(rank, n - horizon))


def series_term(xs: TensorWord, ys: TensorWord, n: int,
                guard_limit: int = DEFAULT_GUARD_LIMIT,
                override_guard: bool = False) -> SeriesRow:
    """Evaluate one series radius exactly.

    The direct path forms X basis_n Y in the algebra, projects, and
    measures the defect.  When E(X) E(Y) = 0 the defect can also be
    assembled from the solution census alone; both paths are computed
    and compared (cross_check_ok).
    """
    if xs.depth != ys.depth:
        raise ShapeMismatchError("tensor depth mismatch")
    if xs.rank != ys.rank:
        raise ShapeMismatchError("rank mismatch")
    rank, depth = xs.rank, xs.depth
    X = tensor_element(xs)
    Y = tensor_element(ys)
    wn = radial_basis_element(rank, depth, n, guard_limit, override_guard)
    P = cond_exp(multiply(multiply(X, wn), Y))
    EX = cond_exp(X)
    EY = cond_exp(Y)
    nw_n = radial_norm_squared(rank, n)
    if EX.is_zero() or EY.is_zero():
        Q = RadialCoeffs(rank, depth, ())
    else:
        l, m = EX.max_index(), EY.max_index()
        pair = radial_pair_product(rank, depth, l, m, guard_limit,
                                   override_guard)
        scale = Fraction(1, radial_norm_squared(rank, l)
                         * radial_norm_squared(rank, m))
        Q = (pair * RadialCoeffs.unit(rank, depth, n)).scale(scale)
    term = (P - Q).norm2_squared() / nw_n
    count, lengths = _solution_census(xs, ys, n, guard_limit, override_guard)
    cross_ok: bool | None = None
    if Q.is_zero():
        from_census = _ZERO
        for p, c in lengths.items():
            from_census += Fraction(c * c, radial_norm_squared(rank, p))
        cross_ok = (from_census / nw_n == term)
    return SeriesRow(n=n, term=term, solution_count=count,
                     cross_check_ok=cross_ok)


@dataclass(frozen=True)
class SeriesReport:
    """Rows 0..n_max with exact partial sums and the structural decay
    certificate for the split case (E(X) E(Y) = 0)."""
    xs: TensorWord
    ys: TensorWord
    n_max: int
    horizon: int
    split_case: bool
    pattern_consistent: bool
    rows: tuple[SeriesRow, ...]
    bound_violations: tuple[int, ...]
    partial_bound_ok: bool | None
    tail_bound_beyond: Fraction | None

    @property
    def rank(self) -> int:
        return self.xs.rank

    @property
    def depth(self) -> int:
        return self.xs.depth

    @property
    def unique_beyond_horizon(self) -> bool:
        return not self.bound_violations

    def final_sum(self) -> Fraction:
        return self.rows[-1].partial_sum if self.rows else _ZERO


def series_partial_sums(xs: TensorWord, ys: TensorWord, n_max: int,
                        guard_limit: int = DEFAULT_GUARD_LIMIT,
                        override_guard: bool = False) -> SeriesReport:
    """Evaluate radii 0..n_max with running partial sums.

    In the split case, radii beyond the interaction horizon carry the
    structural per-term bound; any radius there with more than one
    census solution is flagged as a bound violation (the bound then does
    not apply to that radius).  The certificate compares the final
    partial sum against the sum at the horizon plus the accumulated
    bounds, and extends the bound geometrically past n_max when no
    violation occurred.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    rank = xs.rank
    horizon = interaction_horizon(xs, ys)
    x_pattern = [(xs.factors[i] == xs.factors[j])
                 for i in range(xs.depth) for j in range(i + 1, xs.depth)]
    y_pattern = [(ys.factors[i] == ys.factors[j])
                 for i in range(ys.depth) for j in range(i + 1, ys.depth)]
    pattern_consistent = x_pattern == y_pattern
    split_case = not (all(x_pattern) and all(y_pattern)) \
        if x_pattern else False
    rows: list[SeriesRow] = []
    running = _ZERO
    sum_at_horizon = _ZERO
    bound_sum = _ZERO
    violations: list[int] = []
    for n in range(n_max + 1):
        row = series_term(xs, ys, n, guard_limit, override_guard)
        running += row.term
        bound: Fraction | None = None
        if split_case and n > horizon:
            bound = term_bound(rank, n, horizon)
            if row.solution_count > 1:
                violations.append(n)
            else:
                bound_sum += bound
        rows.append(SeriesRow(
            n=row.n, term=row.term, solution_count=row.solution_count,
            partial_sum=running, term_bound=bound,
            cross_check_ok=row.cross_check_ok))
        if n == horizon:
            sum_at_horizon = running
    partial_bound_ok: bool | None = None
    tail_beyond: Fraction | None = None
    if split_case and n_max > horizon and not violations:
        partial_bound_ok = running <= sum_at_horizon + bound_sum
        q = 2 * rank - 1
        tail_beyond = (term_bound(rank, n_max + 1, horizon)
                       * Fraction(q * q, q * q - 1))
    return SeriesReport(
        xs=xs, ys=ys, n_max=n_max, horizon=horizon, split_case=split_case,
        pattern_consistent=pattern_consistent, rows=tuple(rows),
        bound_violations=tuple(violations),
        partial_bound_ok=partial_bound_ok, tail_bound_beyond=tail_beyond)


# -- short-factor commutation report ---------------------------------------


@dataclass(frozen=True)
class ShortFactorRow:
    """One radius of the short-left-factor (|x| = 1) diagnostic.

    term_direct and term_polarized are the same defect computed through
    two accumulations (coefficientwise difference vs the polarization
    identity); dropped_x_value is the defect of the same expression with
    the left factor removed, which vanishes by bimodularity.  vanishes
    records whether the full term itself is zero.
    """
    n: int
    term_direct: Fraction
    term_polarized: Fraction
    dropped_x_value: Fraction
    vanishes: bool
    paths_agree: bool
    equals_dropped: bool


@dataclass(frozen=True)
class ShortFactorReport:
    x: Word
    y: Word
    depth: int
    rows: tuple[ShortFactorRow, ...]

    @property
    def internally_consistent(self) -> bool:
        return all(r.paths_agree for r in self.rows)

    @property
    def all_vanish(self) -> bool:
        return all(r.vanishes for r in self.rows)


def short_factor_report(x: Word, y: Word, depth: int,
                        radii: Iterable[int],
                        guard_limit: int = DEFAULT_GUARD_LIMIT,
                        override_guard: bool = False) -> ShortFactorReport:
    """Evaluate the |x| = 1 series terms along the given radii, through
    two independent accumulations, together with the dropped-left-factor
    comparison value.  Nothing is assumed about vanishing; the report
    records what the exact arithmetic produced."""
    if len(x) != 1:
        raise ValueError("the short-factor report requires |x| = 1")
    rank = x.rank
    m = len(y)
    rows = []
    for n in radii:
        X = word_element(x, depth)
        Y = word_element(y, depth)
        wn = radial_basis_element(rank, depth, n, guard_limit,
                                  override_guard)
        P = cond_exp(multiply(multiply(X, wn), Y))
        pair = radial_pair_product(rank, depth, 1, m, guard_limit,
                                   override_guard)
        scale = Fraction(1, radial_norm_squared(rank, 1)
                         * radial_norm_squared(rank, m))
        Q = (pair * RadialCoeffs.unit(rank, depth, n)).scale(scale)
        nw_n = radial_norm_squared(rank, n)
        direct = (P - Q).norm2_squared() / nw_n
        polarized = (P.norm2_squared() + Q.norm2_squared()
                     - 2 * P.inner(Q)) / nw_n
        # same expression with the left factor dropped:
        # ||E(basis_n Y) - E(Y) basis_n||^2 / ||basis_n||^2
        P2 = cond_exp(multiply(wn, Y))
        pair_mn = radial_pair_product(rank, depth, m, n, guard_limit,
                                      override_guard)
        Q2 = pair_mn.scale(Fraction(1, radial_norm_squared(rank, m)))
        dropped = (P2 - Q2).norm2_squared() / nw_n
        rows.append(ShortFactorRow(
            n=n, term_direct=direct, term_polarized=polarized,
            dropped_x_value=dropped, vanishes=(direct == 0),
            paths_agree=(direct == polarized),
            equals_dropped=(direct == dropped)))
    return ShortFactorReport(x, y, depth, tuple(rows))


# -- emitters ---------------------------------------------------------------

CSV_HEADER = "n,term,term_float,solution_count,partial_sum"


def _float_text(value: Fraction) -> str:
    return f"{float(value):.15g}"


def rows_to_csv(rows: Sequence[SeriesRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        partial = r.partial_sum if r.partial_sum is not None else r.term
        lines.append(
            f"{r.n},{r.term},{_float_text(r.term)},{r.solution_count},"
            f"{partial}")
    return "\n".join(lines) + "\n"


def rows_to_json(rows: Sequence[SeriesRow]) -> str:
    payload = []
    for r in rows:
        partial = r.partial_sum if r.partial_sum is not None else r.term
        payload.append({
            "n": r.n,
            "term": str(r.term),
            "term_float": _float_text(r.term),
            "solution_count": r.solution_count,
            "partial_sum": str(partial),
        })
    return json.dumps(payload, indent=2) + "\n"
