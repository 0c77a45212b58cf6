"""Solvers and exact counters for the equations x.a = b.x (cancellation
free) and xa = bx (general) over F_N, for solutions x of a prescribed
length.

The structural solver reconstructs candidates from the shape of the
equation and always verifies them by substitution before reporting, so
it is exact even where the case analysis is delicate.  The brute solver
enumerates the whole sphere and is the independent oracle.

A note on uniqueness.  In cancellation-free mode the solution of a given
length is unique (and exhaustive search confirms this).  In general mode
the equation xa = bx says x conjugates a to b, so the solution set is a
coset of the centralizer of a; when the coset contains two elements of
the same length (for example a = b = g1 gives x = g1^l and x = g1^-l for
every l) there are two solutions of that length, however large l is.
Both solvers report every solution they find.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .words import (
    DEFAULT_GUARD_LIMIT,
    ShapeMismatchError,
    Word,
    _concat_reduced,
    _invert_letters,
    _shortlex_key,
    check_size_guard,
    iter_sphere_letters,
    reduce_letters,
)

MODE_NO_CANCEL = "no-cancel"
MODE_GENERAL = "general"

REGIME_UNIQUE = "guaranteed-unique"
REGIME_UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True)
class ConjugacyProblem:
    """One instance: nontrivial words a, b, a target length, and a mode."""
    a: Word
    b: Word
    length: int
    mode: str

    def __post_init__(self):
        if self.a.rank != self.b.rank:
            raise ShapeMismatchError("a and b must share a rank")
        if self.a.is_identity() or self.b.is_identity():
            raise ValueError("a and b must be nontrivial")
        if self.length < 1:
            raise ValueError("target length must be >= 1")
        if self.mode not in (MODE_NO_CANCEL, MODE_GENERAL):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def rank(self) -> int:
        return self.a.rank

    def regime(self) -> str:
        """Whether the lemma-style uniqueness claim applies at this length."""
        if self.mode == MODE_NO_CANCEL:
            return REGIME_UNIQUE
        if self.length > len(self.a) + len(self.b):
            return REGIME_UNIQUE
        return REGIME_UNCONSTRAINED


@dataclass(frozen=True)
class SolutionReport:
    """Solutions found for one problem, sorted canonically."""
    problem: ConjugacyProblem
    solutions: tuple[Word, ...]
    method: str
    regime: str

    def to_json_dict(self) -> dict:
        return {
            "a": self.problem.a.text(),
            "b": self.problem.b.text(),
            "l": self.problem.length,
            "mode": self.problem.mode,
            "solutions": [w.text() for w in self.solutions],
            "regime": self.regime,
        }


# -- letter-tuple level checks (shared by both solvers) -----------------


def _nc_is_solution(a: tuple, b: tuple, x: tuple) -> bool:
    """Does the reduced tuple x solve x.a = b.x with no cancellation?"""
    if x and a and x[-1] == -a[0]:
        return False
    if b and x and b[-1] == -x[0]:
        return False
    return x + a == b + x


def _general_is_solution(a: tuple, b: tuple, x: tuple) -> bool:
    return _concat_reduced(x, a) == _concat_reduced(b, x)


def _nc_candidate(a: tuple, b: tuple, l: int) -> tuple | None:
    """The unique candidate for x.a = b.x at length l, or None.

    For l < |a| the solution must be simultaneously a suffix of a and a
    prefix of b (write a = a1.x, then b must equal x.a1).  For l >= |a|
    the solution starts with b, so peel maximal powers: with
    l = m|a| + l1, the candidate is b^m followed by the length-l1
    candidate.  Callers must still substitution-check the result (the
    assembled tuple can fail to be reduced when b is not cyclically
    reduced, for instance).
    """
    la = len(a)
    if len(b) != la or la == 0:
        return None
    if l < la:
        x = a[la - l:]
        if b != x + a[:la - l]:
            return None
        return x
    m, l1 = divmod(l, la)
    if l1 == 0:
        if a != b:
            return None
        tail: tuple = ()
    else:
        tail = a[la - l1:]
        if b != tail + a[:la - l1]:
            return None
    return b * m + tail


def _nc_structural(a: tuple, b: tuple, l: int) -> list[tuple]:
    cand = _nc_candidate(a, b, l)
    if cand is None:
        return []
    if reduce_letters(cand) != cand:
        return []
    if _nc_is_solution(a, b, cand):
        return [cand]
    return []


def _general_structural(a: tuple, b: tuple, l: int) -> list[tuple]:
    """Candidates for xa = bx at length l > |a| + |b| from boundary splits.

    Any solution decomposes as x = b1^-1 . x1 . a1^-1 where a = a1.a2
    loses a1 to cancellation on the right and b = b2.b1 loses b1 on the
    left, with the length balance |a1| - |a2| = |b1| - |b2|.  The middle
    x1 then solves a cancellation-free equation whose sides are reduced
    rotations of a and b (or of their inverses, depending on which side
    is longer).  All admissible splits are tried with both rotation
    forms, and every candidate is substitution-checked.
    """
    la, lb = len(a), len(b)
    inv_a: dict[int, tuple] = {}
    found: set[tuple] = set()
    for ca in range(la + 1):
        num = 2 * ca - la + lb
        if num % 2:
            continue
        cb = num // 2
        if not 0 <= cb <= lb:
            continue
        l1 = l - ca - cb
        if l1 < 1:
            continue
        a1, a2 = a[:ca], a[ca:]
        b2, b1 = b[:lb - cb], b[lb - cb:]
        forms = (
            (reduce_letters(a2 + a1), reduce_letters(b1 + b2)),
            (reduce_letters(_invert_letters(a1) + _invert_letters(a2)),
             reduce_letters(_invert_letters(b2) + _invert_letters(b1))),
        )
        for aa, bb in forms:
            if not aa or not bb or len(aa) != len(bb):
                continue
            for x1 in _nc_structural(aa, bb, l1):
                x = reduce_letters(
                    _invert_letters(b1) + x1 + _invert_letters(a1))
                if len(x) == l and _general_is_solution(a, b, x):
                    found.add(x)
    return sorted(found, key=_shortlex_key)


# -- public solvers -----------------------------------------------------


def solve_brute(problem: ConjugacyProblem,
                guard_limit: int = DEFAULT_GUARD_LIMIT,
                override_guard: bool = False) -> SolutionReport:
    """Enumerate every reduced word of the target length and test the
    equation by direct reduction.  Exhaustive and exact."""
    check_size_guard(problem.rank, problem.length, guard_limit,
                     override_guard)
    a, b = problem.a.letters, problem.b.letters
    test = _nc_is_solution if problem.mode == MODE_NO_CANCEL \
        else _general_is_solution
    sols = [
        Word._make(problem.rank, x)
        for x in iter_sphere_letters(problem.rank, problem.length,
                                     guard_limit, override_guard)
        if test(a, b, x)
    ]
    return SolutionReport(problem, tuple(sols), "brute-force",
                          problem.regime())


def solve_structural(problem: ConjugacyProblem,
                     guard_limit: int = DEFAULT_GUARD_LIMIT,
                     override_guard: bool = False) -> SolutionReport:
    """Solve by the structural construction, substitution-checking every
    candidate.  In general mode at lengths l <= |a| + |b| the boundary
    decomposition is not available, so the solver falls back to brute
    force (the report's method says which path ran)."""
    a, b = problem.a.letters, problem.b.letters
    l = problem.length
    if problem.mode == MODE_NO_CANCEL:
        sols = _nc_structural(a, b, l)
    elif l > len(a) + len(b):
        sols = _general_structural(a, b, l)
    else:
        return solve_brute(problem, guard_limit, override_guard)
    words = tuple(Word._make(problem.rank, x) for x in sols)
    return SolutionReport(problem, words, "structural", problem.regime())


def count_solutions_per_length(a: Word, b: Word, l_max: int, mode: str,
                               guard_limit: int = DEFAULT_GUARD_LIMIT,
                               override_guard: bool = False) -> list[int]:
    """Exact number of solutions for each length 1 .. l_max, by brute
    enumeration."""
    counts = []
    for l in range(1, l_max + 1):
        problem = ConjugacyProblem(a, b, l, mode)
        counts.append(len(solve_brute(problem, guard_limit,
                                      override_guard).solutions))
    return counts


def general_split_decompositions(a: Word, b: Word, x: Word
                                 ) -> list[tuple[int, int]]:
    """All boundary splits (|a1|, |b1|) consistent with the solution x of
    xa = bx: a sheds its length-|a1| prefix, b sheds its length-|b1|
    suffix, and the length balance |a1| - |a2| = |b1| - |b2| holds."""
    at, bt, xt = a.letters, b.letters, x.letters
    if not _general_is_solution(at, bt, xt):
        raise ValueError("x does not solve xa = bx")
    la, lb = len(at), len(bt)
    ca = 0
    while ca < min(la, len(xt)) and xt[len(xt) - 1 - ca] == -at[ca]:
        ca += 1
    cb = 0
    while cb < min(lb, len(xt)) and bt[lb - 1 - cb] == -xt[cb]:
        cb += 1
    out = []
    if (2 * ca - la) == (2 * cb - lb):
        out.append((ca, cb))
    return out


# -- exhaustive certification sweep --------------------------------------


@dataclass(frozen=True)
class UniquenessViolation:
    """A pair (a, b) and length with more than one solution."""
    a: Word
    b: Word
    length: int
    mode: str
    solutions: tuple[Word, ...]

    def describe(self) -> str:
        sols = ", ".join(w.text() or "e" for w in self.solutions)
        return (f"a={self.a.text()} b={self.b.text()} l={self.length} "
                f"mode={self.mode}: {len(self.solutions)} solutions [{sols}]")


class CertificationSweep:
    """Exhaustive solution sets for all pairs of nontrivial words up to a
    length bound and all solution lengths up to l_max.

    This is brute force organized by solution: every word x of every
    length is enumerated once, and for each (x, a) the unique b that x
    could solve for is derived by direct reduction (b = x a x^-1 in
    general mode; in cancellation-free mode b is forced to be the
    appropriate slice of the concatenation).  Identical in content to
    running the per-pair brute solver on every instance.
    """

    def __init__(self, rank: int, max_word_len: int, l_max: int,
                 guard_limit: int = DEFAULT_GUARD_LIMIT,
                 override_guard: bool = False):
        self.rank = rank
        self.max_word_len = max_word_len
        self.l_max = l_max
        small: list[tuple] = []
        for n in range(1, max_word_len + 1):
            small.extend(iter_sphere_letters(rank, n, guard_limit,
                                             override_guard))
        self.words_small = small
        general: dict[tuple, list[tuple]] = {}
        nc: dict[tuple, list[tuple]] = {}
        for l in range(1, l_max + 1):
            for x in iter_sphere_letters(rank, l, guard_limit,
                                         override_guard):
                inv_x = _invert_letters(x)
                for a in small:
                    xa = _concat_reduced(x, a)
                    conj = _concat_reduced(xa, inv_x)
                    if 1 <= len(conj) <= max_word_len:
                        general.setdefault((a, conj, l), []).append(x)
                    # cancellation-free: b is forced to be the first |a|
                    # letters of x + a, which must then end with x again
                    if x[-1] != -a[0]:
                        w = x + a
                        bcand = w[:len(a)]
                        if w[len(a):] == x:
                            nc.setdefault((a, bcand, l), []).append(x)
        self._general = general
        self._nc = nc

    def solutions(self, a: tuple, b: tuple, l: int, mode: str) -> list[tuple]:
        table = self._nc if mode == MODE_NO_CANCEL else self._general
        return table.get((a, b, l), [])

    def count(self, a: tuple, b: tuple, l: int, mode: str) -> int:
        return len(self.solutions(a, b, l, mode))

    def no_cancel_violations(self) -> list[UniquenessViolation]:
        """Instances with more than one cancellation-free solution."""
        return self._collect(self._nc, MODE_NO_CANCEL, beyond_sum=False)

    def general_violations_beyond_bound(self) -> list[UniquenessViolation]:
        """General-mode instances with more than one solution at lengths
        greater than |a| + |b|."""
        return self._collect(self._general, MODE_GENERAL, beyond_sum=True)

    def _collect(self, table, mode, beyond_sum):
        out = []
        for (a, b, l), sols in sorted(
                table.items(),
                key=lambda kv: (_shortlex_key(kv[0][0]),
                                _shortlex_key(kv[0][1]), kv[0][2])):
            if len(sols) <= 1:
                continue
            if beyond_sum and l <= len(a) + len(b):
                continue
            out.append(UniquenessViolation(
                Word._make(self.rank, a), Word._make(self.rank, b), l, mode,
                tuple(Word._make(self.rank, x)
                      for x in sorted(sols, key=_shortlex_key))))
        return out
