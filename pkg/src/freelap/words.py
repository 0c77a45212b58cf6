"""Reduced-word arithmetic and enumeration for the free group F_N.

Letters are nonzero signed integers: +i is the i-th generator, -i its
inverse, with 1 <= i <= N.  Words are immutable, always stored fully
reduced, and compare by letter sequence.  The canonical letter order used
for enumeration and serialization is 1, -1, 2, -2, ...
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

DEFAULT_GUARD_LIMIT = 10**7


class InvalidLetterError(ValueError):
    """A letter is zero or its generator index exceeds the rank."""


class ShapeMismatchError(ValueError):
    """Operands live over different ranks or tensor depths."""


class SizeGuardError(RuntimeError):
    """An enumeration would exceed the configured size guard."""


def _check_rank(rank: int) -> None:
    if not isinstance(rank, int) or rank < 2:
        raise ValueError(f"rank must be an integer >= 2, got {rank!r}")


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a raw letter sequence (stack cancellation).

    The result is independent of cancellation order, so a single
    left-to-right pass with a stack is canonical.

    >>> reduce_letters([1, 2, -2, 1])
    (1, 1)
    >>> reduce_letters([1, -1])
    ()
    """
    out: list[int] = []
    for s in letters:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _concat_reduced(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    """Reduced concatenation of two already-reduced letter tuples."""
    i = len(u)
    j = 0
    nv = len(v)
    while i > 0 and j < nv and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def _invert_letters(u: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-s for s in reversed(u))


def _letter_sort_key(letter: int) -> int:
    # 1 < -1 < 2 < -2 < ...
    return 2 * letter if letter > 0 else 2 * (-letter) + 1


def _shortlex_key(letters: tuple[int, ...]) -> tuple:
    return (len(letters), tuple(_letter_sort_key(s) for s in letters))


class Word:
    """A reduced word in F_N.  Immutable and hashable.

    The constructor insists on an already-reduced letter sequence; use
    :func:`reduce` to build a word from raw letters.
    """

    __slots__ = ("rank", "letters", "_hash")

    def __init__(self, rank: int, letters: Iterable[int] = ()):
        _check_rank(rank)
        letters = tuple(letters)
        for s in letters:
            if not isinstance(s, int) or s == 0 or abs(s) > rank:
                raise InvalidLetterError(
                    f"letter {s!r} invalid for rank {rank}")
        for i in range(len(letters) - 1):
            if letters[i] == -letters[i + 1]:
                raise ValueError(
                    f"letter sequence {letters} is not reduced at position {i}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", hash((rank, letters)))

    @classmethod
    def _make(cls, rank: int, letters: tuple[int, ...]) -> "Word":
        """Internal fast path: letters must be a reduced, validated tuple."""
        w = object.__new__(cls)
        object.__setattr__(w, "rank", rank)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "_hash", hash((rank, letters)))
        return w

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls(rank)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Word) and self.rank == other.rank
                and self.letters == other.letters)

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return inverse(self)

    def __repr__(self) -> str:
        return f"Word({self.rank}, {self.text()!r})"

    def sort_key(self) -> tuple:
        """Shortlex key: by length, then canonical letter order."""
        return _shortlex_key(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word._make(self.rank, _invert_letters(self.letters))

    def text(self) -> str:
        """Comma-separated signed integers; the empty string is the identity."""
        return ",".join(str(s) for s in self.letters)


def parse_word(text: str, rank: int) -> Word:
    """Parse the textual word format, reducing on input.

    >>> parse_word("1,-2,1", 2).text()
    '1,-2,1'
    >>> parse_word("1,-1", 2).text()
    ''
    """
    _check_rank(rank)
    text = text.strip()
    if not text:
        return Word._make(rank, ())
    try:
        raw = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise InvalidLetterError(f"cannot parse word {text!r}: {exc}") from None
    for s in raw:
        if s == 0 or abs(s) > rank:
            raise InvalidLetterError(f"letter {s} invalid for rank {rank}")
    return Word._make(rank, reduce_letters(raw))


def reduce(rank: int, letters: Iterable[int]) -> Word:
    """Build the fully reduced word over F_rank from a raw letter sequence."""
    _check_rank(rank)
    letters = tuple(letters)
    for s in letters:
        if not isinstance(s, int) or s == 0 or abs(s) > rank:
            raise InvalidLetterError(f"letter {s!r} invalid for rank {rank}")
    return Word._make(rank, reduce_letters(letters))


def _check_same_rank(a: Word, b: Word) -> None:
    if a.rank != b.rank:
        raise ShapeMismatchError(f"rank mismatch: {a.rank} vs {b.rank}")


def concat(a: Word, b: Word) -> Word:
    """Reduced product ab.  Length drops by twice the cancellation count."""
    _check_same_rank(a, b)
    return Word._make(a.rank, _concat_reduced(a.letters, b.letters))


def inverse(a: Word) -> Word:
    """Group inverse; reverses the word and flips every sign."""
    return a.inverse()


def concat_no_cancel(a: Word, b: Word) -> Word | None:
    """Concatenation a.b when no cancellation occurs, else None.

    Returns None exactly when the last letter of a is the inverse of the
    first letter of b.  This is a checked condition, not an error.
    """
    _check_same_rank(a, b)
    if a.letters and b.letters and a.letters[-1] == -b.letters[0]:
        return None
    return Word._make(a.rank, a.letters + b.letters)


def sphere_size(rank: int, n: int) -> int:
    """Number of reduced words of length exactly n: 2N(2N-1)^(n-1), 1 at n=0."""
    _check_rank(rank)
    if n < 0:
        raise ValueError("length must be >= 0")
    if n == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (n - 1)


def check_size_guard(rank: int, n: int, guard_limit: int = DEFAULT_GUARD_LIMIT,
                     override_guard: bool = False) -> None:
    """Refuse enumerations beyond guard_limit words unless overridden."""
    count = sphere_size(rank, n)
    if count > guard_limit and not override_guard:
        raise SizeGuardError(
            f"enumerating {count} words of length {n} over rank {rank} "
            f"exceeds the size guard ({guard_limit}); pass override_guard "
            f"to proceed anyway")


@lru_cache(maxsize=64)
def _sphere_tuples(rank: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All reduced letter tuples of length n, in lexicographic order.

    Built by extending length-(n-1) tuples with every non-cancelling
    letter in canonical order, so only valid words are ever touched.
    """
    if n == 0:
        return ((),)
    alphabet = tuple(s for g in range(1, rank + 1) for s in (g, -g))
    if n == 1:
        return tuple((s,) for s in alphabet)
    out = []
    for stem in _sphere_tuples(rank, n - 1):
        last = stem[-1]
        for s in alphabet:
            if s != -last:
                out.append(stem + (s,))
    return tuple(out)


def enumerate_words(rank: int, n: int, guard_limit: int = DEFAULT_GUARD_LIMIT,
                    override_guard: bool = False) -> list[Word]:
    """All reduced words of length exactly n, in lexicographic order.

    >>> [w.text() for w in enumerate_words(2, 1)]
    ['1', '-1', '2', '-2']
    """
    _check_rank(rank)
    if n < 0:
        raise ValueError("length must be >= 0")
    check_size_guard(rank, n, guard_limit, override_guard)
    return [Word._make(rank, t) for t in _sphere_tuples(rank, n)]


def iter_sphere_letters(rank: int, n: int,
                        guard_limit: int = DEFAULT_GUARD_LIMIT,
                        override_guard: bool = False
                        ) -> Iterator[tuple[int, ...]]:
    """Iterate the letter tuples of the length-n sphere (enumeration order)."""
    _check_rank(rank)
    check_size_guard(rank, n, guard_limit, override_guard)
    return iter(_sphere_tuples(rank, n))


@dataclass(frozen=True)
class CancellationProfile:
    """How a middle word v cancels inside the product x v y.

    left counts letters of v cancelled against x in reducing x v, right
    counts letters of v cancelled against y in reducing v y.  When the two
    zones exhaust v and letters of x and y then cancel each other, the
    pairwise counts no longer describe the product; collapsed marks this.
    For non-collapsed profiles
        len(x v y) = len(x) + len(v) + len(y) - 2 (left + right).
    """
    left: int
    right: int
    collapsed: bool


def cancellation_profile(x: Word, v: Word, y: Word) -> CancellationProfile:
    """Cancellation counts of v against x (left) and y (right) in x v y."""
    _check_same_rank(x, v)
    _check_same_rank(v, y)
    xl, vl, yl = x.letters, v.letters, y.letters
    r = 0
    cap = min(len(xl), len(vl))
    while r < cap and xl[len(xl) - 1 - r] == -vl[r]:
        r += 1
    s = 0
    cap = min(len(yl), len(vl))
    while s < cap and vl[len(vl) - 1 - s] == -yl[s]:
        s += 1
    full = _concat_reduced(_concat_reduced(xl, vl), yl)
    collapsed = len(full) != len(xl) + len(vl) + len(yl) - 2 * (r + s)
    return CancellationProfile(r, s, collapsed)
