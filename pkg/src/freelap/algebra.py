"""Exact rational group-algebra arithmetic over tensor powers of F_N.

Elements are finite formal sums of simple tensors x_1 (x) ... (x) x_k of
reduced words, with Fraction coefficients.  Multiplication is factorwise
convolution, the trace reads off the identity coefficient, and the
2-norm squared is the sum of squared coefficients (the simple tensors
form an orthonormal family).  No floating point anywhere.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .words import (
    ShapeMismatchError,
    Word,
    _concat_reduced,
    _invert_letters,
    _shortlex_key,
    parse_word,
)

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class TensorWord:
    """A simple tensor: a k-tuple of reduced words of common rank."""

    __slots__ = ("factors", "_hash")

    def __init__(self, factors: Iterable[Word]):
        factors = tuple(factors)
        if not factors:
            raise ValueError("tensor depth must be >= 1")
        rank = factors[0].rank
        for f in factors:
            if not isinstance(f, Word):
                raise TypeError(f"tensor factor {f!r} is not a Word")
            if f.rank != rank:
                raise ShapeMismatchError("tensor factors have mixed ranks")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "_hash", hash(factors))

    def __setattr__(self, name, value):
        raise AttributeError("TensorWord is immutable")

    @property
    def rank(self) -> int:
        return self.factors[0].rank

    @property
    def depth(self) -> int:
        return len(self.factors)

    def is_diagonal(self) -> bool:
        """True when all factors are the same word."""
        first = self.factors[0]
        return all(f == first for f in self.factors[1:])

    def inverse(self) -> "TensorWord":
        return TensorWord(tuple(f.inverse() for f in self.factors))

    def sort_key(self) -> tuple:
        return tuple(_shortlex_key(f.letters) for f in self.factors)

    def text(self) -> str:
        """Semicolon-joined word texts, e.g. '1,-2;2'."""
        return ";".join(f.text() for f in self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorWord) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "TensorWord") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"TensorWord({self.text()!r})"


def simple_tensor(words: Iterable[Word]) -> TensorWord:
    return TensorWord(words)


def diagonal_tensor(word: Word, depth: int) -> TensorWord:
    """The diagonal embedding v (x) ... (x) v at the given depth."""
    if depth < 1:
        raise ValueError("tensor depth must be >= 1")
    return TensorWord((word,) * depth)


def parse_tensor(text: str, rank: int) -> TensorWord:
    """Parse 'w1;w2;...;wk' where each wi is in the word text format."""
    parts = text.split(";")
    return TensorWord(tuple(parse_word(p, rank) for p in parts))


class AlgebraElement:
    """Finite rational linear combination of simple tensors.

    Stored sparsely as TensorWord -> Fraction with no zero coefficients.
    Instances are treated as immutable values; all operations return new
    elements.
    """

    __slots__ = ("rank", "depth", "_terms")

    def __init__(self, rank: int, depth: int,
                 terms: Mapping[TensorWord, Fraction] | None = None):
        if depth < 1:
            raise ValueError("tensor depth must be >= 1")
        clean: dict[TensorWord, Fraction] = {}
        if terms:
            for t, c in terms.items():
                if t.depth != depth or t.rank != rank:
                    raise ShapeMismatchError(
                        f"term {t!r} does not fit shape (N={rank}, k={depth})")
                c = Fraction(c)
                if c:
                    clean[t] = c
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @classmethod
    def _make(cls, rank: int, depth: int,
              terms: dict[TensorWord, Fraction]) -> "AlgebraElement":
        """Internal fast path: terms must already be clean (no zeros)."""
        el = object.__new__(cls)
        object.__setattr__(el, "rank", rank)
        object.__setattr__(el, "depth", depth)
        object.__setattr__(el, "_terms", terms)
        return el

    # -- inspection ----------------------------------------------------

    def terms(self) -> Iterator[tuple[TensorWord, Fraction]]:
        return iter(self._terms.items())

    def sorted_terms(self) -> list[tuple[TensorWord, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coeff(self, t: TensorWord) -> Fraction:
        return self._terms.get(t, _ZERO)

    def support_size(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_factor_length(self) -> int:
        """Longest word occurring in any factor of the support (0 if zero)."""
        best = 0
        for t in self._terms:
            for f in t.factors:
                if len(f) > best:
                    best = len(f)
        return best

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraElement) and self.rank == other.rank
                and self.depth == other.depth and self._terms == other._terms)

    def __hash__(self):
        raise TypeError("AlgebraElement is not hashable")

    def __repr__(self) -> str:
        return (f"AlgebraElement(N={self.rank}, k={self.depth}, "
                f"{self.support_size()} terms)")

    # -- arithmetic ----------------------------------------------------

    def _check_shape(self, other: "AlgebraElement") -> None:
        if self.rank != other.rank or self.depth != other.depth:
            raise ShapeMismatchError(
                f"shape mismatch: (N={self.rank}, k={self.depth}) vs "
                f"(N={other.rank}, k={other.depth})")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_shape(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            new = out.get(t, _ZERO) + c
            if new:
                out[t] = new
            else:
                out.pop(t, None)
        return AlgebraElement._make(self.rank, self.depth, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement._make(
            self.rank, self.depth, {t: -c for t, c in self._terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, scalar) -> "AlgebraElement":
        scalar = Fraction(scalar)
        if not scalar:
            return AlgebraElement._make(self.rank, self.depth, {})
        return AlgebraElement._make(
            self.rank, self.depth,
            {t: c * scalar for t, c in self._terms.items()})

    def __rmul__(self, scalar) -> "AlgebraElement":
        if isinstance(scalar, (int, Fraction)):
            return self.scale(scalar)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented


def zero_element(rank: int, depth: int) -> AlgebraElement:
    return AlgebraElement._make(rank, depth, {})


def identity_element(rank: int, depth: int) -> AlgebraElement:
    e = Word.identity(rank)
    return AlgebraElement._make(rank, depth,
                                {diagonal_tensor(e, depth): _ONE})


def tensor_element(t: TensorWord, coeff=1) -> AlgebraElement:
    """The element coeff * t."""
    return AlgebraElement(t.rank, t.depth, {t: Fraction(coeff)})


def word_element(w: Word, depth: int = 1, coeff=1) -> AlgebraElement:
    """The element coeff * w^(x)depth (diagonal embedding)."""
    return tensor_element(diagonal_tensor(w, depth), coeff)


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Coefficientwise sum; zeros are pruned."""
    return a + b


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Convolution product, extended bilinearly from factorwise
    concatenation of simple tensors."""
    a._check_shape(b)
    rank, depth = a.rank, a.depth
    out: dict[TensorWord, Fraction] = {}
    make_word = Word._make
    for ta, ca in a._terms.items():
        fa = ta.factors
        for tb, cb in b._terms.items():
            fb = tb.factors
            key = TensorWord(tuple(
                make_word(rank, _concat_reduced(fa[i].letters, fb[i].letters))
                for i in range(depth)))
            c = out.get(key)
            if c is None:
                out[key] = ca * cb
            else:
                c = c + ca * cb
                if c:
                    out[key] = c
                else:
                    del out[key]
    return AlgebraElement._make(rank, depth, out)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    """The * operation: factorwise inverse on tensors; coefficients are
    rational, hence fixed by conjugation."""
    out = {t.inverse(): c for t, c in a._terms.items()}
    return AlgebraElement._make(a.rank, a.depth, out)


def trace(a: AlgebraElement) -> Fraction:
    """Coefficient of the identity tensor e (x) ... (x) e."""
    e = diagonal_tensor(Word.identity(a.rank), a.depth)
    return a.coeff(e)


def inner(a: AlgebraElement, b: AlgebraElement) -> Fraction:
    """trace(a* b).  Simple tensors are orthonormal, so this is the sparse
    dot product of coefficient vectors."""
    a._check_shape(b)
    small, big = (a._terms, b._terms) if len(a._terms) <= len(b._terms) \
        else (b._terms, a._terms)
    total = _ZERO
    for t, c in small.items():
        other = big.get(t)
        if other is not None:
            total += c * other
    return total


def norm2_squared(a: AlgebraElement) -> Fraction:
    """||a||_2^2 = trace(a* a) = sum of squared coefficients."""
    total = _ZERO
    for c in a._terms.values():
        total += c * c
    return total


# -- JSON serialization -----------------------------------------------


def element_to_json_dict(a: AlgebraElement) -> dict:
    return {
        "N": a.rank,
        "k": a.depth,
        "terms": [
            {"tensor": [f.text() for f in t.factors], "coeff": str(c)}
            for t, c in a.sorted_terms()
        ],
    }


def element_from_json_dict(data: Mapping) -> AlgebraElement:
    rank = int(data["N"])
    depth = int(data["k"])
    terms: dict[TensorWord, Fraction] = {}
    for entry in data.get("terms", ()):
        factors = entry["tensor"]
        if len(factors) != depth:
            raise ShapeMismatchError(
                f"tensor {factors!r} does not have depth {depth}")
        t = TensorWord(tuple(parse_word(f, rank) for f in factors))
        c = Fraction(entry["coeff"])
        terms[t] = terms.get(t, _ZERO) + c
    return AlgebraElement(rank, depth, terms)


def element_to_json(a: AlgebraElement) -> str:
    return json.dumps(element_to_json_dict(a), indent=2) + "\n"


def element_from_json(text: str) -> AlgebraElement:
    return element_from_json_dict(json.loads(text))
