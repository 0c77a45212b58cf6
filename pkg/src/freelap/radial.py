"""Radial basis elements, the radial subalgebra, and the conditional
expectation onto it.

The n-th radial basis element is the sum of the diagonal tensors v^(x)k
over all reduced words v of length n.  These elements are pairwise
orthogonal with ||.||_2^2 equal to the sphere size 2N(2N-1)^(n-1), and
they satisfy a three-term product recurrence that makes the span a
commutative algebra whose structure constants do not depend on the
tensor depth k.

The conditional expectation of an element a is the orthogonal projection
onto the radial span: coefficient n is trace(a * basis_n) divided by the
basis norm squared.  Since a has finite support, only finitely many n
contribute, so everything here is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraElement, TensorWord, diagonal_tensor, multiply
from .words import (
    DEFAULT_GUARD_LIMIT,
    Word,
    _check_rank,
    check_size_guard,
    iter_sphere_letters,
    sphere_size,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def radial_norm_squared(rank: int, n: int) -> int:
    """Closed form for the squared 2-norm of the n-th radial basis element:
    1 at n=0, else 2N(2N-1)^(n-1).  Independent of the tensor depth."""
    return sphere_size(rank, n)


def radial_basis_element(rank: int, depth: int, n: int,
                         guard_limit: int = DEFAULT_GUARD_LIMIT,
                         override_guard: bool = False) -> AlgebraElement:
    """Sum of v^(x)depth over all reduced words v of length n."""
    if depth < 1:
        raise ValueError("tensor depth must be >= 1")
    check_size_guard(rank, n, guard_limit, override_guard)
    make_word = Word._make
    terms = {}
    for letters in iter_sphere_letters(rank, n, guard_limit, override_guard):
        w = make_word(rank, letters)
        terms[TensorWord((w,) * depth)] = _ONE
    return AlgebraElement._make(rank, depth, terms)


def simple_tensor_nonvanishing(t: TensorWord) -> bool:
    """Whether the conditional expectation of the simple tensor t is
    nonzero; this happens exactly when all factors coincide."""
    return t.is_diagonal()


class RadialCoeffs:
    """An element of the radial span as a finite coefficient vector.

    coeffs[n] multiplies the n-th radial basis element; trailing zeros
    are trimmed.  Immutable value type.
    """

    __slots__ = ("rank", "depth", "coeffs")

    def __init__(self, rank: int, depth: int,
                 coeffs: Iterable[Fraction] = ()):
        _check_rank(rank)
        if depth < 1:
            raise ValueError("tensor depth must be >= 1")
        vec = [Fraction(c) for c in coeffs]
        while vec and not vec[-1]:
            vec.pop()
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "coeffs", tuple(vec))

    def __setattr__(self, name, value):
        raise AttributeError("RadialCoeffs is immutable")

    @classmethod
    def unit(cls, rank: int, depth: int, n: int) -> "RadialCoeffs":
        """The coefficient vector of the n-th radial basis element."""
        return cls(rank, depth, (_ZERO,) * n + (_ONE,))

    def coeff(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else _ZERO

    def max_index(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (isinstance(other, RadialCoeffs) and self.rank == other.rank
                and self.depth == other.depth and self.coeffs == other.coeffs)

    def __hash__(self):
        raise TypeError("RadialCoeffs is not hashable")

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        return f"RadialCoeffs(N={self.rank}, k={self.depth}, [{body}])"

    def _check_shape(self, other: "RadialCoeffs") -> None:
        if self.rank != other.rank or self.depth != other.depth:
            raise ValueError(
                f"shape mismatch: (N={self.rank}, k={self.depth}) vs "
                f"(N={other.rank}, k={other.depth})")

    def __add__(self, other: "RadialCoeffs") -> "RadialCoeffs":
        self._check_shape(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RadialCoeffs(self.rank, self.depth,
                            (self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "RadialCoeffs") -> "RadialCoeffs":
        self._check_shape(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RadialCoeffs(self.rank, self.depth,
                            (self.coeff(i) - other.coeff(i) for i in range(n)))

    def scale(self, scalar) -> "RadialCoeffs":
        scalar = Fraction(scalar)
        return RadialCoeffs(self.rank, self.depth,
                            (c * scalar for c in self.coeffs))

    def __rmul__(self, scalar) -> "RadialCoeffs":
        if isinstance(scalar, (int, Fraction)):
            return self.scale(scalar)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RadialCoeffs):
            self._check_shape(other)
            return RadialCoeffs(
                self.rank, self.depth,
                _radial_product_coeffs(self.coeffs, other.coeffs, self.rank))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def norm2_squared(self) -> Fraction:
        """Sum of c_n^2 times the basis norm squared (orthogonal basis)."""
        total = _ZERO
        for n, c in enumerate(self.coeffs):
            if c:
                total += c * c * radial_norm_squared(self.rank, n)
        return total

    def inner(self, other: "RadialCoeffs") -> Fraction:
        """Trace pairing of two radial elements (the basis is orthogonal
        and self-adjoint, coefficients rational)."""
        self._check_shape(other)
        total = _ZERO
        for n in range(min(len(self.coeffs), len(other.coeffs))):
            c = self.coeffs[n] * other.coeffs[n]
            if c:
                total += c * radial_norm_squared(self.rank, n)
        return total

    def to_json_dict(self) -> dict:
        return {"N": self.rank, "k": self.depth,
                "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "RadialCoeffs":
        return cls(int(data["N"]), int(data["k"]),
                   (Fraction(c) for c in data.get("coeffs", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RadialCoeffs":
        return cls.from_json_dict(json.loads(text))


def _apply_degree_one(coeffs: Sequence[Fraction], rank: int) -> list[Fraction]:
    """Multiply a radial coefficient vector by the degree-1 basis element.

    The product rule is tridiagonal: basis_1 basis_n equals
    basis_(n+1) + (2N-1) basis_(n-1) for n >= 2, while at the boundary
    basis_1 basis_1 = basis_2 + 2N basis_0 (each length-1 word cancels
    against exactly its own inverse, giving multiplicity 2N).
    """
    q = 2 * rank - 1
    out = [_ZERO] * (len(coeffs) + 1)
    for n, c in enumerate(coeffs):
        if not c:
            continue
        out[n + 1] += c
        if n == 1:
            out[0] += (q + 1) * c
        elif n >= 2:
            out[n - 1] += q * c
    return out


def _radial_product_coeffs(a: Sequence[Fraction], b: Sequence[Fraction],
                           rank: int) -> list[Fraction]:
    """Product of two radial coefficient vectors.

    Uses the ascending recurrence basis_(m+1) = basis_1 basis_m -
    kappa_m basis_(m-1) with kappa_1 = 2N and kappa_m = 2N-1 for m >= 2,
    applied to b.  Exact, and independent of the tensor depth.
    """
    if not a or not b:
        return []
    q = 2 * rank - 1
    out = [_ZERO] * (len(a) + len(b) - 1)

    def accumulate(scalar: Fraction, vec: Sequence[Fraction]) -> None:
        if not scalar:
            return
        for i, c in enumerate(vec):
            if c:
                out[i] += scalar * c

    u_prev = list(b)                     # basis_0 applied to b
    accumulate(a[0], u_prev)
    if len(a) == 1:
        return out
    u_curr = _apply_degree_one(b, rank)  # basis_1 applied to b
    accumulate(a[1], u_curr)
    for m in range(2, len(a)):
        kappa = 2 * rank if m == 2 else q
        u_next = _apply_degree_one(u_curr, rank)
        for i, c in enumerate(u_prev):
            if c:
                u_next[i] -= kappa * c
        u_prev, u_curr = u_curr, u_next
        accumulate(a[m], u_curr)
    return out


def cond_exp(a: AlgebraElement) -> RadialCoeffs:
    """Conditional expectation onto the radial span.

    Coefficient n is trace(a * basis_n) / ||basis_n||_2^2.  The trace
    pairing picks out the diagonal tensors of a whose factor length is n,
    so it is evaluated by bucketing the diagonal part of the support.
    Trace preserving (coefficient 0 equals trace(a)) and contractive.
    """
    buckets: dict[int, Fraction] = {}
    for t, c in a.terms():
        if t.is_diagonal():
            p = len(t.factors[0])
            buckets[p] = buckets.get(p, _ZERO) + c
    if not buckets:
        return RadialCoeffs(a.rank, a.depth, ())
    top = max(buckets)
    coeffs = [
        buckets.get(n, _ZERO) / radial_norm_squared(a.rank, n)
        for n in range(top + 1)
    ]
    return RadialCoeffs(a.rank, a.depth, coeffs)


def radial_to_element(r: RadialCoeffs,
                      guard_limit: int = DEFAULT_GUARD_LIMIT,
                      override_guard: bool = False) -> AlgebraElement:
    """Expand a radial coefficient vector into an explicit element.

    Left inverse of cond_exp on radial elements.
    """
    out: dict[TensorWord, Fraction] = {}
    make_word = Word._make
    for n, c in enumerate(r.coeffs):
        if not c:
            continue
        for letters in iter_sphere_letters(r.rank, n, guard_limit,
                                           override_guard):
            w = make_word(r.rank, letters)
            out[TensorWord((w,) * r.depth)] = c
    return AlgebraElement._make(r.rank, r.depth, out)


@dataclass(frozen=True)
class RecurrenceReport:
    """Outcome of checking the degree-1 product identity at one index.

    For n >= 2 the identity checked is
        basis_1 basis_n = basis_n basis_1 = basis_(n+1) + (2N-1) basis_(n-1);
    at the boundary n=1 the correct identity is
        basis_1 basis_1 = basis_2 + 2N basis_0,
    and boundary is True in that case.
    """
    rank: int
    depth: int
    n: int
    boundary: bool
    commutes: bool
    matches: bool

    @property
    def holds(self) -> bool:
        return self.commutes and self.matches

    def identity_text(self) -> str:
        if self.boundary:
            return f"b1*b1 = b2 + {2 * self.rank}*b0"
        return f"b1*b{self.n} = b{self.n + 1} + {2 * self.rank - 1}*b{self.n - 1}"


def verify_recurrence(rank: int, depth: int, n: int,
                      guard_limit: int = DEFAULT_GUARD_LIMIT,
                      override_guard: bool = False) -> RecurrenceReport:
    """Check the three-term product identity at index n by direct
    convolution of explicit elements (no recursion shortcut)."""
    if n < 1:
        raise ValueError("recurrence index must be >= 1")
    check_size_guard(rank, n + 1, guard_limit, override_guard)
    w1 = radial_basis_element(rank, depth, 1, guard_limit, override_guard)
    wn = radial_basis_element(rank, depth, n, guard_limit, override_guard)
    left = multiply(w1, wn)
    right = multiply(wn, w1)
    wnext = radial_basis_element(rank, depth, n + 1, guard_limit,
                                 override_guard)
    wprev = radial_basis_element(rank, depth, n - 1, guard_limit,
                                 override_guard)
    mult = 2 * rank if n == 1 else 2 * rank - 1
    expected = wnext + mult * wprev
    return RecurrenceReport(
        rank=rank, depth=depth, n=n, boundary=(n == 1),
        commutes=(left == right), matches=(left == expected))


def verify_recurrence_range(rank: int, depth: int, n_max: int,
                            guard_limit: int = DEFAULT_GUARD_LIMIT,
                            override_guard: bool = False
                            ) -> list[RecurrenceReport]:
    """Recurrence reports for n = 1 .. n_max (n=1 is the boundary case)."""
    return [verify_recurrence(rank, depth, n, guard_limit, override_guard)
            for n in range(1, n_max + 1)]
