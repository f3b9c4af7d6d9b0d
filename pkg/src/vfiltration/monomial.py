"""Monomials, monomial ideals and their exact arithmetic.

An exponent vector is a plain tuple of non-negative Python ints. Ideals keep
a minimal generating set in lexicographic order, so two equal ideals always
compare, hash and print identically.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K

ExponentVector = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class ContainmentError(ValueError):
    pass


class ZeroDivisorColonWarning(UserWarning):
    """Colon by the zero ideal was requested; the unit ideal was returned."""


def exponent(entries: Iterable[int], n: int | None = None) -> ExponentVector:
    u = tuple(int(e) for e in entries)
    if any(e < 0 for e in u):
        raise ValueError(f"negative exponent in {u}")
    if n is not None and len(u) != n:
        raise DimensionMismatch(f"expected {n} entries, got {len(u)}")
    return u


def degree(u: Sequence[int]) -> int:
    return sum(u)


def unit_vector(n: int, i: int) -> ExponentVector:
    return tuple(1 if j == i else 0 for j in range(n))


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_str(u: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(u):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal of ``K[x1..xn]`` given by its minimal generators.

    Build instances with :func:`minimalize` (or :meth:`from_generators`);
    the raw constructor trusts that ``gens`` is already minimal and sorted.
    """

    n: int
    gens: tuple[ExponentVector, ...] = field(default=())

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], n: int) -> "MonomialIdeal":
        return minimalize(gens, n)

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls(n, ())

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls(n, ((0,) * n,))

    @classmethod
    def _from_array(cls, arr: np.ndarray, n: int) -> "MonomialIdeal":
        arr = K.minimal_rows(arr)
        return cls(n, tuple(sorted(tuple(int(v) for v in row) for row in arr.tolist())))

    @cached_property
    def array(self) -> np.ndarray:
        return K.as_array(self.gens, self.n)

    @cached_property
    def _hash(self) -> int:
        return hash((self.n, self.gens))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.n == other.n and self.gens == other.gens

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return any(not any(g) for g in self.gens)

    @property
    def is_proper(self) -> bool:
        return not self.is_unit

    def degrees(self) -> set[int]:
        return {sum(g) for g in self.gens}

    def support(self) -> frozenset[int]:
        return frozenset(i for g in self.gens for i, e in enumerate(g) if e)

    def __contains__(self, u) -> bool:
        return contains(self, u)

    def __le__(self, other: "MonomialIdeal") -> bool:
        """Ideal inclusion."""
        _check_same(self, other)
        if not self.gens:
            return True
        return bool(K.member(other.array, self.array).all())

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_sum(self, other)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return product(self, other)

    def __and__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return intersect(self, other)

    def __str__(self) -> str:
        if not self.gens:
            return "0"
        return ", ".join(monomial_str(g) for g in self.gens)

    def __repr__(self) -> str:
        return f"MonomialIdeal(n={self.n}, ({self}))"

    def to_json(self) -> dict:
        return {"n": self.n, "gens": [list(g) for g in self.gens]}


@dataclass(frozen=True)
class MonomialPrime:
    """Prime generated by the variables with (0-based) indices in ``support``."""

    n: int
    support: frozenset[int]

    def __post_init__(self):
        if not self.support:
            raise ValueError("a monomial prime needs at least one variable")
        if any(i < 0 or i >= self.n for i in self.support):
            raise DimensionMismatch(f"variable index out of range for n={self.n}: {sorted(self.support)}")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "MonomialPrime":
        return cls(n, frozenset(indices))

    @classmethod
    def maximal(cls, n: int) -> "MonomialPrime":
        return cls(n, frozenset(range(n)))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.support))

    @property
    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.n, tuple(sorted(unit_vector(self.n, i) for i in self.support)))

    @property
    def mask(self) -> tuple[bool, ...]:
        return tuple(i in self.support for i in range(self.n))

    def sort_key(self) -> tuple[int, ...]:
        return self.indices

    def __str__(self) -> str:
        return "(" + ",".join(f"x{i + 1}" for i in self.indices) + ")"

    def to_json(self) -> list[int]:
        return [i + 1 for i in self.indices]


def sorted_primes(primes: Iterable[MonomialPrime]) -> list[MonomialPrime]:
    return sorted(primes, key=MonomialPrime.sort_key)


def _check_same(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.n != J.n:
        raise DimensionMismatch(f"ambient rings differ: n={I.n} vs n={J.n}")


def _check_vector(I: MonomialIdeal, u: Sequence[int]) -> ExponentVector:
    if len(u) != I.n:
        raise DimensionMismatch(f"vector of length {len(u)} in a ring with n={I.n}")
    return exponent(u)


def minimalize(gens: Iterable[Sequence[int]], n: int | None = None) -> MonomialIdeal:
    """Minimal generating set of the ideal spanned by ``gens``."""
    rows = [tuple(int(e) for e in g) for g in gens]
    lengths = {len(r) for r in rows}
    if n is None:
        if len(lengths) != 1:
            raise DimensionMismatch("cannot infer the ambient ring") if lengths else ValueError(
                "pass n for an empty generator set"
            )
        n = lengths.pop()
    elif lengths - {n}:
        raise DimensionMismatch(f"mixed vector lengths {sorted(lengths)} for n={n}")
    if any(e < 0 for r in rows for e in r):
        raise ValueError("exponents must be non-negative")
    if not rows:
        return MonomialIdeal.zero(n)
    return MonomialIdeal._from_array(K.as_array(set(rows), n), n)


def contains(I: MonomialIdeal, u: Sequence[int]) -> bool:
    u = _check_vector(I, u)
    return any(divides(g, u) for g in I.gens)


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same(I, J)
    return minimalize(I.gens + J.gens, I.n)


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same(I, J)
    if I.is_zero or J.is_zero:
        return MonomialIdeal.zero(I.n)
    A, B = K.widen(I.array), K.widen(J.array)
    rows = (A[:, None, :] + B[None, :, :]).reshape(-1, I.n)
    return MonomialIdeal._from_array(K.widen(_unique_rows(rows)), I.n)


def _unique_rows(rows: np.ndarray) -> np.ndarray:
    if rows.dtype == object:
        return K.as_array(set(map(tuple, rows.tolist())), rows.shape[1])
    return np.unique(rows, axis=0)


@lru_cache(maxsize=512)
def power(I: MonomialIdeal, k: int) -> MonomialIdeal:
    """``I^k``; ``I^0`` is the unit ideal."""
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return MonomialIdeal.unit(I.n)
    if k == 1:
        return I
    half = power(I, k // 2)
    out = product(half, half)
    return product(out, I) if k % 2 else out


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """Intersection via componentwise maxima (lcms) of generator pairs.

    Generators of either ideal already inside the other are kept as they
    are; only the remaining pairs need their lcm formed.
    """
    _check_same(I, J)
    if I.is_zero or J.is_zero:
        return MonomialIdeal.zero(I.n)
    A, B = I.array, J.array
    a_in = K.member(B, A)
    b_in = K.member(A, B)
    parts = [A[a_in], B[b_in]]
    A2, B2 = A[~a_in], B[~b_in]
    if len(A2) and len(B2):
        parts.append(_unique_rows(np.maximum(A2[:, None, :], B2[None, :, :]).reshape(-1, I.n)))
    return MonomialIdeal._from_array(np.vstack(parts), I.n)


def colon_monomial(I: MonomialIdeal, u: Sequence[int]) -> MonomialIdeal:
    """``(I : x^u)``."""
    u = _check_vector(I, u)
    if I.is_zero:
        return I
    return MonomialIdeal._from_array(K.colon_rows(K.widen(I.array), u), I.n)


def is_prime_ideal(J: MonomialIdeal) -> bool:
    return bool(J.gens) and all(sum(g) == 1 for g in J.gens)


def colon_prime(I: MonomialIdeal, p: MonomialPrime) -> MonomialIdeal:
    """``(I : p)`` for a monomial prime, through its corner monomials."""
    if p.n != I.n:
        raise DimensionMismatch(f"prime in n={p.n}, ideal in n={I.n}")
    if I.is_zero or I.is_unit:
        return I
    extra = K.corners(I.array, p.mask)
    if not len(extra):
        return I
    return MonomialIdeal._from_array(np.vstack([I.array, extra]), I.n)


def colon_ideal(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """``(I : J)``, the intersection of ``(I : g)`` over generators ``g`` of J.

    ``(I : 0)`` is returned as the unit ideal with a
    :class:`ZeroDivisorColonWarning`.
    """
    _check_same(I, J)
    if J.is_zero:
        warnings.warn("colon by the zero ideal; returning the unit ideal", ZeroDivisorColonWarning, stacklevel=2)
        return MonomialIdeal.unit(I.n)
    if is_prime_ideal(J):
        return colon_prime(I, MonomialPrime(I.n, J.support()))
    out = None
    for g in J.gens:
        part = colon_monomial(I, g)
        out = part if out is None else intersect(out, part)
    return out


def saturate(I: MonomialIdeal, J: MonomialIdeal) -> tuple[MonomialIdeal, int]:
    """``I : J^oo`` by iterating ``I <- (I : J)``; returns the fixpoint and
    the number of strict enlargements."""
    _check_same(I, J)
    if J.is_zero:
        raise ValueError("saturation by the zero ideal")
    steps = 0
    while True:
        nxt = colon_ideal(I, J)
        if nxt == I:
            return I, steps
        I, steps = nxt, steps + 1


def radical_supports(I: MonomialIdeal) -> list[int]:
    """Minimal variable supports (as bitmasks) of the generators of ``I``."""
    return _minimal_masks(_row_masks(I.array))


def _row_masks(arr: np.ndarray) -> list[int]:
    if not len(arr):
        return []
    weights = [1 << i for i in range(arr.shape[1])]
    return sorted({sum(w for w, e in zip(weights, row) if e) for row in arr.tolist()})


def _minimal_masks(masks: Iterable[int]) -> list[int]:
    out: list[int] = []
    for m in sorted(set(masks), key=lambda b: bin(b).count("1")):
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def product_of_primes_masks(primes: Iterable[MonomialPrime]) -> list[int]:
    """Supports of the generators of the product of the given primes.

    The empty product is the unit ideal, whose single generator has empty
    support.
    """
    masks = {0}
    for P in primes:
        masks = {m | (1 << i) for m in masks for i in P.support}
    return _minimal_masks(masks)


class SaturationTest:
    """Membership in ``I : q^oo`` where ``q`` is a product of monomial primes.

    ``u`` is in the saturation iff every squarefree generator ``x_t`` of the
    product lies in the radical of ``(I : u)``, i.e. iff ``u`` lies in
    ``(I : x_t^oo)`` for every such ``t``. Each of those is ``I`` with the
    variables of ``t`` set to 1, so the saturation is never materialized.
    """

    def __init__(self, I: MonomialIdeal, primes: Iterable[MonomialPrime]):
        self.ideal = I
        self.q_masks = product_of_primes_masks(primes)
        arr = K.widen(I.array)
        self._pieces = []
        for t in self.q_masks:
            piece = arr.copy()
            piece[:, [i for i in range(I.n) if t >> i & 1]] = 0
            self._pieces.append(K.minimal_rows(piece))

    def contains_many(self, U: np.ndarray) -> np.ndarray:
        out = np.ones(len(U), dtype=bool)
        for piece in self._pieces:
            out &= K.member(piece, U)
        return out

    def __call__(self, u: Sequence[int]) -> bool:
        return bool(self.contains_many(K.as_array([tuple(u)], self.ideal.n))[0])

    def saturation(self) -> MonomialIdeal:
        """The saturation as an ideal: the intersection of the pieces."""
        out = None
        for piece in self._pieces:
            J = MonomialIdeal._from_array(piece, self.ideal.n)
            out = J if out is None else intersect(out, J)
        return out


def alpha(I: MonomialIdeal) -> int:
    if I.is_zero:
        raise ValueError("alpha of zero ideal")
    return min(sum(g) for g in I.gens)


def first_outside(num: MonomialIdeal, inside: np.ndarray) -> ExponentVector | None:
    """Least (degree, then lex) generator of ``num`` whose flag in ``inside``
    (aligned with ``num.gens``) is false."""
    rest = [g for g, flag in zip(num.gens, inside) if not flag]
    return min(rest, key=lambda g: (sum(g), g)) if rest else None


def quotient_witness(num: MonomialIdeal, den: MonomialIdeal) -> ExponentVector | None:
    """Lowest-degree monomial of ``num`` outside ``den`` (None for the zero
    module). A lowest one can always be taken among the generators of
    ``num``: any witness is a multiple of some generator, which is then a
    witness too."""
    _check_same(num, den)
    if not den <= num:
        raise ContainmentError("denominator is not contained in numerator")
    return first_outside(num, K.member(den.array, num.array))


def quotient_alpha(num: MonomialIdeal, den: MonomialIdeal) -> int | None:
    """Initial degree of ``num/den``; ``None`` stands for the zero module."""
    w = quotient_witness(num, den)
    return None if w is None else sum(w)


def monomials_of_degree(n: int, d: int):
    for combo in combinations_with_replacement(range(n), d):
        u = [0] * n
        for i in combo:
            u[i] += 1
        yield tuple(u)


def monomials_up_to(n: int, d: int):
    for e in range(d + 1):
        yield from monomials_of_degree(n, e)
