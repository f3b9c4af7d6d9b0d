"""Irreducible decomposition, associated primes and monomial localization."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import _kernels as K
from .monomial import (
    DimensionMismatch,
    MonomialIdeal,
    MonomialPrime,
    intersect,
    minimalize,
)


class DecompositionUndefined(ValueError):
    pass


@dataclass(frozen=True)
class IrreducibleComponent:
    ideal: MonomialIdeal

    def __post_init__(self):
        if any(sum(1 for e in g if e) != 1 for g in self.ideal.gens):
            raise ValueError(f"not generated by pure powers: {self.ideal}")

    @property
    def radical_support(self) -> frozenset[int]:
        return self.ideal.support()

    @property
    def prime(self) -> MonomialPrime:
        return MonomialPrime(self.ideal.n, self.radical_support)

    def __str__(self) -> str:
        return f"({self.ideal})"


def _check_decomposable(I: MonomialIdeal) -> None:
    if I.is_zero or I.is_unit:
        raise DecompositionUndefined(f"decomposition undefined for the {'zero' if I.is_zero else 'unit'} ideal")


def irreducible_decomposition(I: MonomialIdeal) -> frozenset[IrreducibleComponent]:
    """Irredundant irreducible components of ``I`` by recursive splitting.

    A generator ``x_i^a * w`` with ``w`` coprime to ``x_i`` splits the ideal
    as ``(I + x_i^a) ∩ (I + w)``. The pivot is the first generator in
    canonical order with two or more variables, split at its lowest-index
    variable.
    """
    _check_decomposable(I)
    raw = _split(I)
    comps = sorted(set(raw), key=lambda Q: Q.gens)
    # Monomial ideals form a distributive lattice, so an irreducible component
    # containing the intersection of the others already contains one of them.
    keep = [Q for Q in comps if not any(R != Q and R <= Q for R in comps)]
    return frozenset(IrreducibleComponent(Q) for Q in keep)


@lru_cache(maxsize=4096)
def _split(I: MonomialIdeal) -> tuple[MonomialIdeal, ...]:
    for g in I.gens:
        support = [i for i, e in enumerate(g) if e]
        if len(support) >= 2:
            i = support[0]
            pure = tuple(g[i] if j == i else 0 for j in range(I.n))
            rest = tuple(0 if j == i else g[j] for j in range(I.n))
            left = minimalize(I.gens + (pure,), I.n)
            right = minimalize(I.gens + (rest,), I.n)
            return _split(left) + _split(right)
    return (I,)


@dataclass(frozen=True)
class Localization:
    """Ideal in a smaller ring; ``variables[j]`` is the original index of
    the j-th variable of that ring."""

    ideal: MonomialIdeal
    variables: tuple[int, ...]

    def lift_prime(self, local: MonomialPrime, n: int) -> MonomialPrime:
        return MonomialPrime(n, frozenset(self.variables[j] for j in local.support))


def monomial_localize(I: MonomialIdeal, p: MonomialPrime) -> Localization:
    """Set every variable outside ``p`` to 1."""
    if p.n != I.n:
        raise DimensionMismatch(f"prime in n={p.n}, ideal in n={I.n}")
    keep = p.indices
    gens = [tuple(g[i] for i in keep) for g in I.gens]
    return Localization(minimalize(gens, len(keep)) if gens else MonomialIdeal.zero(len(keep)), keep)


def has_maximal_associated(J: MonomialIdeal) -> bool:
    """Whether the maximal ideal of J's ring is associated to J, i.e. S/J has
    a non-zero socle."""
    if J.is_zero or J.is_unit:
        return False
    if len(J.support()) < J.n:
        return False
    return len(K.corners(J.array, (True,) * J.n, first_only=True)) > 0


def _candidate_masks(I: MonomialIdeal) -> list[frozenset[int]]:
    support = sorted(I.support())
    out = []
    for r in range(1, len(support) + 1):
        for combo in combinations(support, r):
            s = frozenset(combo)
            # p must contain I: every generator meets p
            if all(any(g[i] for i in s) for g in I.gens):
                out.append(s)
    return out


@lru_cache(maxsize=2048)
def associated_primes(I: MonomialIdeal) -> frozenset[MonomialPrime]:
    """``Ass(I)``: the supports of the irreducible components.

    Computed without decomposing: ``p`` is associated iff the maximal ideal
    of the smaller ring is associated to the monomial localization at ``p``.
    """
    _check_decomposable(I)
    found = set()
    for s in _candidate_masks(I):
        p = MonomialPrime(I.n, s)
        if has_maximal_associated(monomial_localize(I, p).ideal):
            found.add(p)
    return frozenset(found)


def associated_primes_by_decomposition(I: MonomialIdeal) -> frozenset[MonomialPrime]:
    return frozenset(Q.prime for Q in irreducible_decomposition(I))


def intersection_of(components, n: int) -> MonomialIdeal:
    out = None
    for Q in components:
        J = Q.ideal if isinstance(Q, IrreducibleComponent) else Q
        out = J if out is None else intersect(out, J)
    return MonomialIdeal.unit(n) if out is None else out
