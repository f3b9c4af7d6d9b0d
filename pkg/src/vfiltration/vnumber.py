"""v-numbers and local v-numbers of monomial ideals.

For ``p`` in ``Ass(I)`` let ``q`` be the product of the associated primes
strictly containing ``p`` (the unit ideal when there are none). Then

    v_p(I) = alpha( (I : p) / ((I : p) ∩ (I : q^oo)) )

and the lowest-degree generator of the numerator outside the denominator is
a monomial ``f`` with ``(I : f) = p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .decomposition import associated_primes
from .monomial import (
    ExponentVector,
    MonomialIdeal,
    MonomialPrime,
    SaturationTest,
    colon_monomial,
    colon_prime,
    first_outside,
    monomials_of_degree,
    sorted_primes,
)


class NotAssociatedError(ValueError):
    pass


class NoWitnessError(RuntimeError):
    """The quotient vanished: the associated-prime set passed in is stale."""


@dataclass(frozen=True)
class VResult:
    value: int
    witness: ExponentVector
    prime: MonomialPrime

    def to_json(self) -> dict:
        return {"value": self.value, "witness": list(self.witness), "prime": self.prime.to_json()}


def over_primes(p: MonomialPrime, ass_set: Iterable[MonomialPrime]) -> list[MonomialPrime]:
    return sorted_primes(P for P in ass_set if p.support < P.support)


def v_p(I: MonomialIdeal, p: MonomialPrime, ass_set: Iterable[MonomialPrime]) -> VResult:
    """Local v-number of ``I`` at ``p``; ``ass_set`` supplies the primes used
    to build ``q`` (``Ass(I)`` for a single ideal, the stable set along a
    filtration)."""
    ass_set = frozenset(ass_set)
    if p not in ass_set:
        raise NotAssociatedError(f"{p} is not an associated prime")
    return _v_p(I, p, ass_set)


@lru_cache(maxsize=4096)
def _v_p(I: MonomialIdeal, p: MonomialPrime, ass_set: frozenset[MonomialPrime]) -> VResult:
    numerator = colon_prime(I, p)
    # I itself sits inside the saturation, so its generators are rejected too
    saturation = SaturationTest(I, over_primes(p, ass_set))
    w = first_outside(numerator, saturation.contains_many(numerator.array))
    if w is None:
        raise NoWitnessError(f"no witness exists for {p}; is the associated-prime set current?")
    return VResult(sum(w), w, p)


def v_number(I: MonomialIdeal) -> VResult:
    """``v(I) = min v_p(I)`` over ``Ass(I)``; ties go to the lexicographically
    smallest prime."""
    ass = associated_primes(I)
    best = None
    for p in sorted_primes(ass):
        r = v_p(I, p, ass)
        if best is None or r.value < best.value:
            best = r
    return best


def all_v_p(I: MonomialIdeal, ass_set: Iterable[MonomialPrime] | None = None) -> dict[MonomialPrime, VResult]:
    ass = frozenset(associated_primes(I) if ass_set is None else ass_set)
    return {p: v_p(I, p, ass) for p in sorted_primes(ass)}


def v_p_oracle(I: MonomialIdeal, p: MonomialPrime, degree_cap: int) -> int | None:
    """Brute force: least degree of a monomial ``u`` with ``(I : u) = p``,
    scanning every monomial up to ``degree_cap``."""
    target = p.ideal
    for d in range(degree_cap + 1):
        for u in monomials_of_degree(I.n, d):
            if colon_monomial(I, u) == target:
                return d
    return None
