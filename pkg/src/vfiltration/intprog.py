"""The integer programs behind local v-numbers of monomial ideals.

For a finite set ``A`` of exponent vectors (``0`` not in ``A``), a non-empty
set ``B`` of unit vectors and ``k >= 1``, the program asks for ``c`` of
least modulus ``|c|`` such that for every ``d``

    c + d in P_k(A)   iff   d in P_1(B),

where ``P_k(A)`` is the exponent set of ``I(A)^k`` (or of its integral
closure in the closure variant). Equivalently ``(I(A)^k : x^c) = I(B)``, so
the optimum is the local v-number of the level ideal at the prime ``I(B)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product as cartesian
from typing import Iterable, Sequence

import numpy as np

from .decomposition import associated_primes
from .filtration import (
    NotStabilized,
    QuasiLinearTail,
    SlopeLawViolation,
    Window,
    powers_filtration,
    stable_primes,
    v_function_p,
)
from .monomial import ExponentVector, MonomialIdeal, MonomialPrime, minimalize, monomials_up_to, power
from .newton import NewtonPolyhedron, closure_filtration, closure_power
from .vnumber import v_p

POWER = "power"
CLOSURE = "closure"


@dataclass(frozen=True)
class IPInstance:
    A: tuple[ExponentVector, ...]
    B: frozenset[int]
    k: int
    variant: str = POWER

    def __post_init__(self):
        if not self.A:
            raise ValueError("A must be non-empty")
        lengths = {len(a) for a in self.A}
        if len(lengths) != 1:
            raise ValueError("vectors in A have different lengths")
        if any(not any(a) for a in self.A):
            raise ValueError("0 must not lie in A")
        if any(v < 0 for a in self.A for v in a):
            raise ValueError("A must consist of non-negative vectors")
        if not self.B:
            raise ValueError("B must be non-empty")
        if any(i < 0 or i >= self.n for i in self.B):
            raise ValueError(f"B refers to a variable outside 1..{self.n}")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.variant not in (POWER, CLOSURE):
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def make(cls, A: Iterable[Sequence[int]], B: Iterable[int], k: int, variant: str = POWER) -> "IPInstance":
        """``B`` holds 0-based variable indices."""
        return cls(tuple(tuple(int(v) for v in a) for a in A), frozenset(B), k, variant)

    @classmethod
    def from_json(cls, data: dict) -> "IPInstance":
        inst = cls.make(data["A"], [i - 1 for i in data["B"]], data["k"], data.get("variant", POWER))
        if "n" in data and data["n"] != inst.n:
            raise ValueError(f"n={data['n']} does not match vectors of length {inst.n}")
        return inst

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def ideal(self) -> MonomialIdeal:
        return minimalize(self.A, self.n)

    @property
    def prime(self) -> MonomialPrime:
        return MonomialPrime(self.n, self.B)

    def level(self) -> MonomialIdeal:
        if self.variant == POWER:
            return power(self.ideal, self.k)
        return closure_power(self.ideal, self.k)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "A": [list(a) for a in self.A],
            "B": sorted(i + 1 for i in self.B),
            "k": self.k,
            "variant": self.variant,
        }


@dataclass(frozen=True)
class IPSolution:
    c: ExponentVector
    modulus: int
    optimal: bool

    def to_json(self) -> dict:
        return {"c": list(self.c), "modulus": self.modulus, "optimal": self.optimal}


def solve_ip(inst: IPInstance) -> IPSolution | None:
    """Optimal solution through the local v-number, or ``None`` when the
    prime ``I(B)`` is not associated to the level ideal."""
    level = inst.level()
    ass = associated_primes(level)
    if inst.prime not in ass:
        return None
    r = v_p(level, inst.prime, ass)
    return IPSolution(r.witness, r.value, True)


@dataclass(frozen=True)
class BruteForceResult:
    solution: IPSolution | None
    box_limited: bool = field(default=False)


def brute_force_ip(inst: IPInstance, box: Sequence[int]) -> BruteForceResult:
    """Scan ``c`` in the box by increasing modulus and test the defining
    biconditional directly on a finite set of ``d``.

    Test set: every ``d`` with ``|d| <= D * k + |c|``, where ``D`` bounds the
    degree of a minimal generator of the level ideal at ``k = 1`` (the
    largest generator degree for powers; ``sum_i M_i`` for the closure, whose
    minimal generators lie in the box ``a_i <= k M_i``). The colon by ``x^c``
    is generated in degrees at most ``D * k``, and two monomial ideals
    agreeing on all monomials up to the larger generator degree are equal.

    Membership in the level is tabulated once over a dense grid without
    building the level ideal: upward closure of the sums of ``k`` elements of
    ``A`` for powers, the Fourier-Motzkin description of the Newton
    polyhedron for the closure.
    """
    if len(box) != inst.n or any(b < 0 for b in box):
        raise ValueError("box must give one non-negative cap per variable")
    n, k = inst.n, inst.k
    A = np.array(inst.A, dtype=np.int64)
    D = int(A.sum(axis=1).max()) if inst.variant == POWER else int(A.max(axis=0).sum())
    reach = D * k + sum(box)
    side = [b + reach + 1 for b in box]
    if inst.variant == POWER:
        level = np.zeros(side, dtype=bool)
        for combo in combinations_with_replacement(inst.A, k):
            corner = np.sum(combo, axis=0)
            if all(v < s for v, s in zip(corner, side)):
                level[tuple(slice(int(v), None) for v in corner)] = True
    else:
        points = np.indices(side).reshape(n, -1).T
        level = np.ones(len(points), dtype=bool)
        for coef, d in NewtonPolyhedron(inst.A, n).eliminated:
            level &= points @ np.array(coef, dtype=np.int64) + d * k >= 0
        level = level.reshape(side)
    d_all = np.array(list(monomials_up_to(n, reach)), dtype=np.int64)
    d_deg = d_all.sum(axis=1)
    in_B = d_all[:, sorted(inst.B)].any(axis=1)
    candidates = sorted(cartesian(*(range(b + 1) for b in box)), key=lambda c: (sum(c), c))
    for c in candidates:
        keep = d_deg <= D * k + sum(c)
        shifted = d_all[keep] + np.array(c, dtype=np.int64)
        if np.array_equal(level[tuple(shifted.T)], in_B[keep]):
            return BruteForceResult(IPSolution(tuple(c), sum(c), True))
    return BruteForceResult(None, box_limited=True)


@dataclass(frozen=True)
class AsymptoticLaw:
    feasible: bool
    tail: QuasiLinearTail | None
    stable_primes: tuple[MonomialPrime, ...]
    stabilized_at: int

    def to_json(self) -> dict:
        return {
            "eventuallyFeasible": self.feasible,
            "tail": None if self.tail is None else self.tail.to_json(),
            "stablePrimes": [p.to_json() for p in self.stable_primes],
            "stabilizedAt": self.stabilized_at,
        }


def asymptotic_law(
    A: Iterable[Sequence[int]], B: Iterable[int], variant: str = POWER, window: Window = Window()
) -> AsymptoticLaw:
    """Optimal modulus as a function of ``k``: feasible for all large ``k``
    iff ``I(B)`` is a stable associated prime, and then eventually
    (quasi-)linear. For powers the slope must be the modulus of some
    element of ``A``."""
    probe = IPInstance.make(A, B, 1, variant)
    F = powers_filtration(probe.ideal) if variant == POWER else closure_filtration(probe.ideal)
    stable = stable_primes(F, window)
    ordered = tuple(sorted(stable.primes, key=MonomialPrime.sort_key))
    if probe.prime not in stable.primes:
        return AsymptoticLaw(False, None, ordered, stable.stabilized_at)
    tail = v_function_p(F, probe.prime, window, stable)
    if variant == POWER and not {b.slope for b in tail.branches} <= {sum(a) for a in probe.A}:
        raise SlopeLawViolation(f"slope {tail.to_json()} is not the modulus of an element of A")
    return AsymptoticLaw(True, tail, ordered, stable.stabilized_at)


__all__ = [
    "AsymptoticLaw",
    "BruteForceResult",
    "CLOSURE",
    "IPInstance",
    "IPSolution",
    "NotStabilized",
    "POWER",
    "asymptotic_law",
    "brute_force_ip",
    "solve_ip",
]
