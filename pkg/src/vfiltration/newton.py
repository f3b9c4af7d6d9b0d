"""Newton polyhedra of monomial ideals and integral closures of powers.

A lattice point ``a`` lies in ``k * NP(A)`` when some rational ``lambda >= 0``
with ``sum(lambda) = k`` has ``sum(lambda_i * a_i) <= a``. Three exact
routes decide this:

* a phase-one simplex over :class:`fractions.Fraction` (with a certificate),
* the vertices of the blocking polyhedron ``{w >= 0 : <w, g> >= 1}``, whose
  normals cut out ``NP(A)``; used for fast scans,
* Fourier-Motzkin elimination of ``lambda``; used as an independent check.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .filtration import CLOSURE_POWERS, FiltrationHandle
from .monomial import DimensionMismatch, ExponentVector, MonomialIdeal, minimalize


class UnitIdealError(ValueError):
    pass


# --------------------------------------------------------------------------
# exact phase-one simplex


def feasible_point(A_eq: Sequence[Sequence[int]], b_eq: Sequence[int]) -> list[Fraction] | None:
    """Some ``x >= 0`` with ``A_eq x = b_eq``, or ``None`` if there is none.

    Two-phase simplex, phase one only: artificial variables are driven out
    of the basis with Bland's rule, which cannot cycle.
    """
    rows = len(A_eq)
    cols = len(A_eq[0]) if rows else 0
    T = []
    for r in range(rows):
        sign = -1 if b_eq[r] < 0 else 1
        row = [Fraction(sign * v) for v in A_eq[r]]
        row += [Fraction(1 if j == r else 0) for j in range(rows)]
        row.append(Fraction(sign * b_eq[r]))
        T.append(row)
    width = cols + rows
    basis = list(range(cols, width))
    # reduced costs of "minimize sum of artificials"
    cost = [-sum(T[r][j] for r in range(rows)) for j in range(width + 1)]
    for j in range(cols, width):
        cost[j] = Fraction(0)
    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for r in range(rows):
            if T[r][entering] > 0:
                ratio = T[r][-1] / T[r][entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:  # unbounded phase one cannot happen; guard anyway
            break
        _pivot(T, cost, best[1], entering)
        basis[best[1]] = entering
    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * cols
    for r, j in enumerate(basis):
        if j < cols:
            x[j] = T[r][-1]
    return x


def _pivot(T: list[list[Fraction]], cost: list[Fraction], r: int, c: int) -> None:
    pivot = T[r][c]
    T[r] = [v / pivot for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [v - f * w for v, w in zip(row, T[r])]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [v - f * w for v, w in zip(cost, T[r])]


# --------------------------------------------------------------------------


class NewtonPolyhedron:
    """``conv(A) + R^n_{>=0}`` for a finite non-empty set ``A`` of exponents."""

    def __init__(self, generators: Iterable[Sequence[int]], n: int | None = None):
        ideal = minimalize(generators, n) if n is not None else minimalize(list(generators))
        if ideal.is_zero:
            raise ValueError("empty generator set")
        self.n = ideal.n
        # only minimal generators matter: others sit inside the orthant shift
        self.generators: tuple[ExponentVector, ...] = ideal.gens
        self.ideal = ideal

    @classmethod
    def of_ideal(cls, I: MonomialIdeal) -> "NewtonPolyhedron":
        return cls(I.gens, I.n)

    def _check(self, a: Sequence[int], k: int) -> tuple[int, ...]:
        if len(a) != self.n:
            raise DimensionMismatch(f"point of length {len(a)} for n={self.n}")
        if k < 1:
            raise ValueError("k must be positive")
        return tuple(int(v) for v in a)

    def certificate(self, a: Sequence[int], k: int = 1) -> list[Fraction] | None:
        """Weights ``lambda`` proving ``a`` lies in ``k * NP``, or ``None``."""
        a = self._check(a, k)
        m, n = len(self.generators), self.n
        # variables: lambda_1..lambda_m, then one slack per coordinate
        A_eq = [[1] * m + [0] * n]
        A_eq += [[g[j] for g in self.generators] + [1 if i == j else 0 for i in range(n)] for j in range(n)]
        x = feasible_point(A_eq, [k, *a])
        return None if x is None else x[:m]

    def contains(self, a: Sequence[int], k: int = 1) -> bool:
        return self.certificate(a, k) is not None

    @cached_property
    def facets(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Integer pairs ``(w, t)`` with ``a`` in ``k * NP`` iff ``a >= 0`` and
        ``<w, a> >= k t`` for every pair.

        They come from the vertices of the blocking polyhedron
        ``{w >= 0 : <w, g> >= 1 for g in A}``; each vertex is cut out by some
        zero coordinates plus tight generators.
        """
        if any(not any(g) for g in self.generators):
            raise UnitIdealError("unit ideal: the polyhedron contains 0")
        n, G = self.n, self.generators
        found = set()
        for z in range(n):
            for Z in combinations(range(n), z):
                free = [j for j in range(n) if j not in Z]
                for S in combinations(range(len(G)), n - z):
                    w_free = _solve([[G[s][j] for j in free] for s in S], [1] * len(S))
                    if w_free is None or any(v < 0 for v in w_free):
                        continue
                    w = [Fraction(0)] * n
                    for j, v in zip(free, w_free):
                        w[j] = v
                    if all(sum(wj * gj for wj, gj in zip(w, g)) >= 1 for g in G):
                        found.add(tuple(w))
        out = []
        for w in found:
            scale = lcm(*(v.denominator for v in w))
            ints = [int(v * scale) for v in w]
            d = gcd(*ints, scale)
            out.append((tuple(v // d for v in ints), scale // d))
        return tuple(sorted(out))

    def contains_many(self, points: np.ndarray, k: int = 1) -> np.ndarray:
        points = np.asarray(points, dtype=object if _needs_object(self.facets, points, k) else np.int64)
        out = (points >= 0).all(axis=1)
        for w, t in self.facets:
            out &= points @ np.asarray(w, dtype=points.dtype) >= k * t
        return out

    @cached_property
    def eliminated(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return fourier_motzkin(self.generators)

    def contains_by_elimination(self, a: Sequence[int], k: int = 1) -> bool:
        a = self._check(a, k)
        return all(sum(c * v for c, v in zip(coef, a)) + d * k >= 0 for coef, d in self.eliminated)


def _needs_object(facets, points, k) -> bool:
    """Whether ``<w, a>`` or ``k t`` might leave int64."""
    if not facets:
        return False
    big_w = max(max(w) for w, _ in facets)
    big_t = max(t for _, t in facets)
    top = int(np.max(points)) if np.size(points) else 0
    return len(facets[0][0]) * big_w * top + k * big_t >= 2**62


def _solve(M: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Unique solution of a square system over the rationals, else None."""
    size = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(M, rhs)]
    for c in range(size):
        r = next((i for i in range(c, size) if A[i][c] != 0), None)
        if r is None:
            return None
        A[c], A[r] = A[r], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for i in range(size):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [v - f * w for v, w in zip(A[i], A[c])]
    return [A[i][size] for i in range(size)]


def fourier_motzkin(generators: Sequence[Sequence[int]]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Inequalities ``<c, a> + d k >= 0`` describing ``{(a, k) : a in k NP}``.

    The last weight is replaced by ``k - sum(others)``, then the remaining
    weights are eliminated one at a time. Rows are kept primitive and
    deduplicated; redundant rows are harmless.
    """
    G = [tuple(g) for g in generators]
    m, n = len(G), len(G[0])
    # row layout: weights lambda_1..lambda_{m-1} | a_1..a_n | k
    rows = set()
    for i in range(m - 1):
        rows.add(_primitive([1 if j == i else 0 for j in range(m - 1)] + [0] * n + [0]))
    rows.add(_primitive([-1] * (m - 1) + [0] * n + [1]))
    for j in range(n):
        lam = [G[m - 1][j] - G[i][j] for i in range(m - 1)]
        rows.add(_primitive(lam + [1 if t == j else 0 for t in range(n)] + [-G[m - 1][j]]))
    for v in range(m - 1):
        pos = [r for r in rows if r[v] > 0]
        neg = [r for r in rows if r[v] < 0]
        nxt = {r for r in rows if r[v] == 0}
        for p in pos:
            for q in neg:
                nxt.add(_primitive([-q[v] * x + p[v] * y for x, y in zip(p, q)]))
        rows = nxt
    out = set()
    for r in rows:
        coef, d = r[m - 1 : m - 1 + n], r[-1]
        if any(coef) or d < 0:
            out.add((tuple(coef), d))
    return tuple(sorted(out))


def _primitive(row: list[int]) -> tuple[int, ...]:
    d = gcd(*row)
    return tuple(v // d for v in row) if d > 1 else tuple(row)


# --------------------------------------------------------------------------


def np_membership(A: NewtonPolyhedron | Iterable[Sequence[int]], a: Sequence[int], k: int) -> bool:
    if not isinstance(A, NewtonPolyhedron):
        A = NewtonPolyhedron(list(A))
    return A.contains(a, k)


def closure_power(I: MonomialIdeal | NewtonPolyhedron, k: int) -> MonomialIdeal:
    """Minimal generators of the integral closure of ``I^k``.

    Minimal lattice points of ``k * NP`` lie in the box ``a_i <= k M_i``
    (``M_i`` the largest i-th generator coordinate). Over the box of all
    but the last coordinate, the least admissible last coordinate ``l(p)``
    follows from the facets, and ``(p, l(p))`` is minimal exactly when
    lowering any positive coordinate of ``p`` strictly raises ``l``.
    """
    P = I if isinstance(I, NewtonPolyhedron) else NewtonPolyhedron.of_ideal(I)
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return MonomialIdeal.unit(P.n)
    return _closure_power(P.ideal, k)


@lru_cache(maxsize=256)
def _closure_power(base: MonomialIdeal, k: int) -> MonomialIdeal:
    P = _polyhedron(base)
    facets = P.facets
    n = P.n
    support = sorted(base.support())
    tops = [k * max(g[i] for g in P.generators) for i in support]
    last, lead = support[-1], support[:-1]
    # facets restricted to the support; off-support coordinates stay 0
    W = np.array([[w[i] for i in support] for w, _ in facets], dtype=object)
    T = [k * t for _, t in facets]
    dims = [t + 1 for t in tops[:-1]]
    grid = np.indices(dims).reshape(len(dims), -1).T if dims else np.zeros((1, 0), dtype=np.int64)
    grid = grid.astype(object) if _needs_object(facets, np.array(tops), k) else grid.astype(np.int64)
    sentinel = tops[-1] + 1
    need = np.zeros(len(grid), dtype=grid.dtype)
    dead = np.zeros(len(grid), dtype=bool)
    for row, t in zip(W, T):
        partial = grid @ row[:-1].astype(grid.dtype) if len(lead) else np.zeros(len(grid), dtype=grid.dtype)
        short = t - partial
        w_last = int(row[-1])
        if w_last == 0:
            dead |= short > 0
        else:
            # ceil division on integers, clamped at 0
            req = -((-short) // w_last)
            need = np.maximum(need, np.maximum(req, 0))
    need = np.where(dead, sentinel, need)
    L = need.reshape(dims) if dims else need
    minimal = ~dead
    for axis in range(len(dims)):
        lower = np.full_like(L, sentinel + 1)
        idx = [slice(None)] * len(dims)
        src = [slice(None)] * len(dims)
        idx[axis] = slice(1, None)
        src[axis] = slice(None, -1)
        lower[tuple(idx)] = L[tuple(src)]
        minimal &= (lower > L).reshape(-1)
    rows = []
    for p, l in zip(grid[minimal].tolist(), need[minimal].tolist()):
        a = [0] * n
        for i, v in zip(lead, p):
            a[i] = int(v)
        a[last] = int(l)
        rows.append(a)
    return minimalize(rows, n)


@lru_cache(maxsize=256)
def _polyhedron(base: MonomialIdeal) -> NewtonPolyhedron:
    return NewtonPolyhedron.of_ideal(base)


def certify_closure_power(I: MonomialIdeal, k: int, J: MonomialIdeal | None = None) -> bool:
    """Check every generator of the computed closure with the simplex route:
    it lies in ``k * NP`` and no ``a - e_j`` does."""
    P = NewtonPolyhedron.of_ideal(I)
    J = closure_power(I, k) if J is None else J
    for a in J.gens:
        if not P.contains(a, k):
            return False
        for j, v in enumerate(a):
            if v and P.contains(tuple(x - (i == j) for i, x in enumerate(a)), k):
                return False
    return True


def closure_filtration(I: MonomialIdeal) -> FiltrationHandle:
    if I.is_unit:
        raise UnitIdealError("unit ideal")
    if I.is_zero:
        raise ValueError("closure filtration of the zero ideal")
    return FiltrationHandle(I, CLOSURE_POWERS)
