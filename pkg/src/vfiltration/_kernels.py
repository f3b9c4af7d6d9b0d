"""Array kernels shared by the monomial modules.

Generators are stored as rows of a 2-D integer array. Rows whose entries fit
comfortably in int64 go through numba-compiled loops; anything larger falls
back to the same loops run as plain Python over ``object`` arrays, so
exponents never overflow.
"""

from __future__ import annotations

import numba as nb
import numpy as np

# Sums of up to a few thousand entries must stay inside int64.
SAFE_ENTRY = 2**40


def as_array(rows, n: int) -> np.ndarray:
    rows = list(rows)
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    big = max(max(r) if r else 0 for r in rows)
    if big >= SAFE_ENTRY:
        arr = np.empty((len(rows), n), dtype=object)
        for i, r in enumerate(rows):
            arr[i, :] = [int(v) for v in r]
        return arr
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), n)


def widen(arr: np.ndarray) -> np.ndarray:
    """Switch to object dtype when entries leave the safe int64 range."""
    if arr.dtype != object and arr.size and arr.max() >= SAFE_ENTRY:
        return arr.astype(object)
    return arr


@nb.njit(cache=True)
def _minimal_mask(G):
    m, n = G.shape
    deg = np.zeros(m, np.int64)
    for r in range(m):
        for c in range(n):
            deg[r] += G[r, c]
    order = np.argsort(deg, kind="mergesort")
    keep = np.zeros(m, np.bool_)
    kept = np.empty(m, np.int64)
    cnt = 0
    for idx in range(m):
        r = order[idx]
        dominated = False
        for t in range(cnt):
            q = kept[t]
            below = True
            for c in range(n):
                if G[q, c] > G[r, c]:
                    below = False
                    break
            # rows of equal degree only dominate when identical
            if below:
                dominated = True
                break
        if not dominated:
            keep[r] = True
            kept[cnt] = r
            cnt += 1
    return keep


@nb.njit(cache=True)
def _minimal_mask_packed(P, deg, guard):
    # g <= u in every field iff no guard bit is borrowed in (u | guard) - g
    m = P.shape[0]
    order = np.argsort(deg, kind="mergesort")
    keep = np.zeros(m, np.bool_)
    kept = np.empty(m, np.uint64)
    cnt = 0
    for idx in range(m):
        r = order[idx]
        u = P[r] | guard
        dominated = False
        for t in range(cnt):
            if ((u - kept[t]) & guard) == guard:
                dominated = True
                break
        if not dominated:
            keep[r] = True
            kept[cnt] = P[r]
            cnt += 1
    return keep


@nb.njit(cache=True)
def _minimal_mask_any(G):
    m, n = G.shape
    top = 0
    for r in range(m):
        for c in range(n):
            if G[r, c] > top:
                top = G[r, c]
    width = 1
    while top > 0:
        width += 1
        top >>= 1
    if width * n > 64:
        return _minimal_mask(G)
    guard = np.uint64(0)
    P = np.zeros(m, np.uint64)
    deg = np.zeros(m, np.int64)
    for c in range(n):
        guard |= np.uint64(1) << np.uint64(c * width + width - 1)
    for r in range(m):
        word = np.uint64(0)
        for c in range(n):
            word |= np.uint64(G[r, c]) << np.uint64(c * width)
            deg[r] += G[r, c]
        P[r] = word
    return _minimal_mask_packed(P, deg, guard)


def _minimal_mask_py(G):
    m = G.shape[0]
    keep = np.zeros(m, dtype=bool)
    kept: list[int] = []
    for r in sorted(range(m), key=lambda r: sum(G[r])):
        row = G[r]
        if not any(all(G[q, c] <= row[c] for c in range(G.shape[1])) for q in kept):
            keep[r] = True
            kept.append(r)
    return keep


def minimal_mask(G: np.ndarray) -> np.ndarray:
    """Which rows are minimal under the componentwise order (one copy of
    each duplicate survives)."""
    if len(G) <= 1:
        return np.ones(len(G), dtype=bool)
    return _minimal_mask_py(G) if G.dtype == object else _minimal_mask_any(G)


def minimal_rows(G: np.ndarray) -> np.ndarray:
    """Minimal rows under componentwise order, in their original order."""
    return G[minimal_mask(G)]


@nb.njit(cache=True)
def _member(G, U):
    r = U.shape[0]
    m, n = G.shape
    out = np.zeros(r, np.bool_)
    for a in range(r):
        for q in range(m):
            ok = True
            for c in range(n):
                if G[q, c] > U[a, c]:
                    ok = False
                    break
            if ok:
                out[a] = True
                break
    return out


def member(G: np.ndarray, U: np.ndarray) -> np.ndarray:
    """For each row u of U, whether some row of G lies below u."""
    if len(U) == 0:
        return np.zeros(0, dtype=bool)
    if len(G) == 0:
        return np.zeros(len(U), dtype=bool)
    if G.dtype == object or U.dtype == object:
        return np.array([bool((G <= u).all(axis=1).any()) for u in U], dtype=bool)
    return _member(G, U)


def colon_rows(G: np.ndarray, u) -> np.ndarray:
    """Generators (not yet minimal) of the colon by the monomial ``u``."""
    return np.maximum(G - np.asarray(u, dtype=G.dtype), 0)


def _slice(G: np.ndarray, var: int, bound) -> np.ndarray:
    """Generators with ``x_var`` set to 1 after bounding its exponent."""
    rows = G[G[:, var] <= bound]
    rows[:, var] = 0
    return minimal_rows(rows)


def corners(G: np.ndarray, pmask: tuple[bool, ...], *, first_only: bool = False) -> np.ndarray:
    """Minimal monomials ``u`` outside the ideal with ``u + e_i`` inside for
    every flagged variable ``i``.

    These are exactly the minimal generators of ``(J : p)`` not lying in
    ``J`` when ``p`` is the prime on the flagged variables. With every
    variable flagged they are the socle monomials of ``S/J``.

    Variables outside ``p`` are sliced away first (their exponent in a
    minimal corner is a jump value of some generator); then the flagged
    variables are peeled one at a time, where ``u_i + 1`` must itself be a
    jump value. A sliced variable keeps its column, zeroed, so results need
    no re-insertion.
    """
    memo: dict = {}
    n = len(pmask)
    live = (True,) * n
    return _corners(minimal_rows(G), tuple(pmask), live, memo, first_only)


def _key(G):
    return G.tobytes() if G.dtype != object else tuple(map(tuple, G.tolist()))


def _corners(G, pmask, live, memo, first_only):
    key = (len(G), _key(G), live, first_only)
    hit = memo.get(key)
    if hit is None:
        hit = memo[key] = _corners_uncached(G, pmask, live, memo, first_only)
    return hit


def _corners_uncached(G, pmask, live, memo, first_only):
    n = G.shape[1]
    nothing = np.zeros((0, n), dtype=G.dtype)
    if len(G) and not G.any(axis=1).all():
        return nothing  # unit ideal
    flagged = [i for i in range(n) if live[i] and pmask[i]]
    if not flagged:
        return np.zeros((1, n), dtype=G.dtype)
    if len(G) == 0 or not all(G[:, i].any() for i in flagged):
        return nothing

    def jumps(i):
        return sorted(set(G[:, i].tolist()))

    outside = [i for i in range(n) if live[i] and not pmask[i]]
    if outside:
        var = min(outside, key=lambda i: len(jumps(i)))
        rest = tuple(False if j == var else live[j] for j in range(n))
        found = []
        previous = None
        for t in sorted(set(jumps(var)) | {0}):
            A = _slice(G, var, t)
            if previous is not None and A.shape == previous.shape and (A == previous).all():
                continue
            previous = A
            S = _corners(A, pmask, rest, memo, first_only)
            if len(S):
                S = S.copy()
                S[:, var] = t
                found.append(S)
                if first_only:
                    break
        if not found:
            return nothing
        return minimal_rows(np.vstack(found))

    var = min(flagged, key=lambda i: len(jumps(i)))
    rest = tuple(False if j == var else live[j] for j in range(n))
    found = []
    for v in jumps(var):
        if v == 0:
            continue
        # the membership filter below needs every corner of the slice
        S = _corners(_slice(G, var, v - 1), pmask, rest, memo, False)
        if not len(S):
            continue
        S = S[member(_slice(G, var, v), S)]
        if len(S):
            S = S.copy()
            S[:, var] = v - 1
            found.append(S)
            if first_only:
                break
    if not found:
        return nothing
    return np.vstack(found)
