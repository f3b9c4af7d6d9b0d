"""Asymptotics along a graded filtration: stable associated primes, socle
components, v-function tails and stability indices.

Stabilization is detected inside a finite window of levels ``1..kmax``, so
every answer here is empirical and reports the range it examined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .decomposition import associated_primes, has_maximal_associated, monomial_localize
from .monomial import (
    MonomialIdeal,
    MonomialPrime,
    SaturationTest,
    alpha,
    colon_prime,
    intersect,
    monomial_str,
    power,
    quotient_witness,
    sorted_primes,
)
from .vnumber import VResult, over_primes, v_p

POWERS = "powers"
CLOSURE_POWERS = "closure-powers"
EMPIRICAL = "empirical (window-bounded)"


class NotStabilized(Exception):
    """The window ended before the requested behaviour settled.

    ``partial`` carries whatever was computed, keyed by level.
    """

    def __init__(self, message: str, partial: dict):
        super().__init__(message)
        self.partial = partial


class NotAStablePrime(ValueError):
    pass


class SlopeLawViolation(RuntimeError):
    """A fitted slope broke a law that must hold; the run is wrong, not the
    mathematics."""


@dataclass(frozen=True)
class Window:
    kmax: int = 12
    W: int = 3
    period_max: int = 4

    def __post_init__(self):
        if not self.kmax >= self.W >= 2:
            raise ValueError(f"window needs kmax >= W >= 2, got kmax={self.kmax}, W={self.W}")
        if self.period_max < 1:
            raise ValueError("period_max must be at least 1")

    def to_json(self) -> dict:
        return {"kmax": self.kmax, "W": self.W, "periodMax": self.period_max}


class FiltrationHandle:
    """Lazy ``k -> I_[k]`` for ordinary powers or integral closures of powers.

    Levels, their associated primes and level v_p values are memoized. The
    caches only ever receive equal values for equal keys, so concurrent
    fills are harmless.
    """

    def __init__(self, base: MonomialIdeal, kind: str = POWERS):
        if kind not in (POWERS, CLOSURE_POWERS):
            raise ValueError(f"unknown filtration kind {kind!r}")
        if base.is_zero or base.is_unit:
            raise ValueError("a filtration needs a proper non-zero base ideal")
        self.base = base
        self.kind = kind
        self._levels: dict[int, MonomialIdeal] = {}
        self._ass: dict[int, frozenset[MonomialPrime]] = {}
        self._vp: dict[tuple, VResult | None] = {}

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def is_powers(self) -> bool:
        return self.kind == POWERS

    def ideal(self, k: int) -> MonomialIdeal:
        if k < 0:
            raise ValueError("filtration levels start at 0")
        if k == 0:
            return MonomialIdeal.unit(self.n)
        hit = self._levels.get(k)
        if hit is None:
            if self.is_powers:
                hit = power(self.base, k)
            else:
                from .newton import closure_power

                hit = closure_power(self.base, k)
            self._levels[k] = hit
        return hit

    def ass(self, k: int) -> frozenset[MonomialPrime]:
        if k < 1:
            raise ValueError("associated primes are taken at levels k >= 1")
        hit = self._ass.get(k)
        if hit is None:
            hit = self._ass[k] = associated_primes(self.ideal(k))
        return hit

    def v_p(self, k: int, p: MonomialPrime, ass_set: Iterable[MonomialPrime] | None = None) -> VResult:
        """``v_p(I_[k])`` with over-primes drawn from ``ass_set`` (default:
        ``Ass(I_[k])``)."""
        ass_set = self.ass(k) if ass_set is None else frozenset(ass_set)
        key = (k, p, ass_set)
        if key not in self._vp:
            self._vp[key] = v_p(self.ideal(k), p, ass_set)
        return self._vp[key]

    def v(self, k: int) -> VResult:
        best = None
        for p in sorted_primes(self.ass(k)):
            r = self.v_p(k, p)
            if best is None or r.value < best.value:
                best = r
        return best

    def localized(self, p: MonomialPrime) -> "FiltrationHandle | None":
        """Same kind of filtration on the monomial localization of the base;
        ``None`` when the localization is the unit ideal."""
        local = monomial_localize(self.base, p).ideal
        if local.is_unit or local.is_zero:
            return None
        return FiltrationHandle(local, self.kind)

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json()}


def powers_filtration(I: MonomialIdeal) -> FiltrationHandle:
    return FiltrationHandle(I, POWERS)


# --------------------------------------------------------------------------
# eventual periodicity of sampled sequences


def _periods(F: FiltrationHandle, window: Window) -> range:
    return range(1, 2) if F.is_powers else range(1, window.period_max + 1)


def _last_mismatch(ks: Iterable[int], ok: Callable[[int], bool]) -> int:
    bad = [k for k in ks if not ok(k)]
    return max(bad) if bad else 0


def _eventual_values(
    values: Mapping[int, Hashable], kmax: int, W: int, periods: Iterable[int]
) -> tuple[int, dict[int, Hashable]] | None:
    """Smallest period ``c`` whose residue classes end in ``W`` equal values;
    returns ``(c, residue -> eventual value)``."""
    for c in periods:
        eventual = {}
        for j in range(c):
            ks = [k for k in range(1, kmax + 1) if k % c == j][-W:]
            if len(ks) < W or any(k not in values for k in ks):
                break
            tail = {values[k] for k in ks}
            if len(tail) != 1:
                break
            eventual[j] = tail.pop()
        else:
            return c, eventual
    return None


@dataclass(frozen=True)
class StablePrimes:
    primes: frozenset[MonomialPrime]
    per_residue: dict[int, frozenset[MonomialPrime]]
    period: int
    stabilized_at: int
    levels: dict[int, frozenset[MonomialPrime]]
    window: Window

    def to_json(self) -> dict:
        return {
            "primes": [p.to_json() for p in sorted_primes(self.primes)],
            "perResidue": {
                str(j): [p.to_json() for p in sorted_primes(s)] for j, s in sorted(self.per_residue.items())
            },
            "period": self.period,
            "stabilizedAt": self.stabilized_at,
            "examined": [1, self.window.kmax],
            "window": self.window.to_json(),
            "status": EMPIRICAL,
        }


def ass_of_level(F: FiltrationHandle, k: int) -> frozenset[MonomialPrime]:
    return F.ass(k)


def stable_primes(F: FiltrationHandle, window: Window = Window()) -> StablePrimes:
    """``Ass^oo`` from the eventual behaviour of ``Ass(I_[k])``, k = 1..kmax."""
    levels = {k: F.ass(k) for k in range(1, window.kmax + 1)}
    found = _eventual_values(levels, window.kmax, window.W, _periods(F, window))
    if found is None:
        raise NotStabilized(
            f"associated primes not stabilized within kmax={window.kmax}",
            {"levels": {k: [p.to_json() for p in sorted_primes(s)] for k, s in levels.items()}},
        )
    c, eventual = found
    last = _last_mismatch(levels, lambda k: levels[k] == eventual[k % c])
    union = frozenset().union(*eventual.values())
    return StablePrimes(union, eventual, c, last + 1, levels, window)


def maximal_primes(primes: Iterable[MonomialPrime]) -> frozenset[MonomialPrime]:
    primes = list(primes)
    return frozenset(p for p in primes if not any(p.support < q.support for q in primes))


def stable_max(F: FiltrationHandle, window: Window = Window()) -> frozenset[MonomialPrime]:
    return maximal_primes(stable_primes(F, window).primes)


@dataclass(frozen=True)
class StablePrimeEvidence:
    prime: MonomialPrime
    is_stable: bool
    first_k: int
    last_k: int
    stabilized_at: int
    period: int
    flags: dict[int, bool]

    def to_json(self) -> dict:
        return {
            "prime": self.prime.to_json(),
            "isStable": self.is_stable,
            "examined": [self.first_k, self.last_k],
            "stabilizedAt": self.stabilized_at,
            "period": self.period,
            "flags": {str(k): v for k, v in sorted(self.flags.items())},
            "status": EMPIRICAL,
        }


def is_stable_prime(F: FiltrationHandle, p: MonomialPrime, window: Window = Window()) -> StablePrimeEvidence:
    """Whether ``p`` lies in ``Ass^oo``, decided in the localized ring.

    After setting the variables outside ``p`` to 1, ``p`` is associated to a
    level exactly when the maximal ideal of the smaller ring is associated to
    the localized level, i.e. when the localized quotient has socle.
    """
    if p.n != F.n:
        raise ValueError(f"prime lives in n={p.n}, filtration in n={F.n}")
    local = F.localized(p)
    ks = range(1, window.kmax + 1)
    if local is None:
        flags = {k: False for k in ks}
    else:
        flags = {k: has_maximal_associated(local.ideal(k)) for k in ks}
    found = _eventual_values(flags, window.kmax, window.W, _periods(F, window))
    if found is None:
        raise NotStabilized(
            f"membership of {p} not stabilized within kmax={window.kmax}",
            {"flags": {str(k): v for k, v in flags.items()}},
        )
    c, eventual = found
    last = _last_mismatch(ks, lambda k: flags[k] == eventual[k % c])
    return StablePrimeEvidence(p, any(eventual.values()), 1, window.kmax, last + 1, c, flags)


# --------------------------------------------------------------------------
# socle components


@dataclass(frozen=True)
class SocComponent:
    k: int
    prime: MonomialPrime
    numerator: MonomialIdeal
    denominator: MonomialIdeal
    alpha_value: int | None
    witness: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "prime": self.prime.to_json(),
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "alpha": self.alpha_value,
            "witness": None if self.witness is None else list(self.witness),
        }


def soc_component(
    F: FiltrationHandle, p: MonomialPrime, k: int, stable_set: Iterable[MonomialPrime]
) -> SocComponent:
    """Degree-``k`` piece of the socle module along the filtration:
    ``((I_[k+1] : p) ∩ I_[k]) / ((I_[k+1] : p) ∩ (I_[k+1] : q^oo) ∩ I_[k])``."""
    stable_set = frozenset(stable_set)
    if p not in stable_set:
        raise NotAStablePrime(f"{p} is not in the stable set")
    if k < 0:
        raise ValueError("k must be non-negative")
    upper, lower = F.ideal(k + 1), F.ideal(k)
    numerator = intersect(colon_prime(upper, p), lower)
    saturation = SaturationTest(upper, over_primes(p, stable_set)).saturation()
    denominator = intersect(numerator, saturation)
    w = quotient_witness(numerator, denominator)
    return SocComponent(k, p, numerator, denominator, None if w is None else sum(w), w)


# --------------------------------------------------------------------------
# quasi-linear tails


def _fraction_json(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Branch:
    residue: int
    slope: Fraction
    intercept: Fraction

    def at(self, k: int) -> Fraction:
        return self.slope * k + self.intercept

    def to_json(self) -> dict:
        return {
            "residue": self.residue,
            "slope": _fraction_json(self.slope),
            "intercept": _fraction_json(self.intercept),
        }


@dataclass(frozen=True)
class QuasiLinearTail:
    period: int
    branches: tuple[Branch, ...]
    stabilized_at: int
    window: Window
    samples: dict[int, int] = field(compare=False, default_factory=dict)

    def branch(self, k: int) -> Branch:
        return self.branches[k % self.period]

    def predict(self, k: int) -> Fraction:
        return self.branch(k).at(k)

    @property
    def slope(self) -> Fraction:
        """Common slope when every branch shares it."""
        slopes = {b.slope for b in self.branches}
        if len(slopes) != 1:
            raise ValueError("branches have different slopes")
        return slopes.pop()

    @property
    def intercept(self) -> Fraction:
        if self.period != 1:
            raise ValueError("intercept is per branch for period > 1")
        return self.branches[0].intercept

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "branches": [b.to_json() for b in self.branches],
            "stabilizedAt": self.stabilized_at,
            "window": self.window.to_json(),
        }


def fit_tail(samples: Mapping[int, int], window: Window, periods: Iterable[int]) -> QuasiLinearTail | None:
    """Smallest period whose residue classes end in ``W`` exactly collinear
    samples. Levels in ``1..kmax`` missing from ``samples`` count against the
    law, so the reported stabilization index also covers them."""
    kmax, W = window.kmax, window.W
    for c in periods:
        branches = []
        for j in range(c):
            ks = [k for k in range(1, kmax + 1) if k % c == j][-W:]
            if len(ks) < W or any(k not in samples for k in ks):
                break
            slope = Fraction(samples[ks[-1]] - samples[ks[0]], ks[-1] - ks[0])
            intercept = samples[ks[0]] - slope * ks[0]
            if any(slope * k + intercept != samples[k] for k in ks):
                break
            branches.append(Branch(j, slope, intercept))
        else:
            tail = QuasiLinearTail(c, tuple(branches), 0, window, dict(samples))
            last = _last_mismatch(
                range(1, kmax + 1), lambda k: k in samples and tail.predict(k) == samples[k]
            )
            return QuasiLinearTail(c, tuple(branches), last + 1, window, dict(samples))
    return None


def _slope_law_holds(F: FiltrationHandle, tail: QuasiLinearTail) -> bool:
    """Each branch slope times some multiple ``m*c`` of the period, with
    ``m*c <= kmax``, is a generator degree of ``I_[m*c]``."""
    if F.is_powers:
        return all(b.slope in F.base.degrees() for b in tail.branches)
    c = tail.period
    for b in tail.branches:
        levels = range(c, tail.window.kmax + 1, c)
        if not any(b.slope * m in F.ideal(m).degrees() for m in levels):
            return False
    return True


def v_function_p(
    F: FiltrationHandle, p: MonomialPrime, window: Window = Window(), stable: StablePrimes | None = None
) -> QuasiLinearTail:
    """Tail of ``k -> v_p(I_[k])``.

    The function is only defined at levels where ``p`` is associated; there
    the over-primes come from ``Ass(I_[k])``, which coincides with the stable
    set once the associated primes have settled.
    """
    stable = stable_primes(F, window) if stable is None else stable
    if p not in stable.primes:
        raise NotAStablePrime(f"{p} is not a stable associated prime")
    samples = {k: F.v_p(k, p).value for k in range(1, window.kmax + 1) if p in F.ass(k)}
    tail = fit_tail(samples, window, _periods(F, window))
    if tail is None:
        raise NotStabilized(f"v_p tail for {p} not detected within kmax={window.kmax}", {"samples": samples})
    if not _slope_law_holds(F, tail):
        if F.is_powers:
            raise SlopeLawViolation(f"v_p slope for {p} is not a generator degree: {tail.to_json()}")
        raise NotStabilized(
            f"v_p slope for {p} not confirmed by any level up to kmax={window.kmax}", {"samples": samples}
        )
    return tail


def v_function(F: FiltrationHandle, window: Window = Window()) -> QuasiLinearTail:
    """Tail of ``k -> v(I_[k])``; for powers the slope must equal ``alpha(I)``."""
    samples = {k: F.v(k).value for k in range(1, window.kmax + 1)}
    tail = fit_tail(samples, window, _periods(F, window))
    if tail is None:
        raise NotStabilized(f"v tail not detected within kmax={window.kmax}", {"samples": samples})
    if F.is_powers and tail.slope != alpha(F.base):
        raise SlopeLawViolation(f"v slope {tail.slope} differs from alpha = {alpha(F.base)}")
    return tail


@dataclass(frozen=True)
class StabilityIndices:
    vstab: int
    vp_stab: dict[MonomialPrime, int]
    astab: int
    astab_p: dict[MonomialPrime, int]
    window: Window

    def to_json(self) -> dict:
        return {
            "vstab": self.vstab,
            "vPstab": [{"prime": p.to_json(), "index": t} for p, t in sorted(self.vp_stab.items(), key=lambda kv: kv[0].sort_key())],
            "astab": self.astab,
            "astabP": [{"prime": p.to_json(), "index": t} for p, t in sorted(self.astab_p.items(), key=lambda kv: kv[0].sort_key())],
            "window": self.window.to_json(),
            "status": EMPIRICAL,
        }


def stability_indices(F: FiltrationHandle, window: Window = Window()) -> StabilityIndices:
    if not F.is_powers:
        raise ValueError("stability indices are defined for ordinary powers")
    stable = stable_primes(F, window)
    ks = range(1, window.kmax + 1)
    astab_p = {p: _last_mismatch(ks, lambda k, p=p: p in F.ass(k)) + 1 for p in stable.primes}
    vp_stab = {p: v_function_p(F, p, window, stable).stabilized_at for p in stable.primes}
    return StabilityIndices(v_function(F, window).stabilized_at, vp_stab, stable.stabilized_at, astab_p, window)


def rees_map_description(I: MonomialIdeal) -> dict:
    """The map ``S[y_1..y_m] -> S[t]``, ``x_i -> x_i``, ``y_j -> f_j t`` as
    data, with bidegrees ``(1,0)`` and ``(deg f_j, 1)``."""
    if I.is_unit:
        raise ValueError("Rees map of unit ideal undefined")
    if I.is_zero:
        raise ValueError("Rees map of the zero ideal undefined")
    xs = [f"x{i + 1}" for i in range(I.n)]
    return {
        "source": {"variables": xs + [f"y{j + 1}" for j in range(len(I.gens))]},
        "target": {"variables": xs + ["t"]},
        "images": [{"variable": x, "image": x} for x in xs]
        + [
            {"variable": f"y{j + 1}", "image": f"{monomial_str(g)}*t", "exponent": list(g)}
            for j, g in enumerate(I.gens)
        ],
        "bidegrees": [{"variable": x, "bidegree": [1, 0]} for x in xs]
        + [{"variable": f"y{j + 1}", "bidegree": [sum(g), 1]} for j, g in enumerate(I.gens)],
    }
