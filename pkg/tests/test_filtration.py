from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import ideals
from vfiltration.filtration import (
    EMPIRICAL,
    FiltrationHandle,
    NotAStablePrime,
    NotStabilized,
    Window,
    ass_of_level,
    fit_tail,
    is_stable_prime,
    powers_filtration,
    rees_map_description,
    soc_component,
    stability_indices,
    stable_max,
    stable_primes,
    v_function,
    v_function_p,
)
from vfiltration.monomial import MonomialIdeal, MonomialPrime, minimalize, product
from vfiltration.newton import closure_filtration
from vfiltration.vnumber import v_p

TRI = minimalize([(1, 1, 0), (1, 0, 1), (0, 1, 1)], 3)
X = minimalize([(1,)])
M3 = MonomialPrime.maximal(3)
C5 = minimalize([(1, 1, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 1, 1, 0), (0, 0, 0, 1, 1), (1, 0, 0, 0, 1)])
SMALL = Window(kmax=6)


def P(n, *idx):
    return MonomialPrime(n, frozenset(i - 1 for i in idx))


def test_handle_basics():
    F = powers_filtration(TRI)
    assert F.ideal(0) == MonomialIdeal.unit(3)
    assert F.ideal(1) == TRI
    with pytest.raises(ValueError):
        F.ideal(-1)
    with pytest.raises(ValueError):
        FiltrationHandle(MonomialIdeal.unit(2))
    with pytest.raises(ValueError):
        FiltrationHandle(TRI, "symbolic")


@pytest.mark.parametrize("kind", ["powers", "closure"])
@given(J=ideals(max_gens=3, max_exp=3), k=st.integers(0, 4), l=st.integers(0, 4))
def test_filtration_axioms(kind, J, k, l):
    if J.is_unit:
        return
    F = powers_filtration(J) if kind == "powers" else closure_filtration(J)
    assert F.ideal(k + 1) <= F.ideal(k)
    assert product(F.ideal(k), F.ideal(l)) <= F.ideal(k + l)


def test_ass_of_level():
    F = powers_filtration(TRI)
    height_two = {P(3, 1, 2), P(3, 1, 3), P(3, 2, 3)}
    assert ass_of_level(F, 1) == height_two
    assert ass_of_level(F, 2) == height_two | {M3}
    assert all(ass_of_level(powers_filtration(X), k) == {P(1, 1)} for k in range(1, 5))
    with pytest.raises(ValueError):
        ass_of_level(F, 0)


def test_stable_primes_small():
    found = stable_primes(powers_filtration(X), SMALL)
    assert found.primes == {P(1, 1)} and found.stabilized_at == 1
    found = stable_primes(powers_filtration(TRI), SMALL)
    assert len(found.primes) == 4 and found.stabilized_at == 2
    assert found.to_json()["status"] == EMPIRICAL
    assert found.to_json()["examined"] == [1, 6]


def test_stable_max_small():
    assert stable_max(powers_filtration(X), SMALL) == {P(1, 1)}
    assert stable_max(powers_filtration(TRI), SMALL) == {M3}


def test_not_stabilized_carries_partial_data():
    with pytest.raises(NotStabilized) as info:
        stable_primes(powers_filtration(C5), Window(kmax=3, W=3))
    assert set(info.value.partial["levels"]) == {1, 2, 3}
    found = stable_primes(powers_filtration(C5), SMALL)
    assert MonomialPrime.maximal(5) in found.primes and found.stabilized_at == 3


def test_is_stable_prime_small():
    ev = is_stable_prime(powers_filtration(TRI), M3, SMALL)
    assert ev.is_stable and ev.flags[1] is False and ev.flags[2] is True
    assert ev.to_json()["examined"] == [1, 6]
    assert not is_stable_prime(powers_filtration(TRI), P(3, 1), SMALL).is_stable


@given(ideals(max_gens=3, max_exp=3))
def test_is_stable_prime_agrees_with_stable_set(J):
    if J.is_unit:
        return
    F = powers_filtration(J)
    try:
        stable = stable_primes(F, SMALL)
    except NotStabilized:
        return
    for r in range(1, J.n + 1):
        for s in combinations(range(J.n), r):
            p = MonomialPrime(J.n, frozenset(s))
            try:
                ev = is_stable_prime(F, p, SMALL)
            except NotStabilized:
                continue
            assert ev.is_stable == (p in stable.primes)


def test_soc_examples():
    F = powers_filtration(TRI)
    stable = stable_primes(F, SMALL).primes
    s = soc_component(F, M3, 1, stable)
    assert (s.alpha_value, s.witness) == (3, (1, 1, 1))
    assert s.denominator <= s.numerator
    G = powers_filtration(X)
    s = soc_component(G, P(1, 1), 2, {P(1, 1)})
    assert (s.alpha_value, s.witness) == (2, (2,))
    with pytest.raises(NotAStablePrime):
        soc_component(F, P(3, 1), 1, stable)


@given(ideals(max_gens=3, max_exp=3))
def test_soc_alpha_matches_v_p_at_next_level(J):
    if J.is_unit:
        return
    F = powers_filtration(J)
    try:
        stable = stable_primes(F, SMALL)
    except NotStabilized:
        return
    for p in stable.primes:
        for k in range(stable.stabilized_at, SMALL.kmax):
            s = soc_component(F, p, k, stable.primes)
            assert s.alpha_value == v_p(F.ideal(k + 1), p, stable.primes).value


def test_fit_tail():
    w = Window(kmax=6, W=3, period_max=2)
    tail = fit_tail({k: 2 * k - 1 for k in range(1, 7)}, w, [1])
    assert (tail.slope, tail.intercept, tail.stabilized_at) == (2, -1, 1)
    bumpy = {1: 5, 2: 3, 3: 5, 4: 7, 5: 9, 6: 11}
    assert fit_tail(bumpy, w, [1]).stabilized_at == 2
    # alternating values need period 2
    alt = {k: k + (k % 2) for k in range(1, 9)}
    w8 = Window(kmax=8, W=3, period_max=2)
    assert fit_tail(alt, w8, [1]) is None
    tail = fit_tail(alt, w8, [1, 2])
    assert tail.period == 2
    assert all(tail.predict(k) == alt[k] for k in alt)
    assert fit_tail({1: 1, 2: 2, 3: 4}, Window(kmax=3, W=3), [1]) is None
    half = fit_tail({k: k // 2 for k in range(1, 9)}, w8, [1, 2])
    assert half.period == 2 and half.branches[0].slope == Fraction(1, 2)


def test_fit_tail_counts_missing_levels():
    w = Window(kmax=6)
    tail = fit_tail({k: 2 * k for k in range(3, 7)}, w, [1])
    assert tail.stabilized_at == 3


def test_window_validation():
    with pytest.raises(ValueError):
        Window(kmax=2, W=3)
    with pytest.raises(ValueError):
        Window(W=1)
    with pytest.raises(ValueError):
        Window(period_max=0)


def test_v_functions_small():
    tail = v_function_p(powers_filtration(X), P(1, 1), SMALL)
    assert (tail.slope, tail.intercept) == (1, -1)
    tail = v_function(powers_filtration(X), SMALL)
    assert (tail.slope, tail.intercept) == (1, -1)
    F = powers_filtration(TRI)
    tail = v_function_p(F, M3, SMALL)
    assert (tail.slope, tail.intercept, tail.stabilized_at) == (2, -1, 2)
    tail = v_function(F, SMALL)
    assert (tail.slope, tail.intercept) == (2, -1)
    assert tail.to_json() == {
        "period": 1,
        "branches": [{"residue": 0, "slope": 2, "intercept": -1}],
        "stabilizedAt": 1,
        "window": {"kmax": 6, "W": 3, "periodMax": 4},
    }
    with pytest.raises(NotAStablePrime):
        v_function_p(F, P(3, 1), SMALL)


def test_stability_indices_small():
    idx = stability_indices(powers_filtration(TRI), SMALL)
    assert (idx.vstab, idx.astab, idx.vp_stab[M3], idx.astab_p[M3]) == (1, 2, 2, 2)
    idx = stability_indices(powers_filtration(X), SMALL)
    assert (idx.vstab, idx.astab, idx.vp_stab[P(1, 1)], idx.astab_p[P(1, 1)]) == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        stability_indices(closure_filtration(TRI), SMALL)


def test_closure_tail_is_quasi_linear():
    F = closure_filtration(minimalize([(2, 0), (0, 2)]))
    tail = v_function(F, SMALL)
    assert (tail.slope, tail.intercept) == (2, -1)
    G = closure_filtration(minimalize([(3, 0), (0, 2)]))
    tail = v_function(G, Window(kmax=8))
    for k in range(tail.stabilized_at, 9):
        assert tail.predict(k) == G.v(k).value


def test_rees_map():
    d = rees_map_description(minimalize([(2,)]))
    assert d["source"]["variables"] == ["x1", "y1"]
    assert d["images"][-1]["image"] == "x1^2*t"
    assert d["bidegrees"][-1]["bidegree"] == [2, 1]
    d = rees_map_description(TRI)
    assert [b["bidegree"] for b in d["bidegrees"] if b["variable"].startswith("y")] == [[2, 1]] * 3
    with pytest.raises(ValueError, match="Rees map of unit ideal undefined"):
        rees_map_description(MonomialIdeal.unit(2))
