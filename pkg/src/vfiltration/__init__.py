"""Exact v-numbers, stable primes and asymptotic v-functions of monomial
ideal filtrations, with the associated integer programs."""

from .decomposition import associated_primes, irreducible_decomposition, monomial_localize
from .filtration import (
    FiltrationHandle,
    NotStabilized,
    QuasiLinearTail,
    Window,
    is_stable_prime,
    powers_filtration,
    soc_component,
    stability_indices,
    stable_max,
    stable_primes,
    v_function,
    v_function_p,
)
from .intprog import IPInstance, asymptotic_law, brute_force_ip, solve_ip
from .monomial import MonomialIdeal, MonomialPrime, alpha, colon_monomial, intersect, minimalize, power, saturate
from .newton import NewtonPolyhedron, closure_filtration, closure_power, np_membership
from .vnumber import v_number, v_p, v_p_oracle

__version__ = "0.1.0"

__all__ = [
    "FiltrationHandle",
    "IPInstance",
    "MonomialIdeal",
    "MonomialPrime",
    "NewtonPolyhedron",
    "NotStabilized",
    "QuasiLinearTail",
    "Window",
    "alpha",
    "associated_primes",
    "asymptotic_law",
    "brute_force_ip",
    "closure_filtration",
    "closure_power",
    "colon_monomial",
    "intersect",
    "irreducible_decomposition",
    "is_stable_prime",
    "minimalize",
    "monomial_localize",
    "np_membership",
    "power",
    "powers_filtration",
    "saturate",
    "soc_component",
    "solve_ip",
    "stability_indices",
    "stable_max",
    "stable_primes",
    "v_function",
    "v_function_p",
    "v_number",
    "v_p",
    "v_p_oracle",
]
