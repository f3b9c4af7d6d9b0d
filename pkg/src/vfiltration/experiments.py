"""Evidence gathering for open questions about v-functions of powers.

Each experiment samples ideals, computes what the question is about and
counts agreements and disagreements. Nothing here asserts an answer:
disagreements come back as data with everything needed to reproduce them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .filtration import (
    NotStabilized,
    Window,
    maximal_primes,
    powers_filtration,
    stability_indices,
    stable_primes,
    v_function_p,
)
from .monomial import MonomialIdeal, alpha, minimalize


def random_ideal(rng: np.random.Generator, n: int, max_gens: int, degree_cap: int) -> MonomialIdeal:
    """Random proper non-zero monomial ideal: up to ``max_gens`` generators,
    each of total degree between 1 and ``degree_cap``."""
    gens = []
    for _ in range(int(rng.integers(1, max_gens + 1))):
        d = int(rng.integers(1, degree_cap + 1))
        gens.append(tuple(int(v) for v in rng.multinomial(d, [1 / n] * n)))
    return minimalize(gens, n)


def sample_ideals(seed: int, samples: int, n: int, max_gens: int, degree_cap: int) -> list[MonomialIdeal]:
    rng = np.random.default_rng(seed)
    return [random_ideal(rng, n, max_gens, degree_cap) for _ in range(samples)]


@dataclass
class ExperimentReport:
    name: str
    samples: int = 0
    confirmations: int = 0
    violations: list[dict] = field(default_factory=list)
    not_stabilized: list[dict] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)
    tallies: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "experiment": self.name,
            "samples": self.samples,
            "confirmations": self.confirmations,
            "violationCount": len(self.violations),
            "violations": self.violations,
            "notStabilizedCount": len(self.not_stabilized),
            "notStabilized": self.not_stabilized,
            "records": self.records,
            "tallies": dict(sorted(self.tallies.items())),
        }


def monotonicity(I: MonomialIdeal, window: Window) -> tuple[bool, dict]:
    """Is ``k -> v(I^k)`` strictly increasing on ``1..kmax``?"""
    F = powers_filtration(I)
    values = [F.v(k).value for k in range(1, window.kmax + 1)]
    return all(a < b for a, b in zip(values, values[1:])), {"values": values}


def max_limit(I: MonomialIdeal, window: Window) -> tuple[bool, dict]:
    """Does every prime of ``Max^oo`` have v_p slope equal to ``alpha(I)``?"""
    F = powers_filtration(I)
    stable = stable_primes(F, window)
    slopes = {}
    for p in sorted(maximal_primes(stable.primes), key=lambda p: p.sort_key()):
        tail = v_function_p(F, p, window, stable)
        slopes[str(p)] = str(tail.slope)
    a = alpha(I)
    return all(s == str(a) for s in slopes.values()), {"alpha": a, "slopes": slopes}


def vstab_vs_astab(I: MonomialIdeal, window: Window) -> tuple[bool | None, dict]:
    """How ``vstab`` compares with ``astab``. There is no claim to test, so
    the outcome is only tallied."""
    idx = stability_indices(powers_filtration(I), window)
    relation = "<" if idx.vstab < idx.astab else ">" if idx.vstab > idx.astab else "="
    return None, {"vstab": idx.vstab, "astab": idx.astab, "relation": relation}


EXPERIMENTS: dict[str, Callable[[MonomialIdeal, Window], tuple[bool | None, dict]]] = {
    "monotonicity": monotonicity,
    "max-limit-conjecture": max_limit,
    "vstab-vs-astab": vstab_vs_astab,
}


def run_experiment(name: str, ideals: Iterable[MonomialIdeal], window: Window) -> ExperimentReport:
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    check = EXPERIMENTS[name]
    report = ExperimentReport(name)
    for I in ideals:
        report.samples += 1
        try:
            ok, data = check(I, window)
        except NotStabilized as exc:
            report.not_stabilized.append({"ideal": I.to_json(), "reason": str(exc)})
            continue
        entry = {"ideal": I.to_json(), **data}
        report.records.append(entry)
        if "relation" in data:
            report.tallies[data["relation"]] = report.tallies.get(data["relation"], 0) + 1
        if ok is None:
            continue
        if ok:
            report.confirmations += 1
        else:
            report.violations.append({**entry, "window": window.to_json()})
    return report
