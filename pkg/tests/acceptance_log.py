"""Outcome registry for the acceptance suite, printed by the conftest
terminal-summary hook."""

from contextlib import contextmanager

TITLES = {
    1: "session reproduction",
    2: "triangle ideal",
    3: "slope laws on random ideals",
    4: "formula and IP routes vs brute force",
    5: "monomial algebra vs membership oracles",
    6: "Newton closure",
    7: "tail back-prediction",
}

# criterion -> list of (passed, detail); several tests may feed one criterion
RESULTS: dict[int, list[tuple[bool, str]]] = {}


@contextmanager
def criterion(number: int, detail: dict):
    """Record PASS when the block finishes, FAIL when it raises."""
    try:
        yield detail
    except BaseException as exc:
        detail["error"] = f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        RESULTS.setdefault(number, []).append((False, _fmt(detail)))
        raise
    RESULTS.setdefault(number, []).append((True, _fmt(detail)))


def _fmt(detail: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in detail.items())


def summary_lines() -> list[str]:
    lines = []
    for number, title in TITLES.items():
        runs = RESULTS.get(number)
        if not runs:
            lines.append(f"[PRIMARY] criterion {number} ({title}): NOT RUN")
            continue
        verdict = "PASS" if all(ok for ok, _ in runs) else "FAIL"
        details = "; ".join(d for _, d in runs)
        lines.append(f"[PRIMARY] criterion {number} ({title}): {verdict} ({details})")
    return lines
