"""Command-line interface.

Every command prints one run report (JSON by default). Exit codes:
0 success, 1 bad input, 2 the window did not settle (partial outputs are
still printed), 3 a fitted slope broke a law that must hold.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Callable

from .decomposition import DecompositionUndefined, associated_primes
from .experiments import EXPERIMENTS, run_experiment, sample_ideals
from .filtration import (
    CLOSURE_POWERS,
    POWERS,
    FiltrationHandle,
    NotAStablePrime,
    NotStabilized,
    SlopeLawViolation,
    Window,
    QuasiLinearTail,
    is_stable_prime,
    maximal_primes,
    rees_map_description,
    soc_component,
    stability_indices,
    stable_primes,
    v_function,
    v_function_p,
)
from .intprog import IPInstance, asymptotic_law, brute_force_ip, solve_ip
from .monomial import MonomialIdeal, sorted_primes
from .newton import UnitIdealError, closure_power
from .parsing import InputError, ParseError, format_ideal_text, parse_ideal, parse_prime
from .vnumber import NotAssociatedError, v_number, v_p

EXIT_OK, EXIT_INPUT, EXIT_NOT_STABILIZED, EXIT_LAW = 0, 1, 2, 3


class Run:
    """Collects one report while a command executes."""

    def __init__(self, command: str, window: Window):
        self.command = command
        self.window = window
        self.inputs: dict = {}
        self.outputs: dict = {}
        self.warnings: list[str] = []
        self.status = "ok"

    def report(self, wall_time: float) -> dict:
        return {
            "command": self.command,
            "inputs": _plain(self.inputs),
            "outputs": _plain(self.outputs),
            "window": self.window.to_json(),
            "wallTime": round(wall_time, 6),
            "warnings": list(self.warnings),
            "status": self.status,
        }


def _plain(data):
    # JSON-native form, so a report equals its own round trip
    return json.loads(json.dumps(data, sort_keys=True))


def _read(text: str) -> str:
    if text.startswith("@"):
        try:
            return Path(text[1:]).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {text[1:]}: {exc.strerror}") from None
    return text


def _ideal(args, run: Run) -> MonomialIdeal:
    I = parse_ideal(_read(args.ideal), args.n)
    run.inputs["ideal"] = I.to_json()
    return I


def _prime(args, run: Run, n: int):
    if args.p is None:
        raise InputError("--p is required for this command")
    p = parse_prime(args.p, n)
    run.inputs["prime"] = p.to_json()
    return p


def _filtration(args, run: Run) -> FiltrationHandle:
    I = _ideal(args, run)
    kind = POWERS if args.filtration == "powers" else CLOSURE_POWERS
    run.inputs["filtration"] = kind
    try:
        return FiltrationHandle(I, kind)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _level(args, run: Run) -> MonomialIdeal:
    """The ideal itself, or level ``--k`` of the chosen filtration."""
    if args.k is None:
        return _ideal(args, run)
    if args.k < 1:
        raise InputError("--k must be at least 1")
    F = _filtration(args, run)
    run.inputs["k"] = args.k
    return F.ideal(args.k)


def cmd_stable_primes(args, run: Run) -> None:
    run.outputs.update(stable_primes(_filtration(args, run), run.window).to_json())


def cmd_stable_max(args, run: Run) -> None:
    found = stable_primes(_filtration(args, run), run.window)
    run.outputs["primes"] = [p.to_json() for p in sorted_primes(maximal_primes(found.primes))]
    run.outputs["stabilizedAt"] = found.stabilized_at


def cmd_is_stable_prime(args, run: Run) -> None:
    F = _filtration(args, run)
    run.outputs.update(is_stable_prime(F, _prime(args, run, F.n), run.window).to_json())


def cmd_vnumber(args, run: Run) -> None:
    I = _level(args, run)
    run.outputs.update(v_number(I).to_json())


def cmd_vnumber_p(args, run: Run) -> None:
    I = _level(args, run)
    p = _prime(args, run, I.n)
    run.outputs.update(v_p(I, p, associated_primes(I)).to_json())


def cmd_soc(args, run: Run) -> None:
    F = _filtration(args, run)
    p = _prime(args, run, F.n)
    if args.k is None or args.k < 0:
        raise InputError("--k (a non-negative level) is required for soc")
    run.inputs["k"] = args.k
    stable = stable_primes(F, run.window)
    run.outputs.update(soc_component(F, p, args.k, stable.primes).to_json())
    run.outputs["stablePrimes"] = stable.to_json()["primes"]


def _tail_outputs(tail: QuasiLinearTail, run: Run) -> None:
    run.outputs["tail"] = tail.to_json()
    run.outputs["samples"] = tail.samples
    if tail.period == 1:
        b = tail.to_json()["branches"][0]
        run.outputs["law"] = [b["slope"], b["intercept"]]


def cmd_vfunction(args, run: Run) -> None:
    tail = v_function(_filtration(args, run), run.window)
    _tail_outputs(tail, run)


def cmd_vfunction_p(args, run: Run) -> None:
    F = _filtration(args, run)
    tail = v_function_p(F, _prime(args, run, F.n), run.window)
    _tail_outputs(tail, run)


def cmd_stability_indices(args, run: Run) -> None:
    F = _filtration(args, run)
    if not F.is_powers:
        raise InputError("stability indices are defined for ordinary powers only")
    run.outputs.update(stability_indices(F, run.window).to_json())


def cmd_rees_map(args, run: Run) -> None:
    I = _ideal(args, run)
    try:
        run.outputs.update(rees_map_description(I))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_closure_power(args, run: Run) -> None:
    I = _ideal(args, run)
    if args.k is None or args.k < 0:
        raise InputError("--k (a non-negative level) is required for closure-power")
    run.inputs["k"] = args.k
    J = closure_power(I, args.k)
    run.outputs["ideal"] = J.to_json()
    run.outputs["text"] = format_ideal_text(J)


def _instance_json(args, need_k: bool) -> dict:
    try:
        data = json.loads(_read(args.instance))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.doc, exc.pos) from None
    if not isinstance(data, dict) or "A" not in data or "B" not in data:
        raise InputError('instance JSON needs the keys "A" and "B"')
    if need_k and "k" not in data:
        raise InputError('instance JSON needs the key "k"')
    return data


def cmd_ip_solve(args, run: Run) -> None:
    data = _instance_json(args, need_k=True)
    try:
        inst = IPInstance.from_json(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad instance: {exc}") from None
    run.inputs["instance"] = inst.to_json()
    sol = solve_ip(inst)
    run.outputs["feasible"] = sol is not None
    run.outputs["solution"] = None if sol is None else sol.to_json()
    if args.brute_box is not None:
        try:
            box = [int(b) for b in args.brute_box.split(",")]
        except ValueError:
            raise InputError(f"--brute-box must be comma-separated integers, got {args.brute_box!r}") from None
        if len(box) != inst.n or min(box) < 0:
            raise InputError(f"--brute-box needs {inst.n} non-negative caps")
        run.inputs["bruteBox"] = box
        brute = brute_force_ip(inst, box)
        run.outputs["bruteForce"] = {
            "solution": None if brute.solution is None else brute.solution.to_json(),
            "boxLimited": brute.box_limited,
        }
        agree = (sol is None and brute.solution is None) or (
            sol is not None and brute.solution is not None and sol.modulus == brute.solution.modulus
        )
        if sol is not None and brute.solution is None:
            run.warnings.append("brute force found nothing inside the box; the optimum lies outside it")
        elif not agree:
            run.warnings.append("routes disagree")
        run.outputs["routesAgree"] = agree


def cmd_ip_law(args, run: Run) -> None:
    data = _instance_json(args, need_k=False)
    variant = data.get("variant", "power")
    try:
        probe = IPInstance.make(data["A"], [i - 1 for i in data["B"]], 1, variant)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad instance: {exc}") from None
    canonical = probe.to_json()
    del canonical["k"]
    run.inputs["instance"] = canonical
    law = asymptotic_law(probe.A, probe.B, variant, run.window)
    run.outputs.update(law.to_json())
    if law.tail is not None:
        _tail_outputs(law.tail, run)


def cmd_experiment(args, run: Run) -> None:
    if args.name not in EXPERIMENTS:
        raise InputError(f"unknown experiment {args.name!r}; choose from {', '.join(sorted(EXPERIMENTS))}")
    run.inputs["experiment"] = args.name
    if args.ideal:
        if args.n is None:
            raise InputError("--n is required with --ideal")
        ideals = [parse_ideal(_read(text), args.n) for text in args.ideal]
        run.inputs["ideals"] = [I.to_json() for I in ideals]
    else:
        n = 3 if args.n is None else args.n
        for flag, value in (("--n", n), ("--samples", args.samples), ("--max-gens", args.max_gens), ("--degree-cap", args.degree_cap)):
            if value < 1:
                raise InputError(f"{flag} must be at least 1")
        ideals = sample_ideals(args.seed, args.samples, n, args.max_gens, args.degree_cap)
        run.inputs.update(
            {"seed": args.seed, "samples": args.samples, "n": n, "maxGens": args.max_gens, "degreeCap": args.degree_cap}
        )
    report = run_experiment(args.name, ideals, run.window)
    run.outputs.update(report.to_json())
    if report.not_stabilized:
        run.warnings.append(f"{len(report.not_stabilized)} sample(s) not stabilized within kmax={run.window.kmax}")


COMMANDS: dict[str, tuple[Callable, str]] = {
    "stable-primes": (cmd_stable_primes, "eventual associated primes of the filtration"),
    "stable-max": (cmd_stable_max, "maximal elements of the stable primes"),
    "is-stable-prime": (cmd_is_stable_prime, "whether --p is a stable associated prime"),
    "vnumber": (cmd_vnumber, "v-number of the ideal (or of level --k)"),
    "vnumber-p": (cmd_vnumber_p, "local v-number at --p of the ideal (or of level --k)"),
    "soc": (cmd_soc, "socle component at --p in degree --k"),
    "vfunction": (cmd_vfunction, "asymptotic law of k -> v(I_[k])"),
    "vfunction-p": (cmd_vfunction_p, "asymptotic law of k -> v_p(I_[k])"),
    "stability-indices": (cmd_stability_indices, "vstab, v_p-stab, astab and astab_p of the powers"),
    "rees-map": (cmd_rees_map, "description of the Rees map"),
    "closure-power": (cmd_closure_power, "integral closure of I^k"),
    "ip-solve": (cmd_ip_solve, "optimal solution of an integer program instance"),
    "ip-law": (cmd_ip_law, "asymptotic law of the optimal modulus"),
    "experiment": (cmd_experiment, "evidence for an open question; never asserts an answer"),
}

_IDEAL_COMMANDS = {
    "stable-primes", "stable-max", "is-stable-prime", "vnumber", "vnumber-p", "soc",
    "vfunction", "vfunction-p", "stability-indices", "rees-map", "closure-power",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of variables x1..xn")
    common.add_argument("--kmax", type=int, default=12, help="last level examined (default 12)")
    common.add_argument("--window", type=int, default=3, help="points that must agree at the end (default 3)")
    common.add_argument("--period-max", type=int, default=4, help="largest period tried (default 4)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--filtration", choices=("powers", "closure"), default="powers")

    parser = argparse.ArgumentParser(prog="vfiltration", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name in _IDEAL_COMMANDS:
            p.add_argument("ideal", help='ideal as "x1*x2^2,x3", as JSON {"n":..,"gens":..}, or @file')
        if name in {"is-stable-prime", "vnumber", "vnumber-p", "soc", "vfunction-p"}:
            p.add_argument("--p", help='prime as "1,2,4" or "x1,x2,x4"')
        if name in {"vnumber", "vnumber-p", "soc", "closure-power"}:
            p.add_argument("--k", type=int, help="filtration level")
        if name in {"ip-solve", "ip-law"}:
            p.add_argument("instance", help='instance JSON {"A":[[..]],"B":[..],"k":..,"variant":..} or @file')
        if name == "ip-solve":
            p.add_argument("--brute-box", help="also run the brute-force oracle with these caps, e.g. 6,6,6")
        if name == "experiment":
            p.add_argument("name", help=", ".join(EXPERIMENTS))
            p.add_argument("--ideal", action="append", help="run on this ideal instead of random samples (repeatable)")
            p.add_argument("--samples", type=int, default=20)
            p.add_argument("--max-gens", type=int, default=5)
            p.add_argument("--degree-cap", type=int, default=4)
            p.add_argument("--seed", type=int, default=0)
    return parser


def _render_text(report: dict) -> str:
    lines = [f"{report['command']}  [{report['status']}]", "inputs:"]
    lines += [f"  {key}: {json.dumps(value, sort_keys=True)}" for key, value in report["inputs"].items()]
    lines.append("outputs:")
    lines += [f"  {key}: {json.dumps(value, sort_keys=True)}" for key, value in report["outputs"].items()]
    w = report["window"]
    lines.append(f"window: kmax={w['kmax']} W={w['W']} periodMax={w['periodMax']}")
    lines += [f"warning: {warning}" for warning in report["warnings"]]
    lines.append(f"wall time: {report['wallTime']:.3f}s")
    return "\n".join(lines)


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        stream.write(_render_text(report) + "\n")


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        window = Window(args.kmax, args.window, args.period_max)
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    handler = COMMANDS[args.command][0]
    current = Run(args.command, window)
    start = time.perf_counter()
    code = EXIT_OK
    try:
        handler(args, current)
    except NotStabilized as exc:
        current.status = "not-stabilized"
        current.warnings.append(str(exc))
        current.outputs["partial"] = exc.partial
        code = EXIT_NOT_STABILIZED
    except SlopeLawViolation as exc:
        current.status = "slope-law-violation"
        current.warnings.append(str(exc))
        stderr.write(f"error: {exc}\n")
        code = EXIT_LAW
    except (InputError, NotAssociatedError, NotAStablePrime, DecompositionUndefined, UnitIdealError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    emit(current.report(time.perf_counter() - start), args.format, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
