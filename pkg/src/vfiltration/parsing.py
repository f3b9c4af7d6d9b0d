"""Reading and writing ideals and primes in ``x1..xn`` notation or JSON."""

from __future__ import annotations

import json
import re

from .monomial import MonomialIdeal, MonomialPrime, minimalize, monomial_str

_TOKEN = re.compile(r"\s*(?:(?P<var>x(?P<index>\d+))|(?P<num>\d+)|(?P<op>[*^,]))")


class InputError(ValueError):
    """Input that names something outside the ambient ring."""


class ParseError(InputError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(f"{message} at position {position}\n  {text}\n  {' ' * position}^")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            return
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastgroup) if m.lastgroup != "index" else m.start("var")
        if m.group("var"):
            yield "var", int(m.group("index")), start
        elif m.group("num"):
            yield "num", int(m.group("num")), start
        else:
            yield m.group("op"), None, start
        pos = m.end()


def parse_ideal_text(text: str, n: int) -> MonomialIdeal:
    """``"x1*x2^3, x3"`` in ``K[x1..xn]``; ``"0"`` is the zero ideal and
    ``"1"`` the unit ideal."""
    if n < 1:
        raise InputError("--n must be at least 1")
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty ideal", text, 0)
    if len(toks) == 1 and toks[0][0] == "num" and toks[0][1] == 0:
        return MonomialIdeal.zero(n)
    gens = []
    i = 0
    while True:
        exp = [0] * n
        while True:
            if i >= len(toks):
                raise ParseError("expected a factor", text, len(text))
            kind, value, pos = toks[i]
            if kind == "var":
                if not 1 <= value <= n:
                    raise InputError(f"unknown variable x{value} at position {pos} (ring has x1..x{n})")
                i += 1
                power = 1
                if i < len(toks) and toks[i][0] == "^":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num":
                        raise ParseError("expected an exponent after '^'", text, toks[i][2] + 1)
                    power = toks[i + 1][1]
                    i += 2
                exp[value - 1] += power
            elif kind == "num" and value == 1:
                i += 1
            else:
                raise ParseError("expected a variable such as x1", text, pos)
            if i < len(toks) and toks[i][0] == "*":
                i += 1
                continue
            break
        gens.append(tuple(exp))
        if i == len(toks):
            break
        kind, _, pos = toks[i]
        if kind != ",":
            raise ParseError("expected ',' or '*'", text, pos)
        i += 1
    return minimalize(gens, n)


def parse_ideal_json(data: str | dict) -> MonomialIdeal:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.doc, exc.pos) from None
    if not isinstance(data, dict) or "n" not in data or "gens" not in data:
        raise InputError('ideal JSON needs the keys "n" and "gens"')
    n, gens = data["n"], data["gens"]
    if not isinstance(n, int) or n < 1:
        raise InputError('"n" must be a positive integer')
    for g in gens:
        if not isinstance(g, list) or len(g) != n or any(not isinstance(e, int) or e < 0 for e in g):
            raise InputError(f"generator {g!r} is not a list of {n} non-negative integers")
    return minimalize(gens, n)


def parse_ideal(text: str, n: int | None) -> MonomialIdeal:
    """JSON when the input starts with ``{``, otherwise ``x1..xn`` text
    (which needs ``n``)."""
    if text.lstrip().startswith("{"):
        I = parse_ideal_json(text)
        if n is not None and n != I.n:
            raise InputError(f"--n {n} disagrees with the JSON ring size {I.n}")
        return I
    if n is None:
        raise InputError("--n is required for text input")
    return parse_ideal_text(text, n)


def format_ideal_text(I: MonomialIdeal) -> str:
    if I.is_zero:
        return "0"
    return ",".join(monomial_str(g) for g in I.gens)


def parse_prime(text: str, n: int) -> MonomialPrime:
    """``"1,2,4"`` or ``"x1,x2,x4"`` (1-based)."""
    indices = []
    for part in text.split(","):
        part = part.strip()
        digits = part[1:] if part.startswith("x") else part
        if not digits.isdigit():
            raise InputError(f"cannot read variable {part!r} in prime {text!r}")
        i = int(digits)
        if not 1 <= i <= n:
            raise InputError(f"unknown variable index {i} (ring has x1..x{n})")
        indices.append(i - 1)
    return MonomialPrime.of(n, indices)
