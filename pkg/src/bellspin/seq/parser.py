"""Line-oriented parser for pulse programs.

Grammar (one statement per line, ``#`` starts a comment)::

    program   = { line } ;
    line      = [ statement ] [ "#" text ] NEWLINE ;
    statement = "program" NAME
              | "pulse" CHANNEL expr AXIS            (* angle in degrees *)
              | "delay" expr                          (* duration *)
              | "cp" [ expr ]                         (* duration, default pi/J *)
              | "dhh" MODE { KEY "=" expr }           (* KEY: t, sigma, delta *)
              | "grad" [ MODEL ]
              | "pps"
              | "acquire" CHANNEL INTEGER [ "dwell" "=" expr ] ;
    CHANNEL   = "H" | "C" ;
    AXIS      = "x" | "y" | "-x" | "-y" ;
    MODE      = "delta" | "sigma" ;
    MODEL     = "diagonal" | "coherence_order" ;
    expr      = term { ( "+" | "-" ) term } ;
    term      = factor { ( "*" | "/" ) factor | implicit } ;
    implicit  = atom ;                                (* "5J", "2pi" *)
    factor    = [ "+" | "-" ] atom ;
    atom      = NUMBER | "pi" | "J" | "sqrt" "(" expr ")" | "(" expr ")" ;

Durations are seconds or multiples of ``1/J`` (``pi/J``, ``0.5/J``,
``pi*sqrt(2)/J``); the DHH free parameter (``sigma=`` in delta mode,
``delta=`` in sigma mode) is rad/s or a multiple of ``J`` (``5J``).  The DHH
duration defaults to ``pi*sqrt(2)/J``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .program import (
    CHANNELS,
    CP,
    DHH,
    DHH_MODES,
    GRADIENT_MODELS,
    PULSE_AXES,
    AcquireFID,
    Delay,
    Gradient,
    PPSPrepare,
    Pulse,
    PulseProgram,
    Quantity,
)


class ProgramError(Exception):
    """Base class for pulse-program diagnostics; carries a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class PulseSyntaxError(ProgramError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.expected = expected
        if expected:
            message = f"{message} (expected {', '.join(expected)})"
        super().__init__(message, line, column)


class PulseSemanticError(ProgramError):
    pass


_TOKEN = re.compile(
    r"""(?P<ws>[ \t]+)
      | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*/()=])
      | (?P<comment>\#.*)""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    column: int


def tokenize(text: str, lineno: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PulseSyntaxError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(text.rstrip("\r\n")) + 1))
    return tokens


_IMPLICIT_START = {"pi", "J", "sqrt"}
_STATEMENTS = ("program", "pulse", "delay", "cp", "dhh", "grad", "pps", "acquire")


class _LineParser:
    def __init__(self, tokens: list[Token], lineno: int):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, expected: tuple[str, ...] = (), tok: Token | None = None):
        tok = tok or self.tok
        found = "end of line" if tok.kind == "end" else repr(tok.text)
        return PulseSyntaxError(f"{message}, found {found}", self.lineno, tok.column, expected)

    def expect_name(self, what: str) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"missing {what}", (what,))
        return self.advance()

    def expect_op(self, op: str) -> Token:
        if self.tok.kind != "op" or self.tok.text != op:
            raise self.error("unexpected token", (repr(op),))
        return self.advance()

    def expect_end(self):
        if self.tok.kind != "end":
            raise self.error("trailing input", ("end of line",))

    # expressions -------------------------------------------------------
    def expr(self) -> Quantity:
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance()
            rhs = self.term()
            if rhs.j_power != value.j_power:
                raise PulseSemanticError("cannot add quantities with different powers of J", self.lineno, op.column)
            sign = 1 if op.text == "+" else -1
            value = Quantity(value.coeff + sign * rhs.coeff, value.j_power)
        return value

    def term(self) -> Quantity:
        value = self.factor()
        while True:
            t = self.tok
            if t.kind == "op" and t.text in "*/":
                self.advance()
                rhs = self.factor()
                if t.text == "*":
                    value = Quantity(value.coeff * rhs.coeff, value.j_power + rhs.j_power)
                else:
                    if rhs.coeff == 0:
                        raise PulseSemanticError("division by zero", self.lineno, t.column)
                    value = Quantity(value.coeff / rhs.coeff, value.j_power - rhs.j_power)
            elif (t.kind == "name" and t.text in _IMPLICIT_START) or (t.kind == "op" and t.text == "("):
                rhs = self.atom()
                value = Quantity(value.coeff * rhs.coeff, value.j_power + rhs.j_power)
            else:
                return value

    def factor(self) -> Quantity:
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1.0 if self.advance().text == "-" else 1.0
            q = self.atom()
            return Quantity(sign * q.coeff, q.j_power)
        return self.atom()

    def atom(self) -> Quantity:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Quantity(float(t.text), 0)
        if t.kind == "name" and t.text == "pi":
            self.advance()
            return Quantity(math.pi, 0)
        if t.kind == "name" and t.text == "J":
            self.advance()
            return Quantity(1.0, 1)
        if t.kind == "name" and t.text == "sqrt":
            self.advance()
            self.expect_op("(")
            inner = self.expr()
            close = self.expect_op(")")
            if inner.j_power % 2:
                raise PulseSemanticError("sqrt of an odd power of J", self.lineno, close.column)
            if inner.coeff < 0:
                raise PulseSemanticError("sqrt of a negative number", self.lineno, t.column)
            return Quantity(math.sqrt(inner.coeff), inner.j_power // 2)
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise self.error("expected a number or expression", ("number", "pi", "J", "sqrt", "("))

    # statement helpers ---------------------------------------------------
    def channel(self) -> int:
        t = self.expect_name("channel")
        if t.text not in CHANNELS:
            raise PulseSemanticError(f"unknown channel {t.text!r} (use H or C)", self.lineno, t.column)
        return CHANNELS[t.text]

    def duration(self) -> Quantity:
        t = self.tok
        q = self.expr()
        if q.j_power not in (0, -1):
            raise PulseSemanticError("a duration must be seconds or a multiple of 1/J", self.lineno, t.column)
        if q.coeff < 0:
            raise PulseSemanticError("negative duration", self.lineno, t.column)
        return q

    def frequency(self) -> Quantity:
        t = self.tok
        q = self.expr()
        if q.j_power not in (0, 1):
            raise PulseSemanticError("an rf parameter must be rad/s or a multiple of J", self.lineno, t.column)
        return q

    def axis(self) -> str:
        t = self.tok
        text = ""
        if t.kind == "op" and t.text == "-":
            self.advance()
            text = "-"
        a = self.expect_name("axis")
        text += a.text
        if text not in PULSE_AXES:
            raise PulseSemanticError(f"unknown pulse axis {text!r}", self.lineno, t.column)
        return text


def _parse_statement(p: _LineParser, lineno: int):
    head = p.tok
    if head.kind != "name" or head.text not in _STATEMENTS:
        raise p.error("unknown instruction", _STATEMENTS)
    p.advance()
    kw = head.text
    if kw == "program":
        name = p.expect_name("program name").text
        p.expect_end()
        return ("program", name)
    if kw == "pulse":
        spin = p.channel()
        # The axis closes the line; split it off so "-y" is not read as a subtraction.
        body = p.tokens[p.i:-1]
        n_axis = 2 if len(body) >= 2 and body[-2].kind == "op" and body[-2].text == "-" else 1
        if len(body) <= n_axis:
            raise p.error("missing angle or axis", ("angle", "axis"), tok=p.tokens[-1])
        angle_tok = p.tok
        sub = _LineParser(body[:-n_axis] + [Token("end", "", body[-n_axis].column)], lineno)
        angle = sub.expr()
        sub.expect_end()
        if angle.j_power != 0:
            raise PulseSemanticError("pulse angle must be a plain number of degrees", lineno, angle_tok.column)
        p.i += len(body) - n_axis
        axis = p.axis()
        p.expect_end()
        return Pulse(spin, angle.coeff, axis)
    if kw == "delay":
        q = p.duration()
        p.expect_end()
        return Delay(q)
    if kw == "cp":
        q = Quantity(math.pi, -1) if p.tok.kind == "end" else p.duration()
        p.expect_end()
        return CP(q)
    if kw == "dhh":
        mode_tok = p.expect_name("DHH mode")
        if mode_tok.text not in DHH_MODES:
            raise PulseSemanticError(f"unknown DHH mode {mode_tok.text!r}", lineno, mode_tok.column)
        free_key = "sigma" if mode_tok.text == "delta" else "delta"
        t = Quantity(math.pi * math.sqrt(2), -1)
        free = None
        seen = set()
        while p.tok.kind != "end":
            key = p.expect_name("parameter")
            if key.text not in ("t", free_key):
                raise PulseSemanticError(
                    f"unknown DHH parameter {key.text!r} for mode {mode_tok.text} (use t or {free_key})",
                    lineno,
                    key.column,
                )
            if key.text in seen:
                raise PulseSemanticError(f"duplicate parameter {key.text!r}", lineno, key.column)
            seen.add(key.text)
            p.expect_op("=")
            if key.text == "t":
                t = p.duration()
            else:
                free = p.frequency()
        return DHH(mode_tok.text, t, free)
    if kw == "grad":
        model = "diagonal"
        if p.tok.kind != "end":
            m = p.expect_name("gradient model")
            if m.text not in GRADIENT_MODELS:
                raise PulseSemanticError(f"unknown gradient model {m.text!r}", lineno, m.column)
            model = m.text
        p.expect_end()
        return Gradient(model)
    if kw == "pps":
        p.expect_end()
        return PPSPrepare()
    # acquire
    spin = p.channel()
    n_tok = p.tok
    if n_tok.kind != "num":
        raise p.error("missing point count", ("integer",))
    p.advance()
    try:
        points = int(n_tok.text)
    except ValueError:
        raise PulseSemanticError("point count must be an integer", lineno, n_tok.column) from None
    if points < 2:
        raise PulseSemanticError("acquisition needs at least 2 points", lineno, n_tok.column)
    dwell = 1e-3
    if p.tok.kind != "end":
        key = p.expect_name("dwell")
        if key.text != "dwell":
            raise PulseSemanticError(f"unknown acquire parameter {key.text!r}", lineno, key.column)
        p.expect_op("=")
        d_tok = p.tok
        q = p.duration()
        if q.j_power != 0 or q.coeff == 0:
            raise PulseSemanticError("dwell must be a positive time in seconds", lineno, d_tok.column)
        dwell = q.coeff
    p.expect_end()
    return AcquireFID(spin, points, dwell)


def parse(text: str) -> PulseProgram:
    """Parse program text; raises :class:`ProgramError` subclasses with positions."""
    name = ""
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = tokenize(raw, lineno)
        if tokens[0].kind == "end":
            continue
        p = _LineParser(tokens, lineno)
        stmt = _parse_statement(p, lineno)
        if isinstance(stmt, tuple):
            if name or instructions:
                raise PulseSemanticError("'program' must be the first statement", lineno, tokens[0].column)
            name = stmt[1]
        else:
            instructions.append(stmt)
    return PulseProgram(tuple(instructions), name)


def parse_file(path) -> PulseProgram:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
