"""Text formats: trace monomials such as ``tr(W1 W2)^2`` and trace polynomials.

Monomial grammar::

    expr   := factor (('*' | whitespace) factor)*
    factor := 'tr(' word ')' ('^' INT)?
    word   := letter+
    letter := ('x' | 'W') INT ('[' IDENT ']')?

Positions are numbered left to right across the whole expression (powers
expanded), each trace factor becoming one cycle.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .coloring import Coloring
from .moments import MomentSpec
from .perm import Permutation
from .words import Letter, TraceExpr, TraceWord

__all__ = ["ParseError", "Factor", "ExprAst", "parse_expression", "parse_trace_expr", "parse_word"]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<tr>trN|tr)\(
  | (?P<letter>[xW](?P<var>\d+)(?:\[(?P<hslot>[A-Za-z_][A-Za-z0-9_]*)\])?)
  | (?P<int>\d+)
  | (?P<sym>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[()*^+\-])
    """,
    re.VERBOSE,
)


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = next(k for k in ("ws", "tr", "letter", "int", "sym", "op") if m.group(k) is not None)
        if kind != "ws":
            out.append((kind, m, pos))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Stream:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None, what=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {what or value or kind}, found {self._show(tok)}", tok[2])
        if value is not None and tok[1].group(0) != value:
            raise ParseError(f"expected {value!r}, found {self._show(tok)}", tok[2])
        self.i += 1
        return tok

    def at(self, kind, value=None):
        tok = self.toks[self.i]
        return tok[0] == kind and (value is None or tok[1].group(0) == value)

    @staticmethod
    def _show(tok):
        return "end of input" if tok[0] == "end" else repr(tok[1].group(0))


def _letter(tok, max_var):
    m = tok[1]
    var = int(m.group("var"))
    if var < 1 or (max_var is not None and var > max_var):
        raise ParseError(f"undeclared variable {m.group('letter')}", tok[2])
    return Letter(var, m.group("hslot") or "")


def _word(st: _Stream, max_var) -> tuple[Letter, ...]:
    letters = []
    while st.at("letter"):
        letters.append(_letter(st.take(), max_var))
    if not letters:
        raise ParseError("empty trace", st.peek()[2])
    st.take("op", ")")
    return tuple(letters)


def _power(st: _Stream, allow_negative=False) -> int:
    if not st.at("op", "^"):
        return 1
    st.take()
    sign = 1
    if allow_negative and st.at("op", "-"):
        st.take()
        sign = -1
    tok = st.take("int", what="an integer exponent")
    k = sign * int(tok[1].group(0))
    if not allow_negative and k < 1:
        raise ParseError("exponent must be >= 1", tok[2])
    return k


@dataclass(frozen=True)
class Factor:
    word: tuple[Letter, ...]
    power: int = 1

    def __str__(self):
        body = "tr(" + " ".join(f"W{l.color}" + (f"[{l.hslot}]" if l.hslot else "") for l in self.word) + ")"
        return body + (f"^{self.power}" if self.power > 1 else "")


@dataclass(frozen=True)
class ExprAst:
    """A product of powers of traces of words."""

    factors: tuple[Factor, ...]

    def __str__(self):
        return " * ".join(map(str, self.factors))

    def words(self) -> list[tuple[Letter, ...]]:
        """Trace words with powers expanded, in position order."""
        return [f.word for f in self.factors for _ in range(f.power)]

    @property
    def n_vars(self) -> int:
        return max(l.color for f in self.factors for l in f.word)

    def to_spec(self) -> MomentSpec:
        images, colors, h = [], [], {}
        for word in self.words():
            base = len(images)
            for i, l in enumerate(word):
                images.append(base + (i + 1) % len(word))
                colors.append(l.color)
                if l.hslot:
                    h[base + i + 1] = l.hslot
        return MomentSpec(Permutation(tuple(images)), Coloring(tuple(colors)), h)


def parse_expression(text: str, s: int | None = None) -> ExprAst:
    """Parse a trace monomial; ``s`` (if given) bounds the variable indices."""
    st = _Stream(text)
    factors = []
    while True:
        tok = st.peek()
        if tok[0] != "tr" or tok[1].group("tr") != "tr":
            raise ParseError(f"expected 'tr(', found {st._show(tok)}", tok[2])
        st.take()
        word = _word(st, s)
        factors.append(Factor(word, _power(st)))
        if st.at("end"):
            break
        if st.at("op", "*"):
            st.take()
    return ExprAst(tuple(factors))


def parse_word(text: str) -> tuple[int, ...]:
    """Color sequence from ``x1 x2 x3`` / ``W1 W2`` / ``1,2,3``."""
    text = text.strip()
    if re.fullmatch(r"\d+(\s*,\s*\d+)*", text):
        return tuple(int(x) for x in text.split(","))
    st = _Stream(text)
    out = []
    while st.at("letter"):
        l = _letter(st.take(), None)
        if l.hslot:
            raise ParseError("h-slots are not allowed here", st.toks[st.i - 1][2])
        out.append(l.color)
    if not out or not st.at("end"):
        raise ParseError("expected a word of letters x1 x2 ...", st.peek()[2])
    return tuple(out)


def parse_trace_expr(text: str) -> TraceExpr:
    """Parse the printed form of a :class:`TraceExpr`, e.g.
    ``p1^2*p2*tr(x1 x2)^2 + 3*N^-1*lam1*trN(x1)``.

    Mixing ``tr`` and ``trN`` in one expression is rejected.
    """
    st = _Stream(text)
    terms = []
    flags = set()
    sign = 1
    if st.at("op", "-"):
        st.take()
        sign = -1
    elif st.at("op", "+"):
        st.take()
    while True:
        coef, mono, words = sign, {}, []
        while True:
            tok = st.peek()
            if tok[0] == "int":
                st.take()
                coef *= int(tok[1].group(0))
            elif tok[0] == "sym":
                st.take()
                name = tok[1].group(0)
                mono[name] = mono.get(name, 0) + _power(st, allow_negative=True)
            elif tok[0] == "tr":
                st.take()
                flags.add(tok[1].group("tr") == "trN")
                w = TraceWord(_word(st, None))
                words += [w] * _power(st)
            else:
                raise ParseError(f"expected a factor, found {st._show(tok)}", tok[2])
            if st.at("op", "*"):
                st.take()
                continue
            break
        terms.append((mono, words, coef))
        if st.at("end"):
            break
        tok = st.take("op")
        if tok[1].group(0) not in "+-":
            raise ParseError(f"expected '+' or '-', found {tok[1].group(0)!r}", tok[2])
        sign = 1 if tok[1].group(0) == "+" else -1
    if len(flags) > 1:
        raise ParseError("mixed tr and trN", 0)
    return TraceExpr.from_terms(terms, normalized=bool(flags and flags.pop()))
