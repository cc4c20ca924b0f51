"""Text syntax for exists*-forall* HyperLTL.

::

    exists p1. forall p2. (F "goal"_p2) | (F (!("act_a"_p1 <-> "act_a"_p2)))

Precedence from tightest: unary (``!``, ``X``, ``F``, ``G``), ``U``, ``&``,
``|``, ``->``, ``<->``.  ``U`` and ``->`` associate to the right, ``<->`` to
the left; unparenthesised ``&``/``|`` chains become one n-ary node.  The
emitter parenthesises every operand that is not an atom or constant, so
``parse(emit(f)) == f``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .. import ltl
from ..errors import ParseError

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<atom>"(?P<prop>[^"\n]+)"_(?P<var>[A-Za-z_][A-Za-z0-9_]*))
  | (?P<op><->|->|[!&|().])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)
_KEYWORDS = {"X", "F", "G", "U", "true", "false", "exists", "forall"}


@dataclass(frozen=True)
class Token:
    kind: str  # atom, op, ident, kw, eof
    text: str
    line: int
    col: int
    value: tuple = ()


def tokenize(text: str) -> list:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(line, col, "a token", text[pos])
        if m.group("ws"):
            chunk = m.group("ws")
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        elif m.group("atom"):
            out.append(Token("atom", m.group("atom"), line, col, (m.group("prop"), m.group("var"))))
        elif m.group("op"):
            out.append(Token("op", m.group("op"), line, col))
        else:
            word = m.group("ident")
            out.append(Token("kw" if word in _KEYWORDS else "ident", word, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("op", "kw") and tok.text == text

    def expect(self, text: str, what: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(text):
            raise ParseError(tok.line, tok.col, what or repr(text), tok.text or "end of input")
        return self.next()

    def formula(self) -> ltl.HyperFormula:
        prefix = []
        while self.at("exists") or self.at("forall"):
            q = self.next().text
            tok = self.next()
            if tok.kind != "ident":
                raise ParseError(tok.line, tok.col, "a path variable", tok.text or "end of input")
            self.expect(".")
            prefix.append((q, tok.text))
        body = self.iff()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(tok.line, tok.col, "end of input", tok.text)
        return ltl.HyperFormula.from_prefix(prefix, body)

    def iff(self):
        left = self.implies()
        while self.at("<->"):
            self.next()
            left = ltl.Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disjunction()
        if self.at("->"):
            self.next()
            return ltl.Implies(left, self.implies())
        return left

    def disjunction(self):
        args = [self.conjunction()]
        while self.at("|"):
            self.next()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else ltl.Or(tuple(args))

    def conjunction(self):
        args = [self.until()]
        while self.at("&"):
            self.next()
            args.append(self.until())
        return args[0] if len(args) == 1 else ltl.And(tuple(args))

    def until(self):
        left = self.unary()
        if self.at("U"):
            self.next()
            return ltl.Until(left, self.until())
        return left

    def unary(self):
        if self.at("!"):
            self.next()
            return ltl.Not(self.unary())
        for kw, node in (("X", ltl.Next), ("F", ltl.Eventually), ("G", ltl.Globally)):
            if self.at(kw):
                self.next()
                return node(self.unary())
        return self.primary()

    def primary(self):
        tok = self.next()
        if tok.kind == "atom":
            return ltl.Atom(*tok.value)
        if tok.kind == "kw" and tok.text in ("true", "false"):
            return ltl.BoolConst(tok.text == "true")
        if tok.kind == "op" and tok.text == "(":
            inner = self.iff()
            self.expect(")")
            return inner
        raise ParseError(tok.line, tok.col, "an atom, constant or '('", tok.text or "end of input")


def parse_hyperltl(text: str) -> ltl.HyperFormula:
    return _Parser(text).formula()


def parse_body(text: str) -> ltl.LtlBody:
    """Parse a quantifier-free body; path variables are not checked."""
    p = _Parser(text)
    body = p.iff()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(tok.line, tok.col, "end of input", tok.text)
    return body


# ---------------------------------------------------------------------------
# emission

_BINARY = {ltl.Implies: "->", ltl.Iff: "<->", ltl.Until: "U"}
_UNARY = {ltl.Next: "X", ltl.Eventually: "F", ltl.Globally: "G"}


def emit_body(f: ltl.LtlBody) -> str:
    if isinstance(f, ltl.Atom):
        if '"' in f.prop or "\n" in f.prop:
            raise ValueError(f"proposition {f.prop!r} cannot be quoted")
        return f'"{f.prop}"_{f.var}'
    if isinstance(f, ltl.BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, ltl.Not):
        return "!" + _operand(f.arg)
    if type(f) in _UNARY:
        return f"{_UNARY[type(f)]} {_operand(f.arg)}"
    if isinstance(f, (ltl.And, ltl.Or)):
        if not f.args:
            return "true" if isinstance(f, ltl.And) else "false"
        sep = " & " if isinstance(f, ltl.And) else " | "
        return sep.join(_operand(a) for a in f.args)
    if type(f) in _BINARY:
        return f"{_operand(f.left)} {_BINARY[type(f)]} {_operand(f.right)}"
    raise TypeError(f"not an LTL body: {f!r}")


def _operand(f: ltl.LtlBody) -> str:
    text = emit_body(f)
    if isinstance(f, (ltl.Atom, ltl.BoolConst)):
        return text
    if isinstance(f, (ltl.And, ltl.Or)) and len(f.args) < 2:
        return text if not f.args else _operand(f.args[0])
    return f"({text})"


def emit_hyperltl(f: ltl.HyperFormula) -> str:
    prefix = [f"exists {v}." for v in f.exist_vars] + [f"forall {v}." for v in f.univ_vars]
    return " ".join(prefix + [emit_body(f.body)])


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())
