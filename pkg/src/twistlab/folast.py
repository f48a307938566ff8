"""Formula ASTs, the ASCII grammar, and syntactic classifiers.

One AST family serves both the propositional language (atoms are ``PVar``)
and the first-order set-theoretic language (atoms ``Mem`` and ``Eq``).

Grammar, loosest binding first::

    formula := ('forall' | 'exists') IDENT ['in' term] '.' formula | impl
    impl    := disj [('->' | '=>' | '<->') impl]        right associative
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := ('~' | '!' | 'O') unary | quantifier | '(' formula ')' | atom
    atom    := term ('in' | '=') term  |  IDENT          (IDENT: propositional)
    term    := IDENT | '#' NAT | 'empty'

Derived forms are expanded while parsing: ``a <-> b`` becomes
``(a -> b) & (b -> a)``, ``O a`` becomes ``~(a & !a)``, and the bounded
quantifiers become ``forall x . (x in t -> ..)`` / ``exists x . (x in t & ..)``.
``render`` folds those shapes back into sugar, so ``parse(render(f)) == f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    id: int


@dataclass(frozen=True)
class EmptyConst:
    """The empty element; resolved against the store at evaluation time."""


Term = Union[Var, Const, EmptyConst]


# -- formulas ----------------------------------------------------------------

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class PVar(Formula):
    name: str


@dataclass(frozen=True)
class Mem(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class SImp(Formula):
    """The (PS3, ¬) implication ``=>``."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Snot(Formula):
    """Strong (classical) negation ``~``."""
    arg: Formula


@dataclass(frozen=True)
class Pneg(Formula):
    """Paraconsistent negation ``!``."""
    arg: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


BINARY = (And, Or, Imp, SImp)
UNARY = (Snot, Pneg)
QUANT = (Forall, Exists)
ATOMIC = (PVar, Mem, Eq)


def circ(a: Formula) -> Formula:
    return Snot(And(a, Pneg(a)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def bounded_forall(var: str, bound: Term, body: Formula) -> Formula:
    return Forall(var, Imp(Mem(Var(var), bound), body))


def bounded_exists(var: str, bound: Term, body: Formula) -> Formula:
    return Exists(var, And(Mem(Var(var), bound), body))


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, UNARY):
        yield from subformulas(f.arg)
    elif isinstance(f, QUANT):
        yield from subformulas(f.body)


def depth(f: Formula) -> int:
    if isinstance(f, BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, UNARY):
        return 1 + depth(f.arg)
    if isinstance(f, QUANT):
        return 1 + depth(f.body)
    return 0


# -- parsing -----------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


KEYWORDS = {"forall", "exists", "in", "empty", "O"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|=>|[&|~!().=])
  | (?P<const>\#\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            val = m.group()
            if kind == "ident" and val in KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, val, line, pos - line_start + 1))
        pos = m.end()
    end_col = len(text) - line_start + 1
    toks.append(_Tok("eof", "", line, end_col))
    return toks


class _Parser:
    def __init__(self, text: str, propositional: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.prop = propositional

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise FormulaSyntaxError(msg, tok.line, tok.col)

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.cur
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            self.error(f"expected {want}, got {got}")
        self.i += 1
        return tok

    def at(self, *texts: str) -> bool:
        return self.cur.kind in ("op", "kw") and self.cur.text in texts

    def parse(self) -> Formula:
        f = self.formula()
        if self.cur.kind != "eof":
            self.error(f"unexpected {self.cur.text!r}")
        return f

    def formula(self) -> Formula:
        if self.at("forall", "exists"):
            return self.quantifier()
        return self.impl()

    def quantifier(self) -> Formula:
        tok = self.take()
        if self.prop:
            self.error("quantifiers are not allowed in propositional formulas", tok)
        var = self.take(kind="ident").text
        bound = None
        if self.at("in"):
            self.take("in")
            bound = self.term()
        self.take(".")
        body = self.formula()
        if tok.text == "forall":
            return bounded_forall(var, bound, body) if bound is not None else Forall(var, body)
        return bounded_exists(var, bound, body) if bound is not None else Exists(var, body)

    def impl(self) -> Formula:
        left = self.disj()
        if self.at("->", "=>", "<->"):
            op = self.take().text
            right = self.impl()
            if op == "->":
                return Imp(left, right)
            if op == "=>":
                return SImp(left, right)
            return iff(left, right)
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("~"):
            self.take()
            return Snot(self.unary())
        if self.at("!"):
            self.take()
            return Pneg(self.unary())
        if self.at("O"):
            self.take()
            return circ(self.unary())
        if self.at("forall", "exists"):
            return self.quantifier()
        if self.at("("):
            self.take()
            f = self.formula()
            self.take(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        tok = self.cur
        if tok.kind == "ident" and not (self.toks[self.i + 1].text in ("in", "=")):
            self.i += 1
            return PVar(tok.text)
        if self.prop:
            self.error("set-theoretic atoms are not allowed in propositional formulas")
        left = self.term()
        if self.at("in"):
            self.take()
            return Mem(left, self.term())
        if self.at("="):
            self.take()
            return Eq(left, self.term())
        self.error("expected 'in' or '='")

    def term(self) -> Term:
        tok = self.cur
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "const":
            self.i += 1
            return Const(int(tok.text[1:]))
        if tok.kind == "kw" and tok.text == "empty":
            self.i += 1
            return EmptyConst()
        self.error(f"expected a term, got {tok.text!r}" if tok.kind != "eof" else "expected a term, got end of input")


def parse(text: str) -> Formula:
    return _Parser(text, propositional=False).parse()


def parse_prop(text: str) -> Formula:
    """Parse the propositional fragment; quantifiers and set atoms are rejected."""
    return _Parser(text, propositional=True).parse()


# -- rendering ---------------------------------------------------------------

_QUANT, _IMPL, _DISJ, _CONJ, _UNARY = 0, 1, 2, 3, 4


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return f"#{t.id}"
    return "empty"


def _term_vars(t: Term) -> set[str]:
    return {t.name} if isinstance(t, Var) else set()


def _as_bounded(f: Formula):
    body = f.body
    inner = Imp if isinstance(f, Forall) else And
    if (isinstance(body, inner) and isinstance(body.left, Mem)
            and body.left.left == Var(f.var) and f.var not in _term_vars(body.left.right)):
        return body.left.right, body.right
    return None


def _as_iff(f: Formula):
    if (isinstance(f, And) and isinstance(f.left, Imp) and isinstance(f.right, Imp)
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


def _as_circ(f: Formula):
    if (isinstance(f, Snot) and isinstance(f.arg, And) and isinstance(f.arg.right, Pneg)
            and f.arg.right.arg == f.arg.left):
        return f.arg.left
    return None


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, QUANT):
        kw = "forall" if isinstance(f, Forall) else "exists"
        b = _as_bounded(f)
        if b is not None:
            s = f"{kw} {f.var} in {render_term(b[0])} . {_render(b[1], _QUANT)}"
        else:
            s = f"{kw} {f.var} . {_render(f.body, _QUANT)}"
        return s if ctx == _QUANT else f"({s})"

    pair = _as_iff(f)
    if pair is not None:
        s = f"{_render(pair[0], _DISJ)} <-> {_render(pair[1], _IMPL)}"
        return s if ctx <= _IMPL else f"({s})"
    if isinstance(f, (Imp, SImp)):
        op = "->" if isinstance(f, Imp) else "=>"
        s = f"{_render(f.left, _DISJ)} {op} {_render(f.right, _IMPL)}"
        return s if ctx <= _IMPL else f"({s})"
    if isinstance(f, Or):
        s = f"{_render(f.left, _DISJ)} | {_render(f.right, _CONJ)}"
        return s if ctx <= _DISJ else f"({s})"
    if isinstance(f, And):
        s = f"{_render(f.left, _CONJ)} & {_render(f.right, _UNARY)}"
        return s if ctx <= _CONJ else f"({s})"

    inner = _as_circ(f)
    if inner is not None:
        return f"O {_render(inner, _UNARY)}"
    if isinstance(f, Snot):
        return f"~{_render(f.arg, _UNARY)}"
    if isinstance(f, Pneg):
        return f"!{_render(f.arg, _UNARY)}"
    if isinstance(f, PVar):
        return f.name
    if isinstance(f, Mem):
        return f"{render_term(f.left)} in {render_term(f.right)}"
    if isinstance(f, Eq):
        return f"{render_term(f.left)} = {render_term(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


def render(f: Formula) -> str:
    return _render(f, _QUANT)


# -- classifiers -------------------------------------------------------------

class ClassificationError(ValueError):
    pass


class CaptureError(ValueError):
    pass


def is_pure(f: Formula) -> bool:
    return not any(isinstance(g, Pneg) for g in subformulas(f))


def is_restricted(f: Formula) -> bool:
    """Syntactic check: every quantifier is bounded by a membership guard."""
    if not is_pure(f):
        raise ClassificationError("restricted formulas are defined only for pure formulas")
    return all(_as_bounded(g) is not None for g in subformulas(f) if isinstance(g, QUANT))


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, (Mem, Eq)):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, PVar):
        return set()
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, UNARY):
        return free_vars(f.arg)
    if isinstance(f, QUANT):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def prop_vars(f: Formula) -> list[str]:
    """Propositional variables in order of first occurrence."""
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, PVar):
            seen.setdefault(g.name)
    return list(seen)


def constants(f: Formula) -> set[int]:
    out = set()
    for g in subformulas(f):
        if isinstance(g, (Mem, Eq)):
            out.update(t.id for t in (g.left, g.right) if isinstance(t, Const))
    return out


def substitute(f: Formula, var: str, t: Term) -> Formula:
    """f[var/t]; bound occurrences are left alone."""
    def sub_term(s: Term) -> Term:
        return t if s == Var(var) else s

    if isinstance(f, Mem):
        return Mem(sub_term(f.left), sub_term(f.right))
    if isinstance(f, Eq):
        return Eq(sub_term(f.left), sub_term(f.right))
    if isinstance(f, PVar):
        return f
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, UNARY):
        return type(f)(substitute(f.arg, var, t))
    if isinstance(f, QUANT):
        if f.var == var:
            return f
        if isinstance(t, Var) and t.name == f.var and var in free_vars(f.body):
            raise CaptureError(f"substituting {t.name} for {var} would be captured by {f.var}")
        return type(f)(f.var, substitute(f.body, var, t))
    raise TypeError(f"not a formula: {f!r}")
