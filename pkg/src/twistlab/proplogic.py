"""Propositional LPT0: matrices, tautology checking, and a Hilbert proof checker."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from . import twist
from .boolalg import BoolAlg
from .errors import BudgetExceeded
from .folast import (
    And, Formula, FormulaSyntaxError, Imp, Or, Pneg, PVar, SImp, Snot,
    parse_prop, prop_vars, render,
)

VALUATION_BUDGET = 10 ** 7
_CHUNK = 1 << 20


class MissingBindingError(KeyError):
    pass


# -- matrices ----------------------------------------------------------------

ONE, HALF, ZERO = Fraction(1), Fraction(1, 2), Fraction(0)

# Tables of the three-valued matrix, row = left operand, column = right.
_MPT0_AND = {
    ONE: {ONE: ONE, HALF: HALF, ZERO: ZERO},
    HALF: {ONE: HALF, HALF: HALF, ZERO: ZERO},
    ZERO: {ONE: ZERO, HALF: ZERO, ZERO: ZERO},
}
_MPT0_OR = {
    ONE: {ONE: ONE, HALF: ONE, ZERO: ONE},
    HALF: {ONE: ONE, HALF: HALF, ZERO: HALF},
    ZERO: {ONE: ONE, HALF: HALF, ZERO: ZERO},
}
_MPT0_IMP = {
    ONE: {ONE: ONE, HALF: HALF, ZERO: ZERO},
    HALF: {ONE: ONE, HALF: HALF, ZERO: ZERO},
    ZERO: {ONE: ONE, HALF: ONE, ZERO: ONE},
}
_MPT0_SIMP = {
    ONE: {ONE: ONE, HALF: ONE, ZERO: ZERO},
    HALF: {ONE: ONE, HALF: ONE, ZERO: ZERO},
    ZERO: {ONE: ONE, HALF: ONE, ZERO: ONE},
}
_MPT0_SNOT = {ONE: ZERO, HALF: ZERO, ZERO: ONE}
_MPT0_NEG = {ONE: ZERO, HALF: HALF, ZERO: ONE}
_MPT0_CIRC = {ONE: ONE, HALF: ZERO, ZERO: ONE}

MPT0_TABLES = {
    "and": _MPT0_AND, "or": _MPT0_OR, "imp": _MPT0_IMP, "simp": _MPT0_SIMP,
    "snot": _MPT0_SNOT, "neg": _MPT0_NEG, "circ": _MPT0_CIRC,
}

_BINARY_OPS = {And: "and", Or: "or", Imp: "imp", SImp: "simp"}
_UNARY_OPS = {Snot: "snot", Pneg: "neg"}


class Matrix:
    """A finite logical matrix: carrier, designated subset, operations."""

    name: str
    values: list
    unary_names = ("snot", "neg", "circ")
    binary_names = ("and", "or", "imp", "simp")

    def apply(self, op: str, *args):
        raise NotImplementedError

    def is_designated(self, x) -> bool:
        raise NotImplementedError

    def _index_tables(self):
        if not hasattr(self, "_tables"):
            index = {v: i for i, v in enumerate(self.values)}
            tables = {}
            for op in self.unary_names:
                tables[op] = np.array([index[self.apply(op, a)] for a in self.values], dtype=np.int32)
            for op in self.binary_names:
                tables[op] = np.array([[index[self.apply(op, a, b)] for b in self.values]
                                       for a in self.values], dtype=np.int32)
            self._tables = tables
            self._designated = np.array([self.is_designated(v) for v in self.values])
        return self._tables, self._designated


class MPT0Matrix(Matrix):
    name = "MPT0"

    def __init__(self):
        self.values = [ONE, HALF, ZERO]

    def apply(self, op, *args):
        table = MPT0_TABLES[op]
        return table[args[0]] if len(args) == 1 else table[args[0]][args[1]]

    def is_designated(self, x) -> bool:
        return x in (ONE, HALF)


_TWIST_OPS: dict[str, Callable] = {
    "and": twist.t_and, "or": twist.t_or, "imp": twist.t_imp, "simp": twist.t_simp,
    "snot": twist.t_snot, "neg": twist.t_neg, "circ": twist.t_circ,
}


class TwistMatrix(Matrix):
    def __init__(self, alg: BoolAlg):
        self.alg = alg
        self.name = f"Twist(n={alg.n})"
        self.values = twist.twist_domain(alg)

    def apply(self, op, *args):
        return _TWIST_OPS[op](*args)

    def is_designated(self, x) -> bool:
        return twist.is_designated(x)


MPT0 = MPT0Matrix()


def mpt0_to_twist(x: Fraction) -> twist.TwistVal:
    """1 -> (1,0), 1/2 -> (1,1), 0 -> (0,1) over the two-element algebra."""
    return {ONE: twist.one(1), HALF: twist.half(1), ZERO: twist.zero(1)}[x]


# -- evaluation --------------------------------------------------------------

def eval_formula(f: Formula, valuation: Mapping[str, object], matrix: Matrix):
    if isinstance(f, PVar):
        try:
            return valuation[f.name]
        except KeyError:
            raise MissingBindingError(f"no value for variable {f.name!r}") from None
    op = _BINARY_OPS.get(type(f))
    if op is not None:
        return matrix.apply(op, eval_formula(f.left, valuation, matrix),
                            eval_formula(f.right, valuation, matrix))
    op = _UNARY_OPS.get(type(f))
    if op is not None:
        return matrix.apply(op, eval_formula(f.arg, valuation, matrix))
    raise TypeError(f"not a propositional formula: {render(f)}")


def _eval_vector(f: Formula, columns: Mapping[str, np.ndarray], tables) -> np.ndarray:
    if isinstance(f, PVar):
        return columns[f.name]
    op = _BINARY_OPS.get(type(f))
    if op is not None:
        return tables[op][_eval_vector(f.left, columns, tables), _eval_vector(f.right, columns, tables)]
    op = _UNARY_OPS.get(type(f))
    if op is not None:
        return tables[op][_eval_vector(f.arg, columns, tables)]
    raise TypeError(f"not a propositional formula: {render(f)}")


@dataclass
class Verdict:
    holds: bool
    checked: int
    countervaluation: Optional[dict] = None


def _scan(formulas: Sequence[Formula], matrix: Matrix, budget: int) -> Verdict:
    """Find the first valuation designating every premise but not the last formula.

    Valuations are visited in lexicographic order of value indices, variables
    ordered by first occurrence.
    """
    names: list[str] = []
    for f in formulas:
        for v in prop_vars(f):
            if v not in names:
                names.append(v)
    k = len(matrix.values)
    total = k ** len(names)
    if total > budget:
        raise BudgetExceeded(total, budget, "valuations")
    tables, designated = matrix._index_tables()
    *premises, conclusion = formulas
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        columns = {}
        for pos, name in enumerate(names):
            columns[name] = (idx // k ** (len(names) - 1 - pos)) % k
        ok = np.ones(len(idx), dtype=bool)
        for p in premises:
            ok &= designated[_eval_vector(p, columns, tables)]
        bad = ok & ~designated[_eval_vector(conclusion, columns, tables)]
        if bad.any():
            row = int(np.argmax(bad))
            counter = {name: matrix.values[int(columns[name][row])] for name in names}
            return Verdict(False, start + row + 1, counter)
    return Verdict(True, total)


def is_tautology(f: Formula, matrix: Matrix, budget: int = VALUATION_BUDGET) -> Verdict:
    return _scan([f], matrix, budget)


def matrix_consequence(premises: Iterable[Formula], conclusion: Formula, matrix: Matrix,
                       budget: int = VALUATION_BUDGET) -> Verdict:
    return _scan([*premises, conclusion], matrix, budget)


def mp_preserves_designation(matrix: Matrix) -> Optional[tuple]:
    """Return a pair (x, y) with x and x -> y designated but y not, or None."""
    for x in matrix.values:
        if not matrix.is_designated(x):
            continue
        for y in matrix.values:
            if matrix.is_designated(matrix.apply("imp", x, y)) and not matrix.is_designated(y):
                return x, y
    return None


# -- axiom schemas -----------------------------------------------------------

# Metavariables are the propositional letters A, B, C of these patterns.
SCHEMA_TEXT = {
    "Ax1": "A -> (B -> A)",
    "Ax2": "(A -> (B -> C)) -> ((A -> B) -> (A -> C))",
    "Ax3": "A -> (B -> (A & B))",
    "Ax4": "(A & B) -> A",
    "Ax5": "(A & B) -> B",
    "Ax6": "A -> (A | B)",
    "Ax7": "B -> (A | B)",
    "Ax8": "(A -> C) -> ((B -> C) -> ((A | B) -> C))",
    "Ax9": "A | (A -> B)",
    "TND": "A | ~A",
    "exp": "A -> (~A -> B)",
    "TNDn": "A | !A",
    "dneg": "!!A <-> A",
    "negor": "!(A | B) <-> (!A & !B)",
    "negand": "!(A & B) <-> (!A | !B)",
    "negimp": "!(A -> B) <-> (A & !B)",
}
SCHEMAS: dict[str, Formula] = {name: parse_prop(text) for name, text in SCHEMA_TEXT.items()}
METAVARS = ("A", "B", "C")


def _match(pattern: Formula, f: Formula, binding: dict) -> bool:
    if isinstance(pattern, PVar) and pattern.name in METAVARS:
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f
            return True
        return bound == f
    if type(pattern) is not type(f):
        return False
    if isinstance(pattern, PVar):
        return pattern == f
    if isinstance(pattern, (Snot, Pneg)):
        return _match(pattern.arg, f.arg, binding)
    return _match(pattern.left, f.left, binding) and _match(pattern.right, f.right, binding)


def instance_of(schema: str, f: Formula) -> Optional[dict]:
    binding: dict = {}
    return binding if _match(SCHEMAS[schema], f, binding) else None


def match_axiom(f: Formula) -> Optional[str]:
    """First schema (in listing order) that ``f`` instantiates."""
    for name in SCHEMAS:
        if instance_of(name, f) is not None:
            return name
    return None


def instantiate(schema: str, **subst: Formula) -> Formula:
    def go(p: Formula) -> Formula:
        if isinstance(p, PVar) and p.name in METAVARS:
            return subst.get(p.name, p)
        if isinstance(p, (Snot, Pneg)):
            return type(p)(go(p.arg))
        if isinstance(p, PVar):
            return p
        return type(p)(go(p.left), go(p.right))
    return go(SCHEMAS[schema])


# -- proof scripts -----------------------------------------------------------

class ProofScriptError(ValueError):
    pass


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    rule: str
    refs: tuple[int, ...] = ()


@dataclass
class ProofScript:
    lines: list[ProofLine] = field(default_factory=list)


@dataclass
class ProofVerdict:
    ok: bool
    first_bad_line: Optional[int] = None
    reason: str = ""


_LINE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*$")
_MP = re.compile(r"^MP\s+(\d+)\s+(\d+)$")


def parse_proof(text: str) -> ProofScript:
    """Read ``<index>. <formula> ; <justification>`` lines; blank lines are skipped."""
    script = ProofScript()
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        m = _LINE.match(raw)
        if not m:
            raise ProofScriptError(f"line {lineno}: expected '<index>. <formula> ; <justification>'")
        index, body, just = int(m.group(1)), m.group(2), m.group(3)
        try:
            f = parse_prop(body)
        except FormulaSyntaxError as e:
            raise ProofScriptError(f"line {lineno}: {e}") from None
        mp = _MP.match(just)
        if mp:
            script.lines.append(ProofLine(index, f, "MP", (int(mp.group(1)), int(mp.group(2)))))
        elif just in SCHEMAS:
            script.lines.append(ProofLine(index, f, just))
        else:
            raise ProofScriptError(f"line {lineno}: unknown justification {just!r}")
    return script


def render_proof(script: ProofScript) -> str:
    out = []
    for ln in script.lines:
        just = ln.rule if ln.rule != "MP" else f"MP {ln.refs[0]} {ln.refs[1]}"
        out.append(f"{ln.index}. {render(ln.formula)} ; {just}")
    return "\n".join(out) + "\n"


def check_proof(script: ProofScript) -> ProofVerdict:
    """Validate each line against its cited schema or against MP.

    ``MP i j`` accepts the minor premise and the implication in either order.
    References must point to earlier lines; anything else is a malformed
    script and raises ``ProofScriptError``.
    """
    seen: dict[int, Formula] = {}
    for ln in script.lines:
        if ln.index in seen:
            raise ProofScriptError(f"duplicate line index {ln.index}")
        if ln.rule == "MP":
            for r in ln.refs:
                if r not in seen:
                    raise ProofScriptError(f"line {ln.index}: MP cites {r}, which is not an earlier line")
            a, b = (seen[r] for r in ln.refs)
            if not (b == Imp(a, ln.formula) or a == Imp(b, ln.formula)):
                return ProofVerdict(False, ln.index, f"MP {ln.refs[0]} {ln.refs[1]} does not yield this formula")
        elif instance_of(ln.rule, ln.formula) is None:
            return ProofVerdict(False, ln.index, f"not an instance of {ln.rule}")
        seen[ln.index] = ln.formula
    return ProofVerdict(True)


# -- a two-valued countermodel for the schema list ----------------------------

def schema_bivaluation(f: Formula, atoms: Mapping[str, bool]) -> bool:
    """Classical on the positive connectives and ~; ! is fixed by the ! axioms.

    !X is true when X is an atom or a ~-formula, and is otherwise forced by
    dneg, negor, negand and negimp.  All sixteen schemas come out true and MP
    preserves truth, yet ``!~p -> p`` is false at p = false.
    """
    if isinstance(f, PVar):
        return atoms[f.name]
    if isinstance(f, And):
        return schema_bivaluation(f.left, atoms) and schema_bivaluation(f.right, atoms)
    if isinstance(f, Or):
        return schema_bivaluation(f.left, atoms) or schema_bivaluation(f.right, atoms)
    if isinstance(f, Imp):
        return (not schema_bivaluation(f.left, atoms)) or schema_bivaluation(f.right, atoms)
    if isinstance(f, Snot):
        return not schema_bivaluation(f.arg, atoms)
    if isinstance(f, Pneg):
        g = f.arg
        if isinstance(g, (PVar, Snot)):
            return True
        if isinstance(g, Pneg):
            return schema_bivaluation(g.arg, atoms)
        if isinstance(g, Or):
            return schema_bivaluation(Pneg(g.left), atoms) and schema_bivaluation(Pneg(g.right), atoms)
        if isinstance(g, And):
            return schema_bivaluation(Pneg(g.left), atoms) or schema_bivaluation(Pneg(g.right), atoms)
        if isinstance(g, Imp):
            return schema_bivaluation(g.left, atoms) and schema_bivaluation(Pneg(g.right), atoms)
    raise TypeError(f"unsupported formula: {render(f)}")
