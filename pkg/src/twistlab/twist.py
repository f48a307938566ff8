"""Twist domains over 2^n and the connective algebras for LPT0 and (PS3, ¬).

A twist value is a pair (z1, z2) of atom masks with z1 | z2 = top.  The
first coordinate carries the positive truth degree, the second the degree
reported by the paraconsistent negation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional

from .boolalg import AlgebraMismatchError, BAElem, BoolAlg


class Semantics(str, enum.Enum):
    LPT0 = "lpt0"
    PS3 = "ps3"


@dataclass(frozen=True, slots=True)
class TwistVal:
    z1: int
    z2: int
    n: int

    def __post_init__(self):
        top = (1 << self.n) - 1
        if (self.z1 | self.z2) != top or (self.z1 | self.z2) >> self.n:
            raise ValueError(f"({self.z1:#x},{self.z2:#x}) is not in the twist domain over 2^{self.n}")

    @property
    def first(self) -> BAElem:
        return BAElem(self.z1, self.n)

    @property
    def second(self) -> BAElem:
        return BAElem(self.z2, self.n)

    def __repr__(self):
        return f"TwistVal({self.z1:#x},{self.z2:#x}/{self.n})"


def one(n: int) -> TwistVal:
    return TwistVal((1 << n) - 1, 0, n)


def half(n: int) -> TwistVal:
    top = (1 << n) - 1
    return TwistVal(top, top, n)


def zero(n: int) -> TwistVal:
    return TwistVal(0, (1 << n) - 1, n)


def from_pair(x: BAElem, y: BAElem) -> TwistVal:
    if x.n != y.n:
        raise AlgebraMismatchError("coordinates from different algebras")
    return TwistVal(x.mask, y.mask, x.n)


def symbol(x: TwistVal) -> Optional[str]:
    """'1', '1/2' or '0' for the three constants, None otherwise."""
    top = (1 << x.n) - 1
    return {(top, 0): "1", (top, top): "1/2", (0, top): "0"}.get((x.z1, x.z2))


def twist_domain(alg: BoolAlg) -> list[TwistVal]:
    """T_A in lexicographic (z1, z2) mask order."""
    top = alg.top_mask
    return [TwistVal(a, b, alg.n)
            for a, b in product(range(top + 1), repeat=2) if a | b == top]


def _n(x: TwistVal, y: TwistVal) -> int:
    if x.n != y.n:
        raise AlgebraMismatchError(f"twist values over 2^{x.n} and 2^{y.n}")
    return x.n


def t_and(x: TwistVal, y: TwistVal) -> TwistVal:
    return TwistVal(x.z1 & y.z1, x.z2 | y.z2, _n(x, y))


def t_or(x: TwistVal, y: TwistVal) -> TwistVal:
    return TwistVal(x.z1 | y.z1, x.z2 & y.z2, _n(x, y))


def t_imp(x: TwistVal, y: TwistVal) -> TwistVal:
    n = _n(x, y)
    top = (1 << n) - 1
    return TwistVal((~x.z1 | y.z1) & top, x.z1 & y.z2, n)


def t_simp(x: TwistVal, y: TwistVal) -> TwistVal:
    """Implication of (PS3, ¬); the result is always of the form (a, ~a)."""
    n = _n(x, y)
    top = (1 << n) - 1
    return TwistVal((~x.z1 | y.z1) & top, x.z1 & ~y.z1 & top, n)


def t_snot(x: TwistVal) -> TwistVal:
    return TwistVal(~x.z1 & ((1 << x.n) - 1), x.z1, x.n)


def t_neg(x: TwistVal) -> TwistVal:
    return TwistVal(x.z2, x.z1, x.n)


def t_circ(x: TwistVal) -> TwistVal:
    both = x.z1 & x.z2
    return TwistVal(~both & ((1 << x.n) - 1), both, x.n)


def implication(semantics: Semantics) -> Callable[[TwistVal, TwistVal], TwistVal]:
    return t_simp if Semantics(semantics) is Semantics.PS3 else t_imp


def t_leq(x: TwistVal, y: TwistVal) -> bool:
    _n(x, y)
    return x.z1 & ~y.z1 == 0 and y.z2 & ~x.z2 == 0


def _members(alg: BoolAlg, xs: Iterable[TwistVal]) -> list[TwistVal]:
    xs = list(xs)
    for x in xs:
        if x.n != alg.n:
            raise AlgebraMismatchError(f"twist value over 2^{x.n} passed to 2^{alg.n}")
    return xs


def t_big_meet(alg: BoolAlg, xs: Iterable[TwistVal]) -> TwistVal:
    a, b = alg.top_mask, 0
    for x in _members(alg, xs):
        a &= x.z1
        b |= x.z2
    return TwistVal(a, b, alg.n)


def t_big_join(alg: BoolAlg, xs: Iterable[TwistVal]) -> TwistVal:
    a, b = 0, alg.top_mask
    for x in _members(alg, xs):
        a |= x.z1
        b &= x.z2
    return TwistVal(a, b, alg.n)


def is_designated(x: TwistVal) -> bool:
    return x.z1 == (1 << x.n) - 1


@dataclass
class ImplicationReport:
    holds: bool
    semantics: Semantics
    n: int
    triples_checked: int
    failed_property: Optional[str] = None
    counterexample: Optional[tuple[TwistVal, TwistVal, TwistVal]] = None


def check_reasonable_implication(alg: BoolAlg, impl: Semantics) -> ImplicationReport:
    """Exhaustive scan of (P1)-(P3) over all triples of T_A.

    (P1) z ∧ w ≤ u  implies  z ≤ (w ⇒ u)
    (P2) z ≤ w      implies  (u ⇒ z) ≤ (u ⇒ w)
    (P3) z ≤ w      implies  (w ⇒ u) ≤ (z ⇒ u)
    """
    if alg.n > 3:
        raise ValueError("triple scan limited to n <= 3")
    impl = Semantics(impl)
    arrow = implication(impl)
    dom = twist_domain(alg)
    count = 0
    for z, w, u in product(dom, repeat=3):
        count += 1
        if t_leq(t_and(z, w), u) and not t_leq(z, arrow(w, u)):
            return ImplicationReport(False, impl, alg.n, count, "P1", (z, w, u))
        if t_leq(z, w):
            if not t_leq(arrow(u, z), arrow(u, w)):
                return ImplicationReport(False, impl, alg.n, count, "P2", (z, w, u))
            if not t_leq(arrow(w, u), arrow(z, u)):
                return ImplicationReport(False, impl, alg.n, count, "P3", (z, w, u))
    return ImplicationReport(True, impl, alg.n, count)
