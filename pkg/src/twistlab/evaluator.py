"""Twist truth values of set-theoretic formulas over a bounded universe.

Membership and equality are computed by the mutual recursion

    [[u in v]] = join over x in dom(v) of  v(x) ∧ [[x = u]]
    [[u = v]]  = meet over x in dom(u) of (u(x) -> [[x in v]])
               ∧ meet over x in dom(v) of (v(x) -> [[x in u]])

where -> is the LPT0 implication or, under PS3 semantics, the (PS3, ¬)
implication.  Every recursive call strictly lowers rank(u) + rank(v).
Quantifiers range over an explicit finite carrier.
"""

from __future__ import annotations

from itertools import product
from typing import Mapping, Optional, Sequence

from .errors import BudgetExceeded
from .folast import (
    And, Const, EmptyConst, Eq, Exists, Forall, Formula, Imp, Mem, Or, Pneg,
    PVar, SImp, Snot, Term, Var, free_vars, render,
)
from .twist import Semantics, TwistVal, is_designated
from .universe import UniverseStore, UnknownElementError, empty_element

Assignment = Mapping[str, int]


class UnboundVariableError(KeyError):
    pass


class SemanticsError(ValueError):
    pass


class EvalContext:
    def __init__(self, store: UniverseStore, semantics: Semantics | str = Semantics.LPT0,
                 carrier: Sequence[int] = (), memoize: bool = True, normalize_eq: bool = True):
        self.store = store
        self.alg = store.alg
        self.semantics = Semantics(semantics)
        for c in carrier:
            if c not in store:
                raise UnknownElementError(c)
        self.carrier = tuple(carrier)
        self.memoize = memoize
        # Keying equality by (min, max) relies on symmetry; turn it off to test that.
        self.normalize_eq = normalize_eq
        self._mem_memo: dict[tuple[int, int], tuple[int, int]] = {}
        self._eq_memo: dict[tuple[int, int], tuple[int, int]] = {}
        self._top = store.alg.top_mask
        self._ps3 = self.semantics is Semantics.PS3
        # When set to a list, receives (caller_measure, callee_measure) pairs.
        self.instrument: Optional[list] = None
        self._stack: list[int] = []

    def fresh(self, memoize: bool = False, carrier: Sequence[int] | None = None) -> "EvalContext":
        return EvalContext(self.store, self.semantics,
                           self.carrier if carrier is None else carrier, memoize, self.normalize_eq)

    def with_carrier(self, carrier: Sequence[int]) -> "EvalContext":
        """Same store and semantics, new quantifier range; atomic memo is shared."""
        ctx = EvalContext(self.store, self.semantics, carrier, self.memoize, self.normalize_eq)
        ctx._mem_memo = self._mem_memo
        ctx._eq_memo = self._eq_memo
        return ctx

    def _tv(self, pair: tuple[int, int]) -> TwistVal:
        return TwistVal(pair[0], pair[1], self.alg.n)

    # -- atomic values -------------------------------------------------------

    def _enter(self, u: int, v: int):
        if self.instrument is not None:
            m = self.store.rank(u) + self.store.rank(v)
            if self._stack:
                self.instrument.append((self._stack[-1], m))
            self._stack.append(m)

    def _leave(self):
        if self.instrument is not None:
            self._stack.pop()

    def _mem(self, u: int, v: int) -> tuple[int, int]:
        key = (u, v)
        if self.memoize:
            hit = self._mem_memo.get(key)
            if hit is not None:
                return hit
        self._enter(u, v)
        a, b = 0, self._top
        for x, val in self.store.entries(v):
            e1, e2 = self._eq(x, u)
            a |= val.z1 & e1
            b &= val.z2 | e2
        self._leave()
        if self.memoize:
            self._mem_memo[key] = (a, b)
        return a, b

    def _eq(self, u: int, v: int) -> tuple[int, int]:
        key = (u, v) if u <= v or not self.normalize_eq else (v, u)
        if self.memoize:
            hit = self._eq_memo.get(key)
            if hit is not None:
                return hit
        self._enter(u, v)
        top = self._top
        a, b = top, 0
        for left, right in ((u, v), (v, u)):
            for x, val in self.store.entries(left):
                m1, m2 = self._mem(x, right)
                a &= ~val.z1 | m1
                b |= val.z1 & (~m1 if self._ps3 else m2)
        a &= top
        b &= top
        self._leave()
        if self.memoize:
            self._eq_memo[key] = (a, b)
        return a, b

    def val_mem(self, u: int, v: int) -> TwistVal:
        self.store.rank(u), self.store.rank(v)
        return self._tv(self._mem(u, v))

    def val_eq(self, u: int, v: int) -> TwistVal:
        self.store.rank(u), self.store.rank(v)
        return self._tv(self._eq(u, v))

    # -- formulas ------------------------------------------------------------

    def _term(self, t: Term, env: Mapping[str, int]) -> int:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariableError(f"variable {t.name!r} is unbound") from None
        if isinstance(t, Const):
            if t.id not in self.store:
                raise UnknownElementError(t.id)
            return t.id
        if isinstance(t, EmptyConst):
            return empty_element(self.store)
        raise TypeError(f"not a term: {t!r}")

    def _val(self, f: Formula, env: dict) -> tuple[int, int]:
        top = self._top
        if isinstance(f, Mem):
            return self._mem(self._term(f.left, env), self._term(f.right, env))
        if isinstance(f, Eq):
            return self._eq(self._term(f.left, env), self._term(f.right, env))
        if isinstance(f, And):
            a1, a2 = self._val(f.left, env)
            b1, b2 = self._val(f.right, env)
            return a1 & b1, a2 | b2
        if isinstance(f, Or):
            a1, a2 = self._val(f.left, env)
            b1, b2 = self._val(f.right, env)
            return a1 | b1, a2 & b2
        if isinstance(f, Imp):
            a1, _ = self._val(f.left, env)
            b1, b2 = self._val(f.right, env)
            return (~a1 | b1) & top, a1 & b2
        if isinstance(f, SImp):
            if not self._ps3:
                raise SemanticsError("'=>' is only available under PS3 semantics")
            a1, _ = self._val(f.left, env)
            b1, _ = self._val(f.right, env)
            return (~a1 | b1) & top, a1 & ~b1 & top
        if isinstance(f, Snot):
            a1, _ = self._val(f.arg, env)
            return ~a1 & top, a1
        if isinstance(f, Pneg):
            a1, a2 = self._val(f.arg, env)
            return a2, a1
        if isinstance(f, (Forall, Exists)):
            saved = env.get(f.var)
            is_all = isinstance(f, Forall)
            a, b = (top, 0) if is_all else (0, top)
            for c in self.carrier:
                env[f.var] = c
                x1, x2 = self._val(f.body, env)
                if is_all:
                    a &= x1
                    b |= x2
                else:
                    a |= x1
                    b &= x2
            if saved is None:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
            return a, b
        if isinstance(f, PVar):
            raise TypeError(f"propositional variable {f.name!r} in a set-theoretic formula")
        raise TypeError(f"not a formula: {f!r}")

    def val_formula(self, f: Formula, mu: Optional[Assignment] = None) -> TwistVal:
        env = dict(mu or {})
        missing = free_vars(f) - env.keys()
        if missing:
            raise UnboundVariableError(f"unbound variables {sorted(missing)} in {render(f)}")
        return self._tv(self._val(f, env))

    def is_valid(self, f: Formula, mu: Optional[Assignment] = None) -> bool:
        return is_designated(self.val_formula(f, mu))

    def is_valid_all(self, f: Formula, budget: int = 10 ** 6) -> bool:
        names = sorted(free_vars(f))
        total = len(self.carrier) ** len(names)
        if total > budget:
            raise BudgetExceeded(total, budget, "assignments")
        for pick in product(self.carrier, repeat=len(names)):
            if not self.is_valid(f, dict(zip(names, pick))):
                return False
        return True


def val_mem(ctx: EvalContext, u: int, v: int) -> TwistVal:
    return ctx.val_mem(u, v)


def val_eq(ctx: EvalContext, u: int, v: int) -> TwistVal:
    return ctx.val_eq(u, v)


def val_formula(ctx: EvalContext, f: Formula, mu: Optional[Assignment] = None) -> TwistVal:
    return ctx.val_formula(f, mu)


def is_valid(ctx: EvalContext, f: Formula, mu: Optional[Assignment] = None) -> bool:
    return ctx.is_valid(f, mu)


def is_valid_all(ctx: EvalContext, f: Formula, budget: int = 10 ** 6) -> bool:
    return ctx.is_valid_all(f, budget)
