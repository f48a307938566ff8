"""Witness constructions and property checks over bounded twist-valued universes.

Every check returns a ``CheckReport``.  Checks that fail carry a
counterexample which has been re-evaluated in a fresh, memo-free context;
``reconfirmed`` records whether that independent evaluation failed too.

All quantifiers are evaluated over the context carrier, so each result is a
statement relative to that carrier.  The carrier requirements of each check
are noted in its docstring.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Optional, Sequence

from . import twist
from .boolalg import BAElem, BoolAlg
from .errors import BudgetExceeded
from .evaluator import EvalContext
from .folast import (
    And, ClassificationError, Const, Exists, Formula, Mem, Var, bounded_exists, bounded_forall, iff,
    constants, free_vars, is_pure, is_restricted, parse, render,
)
from .twist import Semantics, TwistVal, is_designated, symbol
from .universe import (
    UniverseStore, check_name, empty_element, enumerate_rank, hf_render, hf_sets,
    mixture,
)

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


def tv_json(x: TwistVal) -> dict:
    return {"z1": x.z1, "z2": x.z2, "sym": symbol(x)}


@dataclass
class CheckReport:
    check: str
    params: dict
    verdict: str
    counterexample: Optional[dict] = None
    elapsed_ms: Optional[float] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return {"check": self.check, "params": self.params, "verdict": self.verdict,
                "counterexample": self.counterexample, "elapsed_ms": self.elapsed_ms,
                "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def _params(ctx: EvalContext, **extra) -> dict:
    out = {"atoms": ctx.alg.n, "semantics": ctx.semantics.value, "carrier_size": len(ctx.carrier)}
    out.update(extra)
    return out


def _fail(name: str, params: dict, ctx: EvalContext,
          probe: Callable[[EvalContext], tuple[bool, dict]], details=None) -> CheckReport:
    """Build a failing report; the probe is rerun without memoization."""
    _, payload = probe(ctx)
    ok_again, _ = probe(ctx.fresh(memoize=False))
    payload["reconfirmed"] = not ok_again
    return CheckReport(name, params, FAIL, payload, details=details or {})


def _scan(name: str, params: dict, ctx: EvalContext, items,
          probe: Callable[[EvalContext, Any], tuple[bool, dict]], details=None) -> CheckReport:
    count = 0
    for item in items:
        count += 1
        ok, _ = probe(ctx, item)
        if not ok:
            return _fail(name, params, ctx, lambda c: probe(c, item),
                         dict(details or {}, checked=count))
    return CheckReport(name, params, PASS, details=dict(details or {}, checked=count))


def _leq(a: int, b: int) -> bool:
    return a & ~b == 0


# -- standard witnesses ------------------------------------------------------

def witness_w(store: UniverseStore) -> int:
    """w = {<empty, 1>}, the check-name of {empty}."""
    return store.intern([(empty_element(store), twist.one(store.alg.n))])


def witness_u(store: UniverseStore) -> int:
    """u = {<w, 1/2>}."""
    return store.intern([(witness_w(store), twist.half(store.alg.n))])


def _closure(store: UniverseStore, ids: Sequence[int]) -> list[int]:
    """ids together with everything reachable through domains, sorted."""
    seen: set[int] = set()
    todo = list(ids)
    while todo:
        x = todo.pop()
        if x not in seen:
            seen.add(x)
            todo.extend(store.dom(x))
    return sorted(seen)


def _extend(ctx: EvalContext, ids: Sequence[int]) -> EvalContext:
    missing = [i for i in _closure(ctx.store, ids) if i not in set(ctx.carrier)]
    return ctx.with_carrier(list(ctx.carrier) + missing) if missing else ctx


# -- regularity and the basic identities ---------------------------------------

def check_regularity(ctx: EvalContext, ids: Sequence[int]) -> CheckReport:
    """First coordinate of [[u in u]] is 0."""
    def probe(c, u):
        m = c.val_mem(u, u)
        return m.z1 == 0, {"ids": [u], "values": {"mem_uu": tv_json(m)}}
    return _scan("regularity", _params(ctx, elements=len(ids)), ctx, ids, probe)


def check_basic_identities(ctx: EvalContext, elements: Sequence[int],
                           triples: Sequence[tuple[int, int, int]] = ()) -> CheckReport:
    """Items (i)-(iii) over all of ``elements`` and pairs of them, (iv)-(vi) over ``triples``.

    Symmetry (iii) is checked against a context that keys equality by
    ordered pair, so both orders are genuinely computed.
    """
    top = ctx.alg.top_mask
    plain = EvalContext(ctx.store, ctx.semantics, ctx.carrier, normalize_eq=False)
    params = _params(ctx, elements=len(elements), triples=len(triples))

    def first(c: EvalContext, kind, a, b) -> int:
        return (c.val_eq(a, b) if kind == "eq" else c.val_mem(a, b)).z1

    def probe_single(c, u):
        if first(c, "eq", u, u) != top:
            return False, {"item": "i", "ids": [u], "values": {"eq_uu": tv_json(c.val_eq(u, u))}}
        for x, val in c.store.entries(u):
            if not _leq(val.z1, first(c, "mem", x, u)):
                return False, {"item": "ii", "ids": [u, x],
                               "values": {"u(x)": tv_json(val), "mem_xu": tv_json(c.val_mem(x, u))}}
        return True, {}

    def probe_pair(c, pair):
        u, v = pair
        other = c if c is not ctx else plain
        a, b = other.val_eq(u, v), other.val_eq(v, u)
        return a == b, {"item": "iii", "ids": [u, v], "values": {"eq_uv": tv_json(a), "eq_vu": tv_json(b)}}

    def probe_triple(c, t):
        u, v, w = t
        e_uv, e_vw, e_uw = first(c, "eq", u, v), first(c, "eq", v, w), first(c, "eq", u, w)
        m_uw, m_vw, m_uv = first(c, "mem", u, w), first(c, "mem", v, w), first(c, "mem", u, v)
        for item, ok in (("iv", _leq(e_uv & e_vw, e_uw)),
                         ("v", _leq(e_uv & m_uw, m_vw)),
                         ("vi", _leq(e_vw & m_uv, m_uw))):
            if not ok:
                return False, {"item": item, "ids": [u, v, w],
                               "values": {"eq_uv": e_uv, "eq_vw": e_vw, "eq_uw": e_uw,
                                          "mem_uw": m_uw, "mem_vw": m_vw, "mem_uv": m_uv}}
        return True, {}

    pairs = [(u, v) for i, u in enumerate(elements) for v in elements[i + 1:]]
    for items, probe in ((elements, probe_single), (pairs, probe_pair), (triples, probe_triple)):
        rep = _scan("basic-identities", params, ctx, items, probe)
        if not rep.passed:
            return rep
    return CheckReport("basic-identities", params, PASS,
                       details={"elements": len(elements), "pairs": len(pairs), "triples": len(triples)})


def _single_var(phi: Formula, what: str) -> str:
    if not is_pure(phi):
        raise ClassificationError(f"{what} needs a pure formula, got {render(phi)}")
    fv = free_vars(phi)
    if len(fv) != 1:
        raise ValueError(f"{what} needs exactly one free variable, got {sorted(fv)}")
    return next(iter(fv))


def check_leibniz_pure(ctx: EvalContext, phi: Formula, pairs: Sequence[tuple[int, int]]) -> CheckReport:
    """[[u = v]]_1 & [[phi(u)]]_1 <= [[phi(v)]]_1 for a pure phi(x)."""
    var = _single_var(phi, "the Leibniz check")

    def probe(c, pair):
        u, v = pair
        e, fu, fv = c.val_eq(u, v), c.val_formula(phi, {var: u}), c.val_formula(phi, {var: v})
        return _leq(e.z1 & fu.z1, fv.z1), {
            "ids": [u, v], "values": {"eq_uv": tv_json(e), "phi_u": tv_json(fu), "phi_v": tv_json(fv)}}
    return _scan("leibniz-pure", _params(ctx, formula=render(phi), pairs=len(pairs)), ctx, pairs, probe)


# -- the named witnesses -------------------------------------------------------

def _chain_report(name: str, ctx: EvalContext, ids: dict, values: dict, expected: dict) -> CheckReport:
    got = {k: symbol(v) for k, v in values.items()}
    details = {"ids": ids, "values": {k: tv_json(v) for k, v in values.items()},
               "expected": expected}
    if got == expected:
        return CheckReport(name, _params(ctx), PASS, details=details)
    bad = {k: [got[k], expected[k]] for k in expected if got[k] != expected[k]}
    fresh = ctx.fresh(memoize=False)
    again = _witness_values(name, fresh)
    payload = {"ids": list(ids.values()), "mismatch": bad,
               "reconfirmed": {k: symbol(v) for k, v in again.items()} == got}
    return CheckReport(name, _params(ctx), FAIL, payload, details=details)


def _leibniz_parts(ctx: EvalContext):
    s = ctx.store
    n = s.alg.n
    w = witness_w(s)
    u = s.intern([(w, twist.half(n))])
    v = s.intern([(w, twist.one(n))])
    final = parse(f"((#{u} = #{v}) & !(#{w} in #{u})) -> !(#{w} in #{v})")
    values = {
        "mem_wu": ctx.val_mem(w, u),
        "mem_wv": ctx.val_mem(w, v),
        "eq_uv": ctx.val_eq(u, v),
        "neg_mem_wu": ctx.val_formula(parse(f"!(#{w} in #{u})")),
        "neg_mem_wv": ctx.val_formula(parse(f"!(#{w} in #{v})")),
        "final": ctx.val_formula(final),
    }
    return {"w": w, "u": u, "v": v}, values


def _incons_parts(ctx: EvalContext):
    s = ctx.store
    w = witness_w(s)
    u = witness_u(s)
    return {"w": w, "u": u}, {"eq_uu": ctx.val_eq(u, u), "mem_wu": ctx.val_mem(w, u),
                              "mem_uu": ctx.val_mem(u, u)}


def _witness_values(name: str, ctx: EvalContext) -> dict:
    return {"fail-leibniz": _leibniz_parts, "u-incons": _incons_parts}[name](ctx)[1]


LEIBNIZ_EXPECTED = {
    Semantics.LPT0: {"mem_wu": "1/2", "mem_wv": "1", "eq_uv": "1/2",
                     "neg_mem_wu": "1/2", "neg_mem_wv": "0", "final": "0"},
    # Under PS3 equality becomes 1, but the negated memberships are unchanged,
    # so the same formula still takes the value 0.
    Semantics.PS3: {"mem_wu": "1/2", "mem_wv": "1", "eq_uv": "1",
                    "neg_mem_wu": "1/2", "neg_mem_wv": "0", "final": "0"},
}


def leibniz_failure_witness(ctx: EvalContext) -> CheckReport:
    """w = {<empty,1>}, u = {<w,1/2>}, v = {<w,1>} break the Leibniz rule for a !-formula."""
    ids, values = _leibniz_parts(ctx)
    rep = _chain_report("fail-leibniz", ctx, ids, values, LEIBNIZ_EXPECTED[ctx.semantics])
    rep.details["leibniz_violated"] = not is_designated(values["final"])
    return rep


def inconsistent_set_witness(ctx: EvalContext, carrier: Optional[Sequence[int]] = None,
                             budget: int = 10 ** 6) -> CheckReport:
    """u = {<w,1/2>} has [[u = u]] = 1/2 under LPT0 and 1 under PS3.

    sigma = forall x (x = x) is evaluated over ``carrier``; by default the
    whole universe of rank <= rank(u) when it fits the budget, otherwise the
    universe one rank lower together with u.
    """
    ids, values = _incons_parts(ctx)
    u = ids["u"]
    s = ctx.store
    if carrier is None:
        try:
            carrier = enumerate_rank(s, s.rank(u), budget)
        except BudgetExceeded:
            carrier = enumerate_rank(s, s.rank(u) - 1, budget) + [u]
    cctx = ctx.with_carrier(_closure(s, list(carrier) + [u]))
    sigma = parse("forall x . x = x")
    values["sigma"] = cctx.val_formula(sigma)
    values["sigma_and_neg_sigma"] = cctx.val_formula(parse("(forall x . x = x) & !(forall x . x = x)"))
    if ctx.semantics is Semantics.LPT0:
        expected = {"eq_uu": "1/2", "mem_wu": "1/2", "mem_uu": "0", "sigma": "1/2",
                    "sigma_and_neg_sigma": "1/2"}
    else:
        expected = {"eq_uu": "1", "mem_wu": "1/2", "mem_uu": "0", "sigma": "1",
                    "sigma_and_neg_sigma": "0"}
    rep = _chain_report("u-incons", ctx, ids, values, expected)
    rep.params["carrier_size"] = len(cctx.carrier)
    rep.details["designated"] = is_designated(values["sigma_and_neg_sigma"])
    return rep


def _bq_sides(c: EvalContext, phi: Formula, var: str, u: int) -> dict:
    top = c.alg.top_mask
    vals = {x: c.val_formula(phi, {var: x}).z1 for x in c.store.dom(u)}
    rhs_e = 0
    rhs_a = top
    for x, ux in c.store.entries(u):
        rhs_e |= ux.z1 & vals[x]
        rhs_a &= (~ux.z1 | vals[x]) & top
    return {
        "lhs_exists": c.val_formula(bounded_exists(var, Const(u), phi)).z1,
        "rhs_exists": rhs_e,
        "lhs_forall": c.val_formula(bounded_forall(var, Const(u), phi)).z1,
        "rhs_forall": rhs_a,
    }


def check_bq(ctx: EvalContext, phi: Formula, u: int) -> CheckReport:
    """Bounded quantification equalities for a pure phi(x) and one u.

    Needs a carrier containing dom(u) and the constants of phi.
    """
    var = _single_var(phi, "bounded quantification")
    need = set(ctx.store.dom(u)) | constants(phi)
    if not need <= set(ctx.carrier):
        raise ValueError(f"carrier lacks {sorted(need - set(ctx.carrier))}")

    def probe(c, _):
        sides = _bq_sides(c, phi, var, u)
        ok = sides["lhs_exists"] == sides["rhs_exists"] and sides["lhs_forall"] == sides["rhs_forall"]
        return ok, {"ids": [u], "values": sides}
    return _scan("bq", _params(ctx, formula=render(phi), element=u), ctx, [None], probe)


def ebq_failure_witness(ctx: EvalContext) -> CheckReport:
    """w, v = {<w,1/2>}, y = {<w,1>}, u = {<y,1>} and phi(x) = !(w in x).

    The bounded existential has first coordinate 1 while the join over dom(u)
    is 0; psi = ~phi gives the dual failure for the bounded universal.
    """
    s = ctx.store
    n = s.alg.n
    w = witness_w(s)
    v = s.intern([(w, twist.half(n))])
    y = s.intern([(w, twist.one(n))])
    u = s.intern([(y, twist.one(n))])
    cctx = _extend(ctx, [v, y, w, u])
    phi = parse(f"!(#{w} in x)")
    psi = parse(f"~!(#{w} in x)")
    e = _bq_sides(cctx, phi, "x", u)
    a = _bq_sides(cctx, psi, "x", u)
    top = s.alg.top_mask
    values = {"ebq_lhs": e["lhs_exists"], "ebq_rhs": e["rhs_exists"],
              "ubq_lhs": a["lhs_forall"], "ubq_rhs": a["rhs_forall"]}
    expected = {"ebq_lhs": top, "ebq_rhs": 0, "ubq_lhs": 0, "ubq_rhs": top}
    details = {"ids": {"w": w, "v": v, "y": y, "u": u}, "values": values,
               "mem_vu": tv_json(cctx.val_mem(v, u)), "phi_v": tv_json(cctx.val_formula(phi, {"x": v}))}
    params = _params(cctx)
    if values == expected:
        return CheckReport("ebq", params, PASS, details=details)
    again = _bq_sides(cctx.fresh(memoize=False), phi, "x", u)
    payload = {"ids": [w, v, y, u], "values": values,
               "reconfirmed": again["lhs_exists"] == values["ebq_lhs"]}
    return CheckReport("ebq", params, FAIL, payload, details=details)


# -- mixtures and the maximum principle ----------------------------------------

def check_mixing(ctx: EvalContext, weights: Sequence[BAElem], elements: Sequence[int]) -> CheckReport:
    """If a_i & a_j <= [[u_i = u_j]]_1 for all i, j then a_i <= [[u = u_i]]_1."""
    if len(weights) != len(elements):
        raise ValueError(f"{len(weights)} weights for {len(elements)} elements")
    params = _params(ctx, weights=[a.mask for a in weights], elements=list(elements))
    for (a, ui), (b, uj) in product(zip(weights, elements), repeat=2):
        if not _leq(a.mask & b.mask, ctx.val_eq(ui, uj).z1):
            return CheckReport("mixing", params, VACUOUS,
                               details={"note": "hypothesis not met", "pair": [ui, uj]})
    mix = mixture(ctx.store, weights, elements, ctx)

    def probe(c, i):
        e = c.val_eq(mix, elements[i])
        return _leq(weights[i].mask, e.z1), {
            "ids": [mix, elements[i]], "values": {"weight": weights[i].mask, "eq": tv_json(e)}}
    rep = _scan("mixing", params, ctx, range(len(elements)), probe)
    rep.details["mixture"] = mix
    return rep


def maximum_principle_check(ctx: EvalContext, phi: Formula) -> CheckReport:
    """Builds the mixture from the maximum principle's proof over the carrier.

    The carrier order is the enumeration order.  The result must satisfy
    [[phi(u)]]_1 = [[exists x phi]]_1, where the existential ranges over the
    carrier; a carrier that is a full bounded universe contains the mixture.
    """
    var = _single_var(phi, "the maximum principle")
    top = ctx.alg.top_mask
    n = ctx.alg.n
    target = ctx.val_formula(Exists(var, phi)).z1
    weights, seen = [], 0
    for x in ctx.carrier:
        a = ctx.val_formula(phi, {var: x}).z1
        weights.append(BAElem(a & ~seen & top, n))
        seen |= a
    u = mixture(ctx.store, weights, ctx.carrier, ctx)

    def probe(c, _):
        got = c.val_formula(phi, {var: u}).z1
        return got == target, {"ids": [u], "values": {"phi_u": got, "exists": target}}
    rep = _scan("max-principle", _params(ctx, formula=render(phi)), ctx, [None], probe)
    rep.details.update({"mixture": u, "exists": target, "in_carrier": u in set(ctx.carrier)})
    return rep


# -- ZF instances ----------------------------------------------------------

SEPARATION_FORMULAS = ("~(x = empty)", "empty in x")


def zf_instance_checks(ctx: EvalContext, elements: Sequence[int],
                       separation: Sequence[str] = SEPARATION_FORMULAS) -> CheckReport:
    """Extensionality, pairing, union and separation instances with explicit witnesses.

    The carrier must contain the domains of all ``elements``.
    """
    s = ctx.store
    n = s.alg.n
    top = s.alg.top_mask
    one = twist.one(n)
    need = {x for e in elements for x in s.dom(e)} | {x for e in elements for d in s.dom(e) for x in s.dom(d)}
    if not need <= set(ctx.carrier):
        raise ValueError("carrier must contain the domains of the checked elements")
    params = _params(ctx, elements=len(elements))
    counts = {"extensionality": 0, "pairing": 0, "union": 0, "separation": 0}
    pairs = list(product(elements, repeat=2))

    def ext(c, pair):
        u, v = pair
        f = parse(f"(forall x . (x in #{u} <-> x in #{v})) -> #{u} = #{v}")
        val = c.val_formula(f)
        return is_designated(val), {"axiom": "extensionality", "ids": [u, v], "values": {"instance": tv_json(val)}}

    def pairing(c, pair):
        u, v = pair
        p = s.intern([(u, one)] if u == v else [(u, one), (v, one)])
        a, b = c.val_mem(u, p), c.val_mem(v, p)
        return is_designated(a) and is_designated(b), {
            "axiom": "pairing", "ids": [u, v, p], "values": {"u_in_p": tv_json(a), "v_in_p": tv_json(b)}}

    def union_witness(c, u):
        dom_s = sorted({z for x in s.dom(u) for z in s.dom(x)})
        pairs_s = []
        for z in dom_s:
            e = c.val_formula(parse(f"exists y in #{u} . #{z} in y")).z1
            pairs_s.append((z, TwistVal(e, ~e & top, n)))
        return s.intern(pairs_s), dom_s

    def union(c, u):
        su, dom_s = union_witness(c, u)
        for z in dom_s:
            val = c.val_formula(parse(f"#{z} in #{su} <-> exists y in #{u} . #{z} in y"))
            if not is_designated(val):
                return False, {"axiom": "union", "ids": [u, su, z], "values": {"instance": tv_json(val)}}
        return True, {}

    sep_formulas = []
    for text in separation:
        phi = parse(text)
        var = _single_var(phi, "separation")
        if not is_restricted(phi):
            raise ClassificationError(f"separation needs a restricted formula, got {text}")
        sep_formulas.append((phi, var))

    def sep(c, job):
        u, (phi, var) = job
        vpairs = [(x, twist.t_and(ux, c.val_formula(phi, {var: x}))) for x, ux in s.entries(u)]
        v = s.intern(vpairs)
        body = iff(Mem(Var(var), Const(v)), And(Mem(Var(var), Const(u)), phi))
        for x in c.carrier:
            val = c.val_formula(body, {var: x})
            if not is_designated(val):
                return False, {"axiom": "separation", "formula": render(phi), "ids": [u, v, x],
                               "values": {"instance": tv_json(val)}}
        return True, {}

    for key, items, probe in (("extensionality", pairs, ext), ("pairing", pairs, pairing),
                              ("union", elements, union),
                              ("separation", list(product(elements, sep_formulas)), sep)):
        rep = _scan("zf-instances", params, ctx, items, probe)
        counts[key] = rep.details["checked"]
        if not rep.passed:
            rep.details.update(counts)
            return rep
    return CheckReport("zf-instances", params, PASS, details=counts)


# -- consistency predicate -------------------------------------------------

CONSISTENCY = "~!(x = x)"


def consistency_predicate(ctx: EvalContext, u: int) -> TwistVal:
    """[[C(u)]] for C(x) = ~!(x = x); it is never 1/2."""
    val = ctx.val_formula(parse(CONSISTENCY), {"x": u})
    if val == twist.half(ctx.alg.n):
        raise AssertionError(f"consistency predicate took the value 1/2 at {u}")
    return val


def check_consistency(ctx: EvalContext, ids: Sequence[int]) -> CheckReport:
    """C(v) = 1 for v = {<empty,1>}, C(w) = 0 for w = {<empty,1/2>}, and C(u) = (~a, a) for all ids.

    Under PS3 self-equality is always 1, so C(w) = 1 there as well.
    """
    s = ctx.store
    n = s.alg.n
    e = empty_element(s)
    v = s.intern([(e, twist.one(n))])
    w = s.intern([(e, twist.half(n))])
    cv, cw = consistency_predicate(ctx, v), consistency_predicate(ctx, w)
    details = {"ids": {"v": v, "w": w}, "values": {"C_v": tv_json(cv), "C_w": tv_json(cw)}}
    params = _params(ctx, elements=len(ids))
    want_w = "0" if ctx.semantics is Semantics.LPT0 else "1"
    details["expected"] = {"C_v": "1", "C_w": want_w}
    if symbol(cv) != "1" or symbol(cw) != want_w:
        again = (consistency_predicate(ctx.fresh(), v), consistency_predicate(ctx.fresh(), w))
        return CheckReport("consistency", params, FAIL,
                           {"ids": [v, w], "values": details["values"], "reconfirmed": again == (cv, cw)},
                           details=details)
    top = s.alg.top_mask

    def probe(c, u):
        val = c.val_formula(parse(CONSISTENCY), {"x": u})
        return val.z1 == ~val.z2 & top, {"ids": [u], "values": {"C_u": tv_json(val)}}
    return _scan("consistency", params, ctx, ids, probe, details)


# -- check-names -----------------------------------------------------------

CHECK_NAME_FORMULAS = (
    "x in y",
    "x = y",
    "exists z in x . z in y",
    "forall z in x . z in y",
    "~(x in y) | y in x",
    "exists z in y . (z = x & forall t in z . t in x)",
)


def check_check_names(ctx: EvalContext, max_hf_rank: int, budget: int = 10 ** 6) -> CheckReport:
    """Check-names of hereditarily finite sets of rank <= max_hf_rank (rank of {} is 0).

    Membership and equality are reflected exactly, restricted formulas take
    only the values 0 and 1, and the values agree with those computed over a
    second algebra (2^2 when ctx is over 2^1, else 2^1).
    """
    if max_hf_rank > 4:
        raise ValueError("max_hf_rank must be <= 4")
    sets_needed = 0
    for _ in range(max_hf_rank + 1):
        sets_needed = 2 ** sets_needed
    if sets_needed ** 2 > budget:
        raise BudgetExceeded(sets_needed ** 2, budget, "check-name pairs")
    sets = hf_sets(max_hf_rank)
    s = ctx.store
    names = [check_name(s, x) for x in sets]
    cctx = ctx.with_carrier(names)
    other_n = 2 if s.alg.n == 1 else 1
    ostore = UniverseStore(BoolAlg(other_n))
    onames = [check_name(ostore, x) for x in sets]
    octx = EvalContext(ostore, ctx.semantics, onames)
    formulas = [parse(t) for t in CHECK_NAME_FORMULAS]
    params = _params(cctx, max_hf_rank=max_hf_rank, sets=len(sets), other_atoms=other_n)

    def classic(x: TwistVal) -> Optional[bool]:
        return {"1": True, "0": False}.get(symbol(x))

    def probe(c, ij):
        i, j = ij
        x, y = sets[i], sets[j]
        oc = octx if c is cctx else octx.fresh()
        mu = {"x": names[i], "y": names[j]}
        omu = {"x": onames[i], "y": onames[j]}
        where = {"x": hf_render(x), "y": hf_render(y), "ids": [names[i], names[j]]}
        m, e = c.val_mem(names[i], names[j]), c.val_eq(names[i], names[j])
        if classic(m) != (x in y) or classic(e) != (x == y):
            return False, dict(where, values={"mem": tv_json(m), "eq": tv_json(e)})
        for f in formulas:
            val, oval = c.val_formula(f, mu), oc.val_formula(f, omu)
            if classic(val) is None or classic(val) != classic(oval):
                return False, dict(where, formula=render(f),
                                   values={"here": tv_json(val), "other": tv_json(oval)})
        return True, {}
    return _scan("check-names", params, cctx, list(product(range(len(sets)), repeat=2)), probe)


# -- batteries and the suite -------------------------------------------------

PURE_BATTERY = (
    "~(W in x)",
    "exists y in x . y = empty",
    "x = x",
    "empty in x",
    "forall y . (y in x -> ~(y in y))",
)


def pure_battery(store: UniverseStore) -> list[Formula]:
    """The fixed pure formulas in x; W stands for the check-name of {empty}."""
    w = witness_w(store)
    return [parse(t.replace("W", f"#{w}")) for t in PURE_BATTERY]


MAX_PRINCIPLE_FORMULAS = ("x = empty", "empty in x", "(x = empty) | (x = W)")


def max_principle_battery(store: UniverseStore) -> list[Formula]:
    w = witness_w(store)
    return [parse(t.replace("W", f"#{w}")) for t in MAX_PRINCIPLE_FORMULAS]


def mixing_draws(store: UniverseStore, elements: Sequence[int], draws: int, seed: int):
    """Seeded (weights, elements) draws: even draws use a partition {a, ~a}, odd ones random masks."""
    rng = random.Random(seed)
    alg = store.alg
    out = []
    for k in range(draws):
        if k % 2 == 0:
            a = rng.randrange(alg.size)
            weights = [BAElem(a, alg.n), BAElem(~a & alg.top_mask, alg.n)]
        else:
            weights = [BAElem(rng.randrange(alg.size), alg.n) for _ in range(rng.randint(1, 3))]
        out.append((weights, [rng.choice(elements) for _ in weights]))
    return out


@dataclass
class LabConfig:
    atoms: int = 1
    semantics: Semantics = Semantics.LPT0
    rank: int = 3
    budget: int = 10 ** 6
    sample: int = 1000
    seed: int = 0


def _universe(cfg: LabConfig, rank: int):
    store = UniverseStore(BoolAlg(cfg.atoms))
    elems = enumerate_rank(store, rank, cfg.budget)
    return store, elems, EvalContext(store, cfg.semantics, elems)


def _suite_regularity(cfg):
    _, elems, ctx = _universe(cfg, cfg.rank)
    rep = check_regularity(ctx, elems)
    rep.params["rank"] = cfg.rank
    return [rep]


def _suite_basic(cfg):
    _, elems, ctx = _universe(cfg, cfg.rank)
    small = enumerate_rank(ctx.store, min(cfg.rank, 2), cfg.budget)
    triples = list(product(small, repeat=3))
    rng = random.Random(cfg.seed)
    triples += [tuple(rng.choice(elems) for _ in range(3)) for _ in range(cfg.sample)]
    rep = check_basic_identities(ctx, elems, triples)
    rep.params.update(rank=cfg.rank, sample=cfg.sample, seed=cfg.seed)
    return [rep]


def _suite_leibniz_pure(cfg):
    store, elems, ctx = _universe(cfg, cfg.rank)
    small = enumerate_rank(store, min(cfg.rank, 2), cfg.budget)
    pairs = list(product(small, repeat=2))
    out = []
    for phi in pure_battery(store):
        rep = check_leibniz_pure(ctx, phi, pairs)
        rep.params["rank"] = cfg.rank
        out.append(rep)
    return out


def _witness_ctx(cfg):
    store = UniverseStore(BoolAlg(cfg.atoms))
    return EvalContext(store, cfg.semantics, [])


def _suite_fail_leibniz(cfg):
    return [leibniz_failure_witness(_witness_ctx(cfg))]


def _suite_u_incons(cfg):
    return [inconsistent_set_witness(_witness_ctx(cfg), budget=cfg.budget)]


def _suite_ebq(cfg):
    return [ebq_failure_witness(_witness_ctx(cfg))]


def _suite_bq(cfg):
    store, elems, ctx = _universe(cfg, min(cfg.rank, 2))
    out = []
    for phi in pure_battery(store):
        reps = [check_bq(ctx, phi, u) for u in elems]
        bad = [r for r in reps if not r.passed]
        rep = bad[0] if bad else CheckReport("bq", _params(ctx, formula=render(phi), elements=len(elems)),
                                             PASS, details={"checked": len(elems)})
        out.append(rep)
    return out


def _suite_mixing(cfg):
    store, elems, ctx = _universe(cfg, min(cfg.rank, 2))
    out = []
    for k, (weights, chosen) in enumerate(mixing_draws(store, elems, 20, cfg.seed)):
        rep = check_mixing(ctx, weights, chosen)
        rep.params.update(draw=k, seed=cfg.seed)
        out.append(rep)
    return out


def _suite_max_principle(cfg):
    store, elems, ctx = _universe(cfg, min(cfg.rank, 2))
    return [maximum_principle_check(ctx, phi) for phi in max_principle_battery(store)]


def _suite_zf(cfg):
    store, elems, ctx = _universe(cfg, min(cfg.rank, 2))
    rep = zf_instance_checks(ctx, elems)
    rep.params["rank"] = min(cfg.rank, 2)
    return [rep]


def _suite_consistency(cfg):
    _, elems, ctx = _universe(cfg, cfg.rank)
    rep = check_consistency(ctx, elems)
    rep.params["rank"] = cfg.rank
    return [rep]


def _suite_check_names(cfg):
    store = UniverseStore(BoolAlg(cfg.atoms))
    return [check_check_names(EvalContext(store, cfg.semantics, []), cfg.rank, cfg.budget)]


SUITE: dict[str, Callable[[LabConfig], list[CheckReport]]] = {
    "regularity": _suite_regularity,
    "basic-identities": _suite_basic,
    "leibniz-pure": _suite_leibniz_pure,
    "fail-leibniz": _suite_fail_leibniz,
    "u-incons": _suite_u_incons,
    "bq": _suite_bq,
    "ebq": _suite_ebq,
    "mixing": _suite_mixing,
    "max-principle": _suite_max_principle,
    "zf-instances": _suite_zf,
    "consistency": _suite_consistency,
    "check-names": _suite_check_names,
}

WITNESSES = {
    "u-incons": _suite_u_incons,
    "fail-leibniz": _suite_fail_leibniz,
    "ebq": _suite_ebq,
    "consistency": lambda cfg: [check_consistency(_witness_ctx(cfg), [])],
}


def run_suite(names: Sequence[str] | None, cfg: LabConfig, timings: bool = False) -> list[CheckReport]:
    names = list(names) if names else list(SUITE)
    unknown = [n for n in names if n not in SUITE]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    out = []
    for name in names:
        t0 = time.perf_counter()
        reps = SUITE[name](cfg)
        if timings:
            ms = round((time.perf_counter() - t0) * 1000, 3)
            for r in reps:
                r.elapsed_ms = ms
        out.extend(reps)
    return out
