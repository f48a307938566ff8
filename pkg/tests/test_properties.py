"""Property tests over randomly drawn algebra elements, twist values, formulas and sets."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from twistlab import boolalg as ba
from twistlab import twist as tw
from twistlab.boolalg import BAElem, BoolAlg
from twistlab.evaluator import EvalContext
from twistlab.folast import (
    And, Const, EmptyConst, Eq, Exists, Forall, Imp, Mem, Or, Pneg, PVar, SImp, Snot, Var,
    parse, parse_prop, render,
)
from twistlab.proplogic import MPT0, TwistMatrix, eval_formula, mpt0_to_twist
from twistlab.universe import UniverseStore, enumerate_rank

NS = st.integers(min_value=1, max_value=5)


@st.composite
def ba_elems(draw, k=1, n=None):
    n = draw(NS) if n is None else n
    return [BAElem(draw(st.integers(0, (1 << n) - 1)), n) for _ in range(k)]


@st.composite
def twist_vals(draw, k=1):
    n = draw(NS)
    top = (1 << n) - 1
    out = []
    for _ in range(k):
        z1 = draw(st.integers(0, top))
        extra = draw(st.integers(0, top))
        out.append(tw.TwistVal(z1, (~z1 & top) | extra, n))
    return out


@given(ba_elems(3))
def test_boolean_laws(xs):
    x, y, z = xs
    assert ba.meet(x, ba.join(y, z)) == ba.join(ba.meet(x, y), ba.meet(x, z))
    assert ba.compl(ba.compl(x)) == x
    assert ba.compl(ba.meet(x, y)) == ba.join(ba.compl(x), ba.compl(y))
    assert ba.imp(x, y) == ba.join(ba.compl(x), y)
    assert ba.leq(ba.meet(x, y), x) and ba.leq(x, ba.join(x, y))
    assert ba.leq(x, y) == (ba.imp(x, y).mask == (1 << x.n) - 1)


@given(twist_vals(2))
def test_twist_closure_and_laws(vals):
    x, y = vals
    for op in (tw.t_and, tw.t_or, tw.t_imp, tw.t_simp):
        assert isinstance(op(x, y), tw.TwistVal)
    for op in (tw.t_snot, tw.t_neg, tw.t_circ):
        assert isinstance(op(x), tw.TwistVal)
    assert tw.t_neg(tw.t_neg(x)) == x
    assert tw.t_neg(tw.t_and(x, y)) == tw.t_or(tw.t_neg(x), tw.t_neg(y))
    assert tw.t_imp(x, y) == tw.t_or(tw.t_snot(x), y)
    assert tw.t_leq(tw.t_and(x, y), x)
    s = tw.t_simp(x, y)
    assert s.z1 ^ s.z2 == (1 << x.n) - 1
    # modus ponens preserves designation
    if tw.is_designated(x) and tw.is_designated(tw.t_imp(x, y)):
        assert tw.is_designated(y)
    assert tw.is_designated(tw.t_or(tw.t_circ(x), tw.t_snot(tw.t_circ(x))))


@given(twist_vals(1))
def test_circ_detects_consistency(vals):
    (x,) = vals
    consistent = x.z1 & x.z2 == 0
    assert tw.is_designated(tw.t_circ(x)) == consistent


VARS = ["x", "y", "z"]
terms = st.one_of(st.sampled_from([Var(v) for v in VARS]), st.just(EmptyConst()),
                  st.integers(0, 9).map(Const))
atoms = st.one_of(st.builds(Mem, terms, terms), st.builds(Eq, terms, terms))


def _formulas(leaves, quant=True):
    def extend(children):
        opts = [st.builds(c, children, children) for c in (And, Or, Imp, SImp)]
        opts += [st.builds(Snot, children), st.builds(Pneg, children)]
        if quant:
            opts += [st.builds(q, st.sampled_from(VARS), children) for q in (Forall, Exists)]
        return st.one_of(*opts)
    return st.recursive(leaves, extend, max_leaves=8)


set_formulas = _formulas(atoms)
prop_formulas = _formulas(st.sampled_from([PVar(p) for p in "pqr"]), quant=False)


@given(set_formulas)
@settings(max_examples=300)
def test_render_parse_roundtrip(f):
    assert parse(render(f)) == f


@given(prop_formulas)
@settings(max_examples=300)
def test_prop_render_parse_roundtrip(f):
    assert parse_prop(render(f)) == f


_STORE = UniverseStore(BoolAlg(1))
_ELEMS = enumerate_rank(_STORE, 3)
_CTX = EvalContext(_STORE, "lpt0", _ELEMS)
_CTX_PS3 = EvalContext(_STORE, "ps3", _ELEMS)
ids = st.sampled_from(_ELEMS)


@given(ids, ids)
@settings(suppress_health_check=[HealthCheck.too_slow])
def test_eq_symmetric_and_reflexive_first(u, v):
    for ctx in (_CTX, _CTX_PS3):
        assert ctx.val_eq(u, v) == ctx.val_eq(v, u)
        assert tw.is_designated(ctx.val_eq(u, u))
        # u = v designated means same members in the first coordinate
        if tw.is_designated(ctx.val_eq(u, v)):
            for w in _ELEMS[::17]:
                assert ctx.val_mem(w, u).z1 == ctx.val_mem(w, v).z1


@given(ids, ids)
def test_fresh_context_agrees_with_memo(u, v):
    fresh = _CTX.fresh()
    assert fresh.val_eq(u, v) == _CTX.val_eq(u, v)
    assert fresh.val_mem(u, v) == _CTX.val_mem(u, v)


@given(ids)
def test_regularity_property(u):
    assert _CTX.val_mem(u, u).z1 == 0


@given(prop_formulas, st.lists(st.sampled_from(tw.twist_domain(BoolAlg(1))), min_size=3, max_size=3))
def test_mpt0_matches_twist_over_one_atom(f, vals):
    # The three-element matrix is the twist matrix over 2^1.
    tm = TwistMatrix(BoolAlg(1))
    valuation = dict(zip("pqr", vals))
    inverse = {mpt0_to_twist(v): v for v in MPT0.values}
    mv = {k: inverse[v] for k, v in valuation.items()}
    assert mpt0_to_twist(eval_formula(f, mv, MPT0)) == eval_formula(f, valuation, tm)
