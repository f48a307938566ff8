import random
from itertools import product

import pytest

from twistlab import twist
from twistlab.boolalg import BoolAlg
from twistlab.errors import BudgetExceeded
from twistlab.evaluator import EvalContext, SemanticsError, UnboundVariableError
from twistlab.folast import parse
from twistlab.universe import UniverseStore, UnknownElementError, embed, empty_element, enumerate_rank

ONE, HALF, ZERO = twist.one(1), twist.half(1), twist.zero(1)


def _witnesses(n=1, semantics="lpt0"):
    s = UniverseStore(BoolAlg(n))
    e = empty_element(s)
    w = s.intern([(e, twist.one(n))])
    u = s.intern([(w, twist.half(n))])
    v = s.intern([(w, twist.one(n))])
    return s, e, w, u, v, EvalContext(s, semantics, [e, w, u, v])


def test_membership_examples():
    s, e, w, u, v, ctx = _witnesses()
    assert ctx.val_mem(u, e) == ZERO
    assert ctx.val_mem(e, w) == ONE
    assert ctx.val_mem(w, u) == HALF


def test_equality_examples():
    s, e, w, u, v, ctx = _witnesses()
    assert ctx.val_eq(u, u) == HALF
    assert ctx.val_eq(u, v) == HALF
    ps3 = EvalContext(s, "ps3", ctx.carrier)
    assert ps3.val_eq(u, u) == ONE


def test_formula_examples():
    s, e, w, u, v, ctx = _witnesses()
    assert ctx.val_formula(parse("forall x . x = x")) == HALF
    assert ctx.is_valid(parse("(forall x . x = x) & !(forall x . x = x)"))
    f = parse(f"((#{u} = #{v}) & !(#{w} in #{u})) -> !(#{w} in #{v})")
    assert ctx.val_formula(f) == ZERO
    assert ctx.is_valid(parse("x = x"), {"x": u})
    assert not ctx.is_valid(parse("~(x = x)"), {"x": u})
    assert ctx.is_valid_all(parse("x = x"))
    assert not ctx.is_valid_all(parse("~(x = x)"))


def test_errors():
    s, e, w, u, v, ctx = _witnesses()
    with pytest.raises(UnboundVariableError):
        ctx.val_formula(parse("x = y"), {"x": e})
    with pytest.raises(UnknownElementError):
        ctx.val_formula(parse("#999 = #0"))
    with pytest.raises(UnknownElementError):
        ctx.val_mem(999, e)
    with pytest.raises(UnknownElementError):
        EvalContext(s, "lpt0", [999])
    with pytest.raises(SemanticsError):
        ctx.val_formula(parse("#0 = #0 => #0 = #0"))
    ps3 = EvalContext(s, "ps3", ctx.carrier)
    assert ps3.val_formula(parse("#0 = #0 => #0 = #0")) == ONE
    with pytest.raises(BudgetExceeded):
        ctx.is_valid_all(parse("x = y & y = z"), budget=10)


def test_ps3_arrow_still_lpt0_implication():
    s, e, w, u, v, _ = _witnesses()
    ps3 = EvalContext(s, "ps3", [e, w, u, v])
    val = ps3.val_formula(parse(f"#{w} in #{u} -> #{w} in #{u}"))
    assert val == twist.t_imp(HALF, HALF)


def test_closed_pure_values_over_check_names():
    from twistlab.universe import check_name, hf_sets
    s = UniverseStore(BoolAlg(1))
    names = [check_name(s, x) for x in hf_sets(3)]
    ctx = EvalContext(s, "lpt0", names)
    for text in ("forall x . exists y . x in y", "exists x . forall y . ~(y in x)",
                 "forall x . forall y . (x = y | ~(x = y))"):
        assert twist.symbol(ctx.val_formula(parse(text))) in ("0", "1")


def test_termination_measure(v3):
    store, elems, _ = v3
    ctx = EvalContext(store, "lpt0", elems, memoize=False)
    ctx.instrument = []
    rng = random.Random(1)
    for _ in range(30):
        ctx.val_eq(rng.choice(elems), rng.choice(elems))
        ctx.val_mem(rng.choice(elems), rng.choice(elems))
    assert ctx.instrument
    assert all(callee < caller for caller, callee in ctx.instrument)


def test_memo_coherence(v3):
    store, elems, memo = v3
    plain = EvalContext(store, "lpt0", elems, memoize=False)
    rng = random.Random(2)
    for _ in range(300):
        u, v = rng.choice(elems), rng.choice(elems)
        assert memo.val_eq(u, v) == plain.val_eq(u, v)
        assert memo.val_mem(u, v) == plain.val_mem(u, v)


@pytest.mark.parametrize("semantics", ["lpt0", "ps3"])
def test_symmetry_and_designation(v3, semantics):
    store, elems, _ = v3
    ctx = EvalContext(store, semantics, elems, normalize_eq=False)
    for u, v in product(elems[:64], repeat=2):
        assert ctx.val_eq(u, v) == ctx.val_eq(v, u)
    for u in elems:
        val = ctx.val_eq(u, u)
        assert twist.is_designated(val) and twist.t_leq(twist.half(1), val)


def test_carrier_monotonicity(v3):
    store, elems, _ = v3
    small = EvalContext(store, "lpt0", elems[:16])
    big = small.with_carrier(elems)
    for text in ("forall x . ~(x in #5)", "forall x . x in #200 -> x = #3", "forall x . !(x = #7)"):
        f = parse(text)
        assert twist.t_leq(big.val_formula(f), small.val_formula(f))
        g = parse(text.replace("forall", "exists"))
        assert twist.t_leq(small.val_formula(g), big.val_formula(g))


@pytest.mark.parametrize("semantics", ["lpt0", "ps3"])
@pytest.mark.parametrize("n", [2, 3])
def test_subalgebra_stability(v3, semantics, n):
    store, elems, _ = v3
    ctx1 = EvalContext(store, semantics, elems)
    dst = UniverseStore(BoolAlg(n))
    memo = {}
    image = {u: embed(store, u, dst, memo) for u in elems}
    ctxn = EvalContext(dst, semantics, [image[u] for u in elems])
    top = dst.alg.top_mask

    def lift(x):
        return twist.TwistVal(top if x.z1 else 0, top if x.z2 else 0, n)
    rng = random.Random(3)
    for _ in range(400):
        u, v = rng.choice(elems), rng.choice(elems)
        assert lift(ctx1.val_eq(u, v)) == ctxn.val_eq(image[u], image[v])
        assert lift(ctx1.val_mem(u, v)) == ctxn.val_mem(image[u], image[v])
    f = parse("forall y in x . exists z in y . z = z")
    c1 = ctx1.with_carrier(elems[:20])
    cn = ctxn.with_carrier([image[u] for u in elems[:20]])
    for u in elems[:40]:
        assert lift(c1.val_formula(f, {"x": u})) == cn.val_formula(f, {"x": image[u]})
