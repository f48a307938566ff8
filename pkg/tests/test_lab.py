import json

import pytest

from twistlab import lab, twist
from twistlab.boolalg import BAElem, BoolAlg
from twistlab.errors import BudgetExceeded
from twistlab.evaluator import EvalContext
from twistlab.folast import ClassificationError, parse
from twistlab.twist import Semantics
from twistlab.universe import UniverseStore, empty_element, enumerate_rank


def _ctx(n=1, semantics="lpt0", rank=0):
    s = UniverseStore(BoolAlg(n))
    elems = enumerate_rank(s, rank) if rank else []
    return EvalContext(s, semantics, elems)


def test_regularity_examples(v3):
    store, elems, ctx = v3
    rep = lab.check_regularity(ctx, elems)
    assert rep.verdict == "pass" and rep.details["checked"] == 256
    u = lab.witness_u(store)
    assert ctx.val_mem(u, u).z1 == 0 and ctx.val_eq(u, u) == twist.half(1)
    assert lab.check_regularity(ctx, [empty_element(store)]).passed


def test_basic_identities_small():
    ctx = _ctx(rank=2)
    elems = list(ctx.carrier)
    triples = [(a, b, c) for a in elems for b in elems for c in elems]
    rep = lab.check_basic_identities(ctx, elems, triples)
    assert rep.verdict == "pass" and rep.details["triples"] == 64


def test_leibniz_pure_battery():
    ctx = _ctx(rank=2)
    pairs = [(a, b) for a in ctx.carrier for b in ctx.carrier]
    for phi in lab.pure_battery(ctx.store):
        assert lab.check_leibniz_pure(ctx, phi, pairs).passed
    with pytest.raises(ClassificationError):
        lab.check_leibniz_pure(ctx, parse("!(empty in x)"), pairs)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fail_leibniz_chain(n):
    rep = lab.leibniz_failure_witness(_ctx(n))
    assert rep.verdict == "pass"
    got = {k: v["sym"] for k, v in rep.details["values"].items()}
    assert got == {"mem_wu": "1/2", "mem_wv": "1", "eq_uv": "1/2",
                   "neg_mem_wu": "1/2", "neg_mem_wv": "0", "final": "0"}
    assert rep.details["leibniz_violated"]


def test_fail_leibniz_under_ps3():
    rep = lab.leibniz_failure_witness(_ctx(1, "ps3"))
    assert rep.verdict == "pass"
    vals = rep.details["values"]
    assert vals["eq_uv"]["sym"] == "1" and vals["neg_mem_wu"]["sym"] == "1/2"
    assert vals["final"]["sym"] == "0"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_u_incons(n):
    rep = lab.inconsistent_set_witness(_ctx(n))
    assert rep.verdict == "pass" and rep.details["designated"]
    assert rep.details["values"]["eq_uu"]["sym"] == "1/2"
    ps3 = lab.inconsistent_set_witness(_ctx(n, "ps3"))
    assert ps3.verdict == "pass" and ps3.details["values"]["eq_uu"]["sym"] == "1"


def test_minimal_inconsistent_set_rank_two():
    ctx = _ctx(1, rank=2)
    s = ctx.store
    u = s.intern([(empty_element(s), twist.half(1))])
    assert s.rank(u) == 2 and ctx.val_eq(u, u) == twist.half(1)


@pytest.mark.parametrize("semantics", ["lpt0", "ps3"])
def test_ebq(semantics):
    rep = lab.ebq_failure_witness(_ctx(1, semantics))
    assert rep.verdict == "pass"
    assert rep.details["values"] == {"ebq_lhs": 1, "ebq_rhs": 0, "ubq_lhs": 0, "ubq_rhs": 1}


def test_bq_battery_rank2():
    ctx = _ctx(rank=2)
    for phi in lab.pure_battery(ctx.store):
        for u in ctx.carrier:
            assert lab.check_bq(ctx, phi, u).passed
    with pytest.raises(ValueError):
        lab.check_bq(ctx.with_carrier([]), parse("x = x"), ctx.carrier[1])
    with pytest.raises(ClassificationError):
        lab.check_bq(ctx, parse("!(x = x)"), ctx.carrier[0])


def test_mixing():
    ctx = _ctx(2, rank=2)
    elems = list(ctx.carrier)
    a = BAElem(1, 2)
    rep = lab.check_mixing(ctx, [a, BAElem(2, 2)], [elems[3], elems[7]])
    assert rep.verdict == "pass"
    one = lab.check_mixing(ctx, [ctx.alg.top], [elems[5]])
    assert one.verdict == "pass"
    assert twist.is_designated(ctx.val_eq(one.details["mixture"], elems[5]))
    with pytest.raises(ValueError):
        lab.check_mixing(ctx, [a], elems[:2])
    draws = lab.mixing_draws(ctx.store, elems, 20, seed=0)
    assert draws == lab.mixing_draws(ctx.store, elems, 20, seed=0)
    for weights, chosen in draws:
        assert lab.check_mixing(ctx, weights, chosen).verdict in ("pass", "vacuous")


def test_mixing_vacuous():
    ctx = _ctx(1, rank=2)
    s = ctx.store
    e = empty_element(s)
    other = s.intern([(e, twist.one(1))])
    top = ctx.alg.top
    rep = lab.check_mixing(ctx, [top, top], [e, other])
    assert rep.verdict == "vacuous" and rep.details["note"] == "hypothesis not met"


def test_maximum_principle():
    ctx = _ctx(2, rank=2)
    for phi in lab.max_principle_battery(ctx.store):
        rep = lab.maximum_principle_check(ctx, phi)
        assert rep.verdict == "pass" and rep.details["in_carrier"]
    rep = lab.maximum_principle_check(ctx, parse("x = empty"))
    assert rep.details["exists"] == 3


@pytest.mark.parametrize("semantics", ["lpt0", "ps3"])
@pytest.mark.parametrize("n", [1, 2])
def test_zf_instances(n, semantics):
    ctx = _ctx(n, semantics, rank=2)
    rep = lab.zf_instance_checks(ctx, list(ctx.carrier))
    assert rep.verdict == "pass"
    assert rep.details["extensionality"] == len(ctx.carrier) ** 2


def test_zf_union_rank3_sample(v3):
    store, elems, ctx = v3
    rep = lab.zf_instance_checks(ctx, elems[::37])
    assert rep.verdict == "pass"


def test_consistency():
    ctx = _ctx(1, rank=3)
    s = ctx.store
    e = empty_element(s)
    v = s.intern([(e, twist.one(1))])
    w = s.intern([(e, twist.half(1))])
    assert lab.consistency_predicate(ctx, v) == twist.one(1)
    assert lab.consistency_predicate(ctx, w) == twist.zero(1)
    rep = lab.check_consistency(ctx, list(ctx.carrier))
    assert rep.verdict == "pass" and rep.details["checked"] == 256


def test_check_names():
    rep = lab.check_check_names(_ctx(1), 3)
    assert rep.verdict == "pass" and rep.params["sets"] == 16
    with pytest.raises(BudgetExceeded):
        lab.check_check_names(_ctx(1), 4)
    with pytest.raises(ValueError):
        lab.check_check_names(_ctx(1), 5)


def test_failure_is_reconfirmed():
    # Force a failure with a property that does not hold and check the fresh rerun agrees.
    ctx = _ctx(rank=2)

    def probe(c, u):
        val = c.val_eq(u, u)
        return twist.symbol(val) == "1", {"ids": [u], "values": {"eq": lab.tv_json(val)}}
    s = ctx.store
    u = s.intern([(empty_element(s), twist.half(1))])
    rep = lab._scan("self-equality-is-one", {}, ctx, [u], probe)
    assert rep.verdict == "fail" and rep.counterexample["reconfirmed"]


def test_report_json_keys():
    rep = lab.run_suite(["fail-leibniz"], lab.LabConfig())[0]
    d = json.loads(rep.to_json())
    assert {"check", "params", "verdict", "counterexample", "elapsed_ms"} <= set(d)
    assert d["elapsed_ms"] is None
    timed = lab.run_suite(["fail-leibniz"], lab.LabConfig(), timings=True)[0]
    assert timed.elapsed_ms is not None


def test_suite_deterministic():
    cfg = lab.LabConfig(atoms=2, rank=2, seed=7, sample=50)
    a = [r.to_json() for r in lab.run_suite(None, cfg)]
    b = [r.to_json() for r in lab.run_suite(None, cfg)]
    assert a == b
    assert all(json.loads(x)["verdict"] != "fail" for x in a)
    with pytest.raises(KeyError):
        lab.run_suite(["nope"], cfg)


def test_witnesses_parametric_in_semantics():
    for sem in Semantics:
        cfg = lab.LabConfig(semantics=sem)
        for name, fn in lab.WITNESSES.items():
            assert all(r.passed for r in fn(cfg)), (sem, name)
