from fractions import Fraction
from itertools import product

import pytest

from twistlab import twist
from twistlab.boolalg import BoolAlg
from twistlab.errors import BudgetExceeded
from twistlab.folast import PVar, parse_prop
from twistlab.proplogic import (
    HALF, MPT0, ONE, SCHEMAS, ZERO, MissingBindingError, ProofLine, ProofScript, ProofScriptError,
    TwistMatrix, check_proof, eval_formula, instantiate, is_tautology, match_axiom,
    matrix_consequence, mp_preserves_designation, mpt0_to_twist, parse_proof, render_proof,
    schema_bivaluation,
)

P, Q, R = PVar("p"), PVar("q"), PVar("r")


def test_eval_examples():
    assert eval_formula(parse_prop("p & !p"), {"p": HALF}, MPT0) == HALF
    assert eval_formula(parse_prop("~(p & !p)"), {"p": HALF}, MPT0) == ZERO
    assert eval_formula(parse_prop("O p"), {"p": HALF}, MPT0) == ZERO
    with pytest.raises(MissingBindingError):
        eval_formula(parse_prop("p & q"), {"p": ONE}, MPT0)


def test_tautologies():
    assert is_tautology(parse_prop("(p & ~p) -> q"), MPT0).holds
    v = is_tautology(parse_prop("(p & !p) -> q"), MPT0)
    assert not v.holds and v.countervaluation == {"p": HALF, "q": ZERO}
    assert is_tautology(parse_prop("p | !p"), MPT0).holds
    assert is_tautology(parse_prop("!~p -> p"), MPT0).holds


def test_consequence():
    assert not matrix_consequence([P, parse_prop("!p")], Q, MPT0).holds
    assert matrix_consequence([parse_prop("O p"), P, parse_prop("!p")], Q, MPT0).holds
    f = parse_prop("p -> (q -> p)")
    assert matrix_consequence([], f, MPT0).holds == is_tautology(f, MPT0).holds


def test_budget():
    f = parse_prop(" & ".join(f"p{i}" for i in range(16)))
    with pytest.raises(BudgetExceeded):
        is_tautology(f, MPT0)


def test_twist_n1_agrees_with_mpt0():
    tm = TwistMatrix(BoolAlg(1))
    formulas = [parse_prop(t) for t in ("p -> (q | !p)", "~(p => q) & !q", "O (p & q) <-> !~p")]
    for f in formulas:
        for a, b in product((ONE, HALF, ZERO), repeat=2):
            mv = eval_formula(f, {"p": a, "q": b}, MPT0)
            tv = eval_formula(f, {"p": mpt0_to_twist(a), "q": mpt0_to_twist(b)}, tm)
            assert mpt0_to_twist(mv) == tv


@pytest.mark.parametrize("n", [1, 2, 3])
def test_schemas_sound(n):
    tm = TwistMatrix(BoolAlg(n))
    for name in SCHEMAS:
        f = instantiate(name, A=P, B=Q, C=R)
        assert is_tautology(f, tm).holds, name
        assert is_tautology(f, MPT0).holds, name
    assert mp_preserves_designation(tm) is None
    assert mp_preserves_designation(MPT0) is None


def test_match_axiom():
    assert match_axiom(parse_prop("p -> (q -> p)")) == "Ax1"
    assert match_axiom(parse_prop("p | ~p")) == "TND"
    assert match_axiom(parse_prop("p & q")) is None
    assert match_axiom(parse_prop("(q & r) -> ((p -> q) -> (q & r))")) == "Ax1"


IDENTITY = """\
1. (p -> ((p -> p) -> p)) -> ((p -> (p -> p)) -> (p -> p)) ; Ax2
2. p -> ((p -> p) -> p) ; Ax1
3. (p -> (p -> p)) -> (p -> p) ; MP 2 1
4. p -> (p -> p) ; Ax1
5. p -> p ; MP 4 3
"""


def test_identity_proof():
    script = parse_proof(IDENTITY)
    assert check_proof(script).ok
    assert parse_proof(render_proof(script)) == script


def test_bad_mp_reported():
    bad = IDENTITY.replace("5. p -> p ; MP 4 3", "5. q -> q ; MP 4 3")
    v = check_proof(parse_proof(bad))
    assert not v.ok and v.first_bad_line == 5


def test_bad_axiom_reported():
    v = check_proof(parse_proof("1. p -> (q -> q) ; Ax1\n"))
    assert not v.ok and v.first_bad_line == 1


def test_malformed_scripts():
    with pytest.raises(ProofScriptError):
        parse_proof("1. p -> p ; Ax99\n")
    with pytest.raises(ProofScriptError):
        parse_proof("1 p -> p ; Ax1\n")
    with pytest.raises(ProofScriptError):
        check_proof(parse_proof("1. p ; MP 2 3\n"))
    with pytest.raises(ProofScriptError):
        check_proof(ProofScript([ProofLine(1, P, "MP", (1, 1))]))


def _pool():
    atoms = [P, Q]
    pool = list(atoms) + [parse_prop(t) for t in ("~p", "!p", "!~p", "~!q", "p & q", "p -> q", "!(p | q)")]
    return pool


def test_not_neg_snot_is_not_derivable():
    # A two-valued model of every schema instance over a formula pool and of MP
    # that still refutes !~p -> p, so no script can derive it.
    pool = _pool()
    for atoms in ({"p": False, "q": False}, {"p": False, "q": True},
                  {"p": True, "q": False}, {"p": True, "q": True}):
        for name in SCHEMAS:
            for a, b, c in product(pool, repeat=3) if name in ("Ax2", "Ax8") else product(pool, pool, [R]):
                f = instantiate(name, A=a, B=b, C=c)
                assert schema_bivaluation(f, dict(atoms, r=False)), (name, f)
    assert not schema_bivaluation(parse_prop("!~p -> p"), {"p": False})
