import pytest

from twistlab.boolalg import BoolAlg
from twistlab.evaluator import EvalContext
from twistlab.universe import UniverseStore, enumerate_rank


@pytest.fixture(scope="session")
def v3():
    """n=1 universe of rank <= 3 with an LPT0 context over all of it."""
    store = UniverseStore(BoolAlg(1))
    elems = enumerate_rank(store, 3)
    return store, elems, EvalContext(store, "lpt0", elems)


@pytest.fixture(scope="session")
def v2_n2():
    store = UniverseStore(BoolAlg(2))
    elems = enumerate_rank(store, 2)
    return store, elems, EvalContext(store, "lpt0", elems)


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::")[-1].split("[")[0][len("test_criterion_"):]
            num, _, label = name.partition("_")
            ok = outcome == "passed" and rows.get(int(num), (None, True))[1]
            rows[int(num)] = (label, ok)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows):
        label, ok = rows[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {label}")
