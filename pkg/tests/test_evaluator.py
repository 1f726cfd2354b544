import pytest

from protoquipper.circuits import CircuitStore, Closure
from protoquipper.clauses import ClauseDb
from protoquipper.evaluator import (
    EvalError, Stepped, Stuck, Value, eval_closure, step, step_via_sl,
)
from protoquipper.qtypes import one
from protoquipper.sexpr import parse_term
from protoquipper.syntax import box, dest_circ, fun, mk_app, mk_circ, mk_if, qvar, star, true


@pytest.fixture
def env():
    store = CircuitStore()
    return store, ClauseDb(store), store.new([]).id


def test_if_true(env):
    store, db, c = env
    r = step(Closure(c, mk_if(true, star, parse_term("false"))), store)
    assert r == Stepped(Closure(c, star), "truer")


def test_values_do_not_step(env):
    store, db, c = env
    assert step(Closure(c, star), store) == Value()
    assert step_via_sl(Closure(c, star), db) == Value()


def test_box_unit(env):
    store, db, c = env
    idf = fun(lambda x: x)
    r = step(Closure(c, mk_app(box(one), idf)), store)
    assert isinstance(r, Stepped) and r.rule == "boxr"
    d = store.new([]).id
    assert r.next == Closure(c, mk_circ(star, d, mk_app(idf, star)))


def test_eval_beta(env):
    store, db, c = env
    cl, status = eval_closure(Closure(c, mk_app(fun(lambda x: x), true)), 10, store)
    assert (cl.term, status) == (true, "value")
    cl, status = eval_closure(Closure(c, star), 5, store)
    assert status == "value"


def test_fuel_zero(env):
    store, db, c = env
    t = mk_app(fun(lambda x: x), true)
    cl, status = eval_closure(Closure(c, t), 0, store)
    assert cl.term == t and status == "fuel exhausted"


def test_stuck(env):
    store, db, c = env
    bad = mk_app(true, star)
    assert isinstance(step(Closure(c, bad), store), Stuck)
    assert isinstance(step_via_sl(Closure(c, bad), db), Stuck)


def test_invalid_closure_is_an_error(env):
    store, db, c = env
    with pytest.raises(EvalError):
        step(Closure(c, qvar(0)), store)


def test_unbox_box_identity_trace_matches_proof_search():
    store = CircuitStore()
    db = ClauseDb(store)
    store.reserve_qvars([0])
    cl = Closure(store.named([], [0], "input").id,
                 parse_term("(app (app unbox (box (qubit) (fun (x) x))) (qvar 0))"))
    rules = []
    while True:
        r = step(cl, store)
        via = step_via_sl(cl, db)
        assert via == r
        if not isinstance(r, Stepped):
            break
        rules.append(r.rule)
        cl = r.next
    assert isinstance(r, Value)
    assert rules == ["appl", "appl", "unboxr"]
    assert store[cl.circuit].inputs == () and len(store[cl.circuit].outputs) == 1


def test_reduction_is_deterministic_via_proof_search():
    store = CircuitStore()
    db = ClauseDb(store)
    c = store.new([]).id
    t = parse_term("(prod (app (fun (x) x) true) (if false star star))")
    found = step_via_sl(Closure(c, t), db, all_results=True)
    assert [f[0] for f in found] == ["prodl"]


def test_rev_of_boxed_swap_is_a_circuit():
    store = CircuitStore()
    t = parse_term("(app rev (box ((tensor qubit qubit)) (fun (p) (let ((a b) p) (prod b a)))))")
    cl, status = eval_closure(Closure(store.new([]).id, t), 50, store)
    assert status == "value"
    assert dest_circ(cl.term) is not None
