import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from protoquipper.clauses import ClauseDb
from protoquipper.generators import PropDb, SequentGenerator
from protoquipper.logic import (
    All, And, AtomG, Conj, Imp, IsQexp, LImp, Prover, Sequent, Session, Top, Typeof,
    check_derivation, enumerate_splits, fresh_eigenvariable, linear_consumption, prove,
    prove_goal_list, search,
)
from protoquipper.qtypes import qubit
from protoquipper.syntax import BoundVar, FreeVar, qvar

DB = ClauseDb()
EMPTY = PropDb()
q = qvar(0)
A, B, C = (IsQexp(FreeVar(i)) for i in range(3))


@pytest.mark.parametrize("strategy", ["lazy", "exhaustive"])
def test_linear_init(strategy):
    d = prove(Sequent(1, (), (Typeof(q, qubit),), AtomG(Typeof(q, qubit))), DB, strategy)
    assert d is not None and d.rule == "l_init"


@pytest.mark.parametrize("strategy", ["lazy", "exhaustive"])
def test_top_consumes_everything(strategy):
    d = prove(Sequent(1, (IsQexp(FreeVar(0)),), (Typeof(q, qubit),), Top()), DB, strategy)
    assert d is not None and d.rule == "top_R"


@pytest.mark.parametrize("strategy", ["lazy", "exhaustive"])
def test_init_needs_exact_linear_context(strategy):
    assert prove(Sequent(1, (A,), (B,), AtomG(A)), EMPTY, strategy) is None


def test_goal_lists():
    assert prove_goal_list(3, (), (), [], "linear", EMPTY) == []
    ds = prove_goal_list(3, (), (A, B), [AtomG(A), AtomG(B)], "linear", EMPTY)
    assert ds is not None and [d.rule for d in ds] == ["l_init", "l_init"]
    assert prove_goal_list(3, (), (A, B), [AtomG(A)], "linear", EMPTY) is None
    assert prove_goal_list(3, (A,), (), [AtomG(A), AtomG(A)], "intuitionistic", EMPTY) is not None


def test_enumerate_splits():
    s = enumerate_splits([A, B, C])
    assert len(s) == 8
    assert ((A, B), (C,)) in s and ((C,), (A, B)) in s
    assert enumerate_splits([]) == [((), ())]
    assert Counter(enumerate_splits([A, A])) == Counter({((), (A, A)): 1, ((A,), (A,)): 2,
                                                         ((A, A), ()): 1})


@given(st.lists(st.sampled_from([A, B, C]), max_size=6))
def test_split_count_is_two_to_the_n(xs):
    splits = enumerate_splits(xs)
    assert len(splits) == 2 ** len(xs)
    for l, r in splits:
        assert Counter(l) + Counter(r) == Counter(xs)


def test_fresh_eigenvariable():
    s = Session()
    assert fresh_eigenvariable(s) == FreeVar(0)
    s = Session()
    s.observe_atoms([Typeof(FreeVar(4), qubit)])
    assert fresh_eigenvariable(s).n >= 5


def test_forall_gets_a_fresh_eigenvariable():
    # all x. typeof x qubit -o typeof x qubit, with FreeVar 3 already in the context
    g = All(LImp(Typeof(BoundVar(0), qubit), AtomG(Typeof(BoundVar(0), qubit))))
    d = prove(Sequent(5, (IsQexp(FreeVar(3)),), (), g), DB)
    assert d is not None and d.rule == "all_R" and d.eigen.n > 3


def test_depth_cutoff_is_unknown_not_failed():
    g = Conj(AtomG(A), AtomG(B))
    assert search(Sequent(1, (), (A, B), g), EMPTY).status == "unknown"
    assert search(Sequent(2, (), (A, B), g), EMPTY).status == "proved"
    assert search(Sequent(2, (), (A,), g), EMPTY).status == "failed"


def test_with_shares_and_tensor_splits():
    assert prove(Sequent(3, (), (A,), And(AtomG(A), AtomG(A))), EMPTY) is not None
    assert prove(Sequent(3, (), (A,), Conj(AtomG(A), AtomG(A))), EMPTY) is None
    assert prove(Sequent(3, (), (), Imp(A, Conj(AtomG(A), AtomG(A)))), EMPTY) is not None


@given(st.integers(0, 10_000))
def test_strategies_agree_and_replay(seed):
    rng = random.Random(seed)
    case = SequentGenerator(rng).case(max_height=5, max_lcx=4)
    results = {}
    for strategy in ("lazy", "exhaustive"):
        d = Prover(case.db, strategy).search(
            Sequent(case.height, case.icx, case.lcx, case.goal)).derivation
        assert d is not None and d.height <= case.height
        assert check_derivation(d, case.db, case.height)
        results[strategy] = d
    # every linear hypothesis is consumed exactly once, unless a Top absorbed it
    d = results["lazy"]
    if "top_R" not in d.rules_used():
        assert linear_consumption(d) == Counter(case.lcx)


def test_replay_rejects_a_tampered_derivation():
    d = prove(Sequent(2, (), (A, B), Conj(AtomG(A), AtomG(B))), EMPTY)
    assert check_derivation(d, EMPTY)
    d.premises[0].lcx = (B,)
    assert not check_derivation(d, EMPTY)
