import pytest

from protoquipper.circuits import CircuitStore
from protoquipper.clauses import (
    REDUCTION_RULES, ClauseDb, ctxr_check, split_subtypectx, subtypecontext_check, toimp,
    toimpexp, witness_contexts,
)
from protoquipper.logic import (
    All, And, AtomG, ClauseView, Imp, IsQexp, LImp, Prover, Sequent, Typeof,
)
from protoquipper.qtypes import Arrow, Bang, Circ, Tensor, bool_, const_type, one, qubit
from protoquipper.sexpr import parse_term
from protoquipper.syntax import BoundVar, FreeVar, box, mk_app, qvar, true, unbox

DB = ClauseDb()
EMPTY_VIEW = ClauseView((), ())


def proves(term, ty, icx=(), lcx=(), depth=64, strategy="lazy"):
    r = Prover(DB, strategy).search(Sequent(depth, tuple(icx), tuple(lcx), AtomG(Typeof(term, ty))))
    return r


def instances(name, atom, view=EMPTY_VIEW):
    return list(DB.by_name(name).instances(atom, view))


# -- typing smoke set ------------------------------------------------------

@pytest.mark.parametrize("strategy", ["lazy", "exhaustive"])
def test_identity_on_qubits(strategy):
    r = proves(parse_term("(fun (x) x)"), Arrow(qubit, qubit), strategy=strategy)
    assert r.status == "proved" and "bc:lambda1l" in r.derivation.rules_used()


@pytest.mark.parametrize("strategy", ["lazy", "exhaustive"])
def test_duplication_is_rejected_by_completed_search(strategy):
    r = proves(parse_term("(fun (x) (prod x x))"), Arrow(qubit, Tensor(qubit, qubit)),
               strategy=strategy)
    assert r.status == "failed"


def test_duplication_of_a_banged_argument():
    r = proves(parse_term("(fun (x) (prod x x))"), Arrow(Bang(qubit), Tensor(qubit, qubit)))
    assert r.status == "proved" and "bc:lambda1i" in r.derivation.rules_used()


def test_true_at_bang_bool():
    r = proves(true, Bang(bool_))
    assert r.status == "proved" and r.derivation.rule == "bc:truei"
    assert r.derivation.premises == []


def test_box_constant_at_its_type():
    r = proves(box(qubit), const_type("box", qubit, qubit))
    assert r.status == "proved" and "bc:box" in r.derivation.rules_used()


def test_unbox_of_boxed_identity_applies_to_a_qubit():
    t = parse_term("(app (app unbox (box (qubit) (fun (x) x))) (qvar 0))")
    r = proves(t, qubit, icx=[IsQexp(qvar(0))], lcx=[Typeof(qvar(0), qubit)])
    assert r.status == "proved"


def test_circuit_literal_needs_no_linear_context():
    store = CircuitStore()
    cid = store.named([1], [2]).id
    db = ClauseDb(store)
    c = parse_term(f"(circ (qvar 1) {cid} (qvar 2))")

    def status(ty, icx=(), lcx=()):
        return Prover(db, "lazy").search(Sequent(64, icx, lcx, AtomG(Typeof(c, ty)))).status

    assert status(Bang(Circ(qubit, qubit))) == "proved"
    assert status(Circ(qubit, qubit)) == "proved"
    extra = Typeof(qvar(9), qubit)
    assert status(Circ(qubit, qubit), (IsQexp(qvar(9)),), (extra,)) == "failed"
    # interface mismatch with the stored circuit
    assert status(Circ(Tensor(qubit, qubit), qubit)) == "failed"


# -- clause shapes ---------------------------------------------------------

def test_truei_has_no_subgoals():
    assert instances("truei", Typeof(true, Bang(bool_))) == [([], [])]


def test_apq_subgoal():
    a = IsQexp(mk_app(FreeVar(1), FreeVar(2)))
    [(ig, lg)] = instances("apq", a)
    assert ig == [And(AtomG(IsQexp(FreeVar(1))), AtomG(IsQexp(FreeVar(2))))] and lg == []


def test_lambda1l_subgoal():
    t = parse_term("(fun (x) x)")
    [(ig, lg)] = instances("lambda1l", Typeof(t, Arrow(qubit, qubit)))
    assert ig == []
    assert lg == [All(Imp(IsQexp(BoundVar(0)), LImp(Typeof(BoundVar(0), qubit),
                                                    AtomG(Typeof(BoundVar(0), qubit)))))]


def test_toimp_and_toimpexp():
    a = AtomG(Typeof(qvar(5), one))
    q0, q1 = qvar(0), qvar(1)
    assert toimp([0, 1], a) == Imp(IsQexp(q0), LImp(Typeof(q0, qubit),
                                   Imp(IsQexp(q1), LImp(Typeof(q1, qubit), a))))
    assert toimp([], a) == a
    assert toimpexp([0, 1], a) == Imp(IsQexp(q0), Imp(IsQexp(q1), a))


def test_reduction_rule_names():
    assert len(REDUCTION_RULES) == 16
    assert set(REDUCTION_RULES) <= set(DB.names("reduct"))


def test_unbox_constant_type():
    assert proves(unbox, const_type("unbox", qubit, one)).status == "proved"


# -- context relations -----------------------------------------------------

x = FreeVar(0)


def test_subtypecontext_examples():
    assert subtypecontext_check([], [], [], []).constructors == ["subcnxt_i"]
    rel = subtypecontext_check([IsQexp(x), Typeof(x, Bang(bool_))], [],
                               [IsQexp(x)], [Typeof(x, bool_)])
    assert rel is not None and rel.constructors[0] == "subcnxt_lig"


def test_ctxr_example():
    w = ctxr_check([IsQexp(x)], [IsQexp(x)], [Typeof(x, qubit)])
    assert w is not None and w.constructors[0] == "cons_l_cr"


def test_split_examples():
    rel = subtypecontext_check([], [], [], [])
    il1, il2, l1, l2, r1, r2 = split_subtypectx(rel, [], [])
    assert (il1, il2, l1, l2) == ([], [], [], [])
    a = Typeof(x, qubit)
    rel = subtypecontext_check([IsQexp(x)], [a], [IsQexp(x)], [a])
    il1, il2, l1, l2, r1, r2 = split_subtypectx(rel, [a], [])
    assert l1 == [a] and l2 == []


def test_split_two_atoms_all_ways():
    y = FreeVar(1)
    ll = [Typeof(x, bool_), Typeof(y, qubit)]
    il = [IsQexp(x), IsQexp(y)]
    rel = subtypecontext_check(il + [Typeof(x, Bang(bool_))], [Typeof(y, qubit)], il, ll)
    assert rel is not None
    for mask in range(4):
        left = [a for i, a in enumerate(ll) if mask >> i & 1]
        right = [a for i, a in enumerate(ll) if not mask >> i & 1]
        _, _, _, _, r1, r2 = split_subtypectx(rel, left, right)
        for r, side in ((r1, left), (r2, right)):
            a, b, c, d = witness_contexts(r)
            assert sorted(map(repr, d)) == sorted(map(repr, side))
            assert subtypecontext_check(a, b, c, d) is not None


def test_split_rejects_a_non_split():
    a = Typeof(x, qubit)
    rel = subtypecontext_check([IsQexp(x)], [a], [IsQexp(x)], [a])
    with pytest.raises(ValueError):
        split_subtypectx(rel, [a], [a])
