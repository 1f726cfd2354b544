from hypothesis import given, strategies as st

from protoquipper.circuits import (
    Binding, CircuitStore, bind_match, circ_in, circ_out, spec, valid_closure,
)
from protoquipper.qtypes import Tensor, one, qubit
from protoquipper.syntax import fq, mk_prod, qvar, star


def test_identity_interface():
    s = CircuitStore()
    c = s.new([0, 1])
    assert circ_in(c) == [0, 1] and circ_out(c) == [0, 1]
    assert s.new([]).inputs == ()
    assert s.new([3]).inputs == (3,) and s.new([3]).outputs == (3,)


def test_append_identity():
    s = CircuitStore()
    s.reserve_qvars([0])
    c = s.new([0])
    comp, b2 = s.append(c, c, Binding.of({0: 0}))
    assert circ_in(comp) == [0]
    [fresh] = circ_out(comp)
    assert fresh != 0 and b2.as_dict() == {0: fresh}


def test_append_output_is_the_second_circuits():
    s = CircuitStore()
    c = s.named([0], [1, 2])
    d = s.named([5], [6])
    comp, b2 = s.append(c, d, Binding.of({2: 5}))
    assert circ_in(comp) == [0]
    assert circ_out(comp) == [1, b2(6)]


def test_reverse_swaps_interface():
    s = CircuitStore()
    c = s.named([0, 1], [2])
    r = s.reverse(c)
    assert circ_in(r) == [2] and circ_out(r) == [0, 1]
    assert s.reverse(c) is r  # memoized


def test_specimens():
    assert spec(5, one) == star
    assert spec(5, Tensor(qubit, qubit)) == mk_prod(qvar(5), qvar(6))
    assert spec(0, qubit) == qvar(0)


def test_bind_match():
    b = bind_match(mk_prod(qvar(1), qvar(2)), mk_prod(qvar(3), qvar(4)))
    assert b.as_dict() == {1: 3, 2: 4}
    t = mk_prod(qvar(7), star)
    assert bind_match(t, t).as_dict() == {7: 7}
    assert bind_match(star, qvar(0)) is None


def test_valid_closure():
    s = CircuitStore()
    assert valid_closure(s.new([0, 1]), mk_prod(qvar(0), qvar(1)))
    assert not valid_closure(s.new([]), qvar(0))
    assert not valid_closure(s.new([0]), mk_prod(qvar(0), qvar(0)))


QTYPES = st.recursive(st.sampled_from([qubit, one]), lambda k: st.builds(Tensor, k, k),
                      max_leaves=5)


@given(QTYPES, st.integers(0, 50))
def test_specimen_is_fresh_and_duplicate_free(t, n):
    s = spec(n, t)
    qs = fq(s)
    assert len(set(qs)) == len(qs) and all(q >= n for q in qs)
    assert bind_match(s, s).as_dict() == {q: q for q in qs}


@given(st.lists(st.integers(0, 20), unique=True, max_size=5))
def test_append_keeps_inputs(ws):
    s = CircuitStore()
    s.reserve_qvars(ws)
    c = s.new(ws)
    d = s.new(ws)
    comp, _ = s.append(c, d, Binding.of({w: w for w in ws}))
    assert circ_in(comp) == circ_in(c)
    assert len(circ_out(comp)) == len(ws)
