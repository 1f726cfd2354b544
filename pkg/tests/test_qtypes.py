from hypothesis import given, strategies as st

from protoquipper.harness import subtype_closure
from protoquipper.qtypes import (
    Arrow, Bang, Circ, Tensor, all_types, bool_, const_type, one, qubit, subtype, valid, validT,
)

BASE = st.sampled_from([qubit, one, bool_])
TYPES = st.recursive(
    BASE,
    lambda k: st.one_of(k.map(Bang), st.builds(Tensor, k, k), st.builds(Arrow, k, k),
                        st.builds(Circ, k, k)),
    max_leaves=6,
)
VALID_T = TYPES.filter(validT)


def test_valid_examples():
    assert valid(Tensor(qubit, one))
    assert not valid(bool_)
    assert not valid(Bang(qubit))


def test_validT_examples():
    assert validT(Bang(Circ(qubit, qubit)))
    assert not validT(Bang(Bang(one)))
    assert not validT(Circ(bool_, one))


def test_subtype_examples():
    assert subtype(qubit, qubit)
    assert not subtype(one, Bang(one))
    assert subtype(Arrow(bool_, Bang(qubit)), Arrow(Bang(bool_), qubit))
    assert not subtype(Arrow(Bang(bool_), qubit), Arrow(bool_, Bang(qubit)))


def test_const_types():
    assert const_type("box", qubit, qubit) == Arrow(Bang(Arrow(qubit, qubit)), Bang(Circ(qubit, qubit)))
    assert const_type("unbox", qubit, one) == Arrow(Circ(qubit, one), Bang(Arrow(qubit, one)))
    assert const_type("rev", one, one) == Arrow(Circ(one, one), Bang(Circ(one, one)))


def test_universe_size():
    uni = all_types(3)
    assert len(uni) == 3303
    assert sum(map(validT, uni)) == 1632


def test_closure_agrees_at_depth_two():
    uni = all_types(2)
    truth = subtype_closure(uni)
    assert {(a, b) for a in uni for b in uni if subtype(a, b)} == truth


@given(VALID_T)
def test_reflexive(a):
    assert subtype(a, a)


@given(TYPES, TYPES)
def test_sub_are_valid(a, b):
    if subtype(a, b):
        assert validT(a) and validT(b)


@given(TYPES, TYPES, TYPES)
def test_transitive(a, b, c):
    if subtype(a, b) and subtype(b, c):
        assert subtype(a, c)


@given(TYPES, TYPES)
def test_bang_on_the_right_forces_bang_on_the_left(a, b):
    if subtype(a, Bang(b)):
        assert isinstance(a, Bang) and subtype(a.inner, b)
