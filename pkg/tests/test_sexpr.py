import pytest
from hypothesis import given, strategies as st

from protoquipper.generators import GenConfig, TermGenerator
from protoquipper.qtypes import Arrow, Bang, qubit
from protoquipper.sexpr import ParseError, parse_term, parse_type, print_term, print_type
from protoquipper.syntax import FreeVar, mk_app
from protoquipper.syntax import fun, mk_circ, qvar, unbox


def test_examples():
    assert parse_term("(fun (x) x)") == fun(lambda x: x)
    assert parse_type("(bang (arrow qubit qubit))") == Bang(Arrow(qubit, qubit))
    t = parse_term("(app unbox (circ (qvar 0) 2 (qvar 0)))")
    assert t == mk_app(unbox, mk_circ(qvar(0), 2, qvar(0)))
    assert parse_term(print_term(t)) == t


def test_free_variables_must_be_declared():
    with pytest.raises(ParseError):
        parse_term("(app f x)")
    assert parse_term("(app f x)", {"f": 0, "x": 1}) == mk_app(FreeVar(0), FreeVar(1))


@pytest.mark.parametrize("text", ["(fun (x) x", ")", "", "(fun x x)", "(bogus 1)",
                                  "(app true)", "(qvar a)", "true false"])
def test_errors_carry_positions(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse_term("(prod\n  true (nope))")
    assert e.value.line == 2 and e.value.col == 8


@given(st.integers(0, 2000))
def test_round_trip_on_generated_terms(seed):
    tt = TermGenerator(GenConfig(seed=seed, free_vars=1)).typed_term()
    assert parse_term(print_term(tt.term)) == tt.term
    assert parse_type(print_type(tt.type)) == tt.type
