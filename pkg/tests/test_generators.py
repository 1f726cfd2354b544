from hypothesis import given, strategies as st

from protoquipper.generators import GenConfig, TermGenerator, gen_typed_term, term_size
from protoquipper.logic import check_derivation
from protoquipper.qtypes import Arrow, Bang, bool_, qubit, validT
from protoquipper.syntax import Con, dest_fun


def test_size_one_yields_atoms():
    seen = set()
    for seed in range(30):
        term, ty, icx, lcx = gen_typed_term(GenConfig(seed=seed, size=1, max_qubits=0))
        assert term_size(term) == 1 and validT(ty)
        if isinstance(term, Con):
            seen.add((term.c.kind, ty))
    assert ("TRUE", bool_) in seen or ("TRUE", Bang(bool_)) in seen


def test_lambdas_use_lambda_clauses():
    g = TermGenerator(GenConfig(seed=2))
    tt = g.typed_term(ty=Arrow(qubit, qubit), qubits=0)
    if dest_fun(tt.term) is not None:
        assert {"bc:lambda1l", "bc:lambda1i"} & set(tt.derivation.rules_used())


def test_deterministic_given_seed():
    a = [TermGenerator(GenConfig(seed=7)).typed_term().term for _ in range(1)]
    b = [TermGenerator(GenConfig(seed=7)).typed_term().term for _ in range(1)]
    assert a == b


@given(st.integers(0, 5000), st.integers(0, 2))
def test_generated_typings_replay(seed, free):
    g = TermGenerator(GenConfig(seed=seed, free_vars=free))
    tt = g.typed_term()
    assert term_size(tt.term) <= 12
    assert check_derivation(tt.derivation, g.db, 64)
    assert g.misses == 0
