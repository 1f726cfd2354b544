"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import time

import pytest

from protoquipper.clauses import ClauseDb
from protoquipper.harness import SuiteConfig, run_suite
from protoquipper.logic import AtomG, Prover, Sequent, Typeof
from protoquipper.qtypes import Arrow, Bang, Tensor, bool_, const_type, qubit
from protoquipper.sexpr import parse_term
from protoquipper.syntax import box, true


@pytest.fixture
def report(capsys):
    def emit(name: str, ok: bool, detail: str, elapsed: float, limit: float):
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        with capsys.disabled():
            print(f"\n[{status}] {name}: {detail}; {elapsed:.1f}s (limit {limit:.0f}s)")
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit:.0f}s"
    return emit


def _suite(report, name: str, suite: str, cases: int, limit: float, **extra):
    rep = run_suite(suite, SuiteConfig(seed=0, cases=cases, **extra))
    detail = f"{rep.cases} cases, {len(rep.failures)} failures"
    if rep.failures:
        detail += f"; first: {rep.failures[0]}"
    report(name, rep.passed, detail, rep.elapsed, limit)
    return rep


def test_subtyping_oracle_equivalence(report):
    rep = _suite(report, "subtyping oracle equivalence (all pairs, depth <= 3)",
                 "subtyping-oracle", 0, 60)
    assert rep.cases == 3303 ** 2


def test_subtyping_theorems(report):
    rep = _suite(report, "subtyping theorems (ref, trans, SubAreVal, Props 1/2/6)",
                 "subtyping-theorems", 1000, 60)
    assert rep.stats["sub_ref"] == 1000 and rep.stats["sub_trans"] == 1000


def test_typing_smoke_set(report):
    db = ClauseDb()
    t0 = time.perf_counter()

    def status(term, ty):
        seq = Sequent(64, (), (), AtomG(Typeof(term, ty)))
        return Prover(db, "lazy").search(seq)

    ident = status(parse_term("(fun (x) x)"), Arrow(qubit, qubit))
    dup = status(parse_term("(fun (x) (prod x x))"), Arrow(qubit, Tensor(qubit, qubit)))
    tr = status(true, Bang(bool_))
    bx = status(box(qubit), const_type("box", qubit, qubit))
    ok = (ident.status == "proved" and dup.status == "failed" and tr.status == "proved"
          and bx.status == "proved" and "bc:box" in bx.derivation.rules_used())
    detail = (f"identity={ident.status} duplication={dup.status} true={tr.status} "
              f"box={bx.status}")
    report("typing smoke set (depth 64)", ok, detail, time.perf_counter() - t0, 5)


def test_sl_cut_and_weakening(report):
    rep = _suite(report, "SL cut and weakening (height <= 6)", "sl-metatheory", 200, 120)
    assert rep.stats["weakening"] == 200 and rep.stats["cut"] > 0


def test_split_strategy_equivalence(report):
    _suite(report, "lazy vs exhaustive splitting (|lcx| <= 5)", "split-strategy", 200, 120)


def test_subject_reduction(report):
    rep = _suite(report, "subject reduction (size <= 12)", "subject-reduction", 500, 600)
    assert rep.stats["steps_in_hypotheses"] >= 500


def test_evaluator_agreement(report):
    _suite(report, "evaluator agreement (direct vs proof search)", "evaluator-agreement",
           200, 300)


def test_inversion(report):
    rep = _suite(report, "inversion lemmas on values", "inversion", 300, 300)
    for lemma in ("sub_one_inv", "sub_bangarrow_inv", "sub_slet_inv", "sub_Circ_inv"):
        assert rep.stats.get(lemma, 0) > 0, lemma


def test_internal_adequacy(report):
    rep = _suite(report, "internal adequacy (typing implies well-formedness)", "adequacy",
                 300, 300)
    assert rep.stats["hastype_isterm_ctx"] == 300
