import pytest

import protoquipper.harness as h
from protoquipper.circuits import Closure
from protoquipper.evaluator import Stepped
from protoquipper.harness import SUITES, SuiteConfig, run_suite
from protoquipper.syntax import true

SMALL = {
    "subtyping-theorems": 100, "sl-metatheory": 40, "split-strategy": 40,
    "subject-reduction": 40, "evaluator-agreement": 20, "inversion": 30, "adequacy": 30,
    "context-subtyping": 30,
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_suites_pass(name):
    rep = run_suite(name, SuiteConfig(seed=3, cases=SMALL[name]))
    assert rep.passed, rep.to_text()
    assert rep.cases >= SMALL[name]


def test_suites_are_deterministic():
    a = run_suite("subject-reduction", SuiteConfig(seed=5, cases=20))
    b = run_suite("subject-reduction", SuiteConfig(seed=5, cases=20))
    assert a.stats == b.stats and a.cases == b.cases


def test_registry_names():
    assert set(SMALL) | {"subtyping-oracle"} == set(SUITES)


def test_report_json_shape():
    rep = run_suite("sl-metatheory", SuiteConfig(seed=1, cases=5))
    d = rep.to_dict()
    assert {"suite", "cases", "failures", "seed", "passed"} <= set(d)


# -- the suites must notice broken components --------------------------------

def test_oracle_catches_a_covariant_arrow(monkeypatch):
    real = h.subtype

    def broken(a, b):
        if isinstance(a, h.Arrow) and isinstance(b, h.Arrow):
            return real(a.left, b.left) and real(a.right, b.right)
        return real(a, b)

    monkeypatch.setattr(h, "subtype", broken)
    b = h.bool_
    uni = h.all_types(2) + [h.Arrow(x, y) for x in (b, h.Bang(b)) for y in (b, h.Bang(b))]
    rep = h.run_subtyping_oracle_suite(universe=uni)
    assert not rep.passed
    monkeypatch.setattr(h, "subtype", real)
    assert h.run_subtyping_oracle_suite(universe=uni).passed


def test_subject_reduction_catches_a_bad_step(monkeypatch):
    def bad_step(cl, store):
        return Stepped(Closure(cl.circuit, true), "bogus")

    monkeypatch.setattr(h, "step", bad_step)
    rep = h.run_subject_reduction_suite(SuiteConfig(seed=0, cases=20, max_steps=1))
    assert not rep.passed
    f = rep.failures[0]
    assert len(f["shrunk"]) <= len(f["before"])


def test_agreement_catches_a_wrong_rule_name(monkeypatch):
    real = h.step

    def renamed(cl, store):
        r = real(cl, store)
        return Stepped(r.next, "other") if isinstance(r, Stepped) else r

    monkeypatch.setattr(h, "step", renamed)
    assert not h.run_evaluator_agreement_suite(SuiteConfig(seed=0, cases=5)).passed
