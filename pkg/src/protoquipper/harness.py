"""Property suites for the metatheory: subtyping, SL, typing and reduction.

Every suite returns a :class:`Report` carrying the seed, the number of cases
checked, wall time and a list of counterexamples (empty on success).
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from .qtypes import (
    Arrow, Bang, Base, Circ, QType, Tensor, all_types, bool_, one, qubit, subtype, type_depth,
    valid, validT,
)
from .circuits import CircuitStore, Closure, valid_closure
from .clauses import (
    ctxr_check, split_subtypectx, subtypecontext_check, toimp, witness_contexts,
)
from .evaluator import Stepped, Stuck, Value, eval_closure, step, step_via_sl
from .generators import GenConfig, SeqCase, SequentGenerator, TermGenerator, TypedTerm, term_size
from .logic import (
    And, Atom, AtomG, Conj, Derivation, IsQexp, LImp, Prover, Sequent, Typeof, check_derivation,
    prove_goal_list,
)
from .sexpr import print_term
from .syntax import (
    Abs, App2, Con, FreeVar, Term, dest_app, dest_circ, dest_fun, fq, fqu, fquc, free_vars,
    get_boxed, is_value, mk_slet, qvar, star, unbox,
)

__all__ = [
    "Report", "SuiteConfig", "subtype_closure", "run_subtyping_oracle_suite",
    "run_subtyping_theorem_suite",
    "run_sl_metatheory_suite", "run_strategy_equivalence_suite", "shrink_term",
    "quantum_contexts", "sr_hypotheses", "run_subject_reduction_suite",
    "run_evaluator_agreement_suite", "run_inversion_suite", "run_adequacy_suite",
    "run_context_subtyping_suite", "generate_values", "specialise_context", "subtypes_of",
    "supertypes_of", "SUITES", "run_suite",
]


@dataclass
class SuiteConfig:
    seed: int = 0
    cases: int = 200
    size: int = 12
    depth: int = 64
    type_depth: int = 3
    max_steps: int = 30


@dataclass
class Report:
    suite: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, **info) -> None:
        self.failures.append(info)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["failures"] = [{k: str(v) for k, v in f.items()} for f in self.failures]
        return d

    def to_text(self) -> str:
        head = (f"{self.suite}: {'PASS' if self.passed else 'FAIL'} "
                f"cases={self.cases} failures={len(self.failures)} "
                f"seed={self.seed} time={self.elapsed:.2f}s")
        lines = [head]
        for k, v in self.stats.items():
            lines.append(f"  {k}: {v}")
        for f in self.failures[:5]:
            lines.append("  counterexample: " + ", ".join(f"{k}={v}" for k, v in f.items()))
        return "\n".join(lines)


class _Timer:
    def __init__(self, report: Report) -> None:
        self.report = report

    def __enter__(self) -> "_Timer":
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc) -> None:
        self.report.elapsed = time.perf_counter() - self.t0


# ---------------------------------------------------------------------------
# subtyping

def subtype_closure(universe: list[QType]) -> set[tuple[QType, QType]]:
    """All derivable pairs over ``universe``, by forward closure of the rules.

    Each rule is applied to already-derived premises until nothing new
    appears; this never calls the decision procedure.
    """
    uni = set(universe)
    top = max((type_depth(t) for t in universe), default=0)
    derived: set[tuple[QType, QType]] = {(b, b) for b in (qubit, one, bool_) if b in uni}
    frontier = list(derived)
    by_pair = list(derived)
    while frontier:
        new: set[tuple[QType, QType]] = set()
        pairs = by_pair
        for a, b in frontier:
            # bang rules have one premise
            ba = Bang(a)
            if validT(ba) and ba in uni:
                new.add((ba, b))
                if Bang(b) in uni:
                    new.add((ba, Bang(b)))
        small_front = [p for p in frontier if type_depth(p[0]) < top and type_depth(p[1]) < top]
        small = [p for p in pairs if type_depth(p[0]) < top and type_depth(p[1]) < top]
        for p in small_front:
            for q in small:
                for (a1, b1), (a2, b2) in ((p, q), (q, p)):
                    t = (Tensor(a1, a2), Tensor(b1, b2))
                    if t[0] in uni and t[1] in uni:
                        new.add(t)
                    # arrow: first premise is the contravariant one
                    t = (Arrow(b1, a2), Arrow(a1, b2))
                    if t[0] in uni and t[1] in uni:
                        new.add(t)
                    t = (Circ(b1, a2), Circ(a1, b2))
                    if t[0] in uni and t[1] in uni and validT(t[0]) and validT(t[1]):
                        new.add(t)
        frontier = [p for p in new if p not in derived]
        derived.update(frontier)
        by_pair.extend(frontier)
    return derived


def run_subtyping_oracle_suite(depth: int = 3, seed: int = 0,
                               universe: Optional[list[QType]] = None) -> Report:
    """Decision procedure against the forward closure on every pair of the universe."""
    rep = Report("subtyping-oracle", seed)
    with _Timer(rep):
        uni = universe if universe is not None else all_types(depth)
        truth = subtype_closure(uni)
        n = 0
        for a in uni:
            for b in uni:
                n += 1
                if subtype(a, b) != ((a, b) in truth):
                    rep.fail(a=a, b=b, decided=subtype(a, b), derivable=(a, b) in truth)
        rep.cases = n
        rep.stats["derivable_pairs"] = len(truth)
        rep.stats["types"] = len(uni)
    return rep


def run_subtyping_theorem_suite(seed: int = 0, n: int = 1000, depth: int = 3) -> Report:
    rep = Report("subtyping-theorems", seed)
    rng = random.Random(seed)
    with _Timer(rep):
        uni = all_types(depth)
        vt = [t for t in uni if validT(t)]
        c = Counter()
        # sub_ref
        for _ in range(n):
            t = rng.choice(vt)
            c["sub_ref"] += 1
            if not subtype(t, t):
                rep.fail(lemma="sub_ref", a=t)
        # sub_trans on derivable chains
        sups: dict[QType, list[QType]] = {}
        pairs = []
        for a in uni:
            for b in uni:
                if subtype(a, b):
                    sups.setdefault(a, []).append(b)
                    pairs.append((a, b))
        chains = 0
        while chains < n:
            a = rng.choice(vt)
            if a not in sups:
                continue
            b = rng.choice(sups[a])
            if b not in sups:
                continue
            d = rng.choice(sups[b])
            chains += 1
            if not subtype(a, d):
                rep.fail(lemma="sub_trans", a=a, b=b, c=d)
        c["sub_trans"] = chains
        for a, b in pairs:
            c["SubAreVal"] += 1
            if not (validT(a) and validT(b)):
                rep.fail(lemma="SubAreVal", a=a, b=b)
            if isinstance(a, Base) and a != b:
                rep.fail(lemma="Prop1", a=a, b=b)
            if isinstance(b, Bang):
                c["Prop6"] += 1
                if not (isinstance(a, Bang) and subtype(a.inner, b.inner)):
                    rep.fail(lemma="Prop6", a=a, b=b)
            for ctor in (Tensor, Arrow, Circ):
                if isinstance(a, ctor):
                    c["Prop2"] += 1
                    ok = isinstance(b, ctor)
                    if ok and ctor is Tensor:
                        ok = subtype(a.left, b.left) and subtype(a.right, b.right)
                    elif ok:
                        ok = subtype(b.left, a.left) and subtype(a.right, b.right)
                    if not ok:
                        rep.fail(lemma="Prop2", a=a, b=b)
        rep.cases = sum(c.values())
        rep.stats.update(c)
    return rep


# ---------------------------------------------------------------------------
# SL metatheory

def _status(db, strategy: str, depth: int, icx, lcx, goal) -> tuple[str, Optional[Derivation]]:
    r = Prover(db, strategy).search(Sequent(depth, tuple(icx), tuple(lcx), goal))
    return r.status, r.derivation


def run_sl_metatheory_suite(seed: int = 0, cases: int = 200, max_height: int = 6) -> Report:
    """Cut and intuitionistic weakening on derivable sequents built by construction.

    Cut: if ``icx, c; lcx |- G`` has height i and ``icx |- c`` has height j
    then ``icx; lcx |- G`` is provable within i + j.  Weakening: adding
    intuitionistic atoms keeps provability at the same height.
    """
    rep = Report("sl-metatheory", seed)
    rng = random.Random(seed)
    gen = SequentGenerator(rng)
    c = Counter()
    with _Timer(rep):
        while rep.cases < cases:
            case = gen.case(max_height=max_height)
            i = case.height
            st, d = _status(case.db, "lazy", i, case.icx, case.lcx, case.goal)
            if d is None or not check_derivation(d, case.db, i):
                rep.fail(check="construction", icx=case.icx, lcx=case.lcx, goal=case.goal,
                         height=i, status=st)
                rep.cases += 1
                continue
            rep.cases += 1
            extra = rng.sample(gen.pool, rng.randint(1, 3)) + [gen._new_atom()]
            icx_w = tuple(dict.fromkeys(case.icx + tuple(extra)))
            st, d = _status(case.db, "lazy", i, icx_w, case.lcx, case.goal)
            c["weakening"] += 1
            if d is None:
                rep.fail(check="weakening", icx=icx_w, lcx=case.lcx, goal=case.goal, height=i)
            if case.cut_atom is None:
                continue
            rest = tuple(a for a in case.icx if a != case.cut_atom)
            st, dc = _status(case.db, "lazy", max_height, rest, (), AtomG(case.cut_atom))
            if dc is None:
                rep.fail(check="cut-premise", icx=rest, atom=case.cut_atom)
                continue
            j = dc.height
            c["cut"] += 1
            st, d = _status(case.db, "lazy", i + j, rest, case.lcx, case.goal)
            if d is None:
                rep.fail(check="cut", icx=rest, lcx=case.lcx, goal=case.goal, depth=i + j)
        rep.stats.update(c)
    return rep


def _mutate(rng: random.Random, gen: SequentGenerator, case: SeqCase):
    lcx, goal = list(case.lcx), case.goal
    k = rng.randrange(4)
    if k == 0:
        lcx.append(rng.choice(gen.pool))
    elif k == 1 and lcx:
        lcx.pop(rng.randrange(len(lcx)))
    elif k == 2:
        goal = Conj(goal, AtomG(rng.choice(gen.pool)))
    else:
        goal = LImp(rng.choice(gen.pool), goal)
    return tuple(lcx), goal


def run_strategy_equivalence_suite(seed: int = 0, cases: int = 200, max_lcx: int = 5,
                                   depth: int = 8) -> Report:
    """Lazy resource threading against exhaustive splitting, on provability."""
    rep = Report("split-strategy-equivalence", seed)
    rng = random.Random(seed)
    gen = SequentGenerator(rng)
    c = Counter()
    with _Timer(rep):
        while rep.cases < cases:
            case = gen.case(max_height=6, max_lcx=max_lcx)
            if rng.random() < 0.5:
                lcx, goal = case.lcx, case.goal
            else:
                lcx, goal = _mutate(rng, gen, case)
            if len(lcx) > max_lcx:
                continue
            rep.cases += 1
            s1, d1 = _status(case.db, "lazy", depth, case.icx, lcx, goal)
            s2, d2 = _status(case.db, "exhaustive", depth, case.icx, lcx, goal)
            c[f"lazy={s1},exhaustive={s2}"] += 1
            if (d1 is None) != (d2 is None):
                rep.fail(icx=case.icx, lcx=lcx, goal=goal, lazy=s1, exhaustive=s2)
            for d in (d1, d2):
                if d is not None and not check_derivation(d, case.db, depth):
                    rep.fail(icx=case.icx, lcx=lcx, goal=goal, check="replay")
        rep.stats.update(c)
    return rep


# ---------------------------------------------------------------------------
# shrinking

def _positions(t: Term, path: tuple = ()):
    yield path, t
    if isinstance(t, App2):
        yield from _positions(t.left, path + (0,))
        yield from _positions(t.right, path + (1,))
    elif isinstance(t, Abs):
        yield from _positions(t.body, path + (0,))


def _replace(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    if isinstance(t, App2):
        if path[0] == 0:
            return App2(_replace(t.left, path[1:], new), t.right)
        return App2(t.left, _replace(t.right, path[1:], new))
    assert isinstance(t, Abs)
    return Abs(_replace(t.body, path[1:], new))


def _safe(pred: Callable[[Term], bool], t: Term) -> bool:
    try:
        return bool(pred(t))
    except Exception:
        return False


def shrink_term(t: Term, still_fails: Callable[[Term], bool], budget: int = 200) -> Term:
    """Greedily replace subterms by their own subterms while the failure persists."""
    changed = True
    while changed and budget > 0:
        changed = False
        for path, s in list(_positions(t)):
            for _, inner in list(_positions(s))[1:]:
                budget -= 1
                cand = _replace(t, path, inner)
                if term_size(cand) < term_size(t) and _safe(still_fails, cand):
                    t = cand
                    changed = True
                    break
                if budget <= 0:
                    break
            if changed or budget <= 0:
                break
    return t


# ---------------------------------------------------------------------------
# typing and reduction

def _has_type(db, depth: int, icx, lcx, term: Term, ty: QType) -> bool:
    r = Prover(db, "lazy").search(Sequent(depth, tuple(icx), tuple(lcx), AtomG(Typeof(term, ty))))
    return r.derivation is not None


def quantum_contexts(a: Term) -> tuple[tuple[Atom, ...], tuple[Atom, ...]]:
    """``is_qexp`` and ``typeof q qubit`` for every free quantum variable of ``a``."""
    qs = fq(a)
    return (tuple(IsQexp(qvar(q)) for q in qs), tuple(Typeof(qvar(q), qubit) for q in qs))


def sr_hypotheses(a: Term) -> Optional[str]:
    """Why ``a`` falls outside the subject-reduction hypotheses, or None."""
    for b in get_boxed(a):
        if isinstance(b, FreeVar) or (isinstance(b, Con) and b.c.kind == "Qvar"):
            return "boxed argument is a variable"
    u, uc = fqu(a), fquc(a)
    if len(set(uc)) != len(uc):
        return "duplicate quantum variables (with circuits)"
    if len(set(u)) != len(u):
        return "duplicate quantum variables"
    return None


def initial_closure(store: CircuitStore, tt: TypedTerm) -> Closure:
    c = store.named([], list(tt.qubits), "init")
    return Closure(c.id, tt.term)


def run_subject_reduction_suite(cfg: Optional[SuiteConfig] = None, cases: Optional[int] = None) -> Report:
    """Every step of a well-typed closure keeps the type under the recomputed context."""
    cfg = cfg or SuiteConfig(cases=500)
    n = cases if cases is not None else cfg.cases
    rep = Report("subject-reduction", cfg.seed)
    gen = TermGenerator(GenConfig(seed=cfg.seed, size=cfg.size, depth=cfg.depth))
    store, db = gen.store, gen.db
    c = Counter()
    with _Timer(rep):
        while rep.cases < n:
            tt = gen.typed_term()
            if is_value(tt.term) or sr_hypotheses(tt.term) is not None:
                continue
            rep.cases += 1
            cl = initial_closure(store, tt)
            inside = True
            for _ in range(cfg.max_steps):
                r = step(cl, store)
                if isinstance(r, Value):
                    c["reached_value"] += 1
                    break
                if isinstance(r, Stuck):
                    rep.fail(check="progress", term=print_term(cl.term), type=tt.type,
                             reason=r.reason, seed=cfg.seed)
                    break
                inside = inside and sr_hypotheses(cl.term) is None
                a2 = r.next.term
                il, ll = quantum_contexts(a2)
                ok = _has_type(db, cfg.depth, il, ll, a2, tt.type)
                c["steps_in_hypotheses" if inside else "steps_outside_hypotheses"] += 1
                c["rule:" + r.rule] += 1
                if not ok:
                    if inside:
                        small = shrink_term(cl.term, lambda t: _breaks_preservation(
                            db, cfg.depth, store, cl.circuit, t, tt.type))
                        rep.fail(check="preservation", rule=r.rule, before=print_term(cl.term),
                                 after=print_term(a2), type=tt.type, shrunk=print_term(small),
                                 seed=cfg.seed)
                    else:
                        c["outside_hypotheses_failures"] += 1
                cl = r.next
        rep.stats.update(sorted(c.items()))
        rep.stats["generator_misses"] = gen.misses
    return rep


def _breaks_preservation(db, depth: int, store: CircuitStore, cid: int, a: Term,
                         ty: QType) -> bool:
    """``a`` is typed at ``ty``, meets the hypotheses and its next step is not typed."""
    if not valid_closure(store[cid], a, bound_nodup=False) or sr_hypotheses(a) is not None:
        return False
    il, ll = quantum_contexts(a)
    if not _has_type(db, depth, il, ll, a, ty):
        return False
    try:
        r = step(Closure(cid, a), store)
    except Exception:
        return False
    if not isinstance(r, Stepped):
        return False
    il, ll = quantum_contexts(r.next.term)
    return not _has_type(db, depth, il, ll, r.next.term, ty)


def _disagrees(db, depth: int, store: CircuitStore, cid: int, a: Term) -> bool:
    try:
        if not valid_closure(store[cid], a, bound_nodup=False):
            return False
        r = step(Closure(cid, a), store)
        found = step_via_sl(Closure(cid, a), db, depth, all_results=True)
    except Exception:
        return False
    if isinstance(r, Stepped):
        return [(f[0], f[1]) for f in found] != [(r.rule, r.next)]
    return bool(found)


def run_evaluator_agreement_suite(cfg: Optional[SuiteConfig] = None,
                                  cases: Optional[int] = None) -> Report:
    """Direct stepping and proof search over reduct goals give the same step."""
    cfg = cfg or SuiteConfig(cases=200)
    n = cases if cases is not None else cfg.cases
    rep = Report("evaluator-agreement", cfg.seed)
    gen = TermGenerator(GenConfig(seed=cfg.seed + 1, size=cfg.size, depth=cfg.depth))
    store, db = gen.store, gen.db
    c = Counter()
    with _Timer(rep):
        while rep.cases < n:
            tt = gen.typed_term()
            if is_value(tt.term):
                continue
            cl = initial_closure(store, tt)
            if not valid_closure(store[cl.circuit], cl.term, bound_nodup=False):
                c["skipped_invalid_closure"] += 1
                continue
            rep.cases += 1
            for _ in range(cfg.max_steps):
                r1 = step(cl, store)
                found = step_via_sl(cl, db, cfg.depth, all_results=True)
                c["steps"] += 1
                if isinstance(r1, Stepped):
                    got = [(rule, nxt) for rule, nxt, _ in found]
                    if got != [(r1.rule, r1.next)]:
                        small = shrink_term(cl.term, lambda t: _disagrees(db, cfg.depth, store,
                                                                          cl.circuit, t))
                        rep.fail(term=print_term(cl.term), shrunk=print_term(small), direct=(r1.rule, print_term(r1.next.term)),
                                 via_sl=[(g[0], print_term(g[1].term)) for g in got], seed=cfg.seed)
                        break
                    cl = r1.next
                    continue
                if found:
                    rep.fail(term=print_term(cl.term), direct=r1, via_sl=[f[0] for f in found])
                c["value" if isinstance(r1, Value) else "stuck"] += 1
                break
        rep.stats.update(c)
    return rep


# ---------------------------------------------------------------------------
# inversion on values

def generate_values(gen: TermGenerator, n: int, fuel: int = 200):
    """Closed well-typed values with their types, by evaluating generated terms."""
    store = gen.store
    out = []
    while len(out) < n:
        tt = gen.typed_term()
        cl = initial_closure(store, tt)
        if not valid_closure(store[cl.circuit], cl.term, bound_nodup=False):
            continue
        if not is_value(tt.term):
            cl, status = eval_closure(cl, fuel, store)
            if status != "value":
                continue
        out.append((cl.term, tt.type))
    return out


_ARROW_PAIRS = [(qubit, qubit), (one, one), (bool_, bool_), (Tensor(qubit, qubit), qubit)]


def _splitseq(db, depth, icx, lcx, goals) -> bool:
    return prove_goal_list(depth, icx, lcx, goals, "linear", db) is not None


def run_inversion_suite(cfg: Optional[SuiteConfig] = None, cases: Optional[int] = None) -> Report:
    """Inversion lemmas on closed values: unit, banged arrows, unit-let and circuits."""
    cfg = cfg or SuiteConfig(cases=300)
    n = cases if cases is not None else cfg.cases
    rep = Report("inversion", cfg.seed)
    gen = TermGenerator(GenConfig(seed=cfg.seed + 2, size=cfg.size, depth=cfg.depth))
    db, d = gen.db, cfg.depth
    c = Counter()
    with _Timer(rep):
        for v, a in generate_values(gen, n):
            rep.cases += 1
            il, ll = quantum_contexts(v)
            if not _has_type(db, d, il, ll, v, a):
                rep.fail(lemma="value typing", value=print_term(v), type=a)
                continue
            # unit
            for unit in (one, Bang(one)):
                if _has_type(db, d, il, ll, v, unit):
                    c["sub_one_inv"] += 1
                    if v != star:
                        rep.fail(lemma="sub_one_inv", value=print_term(v), type=unit)
            # banged arrows
            pairs = list(_ARROW_PAIRS)
            ua = a.inner if isinstance(a, Bang) else a
            if isinstance(ua, Arrow) and valid(ua.left) and valid(ua.right):
                pairs.append((ua.left, ua.right))
            for t, u in pairs:
                if _has_type(db, d, il, ll, v, Bang(Arrow(t, u))):
                    c["sub_bangarrow_inv"] += 1
                    if not _bangarrow_shape(v):
                        rep.fail(lemma="sub_bangarrow_inv", value=print_term(v), t=t, u=u)
            # unit-let built around the value
            s = mk_slet(v, star)
            if _has_type(db, d, il, ll, s, a):
                c["sub_slet_inv"] += 1
                bs = [a] + ([Bang(a)] if validT(Bang(a)) else [])
                ok = any(_splitseq(db, d, il, ll, [Conj(AtomG(Typeof(v, b)), AtomG(Typeof(star, u)))])
                         for b in bs for u in (one, Bang(one)))
                if not ok:
                    rep.fail(lemma="sub_slet_inv", term=print_term(s), type=a)
            # circuits
            cc = dest_circ(v)
            if cc is not None:
                c["sub_Circ_inv"] += 1
                if not _circ_inversion(db, d, il, ll, v, cc, a):
                    rep.fail(lemma="sub_Circ_inv", value=print_term(v), type=a)
        rep.stats.update(c)
    return rep


def _bangarrow_shape(v: Term) -> bool:
    if dest_fun(v) is not None:
        return True
    if isinstance(v, Con) and v.c.kind in ("BOX", "UNBOX", "REV"):
        return True
    p = dest_app(v)
    return p is not None and p[0] == unbox and dest_circ(p[1]) is not None


def _circ_inversion(db, d, il, ll, v, cc, a) -> bool:
    t, _, body = cc
    if ll:
        return False
    # a linear hypothesis makes the judgment unprovable: the context must be empty
    extra = Typeof(qvar(1 << 30), qubit)
    if _has_type(db, d, il + (IsQexp(qvar(1 << 30)),), (extra,), v, a):
        return False
    ua = a.inner if isinstance(a, Bang) else a
    if not (isinstance(ua, Circ) and validT(ua)):
        return False
    goal = And(toimp(fq(body), AtomG(Typeof(body, ua.right))),
               toimp(fq(t), AtomG(Typeof(t, ua.left))))
    return _splitseq(db, d, il, (), [goal])


# ---------------------------------------------------------------------------
# internal adequacy and context subtyping

def _is_qexp_ctx(tt: TypedTerm) -> tuple[Atom, ...]:
    return tuple(a for a in tt.icx if isinstance(a, IsQexp))


def _proves_wf(db, depth, iq, term) -> bool:
    r = Prover(db, "lazy").search(Sequent(depth, tuple(iq), (), AtomG(IsQexp(term))))
    return r.derivation is not None


def run_adequacy_suite(cfg: Optional[SuiteConfig] = None, cases: Optional[int] = None) -> Report:
    """Typing implies well-formedness under the is_qexp projection of the context."""
    cfg = cfg or SuiteConfig(cases=300)
    n = cases if cases is not None else cfg.cases
    rep = Report("internal-adequacy", cfg.seed)
    rng = random.Random(cfg.seed)
    gen = TermGenerator(GenConfig(seed=cfg.seed + 3, size=cfg.size, depth=cfg.depth))
    db, d = gen.db, cfg.depth
    c = Counter()
    with _Timer(rep):
        while rep.cases < n:
            closed = rng.random() < 0.3
            tt = gen.typed_term(free_vars=0 if closed else rng.randint(1, 3))
            rep.cases += 1
            iq = _is_qexp_ctx(tt)
            it, lt = tt.icx, tt.lcx
            term = print_term(tt.term)
            if ctxr_check(iq, it, lt) is None:
                rep.fail(check="ctxR", term=term, it=it, lt=lt)
                continue
            if not _proves_wf(db, d, iq, tt.term):
                rep.fail(check="hastype_isterm_ctx", term=term, iq=iq)
                continue
            c["hastype_isterm_ctx"] += 1
            # strengthen to the variables of the term, weaken with unrelated ones
            used = set(free_vars(tt.term))
            qs = set(fq(tt.term)) | set(fquc(tt.term))
            small = tuple(a for a in iq if (isinstance(a.term, FreeVar) and a.term.n in used)
                          or (a.term in [qvar(q) for q in qs]))
            big = iq + (IsQexp(FreeVar(999)), IsQexp(qvar(1 << 29)))
            for name, ctx in (("strengthen", small), ("weaken", big)):
                c[name] += 1
                if not _proves_wf(db, d, ctx, tt.term):
                    rep.fail(check=name, term=term, iq=ctx)
            # ctxR over a concatenation splits into ctxR on each part
            k = rng.randint(0, len(lt))
            for part in (lt[:k], lt[k:]):
                c["ctxRconcat"] += 1
                if ctxr_check(iq, it, part) is None:
                    rep.fail(check="ctxRconcat", term=term, lt=part)
            if not tt.linear_vars:
                c["LL_FQ"] += 1
                lin_q = {a.term.c.arg for a in lt}
                if lin_q != set(fq(tt.term)):
                    rep.fail(check="LL_FQ", term=term, lt=lt)
        rep.stats.update(c)
    return rep


_SUBS: dict[QType, list[QType]] = {}
_SUPS: dict[QType, list[QType]] = {}


def subtypes_of(t: QType) -> list[QType]:
    if t not in _SUBS:
        found = [x for x in all_types(min(type_depth(t) + 1, 3)) if subtype(x, t)]
        _SUBS[t] = found or [t]
    return _SUBS[t]


def supertypes_of(t: QType) -> list[QType]:
    if t not in _SUPS:
        found = [x for x in all_types(min(type_depth(t), 3)) if subtype(t, x)]
        _SUPS[t] = found or [t]
    return _SUPS[t]


def _pick(rng: random.Random, xs: list, orig):
    """Prefer an element other than ``orig`` when there is one."""
    proper = [x for x in xs if x != orig]
    if proper and (orig not in xs or rng.random() < 0.7):
        return rng.choice(proper)
    return orig if orig in xs else rng.choice(xs)


def specialise_context(rng: random.Random, it, lt):
    """A more specific context pair: every type replaced by a random subtype."""
    il2, ll2 = [a for a in it if isinstance(a, IsQexp)], []
    for a in it:
        if isinstance(a, Typeof):
            subs = [s for s in subtypes_of(a.type) if isinstance(s, Bang)]
            il2.append(Typeof(a.term, _pick(rng, subs, a.type)))
    for a in lt:
        subs = subtypes_of(a.type)
        banged = [s for s in subs if isinstance(s, Bang)]
        if banged and rng.random() < 0.3:
            il2.append(Typeof(a.term, rng.choice(banged)))
        else:
            ll2.append(Typeof(a.term, _pick(rng, [s for s in subs if validT(Bang(s))], a.type)))
    return tuple(il2), tuple(ll2)


def run_context_subtyping_suite(cfg: Optional[SuiteConfig] = None,
                                cases: Optional[int] = None) -> Report:
    """Typing survives more specific contexts and a more general result type."""
    cfg = cfg or SuiteConfig(cases=200)
    n = cases if cases is not None else cfg.cases
    rep = Report("context-subtyping", cfg.seed)
    rng = random.Random(cfg.seed)
    gen = TermGenerator(GenConfig(seed=cfg.seed + 4, size=cfg.size, depth=cfg.depth))
    db, d = gen.db, cfg.depth
    c = Counter()
    with _Timer(rep):
        while rep.cases < n:
            tt = gen.typed_term(free_vars=rng.randint(0, 3))
            rep.cases += 1
            it, lt = tt.icx, tt.lcx
            term = print_term(tt.term)
            if subtypecontext_check(it, lt, it, lt) is None:
                rep.fail(check="reflexive", term=term, it=it, lt=lt)
                continue
            il2, ll2 = specialise_context(rng, it, lt)
            rel = subtypecontext_check(il2, ll2, it, lt)
            if rel is None:
                rep.fail(check="witness", term=term, il2=il2, ll2=ll2, it=it, lt=lt)
                continue
            b = _pick(rng, supertypes_of(tt.type), tt.type)
            c["subtypecontext_subtyping"] += 1
            if not _has_type(db, d, il2, ll2, tt.term, b):
                rep.fail(check="subtypecontext_subtyping", term=term, il2=il2, ll2=ll2,
                         type=b, original=tt.type)
            # split the witness along a random split of the general linear context
            ll1 = [a for a in lt if rng.random() < 0.5]
            rest = list(lt)
            for a in ll1:
                rest.remove(a)
            c["subcnxt_split"] += 1
            if not _split_ok(rel, ll1, rest, ll2):
                rep.fail(check="subcnxt_split", term=term, rel=rel.constructors, ll1=ll1, ll2=rest)
        rep.stats.update(c)
    return rep


def _split_ok(rel, ll1, ll2, specific_ll) -> bool:
    try:
        il1, il2, l1s, l2s, r1, r2 = split_subtypectx(rel, ll1, ll2)
    except ValueError:
        return False
    if Counter(l1s) + Counter(l2s) != Counter(specific_ll):
        return False
    for r, il, lls, ll in ((r1, il1, l1s, ll1), (r2, il2, l2s, ll2)):
        a, b, ci, dl = witness_contexts(r)
        if Counter(b) != Counter(lls) or Counter(dl) != Counter(ll) or Counter(ci) != Counter(il):
            return False
        if subtypecontext_check(a, b, ci, dl) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# registry

def _cases(cfg: SuiteConfig, default: int) -> int:
    return cfg.cases if cfg.cases else default


SUITES: dict[str, Callable[[SuiteConfig], Report]] = {
    "subtyping-oracle": lambda cfg: run_subtyping_oracle_suite(depth=min(cfg.type_depth, 3),
                                                               seed=cfg.seed),
    "subtyping-theorems": lambda cfg: run_subtyping_theorem_suite(
        seed=cfg.seed, n=_cases(cfg, 1000), depth=min(cfg.type_depth, 3)),
    "sl-metatheory": lambda cfg: run_sl_metatheory_suite(seed=cfg.seed, cases=_cases(cfg, 200)),
    "split-strategy": lambda cfg: run_strategy_equivalence_suite(seed=cfg.seed,
                                                                 cases=_cases(cfg, 200)),
    "subject-reduction": lambda cfg: run_subject_reduction_suite(cfg, _cases(cfg, 500)),
    "evaluator-agreement": lambda cfg: run_evaluator_agreement_suite(cfg, _cases(cfg, 200)),
    "inversion": lambda cfg: run_inversion_suite(cfg, _cases(cfg, 300)),
    "adequacy": lambda cfg: run_adequacy_suite(cfg, _cases(cfg, 300)),
    "context-subtyping": lambda cfg: run_context_subtyping_suite(cfg, _cases(cfg, 200)),
}


def run_suite(name: str, cfg: Optional[SuiteConfig] = None) -> Report:
    """Run a suite by name; ``cfg.cases == 0`` selects the suite's default size."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cfg or SuiteConfig(cases=0))
