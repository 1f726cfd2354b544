"""The Proto-Quipper program: well-formedness, typing and reduction clauses.

Each clause is a head pattern plus side conditions plus two subgoal lists
(proved intuitionistically and linearly).  Schematic type variables that do
not occur in the head (the argument type of an application, the component
types of a pair elimination, the subtype in the two subsumption clauses and
the circuit interface types of the constants) are drawn from a finite
candidate set; see :func:`synth` and :func:`_axc_candidates`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .circuits import CircuitError, CircuitStore, bind_match, spec, valid_closure
from .logic import (
    All, And, Atom, AtomG, Clause, ClauseView, Conj, Formula, Imp, IsQexp, LImp, Reduct,
    Typeof,
)
from .qtypes import (
    Arrow, Bang, Circ, QType, Tensor, bool_, const_type, has_bang, one, qubit, subtrees,
    subtype, valid, validT,
)
from .syntax import (
    BoundVar, Con, FreeVar, Term, dest_app, dest_circ, dest_fun, dest_if, dest_let,
    dest_prod, dest_slet, fq, instantiate, instantiate2, is_value, mk_app, mk_circ, mk_if,
    mk_let, mk_prod, mk_slet, newqvar, quantum_data, qvar, rename_qvars, star,
)

__all__ = [
    "ClauseDb", "clause_db", "toimp", "toimpexp", "synth", "head_key",
    "reduct_candidates", "subtypecontext_check", "ctxr_check", "split_subtypectx",
    "SubtypeCtxRel", "CtxR", "docs_table", "witness_contexts", "bang_of", "REDUCTION_RULES",
]


def toimp(qs: Sequence[int], g: Formula) -> Formula:
    for q in reversed(list(qs)):
        g = Imp(IsQexp(qvar(q)), LImp(Typeof(qvar(q), qubit), g))
    return g


def toimpexp(qs: Sequence[int], g: Formula) -> Formula:
    for q in reversed(list(qs)):
        g = Imp(IsQexp(qvar(q)), g)
    return g


def bang_of(t: QType) -> QType:
    """``!t`` with the idempotence !!A = !A built in."""
    return t if has_bang(t) else Bang(t)


def head_key(t: Term) -> str:
    if isinstance(t, Con):
        return "const:" + t.c.kind
    if isinstance(t, (FreeVar, BoundVar)):
        return "var"
    for name, dest in (("fun", dest_fun), ("let", dest_let), ("circ", dest_circ),
                       ("if", dest_if), ("app", dest_app), ("prod", dest_prod),
                       ("slet", dest_slet)):
        if dest(t) is not None:
            return name
    return "other"


def _is_var(t: Term) -> bool:
    return isinstance(t, FreeVar) or (isinstance(t, Con) and t.c.kind == "Qvar")


def _qd_type(t: Term) -> Optional[QType]:
    if isinstance(t, Con) and t.c.kind == "Qvar":
        return qubit
    if t == star:
        return one
    p = dest_prod(t)
    if p is None:
        return None
    a, b = _qd_type(p[0]), _qd_type(p[1])
    return None if a is None or b is None else Tensor(a, b)


# ---------------------------------------------------------------------------
# candidate types

_CAP = 16


def _uniq(xs: Iterable[QType]) -> list[QType]:
    out = list(dict.fromkeys(x for x in xs if validT(x)))
    return out[:_CAP]


def _env_of(view: ClauseView) -> dict[Term, list[QType]]:
    env: dict[Term, list[QType]] = {}
    for a in view.icx + view.lcx:
        if isinstance(a, Typeof):
            env.setdefault(a.term, []).append(a.type)
    return env


_local = [0]


def _local_var() -> Term:
    # negative indices never collide with session or placeholder variables
    _local[0] -= 1
    return FreeVar(_local[0])


def synth(t: Term, env: dict[Term, list[QType]], fuel: int = 8) -> list[QType]:
    """Plausible types for ``t``: a heuristic, never relied on for soundness.

    Used only to propose instantiations of schematic types; every proposal is
    then checked by proof search.
    """
    if fuel <= 0:
        return []
    f = fuel - 1
    if t in env:
        return _uniq(env[t])
    if isinstance(t, Con):
        k = t.c.kind
        if k == "Qvar":
            return [qubit]
        if k in ("TRUE", "FALSE"):
            return [bool_, Bang(bool_)]
        if k == "STAR":
            return [one, Bang(one)]
        return []
    c = dest_circ(t)
    if c is not None:
        tt, ut = _qd_type(c[0]), _qd_type(c[2])
        if tt is None or ut is None:
            return []
        return [Circ(tt, ut), Bang(Circ(tt, ut))]
    p = dest_prod(t)
    if p is not None:
        out = []
        for a in synth(p[0], env, f):
            for b in synth(p[1], env, f):
                out.append(Tensor(a, b))
                if has_bang(a) and has_bang(b):
                    out.append(Bang(Tensor(a.inner, b.inner)))  # type: ignore[attr-defined]
        return _uniq(out)
    i = dest_if(t)
    if i is not None:
        return _uniq(synth(i[1], env, f) + synth(i[2], env, f))
    s = dest_slet(t)
    if s is not None:
        return synth(s[0], env, f)
    lt = dest_let(t)
    if lt is not None:
        body, e = lt
        out = []
        for sc in synth(e, env, f):
            comps = _let_components(sc)
            if comps is None:
                continue
            x, y = _local_var(), _local_var()
            env2 = dict(env)
            env2[x], env2[y] = [comps[0]], [comps[1]]
            out.extend(synth(instantiate2(body, x, y), env2, f))
        return _uniq(out)
    a = dest_app(t)
    if a is not None:
        return _uniq(_synth_app(a[0], a[1], env, f))
    return []


def _let_components(sc: QType) -> Optional[tuple[QType, QType]]:
    if isinstance(sc, Tensor):
        return sc.left, sc.right
    if isinstance(sc, Bang) and isinstance(sc.inner, Tensor):
        return bang_of(sc.inner.left), bang_of(sc.inner.right)
    return None


def _synth_fun(body: Term, arg: QType, env, fuel) -> list[QType]:
    x = _local_var()
    env2 = dict(env)
    env2[x] = [arg]
    return synth(instantiate(body, x), env2, fuel)


def _synth_app(e1: Term, e2: Term, env, fuel) -> list[QType]:
    out: list[QType] = []
    if isinstance(e1, Con):
        k = e1.c.kind
        if k == "BOX":
            t0 = e1.c.arg
            fb = dest_fun(e2)
            results = _synth_fun(fb, t0, env, fuel) if fb is not None else [
                f.inner.right if isinstance(f, Bang) else f.right  # type: ignore[attr-defined]
                for f in synth(e2, env, fuel)
                if isinstance(f.inner if isinstance(f, Bang) else f, Arrow)]  # type: ignore[attr-defined]
            out.extend(Bang(Circ(t0, u)) for u in results if valid(u))
            return out
        if k in ("UNBOX", "REV"):
            for ct in synth(e2, env, fuel):
                inner = ct.inner if isinstance(ct, Bang) else ct
                if isinstance(inner, Circ):
                    if k == "UNBOX":
                        out.append(Bang(Arrow(inner.left, inner.right)))
                    else:
                        out.append(Bang(Circ(inner.right, inner.left)))
            return out
    fb = dest_fun(e1)
    if fb is not None:
        for a in synth(e2, env, fuel):
            out.extend(_synth_fun(fb, a, env, fuel))
        return out
    for ft in synth(e1, env, fuel):
        inner = ft.inner if isinstance(ft, Bang) else ft
        if isinstance(inner, Arrow):
            out.append(inner.right)
    return out


def _arg_candidates(e1: Term, e2: Term, goal: QType, env) -> list[QType]:
    """Candidates for the hidden argument type of ``App e1 e2`` at ``goal``."""
    out: list[QType] = list(synth(e2, env))
    for ft in synth(e1, env):
        inner = ft.inner if isinstance(ft, Bang) else ft
        if isinstance(inner, Arrow):
            out.append(inner.left)
    if isinstance(e1, Con):
        k = e1.c.kind
        g = goal.inner if isinstance(goal, Bang) else goal
        if k == "BOX" and isinstance(g, Circ):
            out.append(Bang(Arrow(e1.c.arg, g.right)))  # type: ignore[arg-type]
        elif k == "UNBOX" and isinstance(g, Arrow):
            out.append(Circ(g.left, g.right))
        elif k == "REV" and isinstance(g, Circ):
            out.append(Circ(g.right, g.left))
    return _uniq(out)


def _axc_candidates(x: Term, view: ClauseView) -> list[QType]:
    out = [a.type for a in view.icx + view.lcx if isinstance(a, Typeof) and a.term == x]
    if isinstance(x, Con) and x.c.kind == "Qvar":
        out.append(qubit)
    return list(dict.fromkeys(out))


def _interface_pairs(b: QType) -> list[tuple[QType, QType]]:
    """Quantum-data type pairs suggested by the circuit and arrow types inside ``b``."""
    out = []
    for s in subtrees(b):
        if isinstance(s, (Circ, Arrow)) and valid(s.left) and valid(s.right):
            out.append((s.left, s.right))
            out.append((s.right, s.left))
    return list(dict.fromkeys(out))


# ---------------------------------------------------------------------------
# the database

def _g(a: Atom) -> Formula:
    return AtomG(a)


def _tq(t: Term) -> Formula:
    return AtomG(IsQexp(t))


X0, X1 = BoundVar(0), BoundVar(1)

REDUCTION_RULES = (
    "ifr", "truer", "falser", "circr", "boxr", "unboxr", "revr", "betar",
    "appl", "appr", "prodl", "prodr", "letr", "letc", "sletr", "sletc",
)


class ClauseDb:
    """The clause set, bound to the circuit store that interprets circuit ids."""

    def __init__(self, store: Optional[CircuitStore] = None) -> None:
        self.store = store if store is not None else CircuitStore()
        self.clauses: list[Clause] = []
        self._wf: dict[str, list[Clause]] = {}
        self._ty: dict[str, list[Clause]] = {}
        self._ty_any: list[Clause] = []
        self._red: dict[str, list[Clause]] = {}
        self._build()
        self._by_name = {c.name: c for c in self.clauses}

    # -- protocol used by the prover ------------------------------------------
    def clauses_for(self, atom: Atom) -> Sequence[Clause]:
        if isinstance(atom, IsQexp):
            return self._wf.get(head_key(atom.term), ())
        if isinstance(atom, Typeof):
            return self._ty.get(head_key(atom.term), []) + self._ty_any
        if isinstance(atom, Reduct):
            return self._red.get(head_key(atom.a), ())
        return ()

    def by_name(self, name: str) -> Clause:
        return self._by_name[name]

    def names(self, kind: Optional[str] = None) -> list[str]:
        return [c.name for c in self.clauses if kind is None or c.kind == kind]

    # -- helpers ---------------------------------------------------------------
    def _add(self, index: Optional[dict], keys: Iterable[str], name: str, kind: str, rule: str,
             fn, reconstructed: bool = False, note: str = "") -> None:
        c = Clause(name, kind, rule, fn, reconstructed, note)
        self.clauses.append(c)
        if index is None:
            self._ty_any.append(c)
        else:
            for k in keys:
                index.setdefault(k, []).append(c)

    def _valid_c(self, cid: int, a: Term) -> bool:
        if cid not in self.store:
            return False
        return valid_closure(self.store[cid], a, bound_nodup=False)

    def _build(self) -> None:
        self._build_wf()
        self._build_typing()
        self._build_reduct()

    # -- well-formedness ---------------------------------------------------------
    def _build_wf(self) -> None:
        W = self._wf

        def const(kind: str, check=lambda c: True):
            def fn(atom, view):
                if isinstance(atom.term, Con) and atom.term.c.kind == kind and check(atom.term.c):
                    yield [], []
            return fn

        self._add(W, ["const:STAR"], "starq", "wf", "wf-star", const("STAR"))
        self._add(W, ["const:TRUE"], "trueq", "wf", "wf-true", const("TRUE"))
        self._add(W, ["const:FALSE"], "falseq", "wf", "wf-false", const("FALSE"))
        self._add(W, ["const:BOX"], "boxq", "wf", "wf-box", const("BOX", lambda c: valid(c.arg)))
        self._add(W, ["const:UNBOX"], "unboxq", "wf", "wf-unbox", const("UNBOX"))
        self._add(W, ["const:REV"], "revq", "wf", "wf-rev", const("REV"))
        self._add(W, ["const:Qvar"], "qvarq", "wf", "wf-qvar", const("Qvar"),
                  note="quantum variables are well formed without assumptions")

        def binary(dest):
            def fn(atom, view):
                p = dest(atom.term)
                if p is not None:
                    yield [And(_tq(p[0]), _tq(p[1]))], []
            return fn

        self._add(W, ["app"], "apq", "wf", "wf-app", binary(dest_app))
        self._add(W, ["prod"], "prodq", "wf", "wf-prod", binary(dest_prod))
        self._add(W, ["slet"], "sletq", "wf", "wf-slet", binary(dest_slet))

        def ifq(atom, view):
            p = dest_if(atom.term)
            if p is not None:
                yield [And(_tq(p[0]), And(_tq(p[1]), _tq(p[2])))], []

        self._add(W, ["if"], "ifq", "wf", "wf-if", ifq)

        def lambdaq(atom, view):
            body = dest_fun(atom.term)
            if body is not None:
                yield [All(Imp(IsQexp(X0), _tq(body)))], []

        self._add(W, ["fun"], "lambdaq", "wf", "wf-lambda", lambdaq)

        def letq(atom, view):
            p = dest_let(atom.term)
            if p is not None:
                body, e = p
                yield [_let_wf(body), _tq(e)], []

        self._add(W, ["let"], "letq", "wf", "wf-let", letq)

        def circq(atom, view):
            p = dest_circ(atom.term)
            if p is not None and quantum_data(p[0]):
                yield [toimpexp(fq(p[2]), _tq(p[2]))], []

        self._add(W, ["circ"], "Circq", "wf", "wf-circ", circq)

    # -- typing -------------------------------------------------------------------
    def _build_typing(self) -> None:
        T = self._ty

        def axc1(atom, view):
            x, b = atom.term, atom.type
            for a in _axc_candidates(x, view):
                if a != b and validT(Bang(a)) and subtype(a, b):
                    yield [_tq(x)], [_g(Typeof(x, a))]

        def axc2(atom, view):
            x, b = atom.term, atom.type
            for t in _axc_candidates(x, view):
                if not isinstance(t, Bang):
                    continue
                a = t.inner
                if Bang(a) != b and subtype(Bang(a), b):
                    yield [And(_g(Typeof(x, Bang(a))), _tq(x))], []

        def axiom(kind: str, ty: QType):
            def fn(atom, view):
                if isinstance(atom.term, Con) and atom.term.c.kind == kind and atom.type == ty:
                    yield [], []
            return fn

        for kind, base, stem, rule in (("TRUE", bool_, "true", "true"),
                                       ("FALSE", bool_, "false", "false"),
                                       ("STAR", one, "star", "*_i")):
            self._add(T, [f"const:{kind}"], f"{stem}l", "typing", f"{rule} (n=0)", axiom(kind, base))
            self._add(T, [f"const:{kind}"], f"{stem}i", "typing", f"{rule} (n=1)",
                      axiom(kind, Bang(base)))

        def cst(kind: str):
            def fn(atom, view):
                c = atom.term
                if not (isinstance(c, Con) and c.c.kind == kind.upper()):
                    return
                b = atom.type
                pairs = _interface_pairs(b)
                if kind == "box":
                    t0 = c.c.arg
                    pairs = [(t0, u) for tt, u in pairs if tt == t0]
                for t, u in pairs:
                    if valid(t) and valid(u) and subtype(Bang(const_type(kind, t, u)), b):
                        yield [], []
                        return
            return fn

        self._add(T, ["const:BOX"], "box", "typing", "cst (box)", cst("box"))
        self._add(T, ["const:UNBOX"], "unbox", "typing", "cst (unbox)", cst("unbox"))
        self._add(T, ["const:REV"], "rev", "typing", "cst (rev)", cst("rev"))

        def lam(bang_arg: bool, bang_fun: bool):
            def fn(atom, view):
                body = dest_fun(atom.term)
                if body is None:
                    return
                ty = atom.type
                if bang_fun:
                    if not isinstance(ty, Bang):
                        return
                    ty = ty.inner
                if not isinstance(ty, Arrow):
                    return
                t1, t2 = ty.left, ty.right
                if bang_arg:
                    if not isinstance(t1, Bang):
                        return
                    t1 = t1.inner
                if not (validT(Bang(t1)) and validT(t2)):
                    return
                if bang_arg:
                    hyp = Imp(Typeof(X0, Bang(t1)), _g(Typeof(body, t2)))
                else:
                    hyp = LImp(Typeof(X0, t1), _g(Typeof(body, t2)))
                goal = All(Imp(IsQexp(X0), hyp))
                yield ([goal], []) if bang_fun else ([], [goal])
            return fn

        self._add(T, ["fun"], "lambda1l", "typing", "lambda_1 (linear argument)", lam(False, False))
        self._add(T, ["fun"], "lambda1i", "typing", "lambda_1 (duplicable argument)", lam(True, False))
        self._add(T, ["fun"], "lambda2l", "typing", "lambda_2 (linear argument)", lam(False, True))
        self._add(T, ["fun"], "lambda2i", "typing", "lambda_2 (duplicable argument)", lam(True, True))

        def tap(atom, view):
            p = dest_app(atom.term)
            if p is None:
                return
            e1, e2 = p
            t = atom.type
            for targ in _arg_candidates(e1, e2, t, _env_of(view)):
                if validT(Arrow(targ, t)):
                    yield [], [Conj(_g(Typeof(e1, Arrow(targ, t))), _g(Typeof(e2, targ)))]

        self._add(T, ["app"], "tap", "typing", "app", tap)

        def ttensor(bang: bool):
            def fn(atom, view):
                p = dest_prod(atom.term)
                if p is None:
                    return
                ty = atom.type
                if bang:
                    if not (isinstance(ty, Bang) and isinstance(ty.inner, Tensor)):
                        return
                    t, u = ty.inner.left, ty.inner.right
                    if validT(Bang(t)) and validT(Bang(u)):
                        yield [], [Conj(_g(Typeof(p[0], Bang(t))), _g(Typeof(p[1], Bang(u))))]
                elif isinstance(ty, Tensor) and validT(ty):
                    yield [], [Conj(_g(Typeof(p[0], ty.left)), _g(Typeof(p[1], ty.right)))]
            return fn

        self._add(T, ["prod"], "ttensorl", "typing", "tensor_i (n=0)", ttensor(False))
        self._add(T, ["prod"], "ttensori", "typing", "tensor_i (n=1)", ttensor(True))

        def tlet(bang: bool):
            def fn(atom, view):
                p = dest_let(atom.term)
                if p is None:
                    return
                body, e = p
                a = atom.type
                if not validT(a):
                    return
                for sc in synth(e, _env_of(view)):
                    if bang != isinstance(sc, Bang):
                        continue
                    comps = _let_components(sc)
                    if comps is None:
                        continue
                    inner = _g(Typeof(body, a))
                    for var, ty in ((X0, comps[1]), (X1, comps[0])):
                        inner = (Imp if has_bang(ty) else LImp)(Typeof(var, ty), inner)
                    goal = All(All(Imp(IsQexp(X1), Imp(IsQexp(X0), inner))))
                    yield [], [Conj(_g(Typeof(e, sc)), goal)]
            return fn

        self._add(T, ["let"], "tletl", "typing", "tensor_e (n=0)", tlet(False), reconstructed=True)
        self._add(T, ["let"], "tleti", "typing", "tensor_e (n=1)", tlet(True), reconstructed=True)

        def tslet(unit: QType):
            def fn(atom, view):
                p = dest_slet(atom.term)
                if p is not None and validT(atom.type):
                    yield [], [Conj(_g(Typeof(p[0], atom.type)), _g(Typeof(p[1], unit)))]
            return fn

        self._add(T, ["slet"], "tsletl", "typing", "*_e (n=0)", tslet(one), reconstructed=True)
        self._add(T, ["slet"], "tsleti", "typing", "*_e (n=1)", tslet(Bang(one)), reconstructed=True)

        def tif(atom, view):
            p = dest_if(atom.term)
            if p is not None and validT(atom.type):
                a = atom.type
                yield [], [Conj(_g(Typeof(p[0], bool_)),
                                And(_g(Typeof(p[1], a)), _g(Typeof(p[2], a))))]

        self._add(T, ["if"], "tif", "typing", "if", tif, reconstructed=True)

        def tcirc(bang: bool):
            def fn(atom, view):
                p = dest_circ(atom.term)
                if p is None:
                    return
                t, cid, a = p
                ty = atom.type
                if bang:
                    if not isinstance(ty, Bang):
                        return
                    ty = ty.inner
                if not (isinstance(ty, Circ) and validT(ty) and quantum_data(t)):
                    return
                if cid not in self.store:
                    return
                if set(self.store.circ_in(cid)) != set(fq(t)):
                    return
                if set(self.store.circ_out(cid)) != set(fq(a)):
                    return
                yield [And(toimp(fq(a), _g(Typeof(a, ty.right))),
                           toimp(fq(t), _g(Typeof(t, ty.left))))], []
            return fn

        self._add(T, ["circ"], "tCricl", "typing", "circ (n=0)", tcirc(False))
        self._add(T, ["circ"], "tCrici", "typing", "circ (n=1)", tcirc(True))

        self._add(None, [], "axc1", "typing", "ax_c (linear)", axc1)
        self._add(None, [], "axc2", "typing", "ax_c (duplicable)", axc2)

    # -- reduction ------------------------------------------------------------------
    def _build_reduct(self) -> None:
        R = self._red
        store = self.store
        vc = self._valid_c

        def both_valid(atom) -> bool:
            return vc(atom.c, atom.a) and vc(atom.c2, atom.a2)

        def ifr(atom, view):
            p, q = dest_if(atom.a), dest_if(atom.a2)
            if p and q and p[1:] == q[1:] and not is_value(p[0]) and both_valid(atom):
                yield [_g(Reduct(atom.c, p[0], atom.c2, q[0])), _tq(p[1]), _tq(p[2])], []

        def branch(const: Term, pick: int):
            def fn(atom, view):
                p = dest_if(atom.a)
                if (p and p[0] == const and atom.c2 == atom.c and atom.a2 == p[pick]
                        and both_valid(atom)):
                    yield [_tq(p[1]), _tq(p[2])], []
            return fn

        self._add(R, ["if"], "ifr", "reduct", "cond", ifr)
        self._add(R, ["if"], "truer", "reduct", "ifT", branch(Con(_const("TRUE")), 1))
        self._add(R, ["if"], "falser", "reduct", "ifF", branch(Con(_const("FALSE")), 2))

        def circr(atom, view):
            p, q = dest_circ(atom.a), dest_circ(atom.a2)
            if (p and q and p[0] == q[0] and atom.c == atom.c2 and not is_value(p[2])
                    and both_valid(atom)):
                yield [_g(Reduct(p[1], p[2], q[1], q[2]))], []

        self._add(R, ["circ"], "circr", "reduct", "circ", circr)

        def boxr(atom, view):
            p = dest_app(atom.a)
            if p is None or atom.c != atom.c2:
                return
            f, v = p
            if not (isinstance(f, Con) and f.c.kind == "BOX" and valid(f.c.arg) and is_value(v)):
                return
            if not both_valid(atom):
                return
            if atom.a2 == box_result(store, f.c.arg, v):
                yield [_tq(v)], []

        def unboxr(atom, view):
            out = unbox_result(store, atom.c, atom.a)
            if out is None or not both_valid(atom):
                return
            c2, res, v = out
            if (atom.c2, atom.a2) == (c2, res):
                yield [_tq(v), _tq(res)], []

        def revr(atom, view):
            out = rev_result(store, atom.a)
            if out is not None and atom.c == atom.c2 and atom.a2 == out and both_valid(atom):
                yield [], []

        def betar(atom, view):
            p = dest_app(atom.a)
            if p is None or atom.c != atom.c2:
                return
            body = dest_fun(p[0])
            if body is not None and is_value(p[1]) and atom.a2 == instantiate(body, p[1]):
                if both_valid(atom):
                    yield [_tq(p[0]), _tq(p[1])], []

        def cong(dest, mk, pos: int, others_values: bool):
            # congruence in argument ``pos`` of a binary form
            def fn(atom, view):
                p, q = dest(atom.a), dest(atom.a2)
                if not (p and q):
                    return
                other = 1 - pos
                if p[other] != q[other] or is_value(p[pos]):
                    return
                if others_values and pos == 1 and not is_value(p[0]):
                    return
                if both_valid(atom):
                    yield [_g(Reduct(atom.c, p[pos], atom.c2, q[pos])), _tq(p[other])], []
            return fn

        self._add(R, ["app"], "boxr", "reduct", "box", boxr)
        self._add(R, ["app"], "unboxr", "reduct", "unbox", unboxr)
        self._add(R, ["app"], "revr", "reduct", "rev", revr, reconstructed=True)
        self._add(R, ["app"], "betar", "reduct", "beta", betar, reconstructed=True)
        self._add(R, ["app"], "appl", "reduct", "app (function position)",
                  cong(dest_app, mk_app, 0, True), reconstructed=True)
        self._add(R, ["app"], "appr", "reduct", "app (argument position)",
                  cong(dest_app, mk_app, 1, True), reconstructed=True)
        self._add(R, ["prod"], "prodl", "reduct", "pair (left)",
                  cong(dest_prod, mk_prod, 0, True), reconstructed=True)
        self._add(R, ["prod"], "prodr", "reduct", "pair (right)",
                  cong(dest_prod, mk_prod, 1, True), reconstructed=True)

        def letr(atom, view):
            p = dest_let(atom.a)
            if p is None or atom.c != atom.c2:
                return
            body, e = p
            pr = dest_prod(e)
            if pr is None or not is_value(e):
                return
            if atom.a2 == instantiate2(body, pr[0], pr[1]) and both_valid(atom):
                yield [_let_wf(body), _tq(pr[0]), _tq(pr[1])], []

        def letc(atom, view):
            p, q = dest_let(atom.a), dest_let(atom.a2)
            if p and q and p[0] == q[0] and not is_value(p[1]) and both_valid(atom):
                yield [_g(Reduct(atom.c, p[1], atom.c2, q[1])), _let_wf(p[0])], []

        def sletr(atom, view):
            p = dest_slet(atom.a)
            if p and p[1] == star and atom.c == atom.c2 and atom.a2 == p[0] and both_valid(atom):
                yield [_tq(p[0])], []

        def sletc(atom, view):
            p, q = dest_slet(atom.a), dest_slet(atom.a2)
            if p and q and p[0] == q[0] and not is_value(p[1]) and both_valid(atom):
                yield [_g(Reduct(atom.c, p[1], atom.c2, q[1])), _tq(p[0])], []

        self._add(R, ["let"], "letr", "reduct", "let (pair)", letr, reconstructed=True)
        self._add(R, ["let"], "letc", "reduct", "let (scrutinee)", letc, reconstructed=True)
        self._add(R, ["slet"], "sletr", "reduct", "let * (unit)", sletr, reconstructed=True)
        self._add(R, ["slet"], "sletc", "reduct", "let * (scrutinee)", sletc, reconstructed=True)


def _const(kind: str):
    from .syntax import Const
    return Const(kind)


def _let_wf(body: Term) -> Formula:
    return All(All(Imp(IsQexp(X1), Imp(IsQexp(X0), _tq(body)))))


# ---------------------------------------------------------------------------
# the circuit-building steps, shared by clauses, the evaluator and the proposer

def box_result(store: CircuitStore, t: QType, v: Term) -> Term:
    s = spec(newqvar(v), t)
    d = store.new(fq(s))
    return mk_circ(s, d.id, mk_app(v, s))


def unbox_result(store: CircuitStore, cid: int, a: Term) -> Optional[tuple[int, Term, Term]]:
    """``(C', b'(u'), v)`` for ``[C, (unbox (u,D,u')) v]``, or None if not such a redex."""
    p = dest_app(a)
    if p is None:
        return None
    f, v = p
    q = dest_app(f)
    if q is None or q[0] != Con(_const("UNBOX")):
        return None
    c = dest_circ(q[1])
    if c is None:
        return None
    u, did, u2 = c
    if not (quantum_data(u) and quantum_data(u2) and quantum_data(v)):
        return None
    if cid not in store or did not in store:
        return None
    b = bind_match(u, v)
    if b is None:
        return None
    try:
        comp, ren = store.append(store[cid], store[did], b.inverse())
    except CircuitError:
        return None
    return comp.id, rename_qvars(u2, ren.as_dict()), v


def rev_result(store: CircuitStore, a: Term) -> Optional[Term]:
    p = dest_app(a)
    if p is None or p[0] != Con(_const("REV")):
        return None
    c = dest_circ(p[1])
    if c is None or not is_value(p[1]) or c[1] not in store:
        return None
    t, did, body = c
    return mk_circ(body, store.reverse(store[did]).id, t)


def reduct_candidates(store: CircuitStore, cid: int, a: Term) -> Iterator[tuple[int, Term]]:
    """Propose outputs ``(C', a')`` for ``reduct C a C' a'`` goals.

    This over-approximates: candidates at every position are offered and
    the reduction clauses decide which, if any, are derivable.
    """
    i = dest_if(a)
    if i is not None:
        b, x, y = i
        yield cid, x
        yield cid, y
        for c2, b2 in reduct_candidates(store, cid, b):
            yield c2, mk_if(b2, x, y)
        return
    c = dest_circ(a)
    if c is not None:
        t, did, body = c
        if did in store:
            for d2, body2 in reduct_candidates(store, did, body):
                yield cid, mk_circ(t, d2, body2)
        return
    p = dest_app(a)
    if p is not None:
        f, v = p
        if is_value(f) and is_value(v):
            if isinstance(f, Con) and f.c.kind == "BOX" and valid(f.c.arg):
                yield cid, box_result(store, f.c.arg, v)
            r = rev_result(store, a)
            if r is not None:
                yield cid, r
            u = unbox_result(store, cid, a)
            if u is not None:
                yield u[0], u[1]
            body = dest_fun(f)
            if body is not None:
                yield cid, instantiate(body, v)
        if not is_value(f):
            for c2, f2 in reduct_candidates(store, cid, f):
                yield c2, mk_app(f2, v)
        elif not is_value(v):
            for c2, v2 in reduct_candidates(store, cid, v):
                yield c2, mk_app(f, v2)
        return
    p = dest_prod(a)
    if p is not None:
        for c2, x in reduct_candidates(store, cid, p[0]):
            yield c2, mk_prod(x, p[1])
        for c2, y in reduct_candidates(store, cid, p[1]):
            yield c2, mk_prod(p[0], y)
        return
    lt = dest_let(a)
    if lt is not None:
        body, e = lt
        pr = dest_prod(e)
        if pr is not None and is_value(e):
            yield cid, instantiate2(body, pr[0], pr[1])
        for c2, e2 in reduct_candidates(store, cid, e):
            yield c2, mk_let(body, e2)
        return
    s = dest_slet(a)
    if s is not None:
        body, e = s
        if e == star:
            yield cid, body
        for c2, e2 in reduct_candidates(store, cid, e):
            yield c2, mk_slet(body, e2)


def clause_db(store: Optional[CircuitStore] = None) -> ClauseDb:
    return ClauseDb(store)


def docs_table(db: Optional[ClauseDb] = None) -> list[dict]:
    db = db or ClauseDb()
    return [{"clause": c.name, "judgment": c.kind, "rule": c.rule,
             "reconstructed": c.reconstructed, "note": c.note} for c in db.clauses]


# ---------------------------------------------------------------------------
# context relations

@dataclass(frozen=True)
class SubtypeCtxRel:
    """Witness for the context-subtyping relation: one constructor per term."""

    steps: tuple[tuple, ...]  # (constructor, term, t1, t2)

    @property
    def constructors(self) -> list[str]:
        return [s[0] for s in self.steps]


@dataclass(frozen=True)
class CtxR:
    steps: tuple[tuple, ...]  # (constructor, term, type or None)

    @property
    def constructors(self) -> list[str]:
        return [s[0] for s in self.steps]


def _remove(xs: list, x) -> Optional[list]:
    if x not in xs:
        return None
    ys = list(xs)
    ys.remove(x)
    return ys


def subtypecontext_check(il2: Sequence[Atom], ll2: Sequence[Atom], il: Sequence[Atom],
                         ll: Sequence[Atom]) -> Optional[SubtypeCtxRel]:
    """Align ``(il2, ll2)`` (the more specific pair) with ``(il, ll)``."""
    if any(not isinstance(a, Typeof) for a in list(ll2) + list(ll)):
        return None
    res = _stc(list(il2), list(ll2), list(il), list(ll))
    return None if res is None else SubtypeCtxRel(tuple(res))


def _stc(il2, ll2, il, ll) -> Optional[list]:
    if not (il2 or ll2 or il or ll):
        return [("subcnxt_i", None, None, None)]
    q = next((a for a in il if isinstance(a, IsQexp)), None)
    if q is None:
        return None
    x = q.term
    il_r, il2_r = _remove(il, q), _remove(il2, q)
    if il2_r is None:
        return None
    # is_qexp only
    rest = _stc(il2_r, ll2, il_r, ll)
    if rest is not None:
        return [("subcnxt_q", x, None, None)] + rest
    for t2a in [a for a in il_r if isinstance(a, Typeof) and a.term == x]:
        t2 = t2a.type
        if not isinstance(t2, Bang):
            continue
        for t1a in [a for a in il2_r if isinstance(a, Typeof) and a.term == x]:
            if subtype(t1a.type, t2):
                rest = _stc(_remove(il2_r, t1a), ll2, _remove(il_r, t2a), ll)
                if rest is not None:
                    return [("subcnxt_iig", x, t1a.type, t2)] + rest
    for t2a in [a for a in ll if a.term == x]:
        t2 = t2a.type
        for t1a in [a for a in ll2 if a.term == x]:
            t1 = t1a.type
            if validT(Bang(t1)) and validT(Bang(t2)) and subtype(t1, t2):
                rest = _stc(il2_r, _remove(ll2, t1a), il_r, _remove(ll, t2a))
                if rest is not None:
                    return [("subcnxt_llg", x, t1, t2)] + rest
        for t1a in [a for a in il2_r if isinstance(a, Typeof) and a.term == x]:
            t1 = t1a.type
            if validT(Bang(t2)) and isinstance(t1, Bang) and subtype(t1, t2):
                rest = _stc(_remove(il2_r, t1a), ll2, il_r, _remove(ll, t2a))
                if rest is not None:
                    return [("subcnxt_lig", x, t1, t2)] + rest
    return None


def split_subtypectx(rel: SubtypeCtxRel, ll1: Sequence[Atom], ll2: Sequence[Atom]):
    """Split a witness along a split ``(ll1, ll2)`` of its super linear context.

    Returns ``(il1, il2, ll1', ll2', rel1, rel2)``.  Both sub-witnesses keep
    the whole specific intuitionistic context; ``il1``/``il2`` extend the
    super intuitionistic context where a duplicable hypothesis had been
    paired with a linear atom that went to the other half.
    """
    sup = [Typeof(x, t2) for c, x, t1, t2 in rel.steps if c in ("subcnxt_llg", "subcnxt_lig")]
    rem: Optional[list] = list(sup)
    for a in list(ll1) + list(ll2):
        rem = _remove(rem, a) if rem is not None else None
    if rem is None or rem:
        raise ValueError("not a split of the related linear context")
    out = []
    for side in (ll1, ll2):
        want = list(side)
        steps = []
        for s in rel.steps:
            c, x, t1, t2 = s
            if c in ("subcnxt_llg", "subcnxt_lig"):
                at = Typeof(x, t2)
                if at in want:
                    want.remove(at)
                    steps.append(s)
                elif c == "subcnxt_llg":
                    steps.append(("subcnxt_q", x, None, None))
                else:
                    steps.append(("subcnxt_iig", x, t1, t1))
            else:
                steps.append(s)
        r = SubtypeCtxRel(tuple(steps))
        out.append((_ctx_of(r, specific=False)[0], _ctx_of(r, specific=True)[1], r))
    (il1, l1s, r1), (il2, l2s, r2) = out
    return il1, il2, l1s, l2s, r1, r2


def _ctx_of(rel: SubtypeCtxRel, specific: bool) -> tuple[list[Atom], list[Atom]]:
    """The (intuitionistic, linear) pair on one side of a witness."""
    il: list[Atom] = []
    ll: list[Atom] = []
    for c, x, t1, t2 in rel.steps:
        if c == "subcnxt_i":
            continue
        il.append(IsQexp(x))
        t = t1 if specific else t2
        if c == "subcnxt_iig":
            il.append(Typeof(x, t))
        elif c == "subcnxt_llg":
            ll.append(Typeof(x, t))
        elif c == "subcnxt_lig":
            (il if specific else ll).append(Typeof(x, t))
    return il, ll


def witness_contexts(rel: SubtypeCtxRel) -> tuple[list[Atom], list[Atom], list[Atom], list[Atom]]:
    """``(il', ll', il, ll)`` as rebuilt from a witness."""
    a, b = _ctx_of(rel, True)
    c, d = _ctx_of(rel, False)
    return a, b, c, d


def ctxr_check(iq: Sequence[Atom], it: Sequence[Atom], lt: Sequence[Atom]) -> Optional[CtxR]:
    res = _ctxr(list(iq), list(it), list(lt))
    return None if res is None else CtxR(tuple(res))


def _ctxr(iq, it, lt) -> Optional[list]:
    if not (iq or it or lt):
        return [("nil_cr", None, None)]
    q = next((a for a in iq if isinstance(a, IsQexp)), None)
    if q is None:
        return None
    x = q.term
    iq_r, it_r = _remove(iq, q), _remove(it, q)
    if it_r is None:
        return None
    for a in [a for a in lt if isinstance(a, Typeof) and a.term == x]:
        rest = _ctxr(iq_r, it_r, _remove(lt, a))
        if rest is not None:
            return [("cons_l_cr", x, a.type)] + rest
    for a in [a for a in it_r if isinstance(a, Typeof) and a.term == x]:
        rest = _ctxr(iq_r, _remove(it_r, a), lt)
        if rest is not None:
            return [("cons_i_cr", x, a.type)] + rest
    rest = _ctxr(iq_r, it_r, lt)
    if rest is not None:
        return [("cons_q_cr", x, None)] + rest
    return None
