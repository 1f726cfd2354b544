"""Random generation of well-typed terms and of derivable SL sequents.

Terms are built top-down from a goal type, choosing the linear-context split
at every multiplicative rule, so that well-typedness holds by construction.
Every result is re-checked by proof search before it is handed out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .circuits import CircuitStore, spec
from .clauses import ClauseDb, _let_components, synth
from .logic import (
    All, And, Atom, AtomG, Clause, Conj, Derivation, Formula, Imp, IsQexp, LImp,
    Prover, Sequent, Top, Typeof, _map_formula,
)
from .qtypes import (
    Arrow, Bang, Circ, QType, Tensor, bool_, const_type, has_bang, one, qubit, subtype,
    valid, validT,
)
from .syntax import (
    Con, FreeVar, Term, abstract, box, dest_app, dest_circ, dest_fun, dest_if, dest_let,
    dest_prod, dest_slet, false, fq, mk_app, mk_circ, mk_fun, mk_if, mk_let, mk_prod, mk_slet,
    qvar, rev, star, true, unbox, _abstract2,
)

__all__ = [
    "GenConfig", "TypedTerm", "TermGenerator", "term_size", "typing_contexts", "PropDb",
    "SeqCase", "SequentGenerator", "random_type", "gen_typed_term",
]


@dataclass
class GenConfig:
    seed: int = 0
    size: int = 12
    type_depth: int = 2
    depth: int = 64
    cases: int = 100
    max_qubits: int = 2
    free_vars: int = 0       # number of free term variables in the typing context
    retries: int = 400
    max_steps: int = 30


@dataclass
class TypedTerm:
    term: Term
    type: QType
    icx: tuple[Atom, ...]
    lcx: tuple[Atom, ...]
    derivation: Derivation
    qubits: tuple[int, ...] = ()
    linear_vars: tuple[tuple[Term, QType], ...] = ()
    intu_vars: tuple[tuple[Term, QType], ...] = ()


def term_size(t: Term) -> int:
    """Number of object-language nodes (variables, constants and forms)."""
    if isinstance(t, Con):
        return 1
    if not hasattr(t, "left") and not hasattr(t, "body"):
        return 1
    b = dest_fun(t)
    if b is not None:
        return 1 + term_size(b)
    lt = dest_let(t)
    if lt is not None:
        return 1 + term_size(lt[0]) + term_size(lt[1])
    c = dest_circ(t)
    if c is not None:
        return 1 + term_size(c[0]) + term_size(c[2])
    for dest in (dest_if, dest_app, dest_prod, dest_slet):
        p = dest(t)
        if p is not None:
            return 1 + sum(term_size(x) for x in p)
    return 1


def typing_contexts(lin: Sequence[tuple[Term, QType]], intu: Sequence[tuple[Term, QType]],
                    qubits: Sequence[int]) -> tuple[tuple[Atom, ...], tuple[Atom, ...]]:
    """The SL contexts encoding a typing context: is_qexp for every variable."""
    icx: list[Atom] = [IsQexp(x) for x, _ in lin] + [IsQexp(x) for x, _ in intu]
    icx += [Typeof(x, t) for x, t in intu]
    icx += [IsQexp(qvar(q)) for q in qubits]
    lcx: list[Atom] = [Typeof(x, t) for x, t in lin] + [Typeof(qvar(q), qubit) for q in qubits]
    return tuple(icx), tuple(lcx)


_SMALL = [qubit, bool_, one, Bang(bool_), Bang(one), Tensor(qubit, qubit), Tensor(bool_, qubit),
          Arrow(qubit, qubit), Bang(Arrow(qubit, qubit)), Circ(qubit, qubit),
          Bang(Circ(qubit, qubit)), Tensor(qubit, one), Arrow(bool_, bool_)]


def random_type(rng: random.Random, depth: int, bangs: bool = True) -> QType:
    """A random validT type of height at most ``depth``."""
    while True:
        t = _rt(rng, depth)
        if validT(t) and (bangs or not has_bang(t)):
            return t


def _rt(rng: random.Random, depth: int) -> QType:
    if depth <= 1 or rng.random() < 0.3:
        return rng.choice([qubit, one, bool_])
    k = rng.random()
    if k < 0.2:
        inner = _rt(rng, depth - 1)
        return Bang(inner) if not has_bang(inner) else inner
    if k < 0.5:
        return Tensor(_rt(rng, depth - 1), _rt(rng, depth - 1))
    if k < 0.8:
        return Arrow(_rt(rng, depth - 1), _rt(rng, depth - 1))
    return Circ(_rq(rng, depth - 1), _rq(rng, depth - 1))


def _rq(rng: random.Random, depth: int) -> QType:
    if depth <= 1 or rng.random() < 0.5:
        return rng.choice([qubit, one])
    return Tensor(_rq(rng, depth - 1), _rq(rng, depth - 1))


Ctx = list[tuple[Term, QType]]


class TermGenerator:
    """Goal-directed generator of typed terms over a shared circuit store."""

    _VAR_BASE = 1 << 42

    def __init__(self, cfg: GenConfig, store: Optional[CircuitStore] = None,
                 rng: Optional[random.Random] = None) -> None:
        self.cfg = cfg
        self.rng = rng or random.Random(cfg.seed)
        self.store = store if store is not None else CircuitStore()
        self.db = ClauseDb(self.store)
        self._next = self._VAR_BASE
        self.misses = 0  # generated terms the prover could not confirm

    # -- public -----------------------------------------------------------
    def typed_term(self, ty: Optional[QType] = None, qubits: Optional[int] = None,
                   free_vars: Optional[int] = None, closed_values: bool = False) -> TypedTerm:
        cfg = self.cfg
        for _ in range(cfg.retries):
            a = ty or self._target_type()
            nq = self.rng.randint(0, cfg.max_qubits) if qubits is None else qubits
            qs = [self.store.fresh_qvar() for _ in range(nq)]
            lin: Ctx = [(qvar(q), qubit) for q in qs]
            intu: Ctx = []
            lin_vars: Ctx = []
            nfv = cfg.free_vars if free_vars is None else free_vars
            for i in range(nfv):
                t = self.rng.choice(_SMALL) if self.rng.random() < 0.7 else random_type(self.rng, 2)
                v = FreeVar(i)
                if has_bang(t):
                    intu.append((v, t))
                else:
                    lin_vars.append((v, t))
            if ty is None and lin_vars and self.rng.random() < 0.4:
                # aim at the linear variables so that consuming them is easy
                ts = [t for _, t in lin_vars] + [qubit] * nq
                a = ts[0]
                for t in ts[1:]:
                    a = Tensor(a, t)
            term = self.gen(a, lin_vars + lin, intu, cfg.size)
            if term is None or term_size(term) > cfg.size:
                continue
            icx, lcx = typing_contexts(lin_vars, intu, qs)
            goal = AtomG(Typeof(term, a))
            res = Prover(self.db, "lazy").search(Sequent(cfg.depth, icx, lcx, goal))
            if res.derivation is None:
                self.misses += 1
                continue
            return TypedTerm(term, a, icx, lcx, res.derivation, tuple(qs),
                             tuple(lin_vars), tuple(intu))
        raise RuntimeError("term generation failed after bounded retries")

    # -- generation ---------------------------------------------------------
    def _target_type(self) -> QType:
        if self.rng.random() < 0.5:
            return self.rng.choice(_SMALL)
        return random_type(self.rng, self.cfg.type_depth + 1)

    def _var(self) -> Term:
        self._next += 1
        return FreeVar(self._next)

    def _split(self, xs: Ctx) -> tuple[Ctx, Ctx]:
        a: Ctx = []
        b: Ctx = []
        for x in xs:
            (a if self.rng.random() < 0.5 else b).append(x)
        return a, b

    def _env(self, lin: Ctx, intu: Ctx) -> dict:
        env: dict = {}
        for x, t in list(lin) + list(intu):
            env.setdefault(x, []).append(t)
        return env

    def _fresh_spec(self, t: QType) -> Term:
        n = self.store.fresh_qvar()
        s = spec(n, t)
        self.store.reserve_qvars(fq(s))
        return s

    def gen(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        if size <= 0 or not validT(a):
            return None
        opts: list[tuple[float, Callable[[], Optional[Term]]]] = []
        rng = self.rng
        if len(lin) == 1:
            x, t = lin[0]
            if t == a or (validT(Bang(t)) and subtype(t, a)):
                opts.append((6.0, lambda: x))
        if not lin:
            for x, t in intu:
                if subtype(t, a):
                    opts.append((3.0, lambda x=x: x))
            if a in (bool_, Bang(bool_)):
                opts.append((2.0, lambda: rng.choice([true, false])))
            if a in (one, Bang(one)):
                opts.append((2.0, lambda: star))
            ua = a.inner if isinstance(a, Bang) else a
            if isinstance(ua, Circ) and valid(ua.left) and valid(ua.right):
                opts.append((2.0, lambda: self._circ_literal(ua)))
            c = self._constant_at(a)
            if c is not None:
                opts.append((1.0, lambda: c))
        if size >= 2:
            ua = a.inner if isinstance(a, Bang) else a
            if isinstance(ua, Arrow) and (not isinstance(a, Bang) or not lin):
                opts.append((4.0, lambda: self._fun(a, lin, intu, size)))
            if isinstance(a, Tensor):
                opts.append((3.0, lambda: self._prod(a, lin, intu, size)))
            if isinstance(a, Bang) and isinstance(a.inner, Tensor) and not lin:
                opts.append((2.0, lambda: self._prod(a, lin, intu, size)))
            if isinstance(ua, Circ) and valid(ua.left) and valid(ua.right):
                if not lin:
                    opts.append((2.0, lambda: self._box(ua, intu, size)))
                opts.append((1.0, lambda: self._rev(ua, lin, intu, size)))
            if isinstance(ua, Arrow) and valid(ua.left) and valid(ua.right):
                opts.append((1.0, lambda: self._unbox_fn(ua, lin, intu, size)))
        if size >= 3:
            opts.append((2.0, lambda: self._app(a, lin, intu, size)))
            opts.append((1.0, lambda: self._slet(a, lin, intu, size)))
            if valid(a):
                opts.append((2.0, lambda: self._apply_circuit(a, lin, intu, size)))
        if size >= 4:
            opts.append((1.5, lambda: self._if(a, lin, intu, size)))
            opts.append((1.5, lambda: self._let(a, lin, intu, size)))
        # weighted order without replacement
        keyed = sorted(opts, key=lambda o: -rng.random() ** (1.0 / o[0]))
        for _, make in keyed[:4]:
            t = make()
            if t is not None:
                return t
        return None

    def _budget(self, size: int, parts: int) -> list[int]:
        total = max(size - 1, parts)
        cuts = sorted(self.rng.randint(0, total - parts) for _ in range(parts - 1))
        out, prev = [], 0
        for c in cuts + [total - parts]:
            out.append(c - prev + 1)
            prev = c
        return out

    def _constant_at(self, a: QType) -> Optional[Term]:
        ua = a.inner if isinstance(a, Bang) else a
        if not isinstance(ua, Arrow):
            return None
        arg, res = ua.left, ua.right
        ures = res.inner if isinstance(res, Bang) else res
        if isinstance(arg, Bang) and isinstance(arg.inner, Arrow) and isinstance(ures, Circ):
            t, u = arg.inner.left, arg.inner.right
            if valid(t) and valid(u) and subtype(Bang(const_type("box", t, u)), a):
                return box(t)
        if isinstance(arg, Circ) and valid(arg.left) and valid(arg.right):
            t, u = arg.left, arg.right
            if subtype(Bang(const_type("unbox", t, u)), a):
                return unbox
            if subtype(Bang(const_type("rev", t, u)), a):
                return rev
        return None

    def _circ_literal(self, c: Circ) -> Term:
        u = self._fresh_spec(c.left)
        u2 = self._fresh_spec(c.right)
        circ = self.store.named(fq(u), fq(u2), "gate")
        return mk_circ(u, circ.id, u2)

    def _fun(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        ua = a.inner if isinstance(a, Bang) else a
        assert isinstance(ua, Arrow)
        t1, t2 = ua.left, ua.right
        x = self._var()
        if has_bang(t1):
            body = self.gen(t2, lin, intu + [(x, t1)], size - 1)
        else:
            body = self.gen(t2, lin + [(x, t1)], intu, size - 1)
        return None if body is None else mk_fun(abstract(body, x))

    def _prod(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        if isinstance(a, Bang):
            inner = a.inner
            assert isinstance(inner, Tensor)
            if has_bang(inner.left) or has_bang(inner.right):
                return None
            t1, t2 = Bang(inner.left), Bang(inner.right)
        else:
            assert isinstance(a, Tensor)
            t1, t2 = a.left, a.right
        l1, l2 = self._split(lin)
        s1, s2 = self._budget(size, 2)
        x = self.gen(t1, l1, intu, s1)
        if x is None:
            return None
        y = self.gen(t2, l2, intu, s2)
        return None if y is None else mk_prod(x, y)

    def _box(self, c: Circ, intu: Ctx, size: int) -> Optional[Term]:
        f = self.gen(Bang(Arrow(c.left, c.right)), [], intu, size - 1)
        if f is None or isinstance(f, FreeVar) or (isinstance(f, Con) and f.c.kind == "Qvar"):
            return None
        return mk_app(box(c.left), f)

    def _rev(self, c: Circ, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        inner = self.gen(Circ(c.right, c.left), lin, intu, size - 1)
        if inner is None or Circ(c.right, c.left) not in synth(inner, self._env(lin, intu)):
            return None
        return mk_app(rev, inner)

    def _unbox_fn(self, ua: Arrow, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        inner = self.gen(Circ(ua.left, ua.right), lin, intu, size - 1)
        return None if inner is None else mk_app(unbox, inner)

    def _apply_circuit(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        # (unbox c) v with v consuming the linear context
        t = self._data_type_for(lin)
        l1, l2 = self._split(lin) if self.rng.random() < 0.3 else ([], lin)
        s1, s2 = self._budget(size - 1, 2)
        v = self.gen(t, l2, intu, s2)
        if v is None or t not in synth(v, self._env(l2, intu)):
            return None
        c = self.gen(Circ(t, a), l1, intu, s1)
        if c is None or Circ(t, a) not in synth(c, self._env(l1, intu)):
            return None
        return mk_app(mk_app(unbox, c), v)

    def _data_type_for(self, lin: Ctx) -> QType:
        qs = [t for _, t in lin if t == qubit]
        if not qs or self.rng.random() < 0.2:
            return self.rng.choice([qubit, one, Tensor(qubit, qubit)])
        t: QType = qubit
        for _ in qs[1:]:
            t = Tensor(t, qubit)
        return t

    def _arg_type(self, lin: Ctx) -> QType:
        r = self.rng.random()
        if lin and r < 0.5:
            return self.rng.choice([t for _, t in lin])
        if lin and r < 0.65 and len(lin) >= 2:
            return Tensor(lin[0][1], lin[1][1])
        return self.rng.choice(_SMALL[:8])

    def _app(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        targ = self._arg_type(lin)
        if not validT(Arrow(targ, a)):
            return None
        l1, l2 = self._split(lin)
        s1, s2 = self._budget(size, 2)
        arg = self.gen(targ, l2, intu, s2)
        if arg is None or targ not in synth(arg, self._env(l2, intu)):
            return None
        f = self.gen(Arrow(targ, a), l1, intu, s1)
        return None if f is None else mk_app(f, arg)

    def _if(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        l1, l2 = self._split(lin)
        s1, s2, s3 = self._budget(size, 3)
        c = self.gen(bool_, l1, intu, s1)
        if c is None:
            return None
        x = self.gen(a, l2, intu, s2)
        if x is None:
            return None
        y = self.gen(a, l2, intu, s3)
        return None if y is None else mk_if(c, x, y)

    def _slet(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        l1, l2 = self._split(lin)
        s1, s2 = self._budget(size, 2)
        unit = one if l2 or self.rng.random() < 0.5 else Bang(one)
        body = self.gen(a, l1, intu, s1)
        if body is None:
            return None
        scr = self.gen(unit, l2, intu, s2)
        return None if scr is None else mk_slet(body, scr)

    def _let(self, a: QType, lin: Ctx, intu: Ctx, size: int) -> Optional[Term]:
        l1, l2 = self._split(lin)
        b1, b2 = self._arg_type(l1), self._arg_type(l1)
        sc: QType = Tensor(b1, b2)
        if not l1 and not has_bang(b1) and not has_bang(b2) and self.rng.random() < 0.3:
            sc = Bang(sc)
        if not validT(sc):
            return None
        s1, s2 = self._budget(size, 2)
        e = self.gen(sc, l1, intu, s1)
        if e is None or sc not in synth(e, self._env(l1, intu)):
            return None
        comps = _let_components(sc)
        assert comps is not None
        x, y = self._var(), self._var()
        lin2, intu2 = list(l2), list(intu)
        for v, t in ((x, comps[0]), (y, comps[1])):
            (intu2 if has_bang(t) else lin2).append((v, t))
        body = self.gen(a, lin2, intu2, s2)
        if body is None:
            return None
        return mk_let(_abstract2(body, x, y), e)


# ---------------------------------------------------------------------------
# propositional-style SL sequents

class PropDb:
    """A growable clause set over opaque atoms, used to exercise the SL alone."""

    def __init__(self) -> None:
        self.clauses: list[Clause] = []
        self._index: dict = {}
        self._by_name: dict[str, Clause] = {}

    def add_exact(self, head: Atom, igoals: list[Formula], lgoals: list[Formula]) -> Clause:
        name = f"c{len(self.clauses)}"

        def fn(atom, view, head=head, ig=tuple(igoals), lg=tuple(lgoals)):
            if atom == head:
                yield list(ig), list(lg)

        c = Clause(name, "prop", "generated", fn)
        self._register(c, ("exact", head))
        return c

    def add_schema(self, src: QType, dst: QType) -> Clause:
        """``typeof x dst <- [] [typeof x src]`` for every term ``x``."""
        name = f"s{len(self.clauses)}"

        def fn(atom, view, src=src, dst=dst):
            if isinstance(atom, Typeof) and atom.type == dst:
                yield [], [AtomG(Typeof(atom.term, src))]

        c = Clause(name, "prop", "generated", fn)
        self._register(c, ("schema", dst))
        return c

    def _register(self, c: Clause, key) -> None:
        self.clauses.append(c)
        self._index.setdefault(key, []).append(c)
        self._by_name[c.name] = c

    def clauses_for(self, atom: Atom):
        out = list(self._index.get(("exact", atom), ()))
        if isinstance(atom, Typeof):
            out += self._index.get(("schema", atom.type), ())
        return out

    def by_name(self, name: str) -> Clause:
        return self._by_name[name]


@dataclass
class SeqCase:
    icx: tuple[Atom, ...]
    lcx: tuple[Atom, ...]
    goal: Formula
    height: int
    db: PropDb
    cut_atom: Optional[Atom] = None


def _p(k: int) -> Atom:
    return IsQexp(FreeVar(k))


class SequentGenerator:
    """Builds derivable sequents bottom-up together with the clauses they use."""

    def __init__(self, rng: random.Random, n_atoms: int = 5) -> None:
        self.rng = rng
        self.pool = [_p(k) for k in range(n_atoms)]
        self._fresh = 100
        self._prefer: Optional[Atom] = None

    def _new_atom(self) -> Atom:
        self._fresh += 1
        return _p(self._fresh)

    def case(self, max_height: int = 6, max_lcx: int = 5) -> SeqCase:
        while True:
            db = PropDb()
            icx = list(dict.fromkeys(self.rng.sample(self.pool, self.rng.randint(0, 3))))
            cut = None
            if icx and self.rng.random() < 0.8:
                cut = self._new_atom()
                db.add_exact(cut, [AtomG(self.rng.choice(icx))], [])
                icx.append(cut)
            self._prefer = cut
            lcx, goal, h = self.gen(tuple(icx), max_height, db)
            self._prefer = None
            if h < 3 and self.rng.random() < 0.85:
                continue
            if len(lcx) <= max_lcx and h <= max_height:
                return SeqCase(tuple(icx), tuple(lcx), goal, h, db, cut)

    def gen(self, icx: tuple[Atom, ...], budget: int, db: PropDb) -> tuple[list[Atom], Formula, int]:
        rng = self.rng
        if budget <= 1 or rng.random() < 0.25:
            k = rng.random()
            if icx and k < 0.4:
                if self._prefer is not None and rng.random() < 0.5:
                    return [], AtomG(self._prefer), 1
                return [], AtomG(rng.choice(icx)), 1
            if k < 0.8:
                a = rng.choice(self.pool)
                return [a], AtomG(a), 1
            return [rng.choice(self.pool) for _ in range(rng.randint(0, 2))], Top(), 1
        b = budget - 1
        k = rng.randrange(7)
        if k == 0:
            l1, g1, h1 = self.gen(icx, b, db)
            l2, g2, h2 = self.gen(icx, b, db)
            return l1 + l2, Conj(g1, g2), 1 + max(h1, h2)
        if k == 1:
            l1, g1, h1 = self.gen(icx, b, db)
            g2 = rng.choice([Top(), g1])
            return l1, (And(g1, g2) if rng.random() < 0.5 else And(g2, g1)), 1 + h1
        if k == 2:
            a = rng.choice(self.pool)
            icx2 = icx if a in icx else icx + (a,)
            l1, g1, h1 = self.gen(icx2, b, db)
            return l1, Imp(a, g1), 1 + h1
        if k == 3:
            l1, g1, h1 = self.gen(icx, b, db)
            if l1:
                a = rng.choice(l1)
                rest = list(l1)
                rest.remove(a)
                return rest, LImp(a, g1), 1 + h1
            if h1 <= b - 1:
                a = rng.choice(self.pool)
                return l1, LImp(a, Conj(AtomG(a), g1)), 2 + h1
            return l1, g1, h1
        if k == 4 and b >= 3:
            # forall over a term parameter, consumed by a schematic clause
            t, u = rng.sample([one, bool_, qubit], 2)
            db.add_schema(t, u)
            p = FreeVar(10_000 + self._fresh)
            self._fresh += 1
            body = LImp(Typeof(p, t), AtomG(Typeof(p, u)))
            h = 4
            if b >= 4 and rng.random() < 0.5:
                l1, g1, h1 = self.gen(icx, b - 2, db)
                body = LImp(Typeof(p, t), Conj(AtomG(Typeof(p, u)), g1))
                return l1, All(_abstract_formula(body, p)), 3 + max(2, h1)
            return [], All(_abstract_formula(body, p)), h
        if k in (5, 6):
            # backchaining on a freshly made clause
            n_i = rng.randint(0, 1)
            n_l = rng.randint(0, 2)
            igoals, lgoals, lcx, hs = [], [], [], [0]
            for _ in range(n_i):
                l1, g1, h1 = self.gen(icx, b, db)
                g1, h1 = _close(l1, g1, h1)
                igoals.append(g1)
                hs.append(h1)
            for _ in range(n_l):
                l1, g1, h1 = self.gen(icx, b, db)
                if h1 > b:
                    continue
                lgoals.append(g1)
                lcx += l1
                hs.append(h1)
            if max(hs) > b:
                return self.gen(icx, budget, db)
            head = self._new_atom()
            db.add_exact(head, igoals, lgoals)
            return lcx, AtomG(head), 1 + max(hs)
        l1, g1, h1 = self.gen(icx, b, db)
        return l1, g1, h1


def _close(lcx: list[Atom], g: Formula, h: int) -> tuple[Formula, int]:
    for a in lcx:
        g = LImp(a, g)
        h += 1
    return g, h


def _abstract_formula(g: Formula, p: Term) -> Formula:
    return _map_formula(g, lambda t, lvl: abstract(t, p, lvl))


def gen_typed_term(cfg: GenConfig, store: Optional[CircuitStore] = None):
    """``(term, type, icx, lcx)`` for one generated, re-verified typing."""
    tt = TermGenerator(cfg, store).typed_term()
    return tt.term, tt.type, tt.icx, tt.lcx
