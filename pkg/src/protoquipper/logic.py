"""Intuitionistic linear specification logic and a backchaining prover.

Sequents are ``Gamma ; Delta |- G`` with Gamma a set of atoms (reusable) and
Delta a multiset of atoms (each used exactly once).  Goals are built from
atoms, top, the two conjunctions, the two atom-antecedent implications and a
universal quantifier over terms.  Atomic goals are solved by the two init
rules or by backchaining on a clause database (see :mod:`.clauses`).

Two search strategies share the rule set:

``exhaustive``
    every multiplicative rule enumerates the splits of the linear context.
    Exponential, but obviously faithful; it is the reference oracle.
``lazy``
    the linear context is threaded through subgoals as input/output, and a
    top leaf is recorded as "may consume the remainder".  The proof tree is
    fixed up afterwards so every node carries its exact linear context.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .qtypes import QType
from .syntax import Term, max_free_var, open_at, well_scoped, FreeVar

__all__ = [
    "Typeof", "IsQexp", "Reduct", "Atom", "Formula", "AtomG", "Top", "Conj", "And",
    "Imp", "LImp", "All", "Sequent", "Derivation", "Session", "Clause", "ProofResult",
    "Prover", "prove", "search", "prove_goal_list", "enumerate_splits", "check_derivation",
    "instantiate_formula", "ScopeError", "DEFAULT_DEPTH", "fresh_eigenvariable",
]

DEFAULT_DEPTH = 64


class ScopeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# atoms and formulas

@dataclass(frozen=True)
class Typeof:
    term: Term
    type: QType

    def map_terms(self, f: Callable[[Term], Term]) -> "Typeof":
        return Typeof(f(self.term), self.type)

    def terms(self) -> tuple[Term, ...]:
        return (self.term,)

    def __repr__(self) -> str:
        return f"typeof({self.term!r}, {self.type!r})"


@dataclass(frozen=True)
class IsQexp:
    term: Term

    def map_terms(self, f: Callable[[Term], Term]) -> "IsQexp":
        return IsQexp(f(self.term))

    def terms(self) -> tuple[Term, ...]:
        return (self.term,)

    def __repr__(self) -> str:
        return f"is_qexp({self.term!r})"


@dataclass(frozen=True)
class Reduct:
    c: int
    a: Term
    c2: int
    a2: Term

    def map_terms(self, f: Callable[[Term], Term]) -> "Reduct":
        return Reduct(self.c, f(self.a), self.c2, f(self.a2))

    def terms(self) -> tuple[Term, ...]:
        return (self.a, self.a2)

    def __repr__(self) -> str:
        return f"reduct({self.c}, {self.a!r}, {self.c2}, {self.a2!r})"


Atom = Union[Typeof, IsQexp, Reduct]


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class AtomG(Formula):
    atom: Atom

    def __repr__(self) -> str:
        return repr(self.atom)


@dataclass(frozen=True)
class Top(Formula):
    def __repr__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Conj(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"({self.left!r} * {self.right!r})"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"({self.left!r} & {self.right!r})"


@dataclass(frozen=True)
class Imp(Formula):
    hyp: Atom
    body: Formula

    def __repr__(self) -> str:
        return f"({self.hyp!r} => {self.body!r})"


@dataclass(frozen=True)
class LImp(Formula):
    hyp: Atom
    body: Formula

    def __repr__(self) -> str:
        return f"({self.hyp!r} -o {self.body!r})"


@dataclass(frozen=True)
class All(Formula):
    """Universal goal; ``body`` mentions the bound term variable as index 0."""

    body: Formula

    def __repr__(self) -> str:
        return f"(all. {self.body!r})"


def _map_formula(g: Formula, f: Callable[[Term, int], Term], level: int = 0) -> Formula:
    if isinstance(g, AtomG):
        return AtomG(g.atom.map_terms(lambda t: f(t, level)))
    if isinstance(g, Top):
        return g
    if isinstance(g, (Conj, And)):
        return type(g)(_map_formula(g.left, f, level), _map_formula(g.right, f, level))
    if isinstance(g, (Imp, LImp)):
        return type(g)(g.hyp.map_terms(lambda t: f(t, level)), _map_formula(g.body, f, level))
    if isinstance(g, All):
        return All(_map_formula(g.body, f, level + 1))
    raise TypeError(g)


def instantiate_formula(body: Formula, arg: Term) -> Formula:
    """Open the binder of ``All(body)`` with the proper term ``arg``."""
    return _map_formula(body, lambda t, lvl: open_at(t, arg, lvl))


def formula_scoped(g: Formula, levels: int = 0) -> bool:
    ok = [True]

    def chk(t: Term, lvl: int) -> Term:
        if not well_scoped(t, levels + lvl):
            ok[0] = False
        return t

    _map_formula(g, chk)
    return ok[0]


def formula_atoms(g: Formula) -> Iterator[Atom]:
    if isinstance(g, AtomG):
        yield g.atom
    elif isinstance(g, (Conj, And)):
        yield from formula_atoms(g.left)
        yield from formula_atoms(g.right)
    elif isinstance(g, (Imp, LImp)):
        yield g.hyp
        yield from formula_atoms(g.body)
    elif isinstance(g, All):
        yield from formula_atoms(g.body)


# ---------------------------------------------------------------------------
# sequents, sessions, clauses

@dataclass(frozen=True)
class Sequent:
    depth: int
    icx: tuple[Atom, ...]
    lcx: tuple[Atom, ...]
    goal: Formula


class Session:
    """Per-proof fresh variable supply (never shared between threads)."""

    def __init__(self, start: int = 0) -> None:
        self.next = start

    def observe_term(self, t: Term) -> None:
        self.next = max(self.next, max_free_var(t) + 1)

    def observe_atoms(self, atoms: Iterable[Atom]) -> None:
        for a in atoms:
            for t in a.terms():
                self.observe_term(t)

    def observe_sequent(self, icx: Iterable[Atom], lcx: Iterable[Atom], goal: Formula) -> None:
        self.observe_atoms(icx)
        self.observe_atoms(lcx)
        self.observe_atoms(formula_atoms(goal))

    def fresh(self) -> Term:
        v = FreeVar(self.next)
        self.next += 1
        return v


def fresh_eigenvariable(session: Session) -> Term:
    return session.fresh()


@dataclass(frozen=True)
class ClauseView:
    """What a clause may look at besides the goal: the current contexts."""

    icx: tuple[Atom, ...]
    lcx: tuple[Atom, ...]


Instance = tuple[list[Formula], list[Formula]]


@dataclass(frozen=True)
class Clause:
    """A program clause ``head <- [igoals][lgoals]``.

    ``instances(atom, view)`` performs the head match, checks the side
    conditions and yields one ``(igoals, lgoals)`` pair per admissible
    instantiation of the clause's schematic variables.
    """

    name: str
    kind: str
    rule: str
    instances: Callable[[Atom, ClauseView], Iterable[Instance]] = field(compare=False)
    reconstructed: bool = False
    note: str = ""


class ClauseDbLike:
    def clauses_for(self, atom: Atom) -> Sequence[Clause]:  # pragma: no cover - protocol
        raise NotImplementedError

    def by_name(self, name: str) -> Clause:  # pragma: no cover - protocol
        raise NotImplementedError


# ---------------------------------------------------------------------------
# derivations

@dataclass
class Derivation:
    rule: str
    icx: tuple[Atom, ...]
    lcx: tuple[Atom, ...]
    goal: Formula
    premises: list["Derivation"] = field(default_factory=list)
    consumed: tuple[Atom, ...] = ()
    eigen: Optional[Term] = None
    n_igoals: int = 0
    # lazy-search bookkeeping, erased by _finalize
    used: tuple[Atom, ...] = ()
    slack: bool = False

    @property
    def height(self) -> int:
        return 1 + max((p.height for p in self.premises), default=0)

    def walk(self) -> Iterator["Derivation"]:
        yield self
        for p in self.premises:
            yield from p.walk()

    def rules_used(self) -> list[str]:
        return [d.rule for d in self.walk()]

    def to_text(self, indent: str = "") -> str:
        lines = [f"{indent}{self.rule}  {_fmt_ctx(self.icx)} ; {_fmt_ctx(self.lcx)} |- {self.goal!r}"]
        for p in self.premises:
            lines.append(p.to_text(indent + "  "))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "icx": [repr(a) for a in self.icx],
            "lcx": [repr(a) for a in self.lcx],
            "goal": repr(self.goal),
            "height": self.height,
            "consumed": [repr(a) for a in self.consumed],
            "premises": [p.to_dict() for p in self.premises],
        }


def _fmt_ctx(atoms: tuple[Atom, ...]) -> str:
    return "[" + ", ".join(map(repr, atoms)) + "]"


@dataclass
class ProofResult:
    derivation: Optional[Derivation]
    status: str  # "proved" | "failed" | "unknown"

    def __bool__(self) -> bool:
        return self.derivation is not None


# ---------------------------------------------------------------------------
# multisets

def _mkey(lcx: Iterable[Atom]) -> frozenset:
    return frozenset(Counter(lcx).items())


def _msub(a: tuple[Atom, ...], b: Iterable[Atom]) -> tuple[Atom, ...]:
    """Multiset difference a - b, keeping a's order; b must be contained in a."""
    need = Counter(b)
    out = []
    for x in a:
        if need[x] > 0:
            need[x] -= 1
        else:
            out.append(x)
    if +need:
        raise ValueError("multiset difference of non-submultiset")
    return tuple(out)


def _mle(a: Iterable[Atom], b: Iterable[Atom]) -> bool:
    return not (Counter(a) - Counter(b))


def _mintersect(a: tuple[Atom, ...], b: tuple[Atom, ...]) -> tuple[Atom, ...]:
    cb = Counter(b)
    out = []
    for x in a:
        if cb[x] > 0:
            cb[x] -= 1
            out.append(x)
    return tuple(out)


def enumerate_splits(lcx: Sequence[Atom]) -> list[tuple[tuple[Atom, ...], tuple[Atom, ...]]]:
    """All 2^n occurrence-level ways of dividing ``lcx`` into two parts."""
    out = []
    n = len(lcx)
    for mask in range(1 << n):
        left = tuple(lcx[i] for i in range(n) if mask >> i & 1)
        right = tuple(lcx[i] for i in range(n) if not mask >> i & 1)
        out.append((left, right))
    return out


def _distinct_splits(lcx: tuple[Atom, ...]) -> Iterator[tuple[tuple[Atom, ...], tuple[Atom, ...]]]:
    """Splits up to multiset equality (what the search actually needs)."""
    counts = list(Counter(lcx).items())
    for choice in itertools.product(*(range(c + 1) for _, c in counts)):
        left: list[Atom] = []
        right: list[Atom] = []
        for (a, c), k in zip(counts, choice):
            left.extend([a] * k)
            right.extend([a] * (c - k))
        yield tuple(left), tuple(right)


# ---------------------------------------------------------------------------
# the prover

def _add_icx(icx: tuple[Atom, ...], a: Atom) -> tuple[Atom, ...]:
    return icx if a in icx else icx + (a,)


class Prover:
    def __init__(self, db: ClauseDbLike, strategy: str = "lazy",
                 session: Optional[Session] = None) -> None:
        if strategy not in ("lazy", "exhaustive"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.db = db
        self.strategy = strategy
        self.session = session or Session()
        self.cutoffs = 0
        self.prunes = 0
        self._fail: dict = {}
        self._ok: dict = {}

    # -- public -----------------------------------------------------------
    def search(self, seq: Sequent) -> ProofResult:
        if seq.depth < 0:
            raise ValueError("negative depth")
        if not formula_scoped(seq.goal):
            raise ScopeError("goal has dangling bound indices")
        self.session.observe_sequent(seq.icx, seq.lcx, seq.goal)
        icx = tuple(dict.fromkeys(seq.icx))
        self.cutoffs = 0
        if self.strategy == "exhaustive":
            d = self._ex(seq.goal, icx, tuple(seq.lcx), seq.depth, frozenset())
        else:
            d = None
            for rem, slack, node in self._lz(seq.goal, icx, tuple(seq.lcx), seq.depth, frozenset()):
                if not rem or slack:
                    d = node
                    _finalize(d, tuple(seq.lcx))
                    break
        if d is not None:
            return ProofResult(d, "proved")
        return ProofResult(None, "unknown" if self.cutoffs else "failed")

    def search_list(self, depth: int, icx: tuple[Atom, ...], lcx: tuple[Atom, ...],
                    goals: Sequence[Formula], mode: str) -> tuple[Optional[list[Derivation]], str]:
        if mode == "intuitionistic" and lcx:
            raise ValueError("intuitionistic goal lists need an empty linear context")
        for g in goals:
            self.session.observe_sequent(icx, lcx, g)
        self.cutoffs = 0
        icx = tuple(dict.fromkeys(icx))
        if mode == "intuitionistic":
            out = []
            for g in goals:
                d = self._ex(g, icx, (), depth, frozenset())
                if d is None:
                    return None, "unknown" if self.cutoffs else "failed"
                out.append(d)
            return out, "proved"
        res = self._ex_list(list(goals), icx, lcx, depth, frozenset())
        if res is None:
            return None, "unknown" if self.cutoffs else "failed"
        return res, "proved"

    # -- exhaustive ---------------------------------------------------------
    def _ex(self, goal: Formula, icx: tuple[Atom, ...], lcx: tuple[Atom, ...],
            depth: int, path: frozenset) -> Optional[Derivation]:
        if depth <= 0:
            self.cutoffs += 1
            return None
        key = (goal, frozenset(icx), _mkey(lcx))
        hit = self._ok.get(key)
        if hit is not None and hit.height <= depth:
            return _retarget(hit, icx, lcx)
        if self._fail.get(key, 0) >= depth:
            return None
        if key in path:
            self.prunes += 1
            return None
        c0, p0 = self.cutoffs, self.prunes
        d = self._ex_rules(goal, icx, lcx, depth, path | {key})
        if d is not None:
            self._ok[key] = d
        elif self.prunes == p0:
            self._fail[key] = depth if self.cutoffs > c0 else 1 << 30
        return d

    def _ex_rules(self, goal: Formula, icx, lcx, depth: int, path) -> Optional[Derivation]:
        sub = depth - 1
        if isinstance(goal, Top):
            return Derivation("top_R", icx, lcx, goal, consumed=lcx)
        if isinstance(goal, AtomG):
            a = goal.atom
            if lcx == (a,):
                return Derivation("l_init", icx, lcx, goal, consumed=lcx)
            if not lcx and a in icx:
                return Derivation("i_init", icx, lcx, goal)
            view = ClauseView(icx, lcx)
            for clause in self.db.clauses_for(a):
                for igoals, lgoals in clause.instances(a, view):
                    if not lgoals and lcx:
                        continue
                    iders = []
                    for g in igoals:
                        d = self._ex(g, icx, (), sub, path)
                        if d is None:
                            break
                        iders.append(d)
                    else:
                        lders = self._ex_list(lgoals, icx, lcx, sub, path)
                        if lders is not None:
                            return Derivation(f"bc:{clause.name}", icx, lcx, goal,
                                              iders + lders, n_igoals=len(iders))
            return None
        if isinstance(goal, Conj):
            for l1, l2 in _distinct_splits(lcx):
                d1 = self._ex(goal.left, icx, l1, sub, path)
                if d1 is None:
                    continue
                d2 = self._ex(goal.right, icx, l2, sub, path)
                if d2 is not None:
                    return Derivation("tensor_R", icx, lcx, goal, [d1, d2])
            return None
        if isinstance(goal, And):
            d1 = self._ex(goal.left, icx, lcx, sub, path)
            if d1 is None:
                return None
            d2 = self._ex(goal.right, icx, lcx, sub, path)
            return None if d2 is None else Derivation("with_R", icx, lcx, goal, [d1, d2])
        if isinstance(goal, Imp):
            d = self._ex(goal.body, _add_icx(icx, goal.hyp), lcx, sub, path)
            return None if d is None else Derivation("imp_R", icx, lcx, goal, [d])
        if isinstance(goal, LImp):
            d = self._ex(goal.body, icx, lcx + (goal.hyp,), sub, path)
            return None if d is None else Derivation("limp_R", icx, lcx, goal, [d])
        if isinstance(goal, All):
            y = self.session.fresh()
            d = self._ex(instantiate_formula(goal.body, y), icx, lcx, sub, path)
            return None if d is None else Derivation("all_R", icx, lcx, goal, [d], eigen=y)
        raise TypeError(goal)

    def _ex_list(self, goals: list[Formula], icx, lcx, depth: int, path) -> Optional[list[Derivation]]:
        if not goals:
            return [] if not lcx else None
        if len(goals) == 1:
            d = self._ex(goals[0], icx, lcx, depth, path)
            return None if d is None else [d]
        for l1, l2 in _distinct_splits(lcx):
            d = self._ex(goals[0], icx, l1, depth, path)
            if d is None:
                continue
            rest = self._ex_list(goals[1:], icx, l2, depth, path)
            if rest is not None:
                return [d] + rest
        return None

    # -- lazy (input/output threading) ---------------------------------------
    def _lz(self, goal: Formula, icx, avail: tuple[Atom, ...], depth: int,
            path: frozenset) -> Iterator[tuple[tuple[Atom, ...], bool, Derivation]]:
        if depth <= 0:
            self.cutoffs += 1
            return
        key = (goal, frozenset(icx), _mkey(avail))
        if key in path:
            self.prunes += 1
            return
        path = path | {key}
        seen = set()
        for rem, slack, node in self._lz_rules(goal, icx, avail, depth - 1, path):
            k = (_mkey(rem), slack)
            if k in seen:
                continue
            seen.add(k)
            node.used = _msub(avail, rem)
            node.slack = slack
            yield rem, slack, node

    def _lz_rules(self, goal, icx, avail, sub, path):
        if isinstance(goal, Top):
            yield avail, True, Derivation("top_R", icx, (), goal)
            return
        if isinstance(goal, AtomG):
            a = goal.atom
            if a in avail:
                yield _msub(avail, (a,)), False, Derivation("l_init", icx, (a,), goal, consumed=(a,))
            if a in icx:
                yield avail, False, Derivation("i_init", icx, (), goal)
            view = ClauseView(icx, avail)
            for clause in self.db.clauses_for(a):
                for igoals, lgoals in clause.instances(a, view):
                    iders = []
                    for g in igoals:
                        d = self._lz_closed(g, icx, sub, path)
                        if d is None:
                            break
                        iders.append(d)
                    else:
                        for rem, slack, lders in self._lz_thread(lgoals, icx, avail, sub, path):
                            yield rem, slack, Derivation(f"bc:{clause.name}", icx, (), goal,
                                                         iders + lders, n_igoals=len(iders))
            return
        if isinstance(goal, Conj):
            for rem, slack, ders in self._lz_thread([goal.left, goal.right], icx, avail, sub, path):
                yield rem, slack, Derivation("tensor_R", icx, (), goal, ders)
            return
        if isinstance(goal, And):
            for r1, s1, d1 in self._lz(goal.left, icx, avail, sub, path):
                for r2, s2, d2 in self._lz(goal.right, icx, avail, sub, path):
                    if not s1 and not s2:
                        if _mkey(r1) != _mkey(r2):
                            continue
                        rem, slack = r1, False
                    elif s1 and not s2:
                        if not _mle(r2, r1):
                            continue
                        rem, slack = r2, False
                    elif s2 and not s1:
                        if not _mle(r1, r2):
                            continue
                        rem, slack = r1, False
                    else:
                        rem, slack = _mintersect(r1, r2), True
                    yield rem, slack, Derivation("with_R", icx, (), goal, [d1, d2])
            return
        if isinstance(goal, Imp):
            for rem, slack, d in self._lz(goal.body, _add_icx(icx, goal.hyp), avail, sub, path):
                yield rem, slack, Derivation("imp_R", icx, (), goal, [d])
            return
        if isinstance(goal, LImp):
            h = goal.hyp
            for rem, slack, d in self._lz(goal.body, icx, avail + (h,), sub, path):
                if Counter(rem)[h] > Counter(avail)[h]:
                    if not slack:
                        continue
                    rem = _msub(rem, (h,))
                yield rem, slack, Derivation("limp_R", icx, (), goal, [d])
            return
        if isinstance(goal, All):
            y = self.session.fresh()
            for rem, slack, d in self._lz(instantiate_formula(goal.body, y), icx, avail, sub, path):
                yield rem, slack, Derivation("all_R", icx, (), goal, [d], eigen=y)
            return
        raise TypeError(goal)

    def _lz_closed(self, goal, icx, depth, path) -> Optional[Derivation]:
        for rem, slack, d in self._lz(goal, icx, (), depth, path):
            _finalize(d, ())
            return d
        return None

    def _lz_thread(self, goals, icx, avail, depth, path):
        if not goals:
            yield avail, False, []
            return
        for r1, s1, d1 in self._lz(goals[0], icx, avail, depth, path):
            for r2, s2, rest in self._lz_thread(goals[1:], icx, r1, depth, path):
                yield r2, s1 or s2, [d1] + rest


def _retarget(d: Derivation, icx, lcx) -> Derivation:
    """A cached derivation reused at a key-equal sequent (same sets/multisets)."""
    if d.icx == icx and d.lcx == lcx:
        return d
    if set(d.icx) == set(icx) and _mkey(d.lcx) == _mkey(lcx):
        return d
    raise AssertionError("cache key mismatch")


def _finalize(d: Derivation, exact: tuple[Atom, ...]) -> None:
    """Give every node of a lazily found proof its exact linear context."""
    d.lcx = exact
    rule = d.rule
    if rule == "top_R":
        d.consumed = exact
    elif rule == "l_init":
        assert _mkey(exact) == _mkey(d.consumed), (exact, d.consumed)
    elif rule == "i_init":
        assert not exact
    elif rule in ("imp_R", "all_R"):
        _finalize(d.premises[0], exact)
    elif rule == "limp_R":
        _finalize(d.premises[0], exact + (d.goal.hyp,))  # type: ignore[attr-defined]
    elif rule == "with_R":
        for p in d.premises:
            _finalize(p, exact)
    else:  # tensor_R and bc:*, whose linear premises were threaded
        linear = d.premises[d.n_igoals:]
        extra = _msub(exact, [a for p in linear for a in p.used])
        for p in linear:
            if extra and p.slack:
                _finalize(p, p.used + extra)
                extra = ()
            else:
                _finalize(p, p.used)
        assert not extra, "unconsumed linear hypotheses in lazy proof"
    d.used = ()
    d.slack = False


# ---------------------------------------------------------------------------
# functional front doors

def search(seq: Sequent, db: ClauseDbLike, strategy: str = "lazy",
           session: Optional[Session] = None) -> ProofResult:
    return Prover(db, strategy, session).search(seq)


def prove(seq: Sequent, db: ClauseDbLike, strategy: str = "lazy",
          session: Optional[Session] = None) -> Optional[Derivation]:
    return search(seq, db, strategy, session).derivation


def prove_goal_list(depth: int, icx: Sequence[Atom], lcx: Sequence[Atom],
                    goals: Sequence[Formula], mode: str, db: ClauseDbLike,
                    session: Optional[Session] = None) -> Optional[list[Derivation]]:
    p = Prover(db, "exhaustive", session)
    return p.search_list(depth, tuple(icx), tuple(lcx), goals, mode)[0]


# ---------------------------------------------------------------------------
# replay

def check_derivation(d: Derivation, db: ClauseDbLike, depth: Optional[int] = None) -> bool:
    """Re-verify every inference of ``d``; also enforce the height budget."""
    if depth is not None and d.height > depth:
        return False
    try:
        _check(d, db)
    except AssertionError:
        return False
    return True


def _check(d: Derivation, db: ClauseDbLike) -> None:
    g, icx, lcx, ps = d.goal, d.icx, d.lcx, d.premises
    for p in ps:
        assert set(p.icx) >= set(icx)
    r = d.rule
    if r == "l_init":
        assert isinstance(g, AtomG) and lcx == (g.atom,) and not ps
    elif r == "i_init":
        assert isinstance(g, AtomG) and not lcx and g.atom in icx and not ps
    elif r == "top_R":
        assert isinstance(g, Top) and not ps
    elif r == "tensor_R":
        assert isinstance(g, Conj) and len(ps) == 2
        assert ps[0].goal == g.left and ps[1].goal == g.right
        assert _mkey(ps[0].lcx + ps[1].lcx) == _mkey(lcx)
        assert set(ps[0].icx) == set(icx) == set(ps[1].icx)
    elif r == "with_R":
        assert isinstance(g, And) and len(ps) == 2
        assert ps[0].goal == g.left and ps[1].goal == g.right
        assert _mkey(ps[0].lcx) == _mkey(lcx) == _mkey(ps[1].lcx)
    elif r == "imp_R":
        assert isinstance(g, Imp) and len(ps) == 1 and ps[0].goal == g.body
        assert set(ps[0].icx) == set(icx) | {g.hyp} and _mkey(ps[0].lcx) == _mkey(lcx)
    elif r == "limp_R":
        assert isinstance(g, LImp) and len(ps) == 1 and ps[0].goal == g.body
        assert _mkey(ps[0].lcx) == _mkey(lcx + (g.hyp,))
    elif r == "all_R":
        assert isinstance(g, All) and len(ps) == 1 and isinstance(d.eigen, FreeVar)
        y = d.eigen
        s = Session()
        s.observe_sequent(icx, lcx, g)
        assert y.n >= s.next, "eigenvariable not fresh"
        assert ps[0].goal == instantiate_formula(g.body, y)
        assert _mkey(ps[0].lcx) == _mkey(lcx)
    elif r.startswith("bc:"):
        assert isinstance(g, AtomG)
        clause = db.by_name(r[3:])
        ig, lg = ps[:d.n_igoals], ps[d.n_igoals:]
        goals = ([p.goal for p in ig], [p.goal for p in lg])
        inst = [(list(a), list(b)) for a, b in clause.instances(g.atom, ClauseView(icx, lcx))]
        assert (goals[0], goals[1]) in inst, f"no instance of {clause.name} matches"
        assert all(not p.lcx for p in ig)
        assert _mkey([a for p in lg for a in p.lcx]) == _mkey(lcx)
    else:
        raise AssertionError(f"unknown rule {r}")
    for p in ps:
        _check(p, db)


def linear_consumption(d: Derivation) -> Counter:
    """Occurrences consumed inside ``d`` by l_init and top leaves, minus the
    hypotheses its own linear implications introduced."""
    c: Counter = Counter(d.consumed) if d.rule in ("l_init", "top_R") else Counter()
    for p in d.premises:
        c += linear_consumption(p)
    if d.rule == "limp_R":
        c -= Counter([d.goal.hyp])  # type: ignore[attr-defined]
    if d.rule == "with_R":
        c = linear_consumption(d.premises[0])
    return c
