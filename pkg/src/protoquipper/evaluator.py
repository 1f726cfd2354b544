"""Small-step call-by-value evaluation of closures ``[C, a]``.

:func:`step` applies the rules directly.  :func:`step_via_sl` finds the same
step by proving ``reduct`` goals against the clause database, which makes
the two an independent cross-check of each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .circuits import CircuitStore, Closure, valid_closure
from .clauses import (
    ClauseDb, box_result, reduct_candidates, rev_result, unbox_result,
)
from .logic import AtomG, DEFAULT_DEPTH, IsQexp, Prover, Reduct, Sequent
from .syntax import (
    Con, FreeVar, Term, dest_app, dest_circ, dest_fun, dest_if, dest_let, dest_prod,
    dest_slet, fq, free_vars, instantiate, instantiate2, is_value, mk_app, mk_circ, mk_if,
    mk_let, mk_prod, mk_slet, star, true, false,
)
from .qtypes import valid

__all__ = ["Stepped", "Value", "Stuck", "StepResult", "step", "eval_closure",
           "step_via_sl", "EvalError"]


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Stepped:
    next: Closure
    rule: str


@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: str


StepResult = Union[Stepped, Value, Stuck]


def _check(cl: Closure, store: CircuitStore) -> None:
    if cl.circuit not in store:
        raise EvalError(f"unknown circuit {cl.circuit}")
    if not valid_closure(store[cl.circuit], cl.term, bound_nodup=False):
        raise EvalError("invalid closure: free quantum variables outside the circuit outputs "
                        "or used twice")


def step(cl: Closure, store: CircuitStore) -> StepResult:
    _check(cl, store)
    if is_value(cl.term):
        return Value()
    r = _step(cl.circuit, cl.term, store)
    if isinstance(r, str):
        return Stuck(r)
    c2, a2, rule = r
    return Stepped(Closure(c2, a2), rule)


def _step(c: int, a: Term, store: CircuitStore):
    """``(C', a', rule)`` or a reason string when no rule applies."""
    i = dest_if(a)
    if i is not None:
        b, x, y = i
        if b == true:
            return c, x, "truer"
        if b == false:
            return c, y, "falser"
        if is_value(b):
            return "if on non-boolean value"
        r = _step(c, b, store)
        return r if isinstance(r, str) else (r[0], mk_if(r[1], x, y), "ifr")
    cc = dest_circ(a)
    if cc is not None:
        t, d, body = cc
        if is_value(body):
            return "circuit body is a value but not quantum data"
        if d not in store:
            return f"unknown circuit {d}"
        # scoping only: if-branches may legitimately share a qubit here
        if not set(fq(body)) <= set(store[d].outputs):
            return "circ body uses qubits outside its circuit outputs"
        r = _step(d, body, store)
        return r if isinstance(r, str) else (c, mk_circ(t, r[0], r[1]), "circr")
    p = dest_app(a)
    if p is not None:
        f, v = p
        if not is_value(f):
            r = _step(c, f, store)
            return r if isinstance(r, str) else (r[0], mk_app(r[1], v), "appl")
        if not is_value(v):
            r = _step(c, v, store)
            return r if isinstance(r, str) else (r[0], mk_app(f, r[1]), "appr")
        if isinstance(f, Con) and f.c.kind == "BOX":
            if not valid(f.c.arg):  # type: ignore[arg-type]
                return "box at a non quantum data type"
            return c, box_result(store, f.c.arg, v), "boxr"  # type: ignore[arg-type]
        body = dest_fun(f)
        if body is not None:
            return c, instantiate(body, v), "betar"
        rv = rev_result(store, a)
        if rv is not None:
            return c, rv, "revr"
        u = unbox_result(store, c, a)
        if u is not None:
            return u[0], u[1], "unboxr"
        return "application of a non-function value"
    p = dest_prod(a)
    if p is not None:
        x, y = p
        if not is_value(x):
            r = _step(c, x, store)
            return r if isinstance(r, str) else (r[0], mk_prod(r[1], y), "prodl")
        r = _step(c, y, store)
        return r if isinstance(r, str) else (r[0], mk_prod(x, r[1]), "prodr")
    lt = dest_let(a)
    if lt is not None:
        body, e = lt
        if not is_value(e):
            r = _step(c, e, store)
            return r if isinstance(r, str) else (r[0], mk_let(body, r[1]), "letc")
        pr = dest_prod(e)
        if pr is None:
            return "pair elimination on a non-pair value"
        return c, instantiate2(body, pr[0], pr[1]), "letr"
    s = dest_slet(a)
    if s is not None:
        body, e = s
        if not is_value(e):
            r = _step(c, e, store)
            return r if isinstance(r, str) else (r[0], mk_slet(body, r[1]), "sletc")
        if e == star:
            return c, body, "sletr"
        return "unit elimination on a non-unit value"
    if isinstance(a, FreeVar):
        return "free variable"
    return "no rule applies"


def eval_closure(cl: Closure, fuel: int, store: CircuitStore,
                 trace: Optional[list] = None) -> tuple[Closure, str]:
    """Run to a value; status is "value", "stuck: <reason>" or "fuel exhausted"."""
    for _ in range(fuel):
        r = step(cl, store)
        if isinstance(r, Value):
            return cl, "value"
        if isinstance(r, Stuck):
            return cl, f"stuck: {r.reason}"
        if trace is not None:
            trace.append((r.rule, r.next))
        cl = r.next
    if is_value(cl.term):
        return cl, "value"
    return cl, "fuel exhausted"


def step_via_sl(cl: Closure, db: ClauseDb, depth: int = DEFAULT_DEPTH,
                all_results: bool = False):
    """Find the step by proof search over ``reduct`` goals.

    The intuitionistic context holds ``is_qexp`` for every free term variable,
    which is the well-formedness context of the term.  With ``all_results``
    the list of every provable ``(rule, closure)`` is returned instead, which
    is how determinism is tested.
    """
    store = db.store
    _check(cl, store)
    if is_value(cl.term) and not all_results:
        return Value()
    icx = tuple(IsQexp(FreeVar(n)) for n in free_vars(cl.term))
    found = []
    seen = set()
    for c2, a2 in reduct_candidates(store, cl.circuit, cl.term):
        if (c2, a2) in seen:
            continue
        seen.add((c2, a2))
        goal = AtomG(Reduct(cl.circuit, cl.term, c2, a2))
        d = Prover(db, "exhaustive").search(Sequent(depth, icx, (), goal)).derivation
        if d is not None:
            found.append((d.rule[3:], Closure(c2, a2), d))
            if not all_results:
                break
    if all_results:
        return found
    if not found:
        return Stuck("no provable reduct goal")
    rule, nxt, _ = found[0]
    return Stepped(nxt, rule)
