"""Nameless term representation for Proto-Quipper.

Terms are trees over five node kinds (constants, free variables, bound de
Bruijn indices, binary application and abstraction).  Every object-language
form is a fixed arrangement of these nodes built by the ``mk_*`` helpers, and
taken apart again by the matching ``dest_*`` helpers.

A *scoped body* is a plain :class:`Term` that may mention ``BoundVar(0)`` (or
``BoundVar(0)``/``BoundVar(1)`` for two-binder bodies) at the top level; it is
the nameless counterpart of a meta-level function ``qexp -> qexp``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

from .qtypes import QType

__all__ = [
    "Const", "Term", "Con", "FreeVar", "BoundVar", "App2", "Abs",
    "QABS", "QAPP", "QPROD", "QLET", "SLET", "QCIRC", "QIF",
    "UNBOX", "REV", "TRUE", "FALSE", "STAR", "box_const", "qvar_const", "crcons",
    "qvar", "star", "true", "false", "unbox", "rev", "box",
    "mk_app", "mk_prod", "mk_if", "mk_slet", "mk_circ", "mk_fun", "mk_let",
    "dest_app", "dest_prod", "dest_if", "dest_slet", "dest_circ", "dest_fun", "dest_let",
    "fun", "let_pair", "abstract", "instantiate", "instantiate2", "open_at",
    "proper", "well_scoped", "fq", "fqu", "fquc", "quantum_data", "is_value",
    "newqvar", "get_boxed", "qvars", "free_vars", "max_free_var", "subterms",
    "rename_qvars",
]


@dataclass(frozen=True)
class Const:
    kind: str
    arg: Union[None, int, QType] = None

    def __repr__(self) -> str:
        if self.arg is None:
            return self.kind
        return f"{self.kind}({self.arg!r})"


QABS = Const("qABS")
QAPP = Const("qAPP")
QPROD = Const("qPROD")
QLET = Const("qLET")
SLET = Const("sLET")
QCIRC = Const("qCIRC")
QIF = Const("qIF")
UNBOX = Const("UNBOX")
REV = Const("REV")
TRUE = Const("TRUE")
FALSE = Const("FALSE")
STAR = Const("STAR")


def box_const(t: QType) -> Const:
    return Const("BOX", t)


def qvar_const(n: int) -> Const:
    return Const("Qvar", n)


def crcons(n: int) -> Const:
    return Const("Crcons", n)


class Term:
    """Base class of the five node kinds.  Instances are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True, repr=False)
class Con(Term):
    c: Const

    def __repr__(self) -> str:
        return f"Con({self.c!r})"


@dataclass(frozen=True, repr=False)
class FreeVar(Term):
    n: int

    def __repr__(self) -> str:
        return f"FreeVar({self.n})"


@dataclass(frozen=True, repr=False)
class BoundVar(Term):
    k: int

    def __repr__(self) -> str:
        return f"BoundVar({self.k})"


@dataclass(frozen=True, repr=False)
class App2(Term):
    left: Term
    right: Term

    def __repr__(self) -> str:
        return f"App2({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Abs(Term):
    body: Term

    def __repr__(self) -> str:
        return f"Abs({self.body!r})"


def qvar(n: int) -> Term:
    return Con(qvar_const(n))


def box(t: QType) -> Term:
    return Con(box_const(t))


star = Con(STAR)
true = Con(TRUE)
false = Con(FALSE)
unbox = Con(UNBOX)
rev = Con(REV)


# ---------------------------------------------------------------------------
# scoping

def well_scoped(t: Term, levels: int = 0) -> bool:
    """True iff no bound index escapes ``levels`` enclosing binders."""
    if isinstance(t, BoundVar):
        return t.k < levels
    if isinstance(t, App2):
        return well_scoped(t.left, levels) and well_scoped(t.right, levels)
    if isinstance(t, Abs):
        return well_scoped(t.body, levels + 1)
    return True


def proper(t: Term) -> bool:
    return well_scoped(t, 0)


def open_at(t: Term, arg: Term, level: int, depth: int = 0) -> Term:
    """Replace index ``level`` (seen from the top of ``t``) by the proper term ``arg``.

    Indices above ``level`` are lowered by one, so the binder being opened
    disappears.  ``arg`` has no dangling indices, so it needs no shifting.
    """
    if isinstance(t, BoundVar):
        k = t.k
        if k < depth:
            return t
        if k == depth + level:
            return arg
        if k > depth + level:
            return BoundVar(k - 1)
        return t
    if isinstance(t, App2):
        left = open_at(t.left, arg, level, depth)
        right = open_at(t.right, arg, level, depth)
        if left is t.left and right is t.right:
            return t
        return App2(left, right)
    if isinstance(t, Abs):
        body = open_at(t.body, arg, level, depth + 1)
        return t if body is t.body else Abs(body)
    return t


def instantiate(body: Term, arg: Term) -> Term:
    """Substitute ``arg`` for the open binder of a one-level scoped body."""
    return open_at(body, arg, 0)


def instantiate2(body: Term, x: Term, y: Term) -> Term:
    """Open a two-level body (``x`` is index 1, ``y`` index 0)."""
    return open_at(open_at(body, x, 1), y, 0)


def abstract(t: Term, var: Term, depth: int = 0) -> Term:
    """Turn every occurrence of ``var`` into the index of a new outermost binder."""
    if t == var:
        return BoundVar(depth)
    if isinstance(t, App2):
        return App2(abstract(t.left, var, depth), abstract(t.right, var, depth))
    if isinstance(t, Abs):
        return Abs(abstract(t.body, var, depth + 1))
    return t


# ---------------------------------------------------------------------------
# smart constructors / destructors

def _app2(*parts: Term) -> Term:
    out = parts[0]
    for p in parts[1:]:
        out = App2(out, p)
    return out


def mk_app(e1: Term, e2: Term) -> Term:
    return _app2(Con(QAPP), e1, e2)


def mk_prod(e1: Term, e2: Term) -> Term:
    return _app2(Con(QPROD), e1, e2)


def mk_if(c: Term, a: Term, b: Term) -> Term:
    return _app2(Con(QIF), c, a, b)


def mk_slet(body: Term, scrutinee: Term) -> Term:
    """``let * = scrutinee in body``; argument order follows ``Slet a b``."""
    return _app2(Con(SLET), body, scrutinee)


def mk_circ(t: Term, i: int, a: Term) -> Term:
    return _app2(Con(QCIRC), t, Con(crcons(i)), a)


def mk_fun(body: Term) -> Term:
    if not well_scoped(body, 1):
        raise ValueError("function body has dangling indices")
    return App2(Con(QABS), Abs(body))


def mk_let(body: Term, e: Term) -> Term:
    """``let <x, y> = e in body``; in ``body`` x is index 1 and y index 0."""
    if not well_scoped(body, 2):
        raise ValueError("let body has dangling indices")
    return App2(Con(QLET), App2(Abs(Abs(body)), e))


def _spine(t: Term, n: int) -> Optional[list[Term]]:
    """Split ``App2(...App2(head, a1)..., an)`` into ``[head, a1, ..., an]``."""
    args: list[Term] = []
    for _ in range(n):
        if not isinstance(t, App2):
            return None
        args.append(t.right)
        t = t.left
    args.append(t)
    args.reverse()
    return args


def _dest(t: Term, const: Const, n: int) -> Optional[tuple[Term, ...]]:
    parts = _spine(t, n)
    if parts is None or parts[0] != Con(const):
        return None
    return tuple(parts[1:])


def dest_app(t: Term) -> Optional[tuple[Term, Term]]:
    return _dest(t, QAPP, 2)  # type: ignore[return-value]


def dest_prod(t: Term) -> Optional[tuple[Term, Term]]:
    return _dest(t, QPROD, 2)  # type: ignore[return-value]


def dest_if(t: Term) -> Optional[tuple[Term, Term, Term]]:
    return _dest(t, QIF, 3)  # type: ignore[return-value]


def dest_slet(t: Term) -> Optional[tuple[Term, Term]]:
    return _dest(t, SLET, 2)  # type: ignore[return-value]


def dest_circ(t: Term) -> Optional[tuple[Term, int, Term]]:
    parts = _dest(t, QCIRC, 3)
    if parts is None:
        return None
    tin, cid, a = parts
    if not (isinstance(cid, Con) and cid.c.kind == "Crcons"):
        return None
    return tin, cid.c.arg, a  # type: ignore[return-value]


def dest_fun(t: Term) -> Optional[Term]:
    if (isinstance(t, App2) and t.left == Con(QABS) and isinstance(t.right, Abs)):
        return t.right.body
    return None


def dest_let(t: Term) -> Optional[tuple[Term, Term]]:
    if not (isinstance(t, App2) and t.left == Con(QLET) and isinstance(t.right, App2)):
        return None
    lam, e = t.right.left, t.right.right
    if isinstance(lam, Abs) and isinstance(lam.body, Abs):
        return lam.body.body, e
    return None


# HOAS-flavoured builders: write ``fun(lambda x: mk_app(x, x))``.  The
# placeholder variables live far above any index a real session hands out.
_PLACEHOLDER_BASE = 1 << 40
_placeholder_next = [_PLACEHOLDER_BASE]


def _placeholder() -> Term:
    _placeholder_next[0] += 1
    return FreeVar(_placeholder_next[0])


def fun(f: Callable[[Term], Term]) -> Term:
    x = _placeholder()
    return mk_fun(abstract(f(x), x))


def let_pair(e: Term, f: Callable[[Term, Term], Term]) -> Term:
    x, y = _placeholder(), _placeholder()
    return mk_let(_abstract2(f(x, y), x, y), e)


def _abstract2(t: Term, x: Term, y: Term, depth: int = 0) -> Term:
    if t == x:
        return BoundVar(depth + 1)
    if t == y:
        return BoundVar(depth)
    if isinstance(t, App2):
        return App2(_abstract2(t.left, x, y, depth), _abstract2(t.right, x, y, depth))
    if isinstance(t, Abs):
        return Abs(_abstract2(t.body, x, y, depth + 1))
    return t


# ---------------------------------------------------------------------------
# quantum variables

def _qvars(t: Term, out: list[int], inside_circ: bool) -> None:
    # ``inside_circ`` True means circuit bodies are traversed too (FQUC).
    if isinstance(t, Con):
        if t.c.kind == "Qvar":
            out.append(t.c.arg)  # type: ignore[arg-type]
        return
    if isinstance(t, App2):
        if not inside_circ and dest_circ(t) is not None:
            return
        _qvars(t.left, out, inside_circ)
        _qvars(t.right, out, inside_circ)
    elif isinstance(t, Abs):
        _qvars(t.body, out, inside_circ)


def fqu(t: Term) -> list[int]:
    out: list[int] = []
    _qvars(t, out, False)
    return out


def fquc(t: Term) -> list[int]:
    out: list[int] = []
    _qvars(t, out, True)
    return out


def fq(t: Term) -> list[int]:
    return list(dict.fromkeys(fqu(t)))


qvars = fquc


def newqvar(t: Term) -> int:
    vs = fquc(t)
    return max(vs) + 1 if vs else 0


def rename_qvars(t: Term, ren: dict[int, int]) -> Term:
    if isinstance(t, Con):
        if t.c.kind == "Qvar" and t.c.arg in ren:
            return qvar(ren[t.c.arg])  # type: ignore[index]
        return t
    if isinstance(t, App2):
        return App2(rename_qvars(t.left, ren), rename_qvars(t.right, ren))
    if isinstance(t, Abs):
        return Abs(rename_qvars(t.body, ren))
    return t


def free_vars(t: Term) -> list[int]:
    out: list[int] = []

    def walk(u: Term) -> None:
        if isinstance(u, FreeVar):
            if u.n not in out:
                out.append(u.n)
        elif isinstance(u, App2):
            walk(u.left)
            walk(u.right)
        elif isinstance(u, Abs):
            walk(u.body)

    walk(t)
    return out


def max_free_var(t: Term) -> int:
    """Largest FreeVar index in ``t``, or -1."""
    vs = [n for n in free_vars(t) if n < _PLACEHOLDER_BASE]
    return max(vs, default=-1)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App2):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, Abs):
        yield from subterms(t.body)


# ---------------------------------------------------------------------------
# syntactic classes

def quantum_data(t: Term) -> bool:
    if isinstance(t, Con):
        return t.c.kind == "Qvar" or t.c == STAR
    p = dest_prod(t)
    return p is not None and quantum_data(p[0]) and quantum_data(p[1])


_VALUE_CONSTS = {"TRUE", "FALSE", "STAR", "BOX", "UNBOX", "REV", "Qvar"}


def is_value(t: Term) -> bool:
    if isinstance(t, FreeVar):
        return True
    if isinstance(t, Con):
        return t.c.kind in _VALUE_CONSTS
    c = dest_circ(t)
    if c is not None:
        return quantum_data(c[0]) and quantum_data(c[2])
    if dest_fun(t) is not None:
        return True
    p = dest_prod(t)
    if p is not None:
        return is_value(p[0]) and is_value(p[1])
    a = dest_app(t)
    if a is not None:
        return a[0] == unbox and is_value(a[1])
    return False


def get_boxed(t: Term) -> list[Term]:
    out = []
    for s in subterms(t):
        a = dest_app(s)
        if a is not None and isinstance(a[0], Con) and a[0].c.kind == "BOX":
            out.append(a[1])
    return out
