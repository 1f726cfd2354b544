"""Surface syntax: s-expressions for terms and types, with a matching printer."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .qtypes import Arrow, Bang, Circ, QType, Tensor, bool_, one, qubit
from .syntax import (
    BoundVar, Con, FreeVar, Term, abstract, box, dest_app, dest_circ, dest_fun,
    dest_if, dest_let, dest_prod, dest_slet, false, mk_app, mk_circ, mk_fun, mk_if, mk_let,
    mk_prod, mk_slet, qvar, rev, star, true, unbox, _abstract2,
)

__all__ = ["ParseError", "parse_term", "parse_type", "print_term", "print_type", "read_sexpr"]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0) -> None:
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line, self.col = line, col


@dataclass
class Sym:
    name: str
    line: int
    col: int


@dataclass
class SList:
    items: list
    line: int
    col: int


SExpr = Union[Sym, SList]

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def read_sexpr(text: str) -> SExpr:
    stack: list[SList] = []
    result: Optional[SExpr] = None
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        assert m is not None
        tok = m.group()
        here = (line, col)
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
        if tok.isspace() or tok.startswith(";"):
            continue
        if result is not None and not stack:
            raise ParseError("trailing input after expression", *here)
        if tok == "(":
            stack.append(SList([], *here))
            continue
        if tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", *here)
            node: SExpr = stack.pop()
        else:
            node = Sym(tok, *here)
        if stack:
            stack[-1].items.append(node)
        else:
            result = node
    if stack:
        raise ParseError("unclosed '('", stack[-1].line, stack[-1].col)
    if result is None:
        raise ParseError("empty input", 1, 1)
    return result


# ---------------------------------------------------------------------------
# types

_BASES = {"qubit": qubit, "one": one, "bool": bool_}
_TYPE_CTORS = {"tensor": Tensor, "arrow": Arrow, "circ": Circ}


def _type(e: SExpr) -> QType:
    if isinstance(e, Sym):
        if e.name in _BASES:
            return _BASES[e.name]
        raise ParseError(f"unknown type {e.name!r}", e.line, e.col)
    if not e.items or not isinstance(e.items[0], Sym):
        raise ParseError("expected a type constructor", e.line, e.col)
    head = e.items[0].name
    args = e.items[1:]
    if head in _TYPE_CTORS:
        if len(args) != 2:
            raise ParseError(f"{head} takes two types", e.line, e.col)
        return _TYPE_CTORS[head](_type(args[0]), _type(args[1]))
    if head == "bang":
        if len(args) != 1:
            raise ParseError("bang takes one type", e.line, e.col)
        return Bang(_type(args[0]))
    if head in _BASES and not args:
        return _BASES[head]
    raise ParseError(f"unknown type constructor {head!r}", e.line, e.col)


def parse_type(text: str) -> QType:
    return _type(read_sexpr(text))


def print_type(t: QType) -> str:
    return repr(t)


# ---------------------------------------------------------------------------
# terms

_ATOMS = {"star": star, "true": true, "false": false, "unbox": unbox, "rev": rev}
_KEYWORDS = set(_ATOMS) | {"fun", "app", "qvar", "circ", "box", "let", "slet", "if", "prod", "var"}


def _nat(e: SExpr) -> int:
    if isinstance(e, Sym) and e.name.isdigit():
        return int(e.name)
    raise ParseError("expected a natural number", e.line, e.col)


def _name(e: SExpr) -> str:
    if isinstance(e, Sym) and e.name not in _KEYWORDS and not e.name[0].isdigit():
        return e.name
    raise ParseError("expected a variable name", e.line, e.col)


class _TermReader:
    def __init__(self, free: Optional[dict[str, int]]) -> None:
        self.free = dict(free or {})
        self.fresh = 1 << 41

    def _local(self) -> Term:
        self.fresh += 1
        return FreeVar(self.fresh)

    def term(self, e: SExpr, scope: dict[str, Term]) -> Term:
        if isinstance(e, Sym):
            if e.name in _ATOMS:
                return _ATOMS[e.name]
            if e.name in scope:
                return scope[e.name]
            if e.name in self.free:
                return FreeVar(self.free[e.name])
            raise ParseError(f"unbound variable {e.name!r}", e.line, e.col)
        if not e.items or not isinstance(e.items[0], Sym):
            raise ParseError("expected a keyword after '('", e.line, e.col)
        head, args = e.items[0].name, e.items[1:]

        def arity(n: int) -> None:
            if len(args) != n:
                raise ParseError(f"{head} takes {n} arguments, got {len(args)}", e.line, e.col)

        if head == "fun":
            arity(2)
            params = args[0]
            if not (isinstance(params, SList) and len(params.items) == 1):
                raise ParseError("fun takes exactly one parameter: (fun (x) body)", e.line, e.col)
            name = _name(params.items[0])
            v = self._local()
            body = self.term(args[1], {**scope, name: v})
            return mk_fun(abstract(body, v))
        if head == "let":
            arity(2)
            bind = args[0]
            ok = (isinstance(bind, SList) and len(bind.items) == 2
                  and isinstance(bind.items[0], SList) and len(bind.items[0].items) == 2)
            if not ok:
                raise ParseError("let expects ((x y) e) then a body", e.line, e.col)
            x, y = (_name(n) for n in bind.items[0].items)
            scrut = self.term(bind.items[1], scope)
            vx, vy = self._local(), self._local()
            body = self.term(args[1], {**scope, x: vx, y: vy})
            return mk_let(_abstract2(body, vx, vy), scrut)
        if head == "app":
            arity(2)
            return mk_app(self.term(args[0], scope), self.term(args[1], scope))
        if head == "prod":
            arity(2)
            return mk_prod(self.term(args[0], scope), self.term(args[1], scope))
        if head == "slet":
            arity(2)
            return mk_slet(self.term(args[1], scope), self.term(args[0], scope))
        if head == "if":
            arity(3)
            return mk_if(*(self.term(a, scope) for a in args))
        if head == "qvar":
            arity(1)
            return qvar(_nat(args[0]))
        if head == "var":
            arity(1)
            return FreeVar(_nat(args[0]))
        if head == "circ":
            arity(3)
            return mk_circ(self.term(args[0], scope), _nat(args[1]), self.term(args[2], scope))
        if head == "box":
            if len(args) not in (1, 2):
                raise ParseError("box takes a type and optionally an argument", e.line, e.col)
            ty = args[0]
            if isinstance(ty, SList) and len(ty.items) == 1:
                ty = ty.items[0]
            const = box(_type(ty))
            return const if len(args) == 1 else mk_app(const, self.term(args[1], scope))
        raise ParseError(f"unknown form {head!r}", e.line, e.col)


def parse_term(text: str, free: Optional[dict[str, int]] = None) -> Term:
    """Parse a term; names in ``free`` become the given free variables."""
    return _TermReader(free).term(read_sexpr(text), {})


def print_term(t: Term) -> str:
    return _print(t, [])


def _print(t: Term, names: list[str]) -> str:
    # names[-1] is the innermost binder
    if isinstance(t, Con):
        k = t.c.kind
        if k == "Qvar":
            return f"(qvar {t.c.arg})"
        if k == "BOX":
            return f"(box ({print_type(t.c.arg)}))"  # type: ignore[arg-type]
        for name, atom in _ATOMS.items():
            if atom == t:
                return name
        raise ValueError(f"constant {t.c!r} has no surface syntax")
    if isinstance(t, FreeVar):
        return f"(var {t.n})"
    if isinstance(t, BoundVar):
        if t.k >= len(names):
            raise ValueError("dangling bound variable")
        return names[-1 - t.k]
    body = dest_fun(t)
    if body is not None:
        x = f"x{len(names)}"
        return f"(fun ({x}) {_print(body, names + [x])})"
    lt = dest_let(t)
    if lt is not None:
        x, y = f"x{len(names)}", f"x{len(names) + 1}"
        return f"(let (({x} {y}) {_print(lt[1], names)}) {_print(lt[0], names + [x, y])})"
    c = dest_circ(t)
    if c is not None:
        return f"(circ {_print(c[0], names)} {c[1]} {_print(c[2], names)})"
    i = dest_if(t)
    if i is not None:
        return "(if " + " ".join(_print(x, names) for x in i) + ")"
    a = dest_app(t)
    if a is not None:
        f, v = a
        if isinstance(f, Con) and f.c.kind == "BOX":
            return f"(box ({print_type(f.c.arg)}) {_print(v, names)})"  # type: ignore[arg-type]
        return f"(app {_print(f, names)} {_print(v, names)})"
    p = dest_prod(t)
    if p is not None:
        return f"(prod {_print(p[0], names)} {_print(p[1], names)})"
    s = dest_slet(t)
    if s is not None:
        return f"(slet {_print(s[1], names)} {_print(s[0], names)})"
    raise ValueError("term is not in the object language")
