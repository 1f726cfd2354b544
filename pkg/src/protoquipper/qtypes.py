"""Proto-Quipper types, the two validity predicates, and subtyping."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

__all__ = [
    "QType", "Base", "Tensor", "Arrow", "Circ", "Bang",
    "qubit", "one", "bool_", "valid", "validT", "subtype", "const_type",
    "has_bang", "unbang", "type_depth", "all_types", "subtrees",
]


class QType:
    __slots__ = ()


@dataclass(frozen=True, repr=False)
class Base(QType):
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, repr=False)
class Tensor(QType):
    left: QType
    right: QType

    def __repr__(self) -> str:
        return f"(tensor {self.left!r} {self.right!r})"


@dataclass(frozen=True, repr=False)
class Arrow(QType):
    left: QType
    right: QType

    def __repr__(self) -> str:
        return f"(arrow {self.left!r} {self.right!r})"


@dataclass(frozen=True, repr=False)
class Circ(QType):
    left: QType
    right: QType

    def __repr__(self) -> str:
        return f"(circ {self.left!r} {self.right!r})"


@dataclass(frozen=True, repr=False)
class Bang(QType):
    inner: QType

    def __repr__(self) -> str:
        return f"(bang {self.inner!r})"


qubit = Base("qubit")
one = Base("one")
bool_ = Base("bool")

BASES = (qubit, one, bool_)


def has_bang(t: QType) -> bool:
    return isinstance(t, Bang)


def unbang(t: QType) -> QType:
    return t.inner if isinstance(t, Bang) else t


@lru_cache(maxsize=None)
def valid(t: QType) -> bool:
    """Quantum data types: qubit, one and tensors of them."""
    if t == qubit or t == one:
        return True
    if isinstance(t, Tensor):
        return valid(t.left) and valid(t.right)
    return False


def _validT_unbanged(t: QType) -> bool:
    if isinstance(t, Base):
        return True
    if isinstance(t, (Tensor, Arrow)):
        return validT(t.left) and validT(t.right)
    if isinstance(t, Circ):
        return valid(t.left) and valid(t.right)
    return False


@lru_cache(maxsize=None)
def validT(t: QType) -> bool:
    """General Proto-Quipper types, with at most one leading bang per level."""
    if isinstance(t, Bang):
        return _validT_unbanged(t.inner)
    return _validT_unbanged(t)


def subtype(a: QType, b: QType) -> bool:
    if isinstance(a, Bang):
        # BangSub1 / BangSub2 both need validT (bang A'), i.e. A' unbanged.
        if not validT(a):
            return False
        inner = a.inner
        if isinstance(b, Bang):
            return subtype(inner, b.inner)
        return subtype(inner, b)
    if isinstance(b, Bang):
        return False
    if isinstance(a, Base):
        return a == b
    if isinstance(a, Tensor):
        return (isinstance(b, Tensor) and subtype(a.left, b.left)
                and subtype(a.right, b.right))
    if isinstance(a, Arrow):
        return (isinstance(b, Arrow) and subtype(b.left, a.left)
                and subtype(a.right, b.right))
    if isinstance(a, Circ):
        return (isinstance(b, Circ) and validT(a) and validT(b)
                and subtype(b.left, a.left) and subtype(a.right, b.right))
    return False


def const_type(kind: str, t: QType, u: QType, box_type: QType | None = None) -> QType:
    """The type of ``box``/``unbox``/``rev`` at quantum data types ``t`` and ``u``.

    For ``box`` the superscript type is ``t`` itself; ``box_type`` is accepted
    for symmetry with the term-level constant and must equal ``t`` if given.
    """
    if not (valid(t) and valid(u)):
        raise ValueError(f"const_type needs quantum data types, got {t!r}, {u!r}")
    if kind == "box":
        if box_type is not None and box_type != t:
            raise ValueError("box superscript does not match input type")
        return Arrow(Bang(Arrow(t, u)), Bang(Circ(t, u)))
    if kind == "unbox":
        return Arrow(Circ(t, u), Bang(Arrow(t, u)))
    if kind == "rev":
        return Arrow(Circ(t, u), Bang(Circ(u, t)))
    raise ValueError(f"unknown circuit constant {kind!r}")


def type_depth(t: QType) -> int:
    if isinstance(t, Base):
        return 1
    if isinstance(t, Bang):
        return 1 + type_depth(t.inner)
    return 1 + max(type_depth(t.left), type_depth(t.right))  # type: ignore[attr-defined]


def all_types(depth: int) -> list[QType]:
    """Every raw type tree of height at most ``depth`` (bases have height 1)."""
    if depth <= 0:
        return []
    if depth == 1:
        return list(BASES)
    smaller = all_types(depth - 1)
    out = list(BASES)
    for ctor in (Tensor, Arrow, Circ):
        out.extend(ctor(x, y) for x in smaller for y in smaller)
    out.extend(Bang(x) for x in smaller)
    return out


def subtrees(t: QType) -> Iterator[QType]:
    yield t
    if isinstance(t, Bang):
        yield from subtrees(t.inner)
    elif not isinstance(t, Base):
        yield from subtrees(t.left)  # type: ignore[attr-defined]
        yield from subtrees(t.right)  # type: ignore[attr-defined]
