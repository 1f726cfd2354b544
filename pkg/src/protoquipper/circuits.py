"""Symbolic circuits: a store of interface-annotated composition trees.

Nothing here knows about gates.  A circuit is an input wire list, an output
wire list and a tree recording how it was put together.  The store behaves as
a set of pure functions (``new``, ``append``, ``reverse``) by hash-consing:
asking twice for the same construction returns the same circuit id, which is
what lets proof search and the direct evaluator agree on ``[C', a']``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .qtypes import QType, Tensor, one, qubit, valid
from .syntax import Term, dest_prod, fq, fqu, fquc, mk_prod, qvar, quantum_data, star

__all__ = [
    "Binding", "Circuit", "Named", "Identity", "Seq", "Reversed", "CircuitStore",
    "Closure", "circ_in", "circ_out", "spec", "bind_match", "valid_closure",
    "CircuitError",
]


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Binding:
    """A finite injective map on quantum variable indices."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        src = [a for a, _ in self.pairs]
        dst = [b for _, b in self.pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise CircuitError(f"binding is not a bijection: {self.pairs}")

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple[int, int]]) -> "Binding":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(sorted(items)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    @property
    def domain(self) -> list[int]:
        return [a for a, _ in self.pairs]

    @property
    def codomain(self) -> list[int]:
        return [b for _, b in self.pairs]

    def inverse(self) -> "Binding":
        return Binding.of((b, a) for a, b in self.pairs)

    def __call__(self, q: int) -> int:
        return self.as_dict().get(q, q)


@dataclass(frozen=True)
class Named:
    label: str = "gate"


@dataclass(frozen=True)
class Identity:
    wires: tuple[int, ...]


@dataclass(frozen=True)
class Seq:
    left: "Circuit"
    right: "Circuit"
    wiring: Binding


@dataclass(frozen=True)
class Reversed:
    of: "Circuit"


Body = Union[Named, Identity, Seq, Reversed]


@dataclass(frozen=True)
class Circuit:
    id: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    body: Body = field(compare=False)

    def __post_init__(self) -> None:
        if len(set(self.inputs)) != len(self.inputs):
            raise CircuitError(f"duplicate input wires {self.inputs}")
        if len(set(self.outputs)) != len(self.outputs):
            raise CircuitError(f"duplicate output wires {self.outputs}")


def circ_in(c: Circuit) -> list[int]:
    return list(c.inputs)


def circ_out(c: Circuit) -> list[int]:
    return list(c.outputs)


@dataclass(frozen=True)
class Closure:
    circuit: int
    term: Term


class CircuitStore:
    """Circuits of one evaluation session plus its fresh-name counters."""

    def __init__(self) -> None:
        self.circuits: dict[int, Circuit] = {}
        self._next_id = 0
        self._next_qvar = 0
        self._new_memo: dict[tuple[int, ...], int] = {}
        self._append_memo: dict[tuple[int, int, Binding], tuple[int, Binding]] = {}
        self._rev_memo: dict[int, int] = {}

    # -- bookkeeping -----------------------------------------------------
    def __contains__(self, cid: int) -> bool:
        return cid in self.circuits

    def __getitem__(self, cid: int) -> Circuit:
        try:
            return self.circuits[cid]
        except KeyError:
            raise CircuitError(f"unknown circuit id {cid}") from None

    def _register(self, inputs: Iterable[int], outputs: Iterable[int], body: Body) -> Circuit:
        c = Circuit(self._next_id, tuple(inputs), tuple(outputs), body)
        self.circuits[c.id] = c
        self._next_id += 1
        self.reserve_qvars(list(c.inputs) + list(c.outputs))
        return c

    def reserve_qvars(self, qs: Iterable[int]) -> None:
        for q in qs:
            if q >= self._next_qvar:
                self._next_qvar = q + 1

    def observe(self, t: Term) -> None:
        """Make later fresh names avoid every quantum variable in ``t``."""
        self.reserve_qvars(fquc(t))

    def fresh_qvar(self) -> int:
        q = self._next_qvar
        self._next_qvar += 1
        return q

    def circ_in(self, cid: int) -> list[int]:
        return circ_in(self[cid])

    def circ_out(self, cid: int) -> list[int]:
        return circ_out(self[cid])

    # -- constructions -----------------------------------------------------
    def named(self, inputs: Iterable[int], outputs: Iterable[int], label: str = "gate") -> Circuit:
        return self._register(inputs, outputs, Named(label))

    def new(self, wires: Iterable[int]) -> Circuit:
        key = tuple(wires)
        if len(set(key)) != len(key):
            raise CircuitError(f"duplicate wires {key}")
        if key not in self._new_memo:
            self._new_memo[key] = self._register(key, key, Identity(key)).id
        return self.circuits[self._new_memo[key]]

    def append(self, c: Circuit, d: Circuit, b: Binding) -> tuple[Circuit, Binding]:
        """Feed outputs of ``c`` (domain of ``b``) into the inputs of ``d``.

        Returns the composite and the renaming applied to ``d``'s outputs.
        """
        key = (c.id, d.id, b)
        if key in self._append_memo:
            cid, b2 = self._append_memo[key]
            return self.circuits[cid], b2
        if not set(b.domain) <= set(c.outputs):
            raise CircuitError(f"binding domain {b.domain} not within outputs {c.outputs}")
        if sorted(b.codomain) != sorted(d.inputs):
            raise CircuitError(f"binding codomain {b.codomain} is not the inputs {d.inputs}")
        renaming = Binding.of((o, self.fresh_qvar()) for o in d.outputs)
        ren = renaming.as_dict()
        kept = [o for o in c.outputs if o not in set(b.domain)]
        out = kept + [ren[o] for o in d.outputs]
        comp = self._register(c.inputs, out, Seq(c, d, b))
        self._append_memo[key] = (comp.id, renaming)
        return comp, renaming

    def reverse(self, c: Circuit) -> Circuit:
        if c.id not in self._rev_memo:
            self._rev_memo[c.id] = self._register(c.outputs, c.inputs, Reversed(c)).id
        return self.circuits[self._rev_memo[c.id]]

    # -- output ------------------------------------------------------------
    def dump(self, cid: int) -> list[str]:
        lines: list[str] = []

        def node(c: Circuit, indent: str) -> None:
            b = c.body
            if isinstance(b, Identity):
                lines.append(f"{indent}identity {' '.join(map(str, b.wires))}".rstrip())
            elif isinstance(b, Named):
                lines.append(f"{indent}named {c.id} in={list(c.inputs)} out={list(c.outputs)}")
            elif isinstance(b, Reversed):
                lines.append(f"{indent}reversed {c.id} in={list(c.inputs)} out={list(c.outputs)}")
                node(b.of, indent + "  ")
            else:
                pairs = " ".join(f"({x} {y})" for x, y in b.wiring.pairs)
                lines.append(f"{indent}seq {b.left.id} {b.right.id} bind=[{pairs}]")
                node(b.left, indent + "  ")
                node(b.right, indent + "  ")

        node(self[cid], "")
        return lines


def spec(n: int, t: QType) -> Term:
    """Canonical quantum-data term of type ``t`` using fresh indices from ``n`` up."""
    if not valid(t):
        raise CircuitError(f"no specimen for non quantum data type {t!r}")
    counter = [n]

    def go(u: QType) -> Term:
        if u == one:
            return star
        if u == qubit:
            counter[0] += 1
            return qvar(counter[0] - 1)
        assert isinstance(u, Tensor)
        left = go(u.left)
        return mk_prod(left, go(u.right))

    return go(t)


def bind_match(u: Term, v: Term) -> Optional[Binding]:
    """The wire bijection taking quantum data ``u`` onto same-shaped ``v``."""
    if not (quantum_data(u) and quantum_data(v)):
        raise CircuitError("bind_match needs quantum data terms")
    pairs: list[tuple[int, int]] = []

    def go(x: Term, y: Term) -> bool:
        px, py = dest_prod(x), dest_prod(y)
        if px is not None or py is not None:
            if px is None or py is None:
                return False
            return go(px[0], py[0]) and go(px[1], py[1])
        if x == star or y == star:
            return x == y
        pairs.append((x.c.arg, y.c.arg))  # type: ignore[attr-defined]
        return True

    if not go(u, v):
        return None
    try:
        return Binding.of(pairs)
    except CircuitError:
        return None


def _nodup(xs: list[int]) -> bool:
    return len(set(xs)) == len(xs)


def valid_closure(c: Circuit, a: Term, *, bound_nodup: bool = True) -> bool:
    """``fq(a)`` within the outputs of ``c`` and no repeated quantum variable.

    ``bound_nodup=False`` drops the check on circuit-bound names, which a
    boxing step necessarily repeats (the specimen occurs as input and inside
    the body).
    """
    if not set(fq(a)) <= set(c.outputs):
        return False
    if not _nodup(fqu(a)):
        return False
    return _nodup(fquc(a)) if bound_nodup else True
