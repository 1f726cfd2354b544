"""Command-line front end: ``check``, ``trace``, ``eval``, ``meta`` and ``docs``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .circuits import CircuitStore, Closure
from .clauses import ClauseDb, docs_table
from .evaluator import EvalError, eval_closure
from .harness import SUITES, SuiteConfig, run_suite
from .logic import DEFAULT_DEPTH, AtomG, IsQexp, Prover, Sequent, Typeof
from .qtypes import has_bang, qubit
from .sexpr import ParseError, parse_term, parse_type, print_term, print_type
from .syntax import FreeVar, fq, qvar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _free_decls(decls: Sequence[str]):
    """``name:type`` declarations to (name -> index, linear, intuitionistic)."""
    names: dict[str, int] = {}
    lin, intu = [], []
    for i, d in enumerate(decls):
        name, sep, ty = d.partition(":")
        if not sep or not name:
            raise UsageError(f"--free expects name:type, got {d!r}")
        t = parse_type(ty)
        names[name] = i
        (intu if has_bang(t) else lin).append((FreeVar(i), t))
    return names, lin, intu


def _contexts(term, lin, intu):
    qs = fq(term)
    icx = [IsQexp(x) for x, _ in lin + intu] + [Typeof(x, t) for x, t in intu]
    icx += [IsQexp(qvar(q)) for q in qs]
    lcx = [Typeof(x, t) for x, t in lin] + [Typeof(qvar(q), qubit) for q in qs]
    return tuple(icx), tuple(lcx)


def _emit(args, data: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text)


def cmd_check(args, always_trace: bool = False) -> int:
    names, lin, intu = _free_decls(args.free)
    term = parse_term(_read(args.file), names)
    ty = parse_type(args.type)
    icx, lcx = _contexts(term, lin, intu)
    store = CircuitStore()
    store.observe(term)
    db = ClauseDb(store)
    res = Prover(db, args.strategy).search(Sequent(args.depth, icx, lcx, AtomG(Typeof(term, ty))))
    d = res.derivation
    data = {"term": print_term(term), "type": print_type(ty), "status": res.status,
            "depth": args.depth}
    if d is not None:
        data.update(height=d.height, rules=sorted(set(d.rules_used())))
        text = (f"ok: {print_term(term)} : {print_type(ty)}\n"
                f"derivation height {d.height}, rules: {' '.join(sorted(set(d.rules_used())))}")
        if args.trace or always_trace:
            data["derivation"] = d.to_dict()
            text += "\n" + d.to_text()
        _emit(args, data, text)
        return EXIT_OK
    if res.status == "unknown":
        msg = f"no proof within depth {args.depth}"
    else:
        msg = f"not derivable: search completed without a proof (depth {args.depth})"
    data["message"] = msg
    _emit(args, data, f"fail: {msg}")
    return EXIT_FAIL


def cmd_eval(args) -> int:
    term = parse_term(_read(args.file))
    store = CircuitStore()
    store.observe(term)
    init = store.named([], fq(term), "input")
    trace: Optional[list] = [] if args.trace else None
    try:
        cl, status = eval_closure(Closure(init.id, term), args.fuel, store, trace)
    except EvalError as e:
        _emit(args, {"status": "error", "message": str(e)}, f"error: {e}")
        return EXIT_FAIL
    data = {"status": status, "term": print_term(cl.term), "circuit": cl.circuit,
            "inputs": list(store[cl.circuit].inputs), "outputs": list(store[cl.circuit].outputs)}
    lines = [f"{status}: {print_term(cl.term)}",
             f"circuit {cl.circuit}: inputs {list(store[cl.circuit].inputs)} "
             f"outputs {list(store[cl.circuit].outputs)}"]
    if trace is not None:
        data["trace"] = [{"rule": r, "term": print_term(c.term), "circuit": c.circuit}
                         for r, c in trace]
        lines[1:1] = [f"  {r:8} [{c.circuit}] {print_term(c.term)}" for r, c in trace]
    if args.dump_circuit:
        dump = store.dump(cl.circuit)
        data["circuit_dump"] = dump
        lines += dump
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if status == "value" else EXIT_FAIL


def cmd_meta(args) -> int:
    cfg = SuiteConfig(seed=args.seed, cases=args.cases, size=args.size, depth=args.depth)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(n, cfg) for n in names]
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=2, default=str))
    else:
        print("\n".join(r.to_text() for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_docs(args) -> int:
    rows = docs_table()
    if args.format == "json":
        print(json.dumps(rows, indent=2, default=str))
        return EXIT_OK
    width = max(len(r["clause"]) for r in rows)
    for r in rows:
        flag = " (reconstructed)" if r["reconstructed"] else ""
        print(f"{r['judgment']:9} {r['clause']:{width}}  {r['rule']}{flag}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="protoquipper",
                                description="Proto-Quipper typing and evaluation by proof search.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")

    for name, helptext in (("check", "prove a typing judgment"),
                           ("trace", "prove a typing judgment and print the derivation")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file", help="term source file, or - for stdin")
        sp.add_argument("--type", required=True, help="goal type, e.g. '(arrow qubit qubit)'")
        sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        sp.add_argument("--free", action="append", default=[], metavar="NAME:TYPE",
                        help="declare a free variable; banged types are reusable")
        sp.add_argument("--strategy", choices=["lazy", "exhaustive"], default="lazy")
        sp.add_argument("--trace", action="store_true", help="print the derivation")
        common(sp)

    sp = sub.add_parser("eval", help="evaluate a closed term to a value")
    sp.add_argument("file")
    sp.add_argument("--fuel", type=int, default=10000)
    sp.add_argument("--trace", action="store_true", help="print every step")
    sp.add_argument("--dump-circuit", action="store_true")
    common(sp)

    sp = sub.add_parser("meta", help="run metatheory property suites")
    sp.add_argument("--suite", default="all", choices=["all", *SUITES])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=0, help="0 uses each suite's default")
    sp.add_argument("--size", type=int, default=12)
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    common(sp)

    sp = sub.add_parser("docs", help="list the clause database")
    common(sp)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    for flag in ("depth", "fuel", "cases", "size"):
        if getattr(args, flag, 1) is not None and getattr(args, flag, 1) < 0:
            print(f"error: --{flag} must be non-negative", file=sys.stderr)
            return EXIT_USAGE
    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command == "trace":
            return cmd_check(args, always_trace=True)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "meta":
            return cmd_meta(args)
        return cmd_docs(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
