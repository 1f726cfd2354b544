"""Proto-Quipper typing and reduction as linear-logic proof search."""

from .qtypes import (
    QType, Base, Tensor, Arrow, Circ, Bang, qubit, one, bool_, valid, validT, subtype,
    const_type,
)
from .syntax import Term
from .logic import (
    Typeof, IsQexp, Reduct, AtomG, Top, Conj, And, Imp, LImp, All, Sequent, Derivation,
    Session, prove, search, prove_goal_list, enumerate_splits, check_derivation,
    DEFAULT_DEPTH,
)
from .circuits import CircuitStore, Closure
from .clauses import ClauseDb, clause_db, toimp, toimpexp
from .evaluator import step, step_via_sl, eval_closure

__all__ = [
    "QType", "Base", "Tensor", "Arrow", "Circ", "Bang", "qubit", "one", "bool_", "valid",
    "validT", "subtype", "const_type", "Term", "Typeof", "IsQexp", "Reduct", "AtomG", "Top",
    "Conj", "And", "Imp", "LImp", "All", "Sequent", "Derivation", "Session", "prove", "search",
    "prove_goal_list", "enumerate_splits", "check_derivation", "DEFAULT_DEPTH", "CircuitStore",
    "Closure", "ClauseDb", "clause_db", "toimp", "toimpexp", "step", "step_via_sl",
    "eval_closure",
]

__version__ = "0.1.0"
