"""cctab: tabled evaluation of a Prolog subset via continuation-call translation.

The pieces compose as a pipeline:

    parse_program -> find_bridges -> translate -> Engine.solve

with bottom_up_eval as an independent ground-truth oracle for answer sets.
"""

from .bridges import CallGraph, build_call_graph, find_bridges
from .engine import BindingStore, eval_builtin, solve, unify
from .errors import (
    Error,
    ExistenceError,
    InstantiationError,
    LoadError,
    ParseError,
    RangeRestrictionError,
    ResourceLimitError,
    TablingError,
    TranslateError,
    TypeMismatchError,
)
from .fixtures import gen_fixture
from .oracle import bottom_up_eval, compare_answer_sets
from .syntax import (
    parse_program,
    parse_query,
    parse_term,
    print_clause,
    print_program,
    print_term,
)
from .tabling import Counters, Engine, TableSpace
from .terms import (
    Atom,
    Clause,
    Int,
    PredId,
    Program,
    Struct,
    Term,
    Var,
    canonical_variant,
    mk_list,
)
from .translate import Mode, get_lbinds, split_following, trans_body, translate

__all__ = [
    "Atom",
    "BindingStore",
    "CallGraph",
    "Clause",
    "Counters",
    "Engine",
    "Error",
    "ExistenceError",
    "InstantiationError",
    "Int",
    "LoadError",
    "Mode",
    "ParseError",
    "PredId",
    "Program",
    "RangeRestrictionError",
    "ResourceLimitError",
    "Struct",
    "TableSpace",
    "TablingError",
    "TranslateError",
    "Term",
    "TypeMismatchError",
    "Var",
    "bottom_up_eval",
    "build_call_graph",
    "canonical_variant",
    "compare_answer_sets",
    "eval_builtin",
    "find_bridges",
    "gen_fixture",
    "get_lbinds",
    "mk_list",
    "parse_program",
    "parse_query",
    "parse_term",
    "print_clause",
    "print_program",
    "print_term",
    "solve",
    "split_following",
    "trans_body",
    "translate",
    "unify",
]
