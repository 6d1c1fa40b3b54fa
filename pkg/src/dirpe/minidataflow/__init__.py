"""Mini imperative language: parser, data-flow graphs, reordering fuzzer."""

from .parser import (
    Assign,
    Binary,
    Call,
    Const,
    If,
    Program,
    Return,
    Unary,
    Var,
    parse,
    render,
)
from .flowgraph import COMMUTATIVE_OPS, build_graph
from .canonical import canonical_form, is_isomorphic
from .reorder import count_reorderings, enumerate_reorderings

__all__ = [
    "Assign",
    "Binary",
    "Call",
    "COMMUTATIVE_OPS",
    "Const",
    "If",
    "Program",
    "Return",
    "Unary",
    "Var",
    "build_graph",
    "canonical_form",
    "count_reorderings",
    "enumerate_reorderings",
    "is_isomorphic",
    "parse",
    "render",
]
