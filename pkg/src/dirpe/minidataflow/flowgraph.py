"""Data-flow-centric graph construction for mini-language programs.

Statements connect through the values they exchange, never through their
textual order, so every dependency-respecting reordering of a block (and
every operand swap of a commutative operation) produces the same graph up
to isomorphism.

Node labels (tokens):
    def:<name>      function definition (``<mask>`` when masking)
    param:<name>    parameter
    write:<var>     assignment statement root
    return / if / then / else
    op:<operator>   expression operation
    call:<name>/<arity>

Constant operands never become nodes; their literal text is folded into
the consuming node's label (position-tagged for non-commutative
operations and calls, as a sorted multiset for commutative ones).

Edge labels:
    FIELD            container hierarchy (def -> param, def -> statement,
                     if -> then/else, then/else -> statement)
    input[:k]        value flow into an operation/statement; ``:k`` marks
                     the k-th operand (k >= 2) of a non-commutative
                     operation or call
    CALCULATED_FROM  written variable -> the variables it was computed from
    LAST_WRITE       a write that shadows a producer from an outer block
    CFG_NEXT         statement-level read-after-write dependency inside a
                     block (omitted when an ``input`` edge already joins
                     the same pair)
    CALLS            direct self-call -> function definition

Parallel edges collapse into one edge whose label joins the sorted parts
with '+'.
"""

from __future__ import annotations

from ..errors import ParseError, ValidationError
from ..graphs import DirectedGraph
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
    stmt_reads,
    stmt_writes,
    validate,
)

COMMUTATIVE_OPS = ("==", "&", "|", "+", "*")
MASK_TOKEN = "<mask>"

# A flow graph is a DirectedGraph whose node_labels are the tokens above
# and whose edge_labels come from the documented edge inventory.
FlowGraph = DirectedGraph


class _Builder:
    def __init__(self, program: Program, mask_name: bool):
        self.program = program
        self.mask_name = mask_name
        self.labels: list[str] = []
        self.edge_labels: dict[tuple[int, int], set[str]] = {}

    def node(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def edge(self, src: int, dst: int, label: str) -> None:
        self.edge_labels.setdefault((src, dst), set()).add(label)

    # -- scopes -------------------------------------------------------------

    @staticmethod
    def lookup(scopes: list[dict[str, int]], name: str) -> int | None:
        for scope in reversed(scopes):
            if name in scope:
                return scope[name]
        return None

    # -- expressions ----------------------------------------------------------

    def expr(self, node, scopes) -> tuple[int | None, str | None]:
        """Returns (producer node id, folded constant text)."""
        if isinstance(node, Const):
            return None, node.text
        if isinstance(node, Var):
            producer = self.lookup(scopes, node.name)
            if producer is None:
                raise ParseError(f"variable {node.name!r} read before assignment", *node.span)
            return producer, None
        if isinstance(node, Unary):
            child, const = self.expr(node.operand, scopes)
            label = f"op:{node.op}" + (f"|1:{const}" if const is not None else "")
            op_id = self.node(label)
            if child is not None:
                self.edge(child, op_id, "input")
            return op_id, None
        if isinstance(node, Binary):
            commutative = node.op in COMMUTATIVE_OPS
            operands = [self.expr(node.left, scopes), self.expr(node.right, scopes)]
            label = f"op:{node.op}" + self._const_suffix(operands, commutative)
            op_id = self.node(label)
            self._input_edges(op_id, operands, commutative)
            return op_id, None
        if isinstance(node, Call):
            parts = []
            if node.receiver is not None:
                parts.append(self.expr(node.receiver, scopes))
            parts.extend(self.expr(arg, scopes) for arg in node.args)
            name = node.func
            if self.mask_name and name == self.program.name:
                name = MASK_TOKEN
            label = f"call:{name}/{len(parts)}" + self._const_suffix(parts, commutative=False)
            call_id = self.node(label)
            self._input_edges(call_id, parts, commutative=False)
            if node.func == self.program.name:
                self.edge(call_id, 0, "CALLS")
            return call_id, None
        raise TypeError(f"not an expression: {node!r}")

    @staticmethod
    def _const_suffix(operands, commutative: bool) -> str:
        if commutative:
            consts = sorted(c for _, c in operands if c is not None)
            return f"|c:{','.join(consts)}" if consts else ""
        tagged = [f"{pos}:{c}" for pos, (_, c) in enumerate(operands, start=1) if c is not None]
        return f"|{','.join(tagged)}" if tagged else ""

    def _input_edges(self, consumer: int, operands, commutative: bool) -> None:
        for pos, (producer, const) in enumerate(operands, start=1):
            if producer is None:
                continue
            label = "input" if commutative or pos == 1 else f"input:{pos}"
            self.edge(producer, consumer, label)

    # -- statements -----------------------------------------------------------

    def block(self, body, container: int, scopes) -> None:
        """Build a block: FIELD hierarchy plus the statement dependency DAG."""
        block_writer: dict[str, int] = {}
        for stmt in body:
            root = self.statement(stmt, scopes)
            self.edge(container, root, "FIELD")
            for var in sorted(stmt_reads(stmt)):
                if var in block_writer:
                    self.edge(block_writer[var], root, "CFG_NEXT")
            for var in stmt_writes(stmt):
                block_writer[var] = root

    def statement(self, stmt, scopes) -> int:
        if isinstance(stmt, Assign):
            producer, const = self.expr(stmt.value, scopes)
            label = f"write:{stmt.target}" + (f"|c:{const}" if const is not None else "")
            write_id = self.node(label)
            if producer is not None:
                self.edge(producer, write_id, "input")
            for var in sorted(stmt_reads(stmt)):
                source = self.lookup(scopes, var)
                if source is not None:
                    self.edge(write_id, source, "CALCULATED_FROM")
            shadowed = self.lookup(scopes[:-1], stmt.target) if len(scopes) > 1 else None
            if stmt.target not in scopes[-1] and shadowed is not None:
                self.edge(write_id, shadowed, "LAST_WRITE")
            scopes[-1][stmt.target] = write_id
            return write_id
        if isinstance(stmt, Return):
            producer, const = self.expr(stmt.value, scopes)
            label = "return" + (f"|c:{const}" if const is not None else "")
            ret_id = self.node(label)
            if producer is not None:
                self.edge(producer, ret_id, "input")
            return ret_id
        if isinstance(stmt, If):
            producer, const = self.expr(stmt.test, scopes)
            if_id = self.node("if" + (f"|c:{const}" if const is not None else ""))
            if producer is not None:
                self.edge(producer, if_id, "input")
            for tag, branch in (("then", stmt.then_body), ("else", stmt.else_body)):
                if not branch:
                    continue
                branch_id = self.node(tag)
                self.edge(if_id, branch_id, "FIELD")
                scopes.append({})
                self.block(branch, branch_id, scopes)
                scopes.pop()
            # conditionally written variables merge at the if node
            for var in sorted(stmt_writes(stmt)):
                scopes[-1][var] = if_id
            return if_id
        raise TypeError(f"not a statement: {stmt!r}")

    # -- assembly ---------------------------------------------------------------

    def build(self) -> DirectedGraph:
        name = MASK_TOKEN if self.mask_name else self.program.name
        def_id = self.node(f"def:{name}")
        scopes: list[dict[str, int]] = [{}]
        for param in self.program.params:
            param_id = self.node(f"param:{param}")
            self.edge(def_id, param_id, "FIELD")
            scopes[0][param] = param_id
        self.block(self.program.body, def_id, scopes)

        edges = []
        labels = []
        for (src, dst), parts in sorted(self.edge_labels.items()):
            if "input" in parts:
                parts = parts - {"CFG_NEXT"}  # value edge subsumes the summary edge
            edges.append((src, dst, 1.0))
            labels.append("+".join(sorted(parts)))
        return DirectedGraph(
            len(self.labels), tuple(edges), node_labels=tuple(self.labels), edge_labels=tuple(labels)
        )


def build_graph(program: Program, mask_name: bool = False) -> FlowGraph:
    """Data-flow graph of a validated program; node 0 is the definition."""
    if not isinstance(program, Program):
        raise ValidationError("expected a Program")
    validate(program)  # raises on use-before-assignment
    return _Builder(program, mask_name).build()
