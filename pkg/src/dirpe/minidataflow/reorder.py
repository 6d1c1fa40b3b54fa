"""Semantics-preserving reorderings of mini-language programs.

A block's statements may be permuted as long as every read-after-write,
write-after-read, and write-after-write pair keeps its order (the
top-level return additionally stays last).  Optionally the operands of
commutative operations whose operands are both non-constant expressions
may be swapped.  Every emitted program is semantically equivalent to the
original by construction, and all of them map to the same canonical
data-flow graph.
"""

from __future__ import annotations

from itertools import product

from ..errors import ReorderLimitError
from .flowgraph import COMMUTATIVE_OPS
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

DEFAULT_LIMIT = 100_000


def _block_constraints(body) -> list[set[int]]:
    """preds[j] = indices that must precede statement j."""
    reads = [stmt_reads(s) for s in body]
    writes = [stmt_writes(s) for s in body]
    preds: list[set[int]] = [set() for _ in body]
    for j in range(len(body)):
        for i in range(j):
            raw = writes[i] & reads[j]
            war = reads[i] & writes[j]
            waw = writes[i] & writes[j]
            if raw or war or waw:
                preds[j].add(i)
        if isinstance(body[j], Return):
            preds[j].update(range(j))  # the return stays last
    return preds


def _count_orders(preds: list[set[int]]) -> int:
    n = len(preds)
    pred_masks = [sum(1 << i for i in p) for p in preds]
    layer = {0: 1}
    full = (1 << n) - 1
    for _ in range(n):
        nxt: dict[int, int] = {}
        for ideal, ways in layer.items():
            remaining = full & ~ideal
            while remaining:
                bit = remaining & -remaining
                remaining ^= bit
                v = bit.bit_length() - 1
                if pred_masks[v] & ~ideal == 0:
                    key = ideal | bit
                    nxt[key] = nxt.get(key, 0) + ways
        layer = nxt
    return layer.get(full, 0) if n else 1


def _enumerate_orders(preds: list[set[int]]) -> list[tuple[int, ...]]:
    n = len(preds)
    orders: list[tuple[int, ...]] = []
    placed: list[int] = []
    used = [False] * n

    def backtrack():
        if len(placed) == n:
            orders.append(tuple(placed))
            return
        for v in range(n):
            if used[v] or any(not used[p] for p in preds[v]):
                continue
            used[v] = True
            placed.append(v)
            backtrack()
            placed.pop()
            used[v] = False

    backtrack()
    return orders


def _swap_sites(expr) -> int:
    """Count commutative operations with two non-constant operands."""
    if isinstance(expr, (Var, Const)):
        return 0
    if isinstance(expr, Unary):
        return _swap_sites(expr.operand)
    if isinstance(expr, Binary):
        own = int(
            expr.op in COMMUTATIVE_OPS
            and not isinstance(expr.left, Const)
            and not isinstance(expr.right, Const)
        )
        return own + _swap_sites(expr.left) + _swap_sites(expr.right)
    if isinstance(expr, Call):
        total = _swap_sites(expr.receiver) if expr.receiver is not None else 0
        return total + sum(_swap_sites(a) for a in expr.args)
    raise TypeError(f"not an expression: {expr!r}")


def _apply_swaps(expr, choices: list[bool], cursor: list[int]):
    """Rebuild an expression, swapping flagged commutative sites in-order."""
    if isinstance(expr, (Var, Const)):
        return expr
    if isinstance(expr, Unary):
        return Unary(expr.op, _apply_swaps(expr.operand, choices, cursor), expr.span)
    if isinstance(expr, Binary):
        swap = False
        if (
            expr.op in COMMUTATIVE_OPS
            and not isinstance(expr.left, Const)
            and not isinstance(expr.right, Const)
        ):
            swap = choices[cursor[0]]
            cursor[0] += 1
        left = _apply_swaps(expr.left, choices, cursor)
        right = _apply_swaps(expr.right, choices, cursor)
        if swap:
            left, right = right, left
        return Binary(expr.op, left, right, expr.span)
    if isinstance(expr, Call):
        receiver = (
            _apply_swaps(expr.receiver, choices, cursor) if expr.receiver is not None else None
        )
        args = tuple(_apply_swaps(a, choices, cursor) for a in expr.args)
        return Call(expr.func, args, receiver, expr.span)
    raise TypeError(f"not an expression: {expr!r}")


def _stmt_swap_sites(stmt) -> int:
    if isinstance(stmt, (Assign, Return)):
        return _swap_sites(stmt.value)
    if isinstance(stmt, If):
        total = _swap_sites(stmt.test)
        return total + sum(_stmt_swap_sites(s) for s in (*stmt.then_body, *stmt.else_body))
    raise TypeError(f"not a statement: {stmt!r}")


def _block_variants(body) -> list[tuple]:
    """All dependency-respecting orderings with nested blocks expanded."""
    per_stmt = [_statement_variants(s) for s in body]
    orders = _enumerate_orders(_block_constraints(body))
    variants = []
    for combo in product(*per_stmt):
        for order in orders:
            variants.append(tuple(combo[i] for i in order))
    return variants


def _count_block_variants(body) -> int:
    total = _count_orders(_block_constraints(body))
    for stmt in body:
        total *= _count_statement_variants(stmt)
    return total


def _statement_variants(stmt) -> list:
    if isinstance(stmt, (Assign, Return)):
        return [stmt]
    if isinstance(stmt, If):
        variants = []
        for then_body in _block_variants(stmt.then_body):
            if stmt.else_body:
                for else_body in _block_variants(stmt.else_body):
                    variants.append(If(stmt.test, then_body, else_body, stmt.span))
            else:
                variants.append(If(stmt.test, then_body, (), stmt.span))
        return variants
    raise TypeError(f"not a statement: {stmt!r}")


def _count_statement_variants(stmt) -> int:
    if isinstance(stmt, (Assign, Return)):
        return 1
    if isinstance(stmt, If):
        total = _count_block_variants(stmt.then_body)
        if stmt.else_body:
            total *= _count_block_variants(stmt.else_body)
        return total
    raise TypeError(f"not a statement: {stmt!r}")


def count_reorderings(program: Program, commutative_swaps: bool = False) -> int:
    """Exact number of variants without enumerating them."""
    validate(program)
    total = _count_block_variants(program.body)
    if commutative_swaps:
        sites = sum(_stmt_swap_sites(s) for s in program.body)
        total *= 2**sites
    return total


def enumerate_reorderings(
    program: Program,
    limit: int = DEFAULT_LIMIT,
    commutative_swaps: bool = False,
) -> list[Program]:
    """All semantics-preserving variants; raises ReorderLimitError over ``limit``.

    The error carries the exact count, so callers can still report it.
    """
    count = count_reorderings(program, commutative_swaps)
    if count > limit:
        raise ReorderLimitError(count, limit)

    bodies = _block_variants(program.body)
    programs = [Program(program.name, program.params, body, program.span) for body in bodies]
    if not commutative_swaps:
        return programs

    sites = sum(_stmt_swap_sites(s) for s in program.body)
    out = []
    for prog in programs:
        for bits in product([False, True], repeat=sites):
            choices = list(bits)
            cursor = [0]
            new_body = tuple(_apply_stmt_swaps(s, choices, cursor) for s in prog.body)
            out.append(Program(prog.name, prog.params, new_body, prog.span))
    return out


def _apply_stmt_swaps(stmt, choices, cursor):
    if isinstance(stmt, Assign):
        return Assign(stmt.target, _apply_swaps(stmt.value, choices, cursor), stmt.span)
    if isinstance(stmt, Return):
        return Return(_apply_swaps(stmt.value, choices, cursor), stmt.span)
    if isinstance(stmt, If):
        test = _apply_swaps(stmt.test, choices, cursor)
        then_body = tuple(_apply_stmt_swaps(s, choices, cursor) for s in stmt.then_body)
        else_body = tuple(_apply_stmt_swaps(s, choices, cursor) for s in stmt.else_body)
        return If(test, then_body, else_body, stmt.span)
    raise TypeError(f"not a statement: {stmt!r}")
