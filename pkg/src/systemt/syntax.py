"""Abstract syntax of System T: simple types and core terms.

Core terms use binder-relative (de Bruijn) indices: ``Var(0)`` refers to the
nearest enclosing ``Lam``.  All nodes are immutable and compare structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Nat:
    def __str__(self) -> str:
        return "nat"


@dataclass(frozen=True)
class Bool:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class Arrow:
    domain: "Type"
    codomain: "Type"

    def __str__(self) -> str:
        dom = str(self.domain)
        if isinstance(self.domain, Arrow):
            dom = f"({dom})"
        return f"{dom} -> {self.codomain}"


Type = Union[Nat, Bool, Arrow]

NAT = Nat()
BOOL = Bool()


def arrow(*types: Type) -> Type:
    """Right-nested arrow: ``arrow(a, b, c)`` is ``a -> (b -> c)``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


STREAM = Arrow(NAT, BOOL)
PREDICATE = Arrow(STREAM, BOOL)


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Lam:
    annotation: Type
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Rec:
    zero_case: "Term"
    step_case: "Term"
    scrutinee: "Term"


@dataclass(frozen=True)
class TrueT:
    pass


@dataclass(frozen=True)
class FalseT:
    pass


@dataclass(frozen=True)
class If:
    cond: "Term"
    then_branch: "Term"
    else_branch: "Term"


Term = Union[Var, Lam, App, Zero, Succ, Rec, TrueT, FalseT, If]

ZERO = Zero()
TRUE = TrueT()
FALSE = FalseT()


def numeral(n: int) -> Term:
    """``n``-fold ``Succ`` of ``Zero``."""
    if n < 0:
        raise ValueError(f"negative numeral {n}")
    term: Term = ZERO
    for _ in range(n):
        term = Succ(term)
    return term


def as_numeral(term: Term) -> int | None:
    """Return ``n`` when ``term`` is ``Succ^n(Zero)``, else ``None``."""
    n = 0
    while isinstance(term, Succ):
        term = term.arg
        n += 1
    return n if isinstance(term, Zero) else None


def apply(fn: Term, *args: Term) -> Term:
    for arg in args:
        fn = App(fn, arg)
    return fn


def shift(term: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every free index (those >= ``cutoff``)."""
    if by == 0:
        return term
    if isinstance(term, Var):
        return Var(term.index + by) if term.index >= cutoff else term
    if isinstance(term, Lam):
        return Lam(term.annotation, shift(term.body, by, cutoff + 1))
    if isinstance(term, App):
        return App(shift(term.fn, by, cutoff), shift(term.arg, by, cutoff))
    if isinstance(term, Succ):
        depth = 0
        while isinstance(term, Succ):
            term = term.arg
            depth += 1
        out = shift(term, by, cutoff)
        for _ in range(depth):
            out = Succ(out)
        return out
    if isinstance(term, Rec):
        return Rec(
            shift(term.zero_case, by, cutoff),
            shift(term.step_case, by, cutoff),
            shift(term.scrutinee, by, cutoff),
        )
    if isinstance(term, If):
        return If(
            shift(term.cond, by, cutoff),
            shift(term.then_branch, by, cutoff),
            shift(term.else_branch, by, cutoff),
        )
    return term


def free_bound(term: Term) -> int:
    """Smallest ``k`` such that every free index of ``term`` is below ``k``.

    Zero means the term is closed.
    """
    if isinstance(term, Var):
        return term.index + 1
    if isinstance(term, Lam):
        return max(free_bound(term.body) - 1, 0)
    if isinstance(term, App):
        return max(free_bound(term.fn), free_bound(term.arg))
    if isinstance(term, Succ):
        while isinstance(term, Succ):
            term = term.arg
        return free_bound(term)
    if isinstance(term, (Rec, If)):
        return max(free_bound(child) for child in children(term))
    return 0


def is_closed(term: Term) -> bool:
    return free_bound(term) == 0


def children(term: Term) -> tuple[Term, ...]:
    if isinstance(term, Lam):
        return (term.body,)
    if isinstance(term, App):
        return (term.fn, term.arg)
    if isinstance(term, Succ):
        return (term.arg,)
    if isinstance(term, Rec):
        return (term.zero_case, term.step_case, term.scrutinee)
    if isinstance(term, If):
        return (term.cond, term.then_branch, term.else_branch)
    return ()


def size(term: Term) -> int:
    """Number of AST nodes."""
    total = 0
    stack = [term]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(children(node))
    return total


def type_size(ty: Type) -> int:
    if isinstance(ty, Arrow):
        return 1 + type_size(ty.domain) + type_size(ty.codomain)
    return 1


def type_order(ty: Type) -> int:
    if isinstance(ty, Arrow):
        return max(type_order(ty.domain) + 1, type_order(ty.codomain))
    return 0
