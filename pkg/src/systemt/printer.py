"""Pretty-printing core terms back to surface syntax.

Binders are named ``x<depth>``, so the output never captures and always
parses back to the same core term.
"""

from __future__ import annotations

from typing import Sequence

from .syntax import (
    App,
    FalseT,
    If,
    Lam,
    Rec,
    Succ,
    Term,
    TrueT,
    Var,
    Zero,
    as_numeral,
)


def pretty(term: Term, *, literals: bool = True, free_names: Sequence[str] = ()) -> str:
    """Render ``term``; ``free_names[i]`` names free ``Var(i)`` of an open term."""
    return _Printer(literals, list(free_names)).term(term, len(free_names), list(free_names))


class _Printer:
    def __init__(self, literals: bool, free_names: list[str]):
        self.literals = literals
        self.free_names = free_names

    def name(self, index: int, names: list[str]) -> str:
        # names: outermost first
        if index >= len(names):
            raise ValueError(f"free variable index {index} has no name")
        return names[len(names) - 1 - index]

    def term(self, t: Term, depth: int, names: list[str]) -> str:
        if isinstance(t, Lam):
            binder = f"x{depth - len(self.free_names)}"
            body = self.term(t.body, depth + 1, names + [binder])
            return f"fun {binder} : {t.annotation} . {body}"
        if isinstance(t, If):
            return (
                f"if {self.term(t.cond, depth, names)}"
                f" then {self.term(t.then_branch, depth, names)}"
                f" else {self.term(t.else_branch, depth, names)}"
            )
        if isinstance(t, Succ):
            if self.literals and as_numeral(t) is not None:
                return str(as_numeral(t))
            # long chains are walked in a loop, not by recursion
            count = 0
            while isinstance(t, Succ) and not (self.literals and as_numeral(t) is not None):
                t = t.arg
                count += 1
            return "succ (" * (count - 1) + "succ " + self.atom(t, depth, names) + ")" * (count - 1)
        if isinstance(t, Rec):
            parts = (t.zero_case, t.step_case, t.scrutinee)
            return "rec " + " ".join(self.atom(p, depth, names) for p in parts)
        if isinstance(t, App):
            spine = []
            while isinstance(t, App):
                spine.append(t.arg)
                t = t.fn
            head = self.atom(t, depth, names)
            args = " ".join(self.atom(a, depth, names) for a in reversed(spine))
            return f"{head} {args}"
        return self.atom(t, depth, names)

    def atom(self, t: Term, depth: int, names: list[str]) -> str:
        if isinstance(t, Var):
            return self.name(t.index, names)
        if isinstance(t, Zero):
            return "0"
        if isinstance(t, TrueT):
            return "true"
        if isinstance(t, FalseT):
            return "false"
        if isinstance(t, Succ) and self.literals and as_numeral(t) is not None:
            return str(as_numeral(t))
        return f"({self.term(t, depth, names)})"
