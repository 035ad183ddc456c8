"""Type checking for core System T terms."""

from __future__ import annotations

from typing import Sequence

from .syntax import (
    BOOL,
    NAT,
    App,
    Arrow,
    FalseT,
    If,
    Lam,
    Rec,
    Succ,
    Term,
    TrueT,
    Type,
    Var,
    Zero,
)


class TypeCheckError(Exception):
    """Raised for ill-typed terms.

    ``path`` locates the offending subterm as a dotted route from the root
    (e.g. ``body.fn.arg``); the empty string is the root itself.
    """

    def __init__(self, message: str, path: str = ""):
        self.message = message
        self.path = path
        where = f" at {path}" if path else " at root"
        super().__init__(message + where)


class TypeMismatch(TypeCheckError):
    def __init__(self, expected: Type, actual: Type, what: str, path: str = ""):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"type mismatch in {what}: expected {expected}, got {actual}", path
        )


class NotAFunction(TypeCheckError):
    def __init__(self, actual: Type, path: str = ""):
        self.actual = actual
        super().__init__(f"non-function applied (type {actual})", path)


class UnboundVariable(TypeCheckError):
    pass


def _join(path: str, step: str) -> str:
    return f"{path}.{step}" if path else step


def typecheck(term: Term, context: Sequence[Type] = ()) -> Type:
    """Return the unique type of ``term``; ``context[0]`` types ``Var(0)``."""
    return _infer(term, tuple(context), "")


def _infer(term: Term, ctx: tuple[Type, ...], path: str) -> Type:
    if isinstance(term, Var):
        if not 0 <= term.index < len(ctx):
            raise UnboundVariable(f"unbound variable index {term.index}", path)
        return ctx[term.index]
    if isinstance(term, Lam):
        body = _infer(term.body, (term.annotation,) + ctx, _join(path, "body"))
        return Arrow(term.annotation, body)
    if isinstance(term, App):
        fn_ty = _infer(term.fn, ctx, _join(path, "fn"))
        if not isinstance(fn_ty, Arrow):
            raise NotAFunction(fn_ty, path)
        arg_ty = _infer(term.arg, ctx, _join(path, "arg"))
        if arg_ty != fn_ty.domain:
            raise TypeMismatch(fn_ty.domain, arg_ty, "argument", _join(path, "arg"))
        return fn_ty.codomain
    if isinstance(term, Zero):
        return NAT
    if isinstance(term, Succ):
        # literals are long Succ chains; walk them without recursing
        while isinstance(term, Succ):
            term = term.arg
            path = _join(path, "arg")
        inner = _infer(term, ctx, path)
        if inner != NAT:
            raise TypeMismatch(NAT, inner, "succ", path)
        return NAT
    if isinstance(term, (TrueT, FalseT)):
        return BOOL
    if isinstance(term, If):
        cond = _infer(term.cond, ctx, _join(path, "cond"))
        if cond != BOOL:
            raise TypeMismatch(BOOL, cond, "if condition", _join(path, "cond"))
        then_ty = _infer(term.then_branch, ctx, _join(path, "then_branch"))
        else_ty = _infer(term.else_branch, ctx, _join(path, "else_branch"))
        if then_ty != else_ty:
            raise TypeMismatch(then_ty, else_ty, "else branch", _join(path, "else_branch"))
        return then_ty
    if isinstance(term, Rec):
        sigma = _infer(term.zero_case, ctx, _join(path, "zero_case"))
        step_expected = Arrow(NAT, Arrow(sigma, sigma))
        step = _infer(term.step_case, ctx, _join(path, "step_case"))
        if step != step_expected:
            raise TypeMismatch(step_expected, step, "rec step", _join(path, "step_case"))
        scrut = _infer(term.scrutinee, ctx, _join(path, "scrutinee"))
        if scrut != NAT:
            raise TypeMismatch(NAT, scrut, "rec scrutinee", _join(path, "scrutinee"))
        return sigma
    raise TypeError(f"not a term: {term!r}")
