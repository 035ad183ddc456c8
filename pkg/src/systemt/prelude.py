"""Closed T terms for booleans, arithmetic, N-infinity, search and Kreisel's test.

Every term is built here with constructors, and the same definitions ship as
``prelude.t``.  ``load_prelude_source`` parses the file so the two routes can
be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .checker import typecheck
from .syntax import (
    BOOL,
    FALSE,
    NAT,
    PREDICATE,
    STREAM,
    TRUE,
    ZERO,
    App,
    Arrow,
    If,
    Lam,
    Rec,
    Succ,
    Term,
    Type,
    Var,
    arrow,
)


@dataclass(frozen=True)
class _Named:
    """Builder-only lambda with a named binder; removed by ``_resolve``."""

    name: str
    annotation: Type
    body: object


def lam(name: str, ty: Type, body) -> _Named:
    return _Named(name, ty, body)


def v(name: str) -> Var:
    return Var(name)  # type: ignore[arg-type]  # resolved to an index later


def ap(fn, *args):
    for arg in args:
        fn = App(fn, arg)
    return fn


def _resolve(t, scope: tuple[str, ...] = ()) -> Term:
    if isinstance(t, _Named):
        return Lam(t.annotation, _resolve(t.body, (t.name,) + scope))
    if isinstance(t, Var):
        if isinstance(t.index, int):
            return t
        return Var(scope.index(t.index))
    if isinstance(t, App):
        return App(_resolve(t.fn, scope), _resolve(t.arg, scope))
    if isinstance(t, Succ):
        return Succ(_resolve(t.arg, scope))
    if isinstance(t, Rec):
        return Rec(
            _resolve(t.zero_case, scope),
            _resolve(t.step_case, scope),
            _resolve(t.scrutinee, scope),
        )
    if isinstance(t, If):
        return If(
            _resolve(t.cond, scope),
            _resolve(t.then_branch, scope),
            _resolve(t.else_branch, scope),
        )
    return t


def build(t) -> Term:
    return _resolve(t)


NAT_TO_NAT_TO_BOOL = arrow(NAT, NAT, BOOL)
BOOL2 = arrow(BOOL, BOOL, BOOL)


@lru_cache(maxsize=None)
def tm_not() -> Term:
    return build(lam("a", BOOL, If(v("a"), FALSE, TRUE)))


@lru_cache(maxsize=None)
def tm_and() -> Term:
    return build(lam("a", BOOL, lam("b", BOOL, If(v("a"), v("b"), FALSE))))


@lru_cache(maxsize=None)
def tm_or() -> Term:
    return build(lam("a", BOOL, lam("b", BOOL, If(v("a"), TRUE, v("b")))))


@lru_cache(maxsize=None)
def tm_implies() -> Term:
    return build(lam("a", BOOL, lam("b", BOOL, If(v("a"), v("b"), TRUE))))


@lru_cache(maxsize=None)
def tm_eq_bool() -> Term:
    return build(lam("a", BOOL, lam("b", BOOL, If(v("a"), v("b"), ap(tm_not(), v("b"))))))


@lru_cache(maxsize=None)
def tm_iszero() -> Term:
    step = lam("k", NAT, lam("r", BOOL, FALSE))
    return build(lam("n", NAT, Rec(TRUE, step, v("n"))))


@lru_cache(maxsize=None)
def tm_pred() -> Term:
    step = lam("k", NAT, lam("r", NAT, v("k")))
    return build(lam("n", NAT, Rec(ZERO, step, v("n"))))


@lru_cache(maxsize=None)
def tm_add() -> Term:
    step = lam("k", NAT, lam("r", NAT, Succ(v("r"))))
    return build(lam("m", NAT, lam("n", NAT, Rec(v("m"), step, v("n")))))


@lru_cache(maxsize=None)
def tm_mult() -> Term:
    step = lam("k", NAT, lam("r", NAT, ap(tm_add(), v("r"), v("m"))))
    return build(lam("m", NAT, lam("n", NAT, Rec(ZERO, step, v("n")))))


@lru_cache(maxsize=None)
def tm_leq() -> Term:
    """``leq m n`` is true iff ``m <= n``; recursion on ``m`` at type nat -> bool."""
    base = lam("n", NAT, TRUE)
    step = lam(
        "k",
        NAT,
        lam(
            "r",
            STREAM,
            lam(
                "n",
                NAT,
                If(ap(tm_iszero(), v("n")), FALSE, ap(v("r"), ap(tm_pred(), v("n")))),
            ),
        ),
    )
    return build(lam("m", NAT, Rec(base, step, v("m"))))


@lru_cache(maxsize=None)
def tm_bexists() -> Term:
    """``(nat -> bool) -> nat -> bool``: is there ``n <= i`` with ``q n``?"""
    indexed = lam(
        "s", arrow(NAT, BOOL, BOOL), lam("i", NAT, Rec(ap(v("q"), ZERO), v("s"), v("i")))
    )
    step = lam("k", NAT, lam("r", BOOL, If(v("r"), TRUE, ap(v("q"), Succ(v("k"))))))
    return build(lam("q", STREAM, ap(indexed, step)))


@lru_cache(maxsize=None)
def tm_nbar() -> Term:
    return build(lam("n", NAT, lam("i", NAT, ap(tm_leq(), v("n"), v("i")))))


@lru_cache(maxsize=None)
def tm_infty() -> Term:
    return build(lam("i", NAT, FALSE))


@lru_cache(maxsize=None)
def tm_zerobar() -> Term:
    return build(lam("i", NAT, TRUE))


@lru_cache(maxsize=None)
def tm_cons() -> Term:
    """``a |-> 0a``: shifts a stream right and puts a 0 in front."""
    body = If(
        ap(tm_iszero(), v("i")), FALSE, ap(v("a"), ap(tm_pred(), v("i")))
    )
    return build(lam("a", STREAM, lam("i", NAT, body)))


@lru_cache(maxsize=None)
def tm_eps() -> Term:
    """Exhaustive search over N-infinity: ``eps p i = 1`` iff ``p (nbar n)`` for some ``n <= i``."""
    q = lam("n", NAT, ap(v("p"), ap(tm_nbar(), v("n"))))
    return build(lam("p", PREDICATE, ap(tm_bexists(), q)))


@lru_cache(maxsize=None)
def tm_test() -> Term:
    eq, f = tm_eq_bool(), v("f")
    f_infty = ap(f, tm_infty())
    inner = lam("x", STREAM, ap(eq, ap(f, ap(tm_cons(), v("x"))), f_infty))
    antecedent = ap(eq, ap(f, ap(tm_eps(), inner)), f_infty)
    consequent = ap(eq, ap(f, tm_zerobar()), f_infty)
    return build(lam("f", PREDICATE, ap(tm_implies(), antecedent, consequent)))


# name -> (constructor, declared type), in dependency order
_TABLE = {
    "not": (tm_not, Arrow(BOOL, BOOL)),
    "and": (tm_and, BOOL2),
    "or": (tm_or, BOOL2),
    "implies": (tm_implies, BOOL2),
    "eqBool": (tm_eq_bool, BOOL2),
    "iszero": (tm_iszero, Arrow(NAT, BOOL)),
    "pred": (tm_pred, Arrow(NAT, NAT)),
    "add": (tm_add, arrow(NAT, NAT, NAT)),
    "mult": (tm_mult, arrow(NAT, NAT, NAT)),
    "leq": (tm_leq, NAT_TO_NAT_TO_BOOL),
    "bexists": (tm_bexists, arrow(STREAM, NAT, BOOL)),
    "nbar": (tm_nbar, NAT_TO_NAT_TO_BOOL),
    "infty": (tm_infty, STREAM),
    "zerobar": (tm_zerobar, STREAM),
    "cons": (tm_cons, Arrow(STREAM, STREAM)),
    "eps": (tm_eps, Arrow(PREDICATE, STREAM)),
    "test": (tm_test, Arrow(PREDICATE, BOOL)),
}


@lru_cache(maxsize=None)
def prelude() -> dict[str, tuple[Term, Type]]:
    """The prelude map ``name -> (term, declared type)``.

    Raises ``AssertionError`` if a constructor disagrees with its declared
    type, which would be a bug here rather than in user code.
    """
    table = {}
    for name, (ctor, declared) in _TABLE.items():
        term = ctor()
        actual = typecheck(term)
        assert actual == declared, f"prelude {name}: {actual} != {declared}"
        table[name] = (term, declared)
    return table


def prelude_terms() -> dict[str, Term]:
    return {name: term for name, (term, _) in prelude().items()}


def prelude_text() -> str:
    return resources.files(__package__).joinpath("prelude.t").read_text(encoding="utf-8")


def load_prelude_source():
    """Parse the shipped ``prelude.t`` into a ``SourceFile``."""
    from .parser import parse

    return parse(prelude_text())
