"""Random well-typed closed terms, and property harnesses for ``eps`` and ``test``.

Generation is top-down and type-directed with a hard node budget.  Each
production reserves the minimum size of its children before splitting the
remaining budget at random, so output never exceeds ``max_size``.  A sample
is a pure function of ``(target_type, max_size, seed, index)``.

Evaluation cost is kept bounded: ``rec`` scrutinees are literals up to 6 and
``rec`` result types have order at most 1.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Union

from . import prelude as pl
from .checker import typecheck
from .denot import (
    SemVal,
    apply_sem,
    as_bit,
    denote,
    paused_gc,
    sem_to_stream,
    stream_to_sem,
)
from .ninf import (
    INFINITY,
    BoundedSearch,
    Finite,
    NoWitnessUpTo,
    embed,
    eps_point,
    member_prefix_check,
    restrict_to_finite,
)
from .parser import parse_term
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
    children,
    numeral,
    size,
    type_order,
)

MAX_REC_SCRUTINEE = 6
ATTEMPT_CAP = 16

_REC_TYPES = (NAT, BOOL, STREAM, Arrow(NAT, NAT), Arrow(BOOL, BOOL))


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    target_type: Type
    max_size: int
    seed: int
    count: int = 1

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")


def min_size(ty: Type) -> int:
    """Fewest nodes of a closed-off inhabitant: ``0``, ``true``, or lambdas around one."""
    if isinstance(ty, Arrow):
        return 1 + min_size(ty.codomain)
    return 1


def _spine(ty: Type) -> tuple[list[Type], Type]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.domain)
        ty = ty.codomain
    return args, ty


@lru_cache(maxsize=None)
def _combinators() -> tuple[tuple[str, Term, Type, int], ...]:
    names = ("not", "and", "or", "implies", "eqBool", "iszero", "pred", "infty", "zerobar", "cons")
    table = pl.prelude()
    return tuple((n, table[n][0], table[n][1], size(table[n][0])) for n in names)


class _Generator:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def split(self, extra: int, parts: int) -> list[int]:
        """Randomly divide ``extra`` spare nodes among ``parts`` children."""
        if parts == 0:
            return []
        cuts = sorted(self.rng.randint(0, extra) for _ in range(parts - 1))
        bounds = [0] + cuts + [extra]
        return [bounds[i + 1] - bounds[i] for i in range(parts)]

    def children(self, types: list[Type], ctxs: list[tuple], budget: int) -> list[Term]:
        mins = [min_size(t) for t in types]
        shares = self.split(budget - sum(mins), len(types))
        return [self.term(t, c, m + s) for t, c, m, s in zip(types, ctxs, mins, shares)]

    def term(self, ty: Type, ctx: tuple, budget: int) -> Term:
        options = self.options(ty, ctx, budget)
        if not options:
            raise GenerationError(f"no inhabitant of {ty} within {budget} nodes")
        weights = [w for w, _ in options]
        _, build = self.rng.choices(options, weights=weights)[0]
        return build()

    def options(self, ty: Type, ctx: tuple, budget: int) -> list[tuple[float, Callable[[], Term]]]:
        rng = self.rng
        opts: list[tuple[float, Callable[[], Term]]] = []
        big = max(budget / 4.0, 0.25)  # compound productions win as budget grows

        for i, var_ty in enumerate(ctx):
            if var_ty == ty:
                opts.append((2.0, lambda i=i: Var(i)))
            args, result = _spine(var_ty)
            # eliminate a variable: x a1 ... ak
            for k in range(1, len(args) + 1):
                rest = var_ty
                for _ in range(k):
                    rest = rest.codomain
                if rest != ty:
                    continue
                cost = 1 + k + sum(min_size(a) for a in args[:k])
                if cost <= budget:
                    opts.append((6.0 * big, lambda i=i, a=tuple(args[:k]): self.eliminate(
                        Var(i), list(a), ctx, budget - (1 + len(a)))))

        if isinstance(ty, Arrow):
            cost = 1 + min_size(ty.codomain)
            if cost <= budget:
                opts.append((4.0, lambda: Lam(
                    ty.domain, self.term(ty.codomain, (ty.domain,) + ctx, budget - 1))))
        elif ty == NAT:
            opts.append((1.0, lambda: ZERO))
            top = min(MAX_REC_SCRUTINEE, budget - 1)
            if top >= 1:
                opts.append((0.5, lambda: numeral(rng.randint(1, top))))
            if budget >= 2:
                opts.append((big, lambda: Succ(self.term(NAT, ctx, budget - 1))))
        else:
            opts.append((1.0, lambda: TRUE))
            opts.append((1.0, lambda: FALSE))

        if budget >= 2 + 2 * min_size(ty):
            opts.append((big, lambda: If(*self.children(
                [BOOL, ty, ty], [ctx, ctx, ctx], budget - 1))))

        if type_order(ty) <= 1 and ty in _REC_TYPES:
            step_ty = Arrow(NAT, Arrow(ty, ty))
            fixed = 1 + min_size(ty) + min_size(step_ty) + 1
            if fixed <= budget:
                opts.append((big * 0.6, lambda: self.rec(ty, step_ty, ctx, budget)))

        for name, term, comb_ty, comb_size in _combinators():
            args, _ = _spine(comb_ty)
            for k in range(0, len(args) + 1):
                rest = comb_ty
                for _ in range(k):
                    rest = rest.codomain
                if rest != ty:
                    continue
                cost = comb_size + k + sum(min_size(a) for a in args[:k])
                if cost <= budget:
                    opts.append((big * 0.5, lambda term=term, a=tuple(args[:k]), c=comb_size: self.eliminate(
                        term, list(a), ctx, budget - c - len(a))))

        # beta redex (fun x : s . body) arg
        for sigma in (NAT, BOOL):
            if 2 + min_size(ty) + 1 <= budget:
                opts.append((big * 0.3, lambda sigma=sigma: self.redex(sigma, ty, ctx, budget)))
        return opts

    def eliminate(self, head: Term, arg_types: list[Type], ctx: tuple, budget: int) -> Term:
        args = self.children(arg_types, [ctx] * len(arg_types), budget)
        for arg in args:
            head = App(head, arg)
        return head

    def rec(self, ty: Type, step_ty: Type, ctx: tuple, budget: int) -> Term:
        spare = budget - 1 - min_size(ty) - min_size(step_ty)
        n = self.rng.randint(0, min(MAX_REC_SCRUTINEE, spare - 1))
        zero_case, step = self.children([ty, step_ty], [ctx, ctx], budget - 1 - (n + 1))
        return Rec(zero_case, step, numeral(n))

    def redex(self, sigma: Type, ty: Type, ctx: tuple, budget: int) -> Term:
        mins = [min_size(ty), min_size(sigma)]
        body_extra, arg_extra = self.split(budget - 2 - sum(mins), 2)
        body = self.term(ty, (sigma,) + ctx, mins[0] + body_extra)
        arg = self.term(sigma, ctx, mins[1] + arg_extra)
        return App(Lam(sigma, body), arg)


def gen_term(cfg: GenConfig, index: int) -> Term:
    """The ``index``-th closed term of ``cfg.target_type`` (deterministic)."""
    if cfg.max_size < min_size(cfg.target_type):
        raise GenerationError(
            f"max_size {cfg.max_size} cannot close a term of type {cfg.target_type}"
        )
    last_error: Optional[Exception] = None
    for attempt in range(ATTEMPT_CAP):
        rng = random.Random(f"{cfg.seed}:{index}:{attempt}")
        try:
            term = _Generator(rng).term(cfg.target_type, (), cfg.max_size)
        except GenerationError as exc:
            last_error = exc
            continue
        if size(term) <= cfg.max_size and typecheck(term) == cfg.target_type:
            return term
    raise GenerationError(f"gave up after {ATTEMPT_CAP} attempts: {last_error}")


def term_depth(term: Term) -> int:
    depth = 0
    stack = [(term, 1)]
    while stack:
        node, d = stack.pop()
        depth = max(depth, d)
        stack.extend((child, d + 1) for child in children(node))
    return depth


# fixed corpora of functionals (nat -> bool) -> bool that read their argument

_FUNCTIONAL_CORPUS = (
    "fun a : nat -> bool . true",
    "fun a : nat -> bool . false",
    *(f"fun a : nat -> bool . a {k}" for k in range(9)),
    *(f"fun a : nat -> bool . not (a {k})" for k in (0, 2, 5)),
    "fun a : nat -> bool . and (a 2) (not (a 1))",
    "fun a : nat -> bool . or (a 3) (a 7)",
    "fun a : nat -> bool . eqBool (a 2) (a 5)",
    "fun a : nat -> bool . implies (a 1) (a 4)",
    "fun a : nat -> bool . a (if a 0 then 3 else 1)",
    "fun a : nat -> bool . rec false (fun k : nat . fun r : bool . or r (a k)) 4",
    "fun a : nat -> bool . cons a 3",
    "fun a : nat -> bool . not (cons (cons a) 2)",
    "fun a : nat -> bool . eps (fun b : nat -> bool . b 2) 1",
    "fun a : nat -> bool . a (add 2 3)",
    "fun a : nat -> bool . eqBool (a 0) (infty 4)",
)


@lru_cache(maxsize=None)
def functional_corpus() -> tuple[Term, ...]:
    defs = pl.prelude_terms()
    return tuple(parse_term(src, defs) for src in _FUNCTIONAL_CORPUS)


@dataclass
class FuzzReport:
    mode: str
    samples: int
    failures: list[int]
    seed: int
    elapsed_ms: int = 0
    corpus_size: int = 0
    max_term_depth: int = 0
    details: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "mode": self.mode,
            "samples": self.samples,
            "failures": list(self.failures),
            "seed": self.seed,
            "corpus_size": self.corpus_size,
            "max_term_depth": self.max_term_depth,
            "details": self.details,
        }
        if timing:
            d["elapsed_ms"] = self.elapsed_ms
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


def _samples(cfg: GenConfig, corpus: tuple[Term, ...]) -> list[Term]:
    return list(corpus) + [gen_term(cfg, i) for i in range(cfg.count)]


def _require_type(cfg: GenConfig, expected: Type, what: str):
    if cfg.target_type != expected:
        raise ValueError(f"{what} needs target type {expected}, got {cfg.target_type}")


def _run(mode: str, cfg: GenConfig, terms: list[Term], corpus_size: int,
         check: Callable[[Term], Optional[dict]], workers: int) -> FuzzReport:
    start = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(check, terms, chunksize=8))
    else:
        outcomes = [check(t) for t in terms]
    failures = [i for i, out in enumerate(outcomes) if out is not None]
    details = [dict(index=i, **outcomes[i]) for i in failures]
    return FuzzReport(
        mode=mode,
        samples=len(terms),
        failures=failures,
        seed=cfg.seed,
        elapsed_ms=int((time.perf_counter() - start) * 1000),
        corpus_size=corpus_size,
        max_term_depth=max((term_depth(t) for t in terms), default=0),
        details=details,
    )


@lru_cache(maxsize=1)
def _test_denotation() -> SemVal:
    return denote(pl.tm_test())


@lru_cache(maxsize=1)
def _eps_denotation() -> SemVal:
    return denote(pl.tm_eps())


def _constancy_check(term: Term) -> Optional[dict]:
    with paused_gc():
        value = as_bit(apply_sem(_test_denotation(), denote(term)))
    return None if value == 1 else {"test_value": value}


def check_test_constancy(cfg: GenConfig, *, corpus: bool = True, workers: int = 1) -> FuzzReport:
    """``test`` must return 1 on every definable functional.

    Samples are the fixed corpus (when ``corpus``) followed by ``cfg.count``
    generated terms.  A failure index ``i`` below ``corpus_size`` names a
    corpus entry; otherwise it is generator index ``i - corpus_size``.
    """
    _require_type(cfg, PREDICATE, "constancy check")
    base = functional_corpus() if corpus else ()
    return _run("constancy", cfg, _samples(cfg, base), len(base), _constancy_check, workers)


def oracle_eps_prefix(p: SemVal, prefix_len: int) -> list[int]:
    """Brute-force infimum: scan ``p`` on host-built ``nbar n`` for ``n < prefix_len``."""
    for n in range(prefix_len):
        if as_bit(apply_sem(p, stream_to_sem(embed(Finite(n))))):
            return [0] * n + [1] * (prefix_len - n)
    return [0] * prefix_len


def eps_prefix(p: SemVal, prefix_len: int) -> list[int]:
    return sem_to_stream(apply_sem(_eps_denotation(), p)).prefix(prefix_len)


WITNESS_SCAN = 64
NO_WITNESS_CONFIRM = 1000


def _eps_check(term: Term, prefix_len: int = 64) -> Optional[dict]:
    with paused_gc():
        p = denote(term)
        got = eps_prefix(p, prefix_len)
        expected = oracle_eps_prefix(p, prefix_len)
        if got != expected:
            return {"reason": "prefix mismatch", "got": _bits(got), "expected": _bits(expected)}
        eps_value = apply_sem(_eps_denotation(), p)
        if not member_prefix_check(sem_to_stream(eps_value), prefix_len):
            return {"reason": "prefix not monotone", "got": _bits(got)}
        # p(eps p) holds exactly when p has a witness in N-infinity
        at_eps = as_bit(apply_sem(p, eps_value))
        at_inf = _at(p, INFINITY)
        witness = at_inf == 1 or any(_at(p, Finite(n)) for n in range(WITNESS_SCAN + 1))
        if at_eps != int(witness):
            return {"reason": "witness property", "p_at_eps": at_eps, "witness": witness}
        if at_eps == 0:
            if at_inf != 0 or any(_at(p, Finite(n)) for n in range(NO_WITNESS_CONFIRM + 1)):
                return {"reason": "p(eps p) = 0 but a witness exists below 1000"}
    return None


def _at(p: SemVal, x) -> int:
    return as_bit(apply_sem(p, stream_to_sem(embed(x))))


def _bits(bits: list[int]) -> str:
    return "".join(map(str, bits))


class _EpsCheck:
    # picklable callable for process pools
    def __init__(self, prefix_len: int):
        self.prefix_len = prefix_len

    def __call__(self, term: Term) -> Optional[dict]:
        return _eps_check(term, self.prefix_len)


def check_eps_oracle(cfg: GenConfig, prefix_len: int = 64, *, corpus: bool = True,
                     workers: int = 1) -> FuzzReport:
    """Compare ``eps p`` with the brute-force infimum, and check its other properties.

    For each predicate: the prefix matches bit for bit and is monotone.  Also
    ``p(eps p) = 1`` iff ``p(inf) = 1`` or ``p(nbar n) = 1`` for some
    ``n <= 64``.  When ``p(eps p) = 0``, ``p`` is also 0 at infinity and at
    ``nbar 0 .. nbar 1000``.
    """
    _require_type(cfg, PREDICATE, "eps oracle check")
    base = functional_corpus() if corpus else ()
    return _run("eps", cfg, _samples(cfg, base), len(base), _EpsCheck(prefix_len), workers)


@dataclass(frozen=True)
class NotFoundUpTo:
    bound: int


def agreement_index(f: SemVal, max_n: int) -> Union[int, NotFoundUpTo]:
    """Least ``n <= max_n`` with ``f(nbar n) = f(inf)``.

    Every definable ``f`` has one, because it is continuous.
    """
    at_inf = _at(f, INFINITY)
    for n in range(max_n + 1):
        if _at(f, Finite(n)) == at_inf:
            return n
    return NotFoundUpTo(max_n)


def check_point_oracle(cfg: GenConfig, bound: int = 64) -> FuzzReport:
    """Tagged search against the definable ``eps`` on predicates over naturals.

    For each generated ``q : nat -> bool``, ``eps_point`` with
    ``BoundedSearch(bound)`` must agree with the definable ``eps`` applied to
    the same predicate restricted to finite points.  ``Finite(n)`` matches the
    first 1 of the stream, and ``NoWitnessUpTo`` matches an all-zero prefix
    of length ``bound + 1``.
    """
    _require_type(cfg, STREAM, "point oracle check")

    def check(term: Term) -> Optional[dict]:
        q = denote(term)

        def tagged_q(x) -> int:
            if x is INFINITY:
                raise ValueError("restricted predicate queried at infinity")
            return as_bit(apply_sem(q, _nat(x.n)))

        verdict = eps_point(tagged_q, BoundedSearch(bound))
        stream = sem_to_stream(apply_sem(_eps_denotation(), restrict_to_finite(tagged_q)))
        got = stream.prefix(bound + 1)
        if isinstance(verdict, NoWitnessUpTo):
            ok = not any(got)
        else:
            ok = got.index(1) == verdict.n if 1 in got else False
        return None if ok else {"verdict": repr(verdict), "got": _bits(got)}

    terms = [gen_term(cfg, i) for i in range(cfg.count)]
    return _run("point", cfg, terms, 0, check, 1)


def _nat(n: int):
    from .semval import SNat

    return SNat(n)
