"""Tagged points of N-infinity and Kreisel's counter-example.

No program can decide whether a stream equals ``0^w``, so the discontinuous
function ``f(a) = [a = infinity]`` is not a computable stream function.  Here
points are tagged as ``Finite(n)`` or ``INFINITY`` and that function is
ordinary code.  ``test`` only applies its argument to values of ``eps``,
which always lie in N-infinity, so working on tagged points is sound.

Search over tagged points cannot decide "no finite witness" in general.
``eps_point`` therefore takes a ``WitnessPolicy``: either a certificate that
the predicate is constant on finite points, or a bounded search that returns
``NoWitnessUpTo`` instead of guessing ``INFINITY``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Optional, Union

from .denot import (
    BitStream,
    SemVal,
    SFun,
    SNat,
    apply_sem,
    as_bit,
    denote,
    paused_gc,
    sbool,
    sem_to_stream,
    stream_to_sem,
)


@dataclass(frozen=True, order=True)
class Finite:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Finite point needs n >= 0, got {self.n}")


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

NInfPoint = Union[Finite, _Infinity]


def point_le(x: NInfPoint, y: NInfPoint) -> bool:
    """Pointwise order of the embedded streams; INFINITY is the top."""
    if y is INFINITY:
        return True
    if x is INFINITY:
        return False
    return x.n <= y.n


def embed(x: NInfPoint) -> BitStream:
    """``Finite(n)`` to ``0^n 1^w``, ``INFINITY`` to ``0^w``."""
    if x is INFINITY:
        return BitStream(lambda i: 0)
    n = x.n
    return BitStream(lambda i: 1 if i >= n else 0)


def member_prefix_check(s: BitStream, k: int) -> int:
    """1 iff the first ``k`` bits never drop from 1 to 0."""
    if k < 1:
        raise ValueError("prefix length must be at least 1")
    previous = 0
    for i in range(k):
        bit = s.bit_at(i)
        if bit < previous:
            return 0
        previous = bit
    return 1


def classify_prefix(bits: list[int]) -> Optional[NInfPoint]:
    """The N-infinity point a monotone prefix is consistent with.

    An all-zero prefix is reported as INFINITY, which is the best a finite
    observation can say.  Returns None for non-monotone prefixes.
    """
    if any(a > b for a, b in zip(bits, bits[1:])):
        return None
    try:
        return Finite(bits.index(1))
    except ValueError:
        return INFINITY


def succ_point(x: NInfPoint) -> NInfPoint:
    return INFINITY if x is INFINITY else Finite(x.n + 1)


def f_kreisel(x: NInfPoint) -> int:
    """1 at infinity, 0 at every finite point.  Not continuous."""
    return 1 if x is INFINITY else 0


@dataclass(frozen=True)
class ConstantOnFinite:
    """Certificate: the predicate takes ``bit`` at every finite point."""

    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")


@dataclass(frozen=True)
class BoundedSearch:
    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("search bound must be at least 1")


WitnessPolicy = Union[ConstantOnFinite, BoundedSearch]


@dataclass(frozen=True)
class NoWitnessUpTo:
    bound: int


class CertificateViolation(AssertionError):
    pass


class PrefixCheckFailure(AssertionError):
    pass


class UndecidedSearch(RuntimeError):
    """Bounded search found no witness, so the infimum is unknown."""


def eps_point(
    p: Callable[[NInfPoint], int], policy: WitnessPolicy
) -> Union[NInfPoint, NoWitnessUpTo]:
    """The infimum of ``{x | p(x) = 1}``, using ``policy`` for the undecidable part."""
    if isinstance(policy, ConstantOnFinite):
        seen = p(Finite(0))
        if seen != policy.bit:
            raise CertificateViolation(
                f"predicate is {seen} at Finite(0) but certified constant {policy.bit}"
            )
        # an empty finite part leaves only INFINITY or nothing; both give the top
        return Finite(0) if policy.bit else INFINITY
    for n in range(policy.bound + 1):
        if p(Finite(n)):
            return Finite(n)
    return NoWitnessUpTo(policy.bound)


@lru_cache(maxsize=1)
def _eps_denotation() -> SemVal:
    from .prelude import tm_eps

    return denote(tm_eps())


def restrict_to_finite(p: Callable[[NInfPoint], int], scan_limit: int = 10**7) -> SFun:
    """Turn a tagged predicate into a stream predicate on the points ``nbar n``.

    The argument stream is decoded to ``Finite(n)`` by locating its first 1.
    Callers such as ``eps`` pass ``nbar 0, nbar 1, ...`` in order, so the
    decoder first tries ``previous n + 1`` with two bit reads.  That check
    assumes a monotone argument.  If it fails the decoder scans from 0.
    Arguments outside N-infinity are not supported.
    """
    hint = [0]

    def bit(alpha, i):
        return as_bit(apply_sem(alpha, SNat(i)))

    def decode(alpha) -> int:
        h = hint[0]
        if bit(alpha, h) == 1 and (h == 0 or bit(alpha, h - 1) == 0):
            n = h
        else:
            n = 0
            while bit(alpha, n) == 0:
                n += 1
                if n > scan_limit:
                    raise ValueError("argument looks like infinity; not a finite point")
        hint[0] = n + 1
        return n

    return SFun(lambda alpha: sbool(p(Finite(decode(alpha)))))


def tagged(f: SemVal) -> Callable[[NInfPoint], int]:
    """View a semantic predicate on streams as a function of tagged points."""
    return lambda x: as_bit(apply_sem(f, stream_to_sem(embed(x))))


@dataclass(frozen=True)
class CounterexampleReport:
    test_value: int
    antecedent_holds: int
    consequent_holds: int
    eps_prefix_zero_up_to: int
    f_kreisel_at_infinity: int
    f_kreisel_at_zerobar: int

    def __post_init__(self):
        assert self.test_value == (self.consequent_holds if self.antecedent_holds else 1)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def run_counterexample(
    bound: int,
    f: Callable[[NInfPoint], int] = f_kreisel,
    policy: Optional[WitnessPolicy] = None,
) -> CounterexampleReport:
    """Evaluate ``test(f)`` over tagged points and cross-check the search.

    By default ``f`` is ``f_kreisel``.  Its inner predicate
    ``[f(x+1) = f(inf)]`` is 0 at every finite point, because
    ``f_kreisel(Finite m) = 0 != 1``.  That fact is the default certificate.
    For any other ``f`` the default policy is ``BoundedSearch(bound)``.

    The cross-check runs the definable ``eps`` from the prelude on the
    predicate restricted to finite points.  It requires the stream's first
    ``bound`` bits to agree with the tagged infimum.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    f_inf = f(INFINITY)

    def inner(x: NInfPoint) -> int:
        return int(f(succ_point(x)) == f_inf)

    if policy is None:
        policy = ConstantOnFinite(0) if f is f_kreisel else BoundedSearch(bound)
    point = eps_point(inner, policy)
    if isinstance(point, NoWitnessUpTo):
        raise UndecidedSearch(f"no witness up to {point.bound}; supply a certificate")

    antecedent = int(f(point) == f_inf)
    consequent = int(f(Finite(0)) == f_inf)
    test_value = consequent if antecedent else 1

    stream = sem_to_stream(apply_sem(_eps_denotation(), restrict_to_finite(inner)))
    with paused_gc():
        zeros = _leading_zeros(stream, bound)
    expected = bound if point is INFINITY else min(point.n, bound)
    if zeros != expected:
        raise PrefixCheckFailure(
            f"definable eps has {zeros} leading zeros, tagged infimum {point} needs {expected}"
        )
    if point is not INFINITY and point.n < bound:
        # after the first 1 the prefix must stay 1 (the value lies in N-infinity)
        for i in range(point.n, bound):
            if stream.bit_at(i) != 1:
                raise PrefixCheckFailure(f"definable eps drops to 0 at index {i}")

    return CounterexampleReport(
        test_value=test_value,
        antecedent_holds=antecedent,
        consequent_holds=consequent,
        eps_prefix_zero_up_to=zeros,
        f_kreisel_at_infinity=f_inf,
        f_kreisel_at_zerobar=f(Finite(0)),
    )


def _leading_zeros(stream: BitStream, limit: int) -> int:
    for i in range(limit):
        if stream.bit_at(i):
            return i
    return limit


@dataclass(frozen=True)
class DiscontinuityReport:
    bound: int
    value_at_infinity: int
    agreement_index: Optional[int]  # least n <= bound with f(nbar n) = f(inf)
    finite_values: tuple[int, ...]  # distinct values seen on Finite(0..bound)

    @property
    def discontinuous_up_to_bound(self) -> bool:
        return self.agreement_index is None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["finite_values"] = list(self.finite_values)
        d["discontinuous_up_to_bound"] = self.discontinuous_up_to_bound
        return d


def discontinuity_certificate(
    bound: int, f: Callable[[NInfPoint], int] = f_kreisel
) -> DiscontinuityReport:
    """Scan ``f`` on ``Finite(0..bound)`` against its value at infinity.

    A continuous ``f`` agrees with ``f(INFINITY)`` at some finite point.
    ``f_kreisel`` never does.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    at_inf = f(INFINITY)
    agreement = None
    seen = set()
    for n in range(bound + 1):
        value = f(Finite(n))
        seen.add(value)
        if agreement is None and value == at_inf:
            agreement = n
    return DiscontinuityReport(bound, at_inf, agreement, tuple(sorted(seen)))
