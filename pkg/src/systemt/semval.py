"""Values of the set-theoretical model.

``SNat`` and ``SBool`` are ground values (0 is false, 1 is true).  ``SFun``
wraps any total Python callable from values to values.  That is how
definable functionals get applied to arguments no T term denotes.
"""

from __future__ import annotations

from typing import Callable, Union


class DenotationError(RuntimeError):
    """A value of the wrong shape reached a construct; the term was ill-typed."""


class NotAFunctionError(DenotationError):
    pass


class SNat:
    __slots__ = ("n",)

    def __init__(self, n: int):
        self.n = n

    def __eq__(self, other):
        return type(other) is SNat and other.n == self.n

    def __hash__(self):
        return hash(self.n)

    def __repr__(self):
        return f"SNat({self.n})"


class SBool:
    __slots__ = ("b",)

    def __init__(self, b: int):
        self.b = 1 if b else 0

    def __eq__(self, other):
        return type(other) is SBool and other.b == self.b

    def __hash__(self):
        return hash(self.b) + 7

    def __repr__(self):
        return f"SBool({self.b})"


class SFun:
    """A total host function between semantic values.

    Equality is object identity.  Function values have no decidable
    extensional equality, and nothing here pretends otherwise.

    ``cache`` is present only on functions over ``nat`` and maps an argument's
    natural to the result.  ``rec_chains`` belongs to functions used as a
    ``rec`` step and holds accumulator sequences per zero value.
    """

    __slots__ = ("fn", "cache", "rec_chains", "__weakref__")

    def __init__(self, fn: Callable[["SemVal"], "SemVal"], memo: bool = False):
        self.fn = fn
        self.cache = {} if memo else None
        self.rec_chains = None

    def __call__(self, arg):
        return apply_sem(self, arg)

    def __repr__(self):
        return f"SFun({getattr(self.fn, '__name__', 'fn')})"


SemVal = Union[SNat, SBool, SFun]

S_FALSE = SBool(0)
S_TRUE = SBool(1)


def sbool(bit) -> SBool:
    return S_TRUE if bit else S_FALSE


def apply_sem(f: SemVal, arg: SemVal) -> SemVal:
    """Model application; ``f`` may be definable or an arbitrary host function."""
    if type(f) is not SFun:
        raise NotAFunctionError(f"cannot apply non-function {f!r}")
    cache = f.cache
    if cache is None or type(arg) is not SNat:
        return f.fn(arg)
    key = arg.n
    try:
        return cache[key]
    except KeyError:
        pass
    result = f.fn(arg)
    cache[key] = result
    return result


def ground(value: SemVal) -> int:
    """The natural or bit inside a ground value."""
    if type(value) is SNat:
        return value.n
    if type(value) is SBool:
        return value.b
    raise DenotationError(f"not a ground value: {value!r}")


def as_bit(value: SemVal) -> int:
    if type(value) is not SBool:
        raise DenotationError(f"expected a boolean, got {value!r}")
    return value.b


def host_fun(fn: Callable[[SemVal], SemVal]) -> SFun:
    """Wrap an arbitrary host callable as a semantic function."""
    return SFun(fn)
