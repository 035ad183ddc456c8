"""The set-theoretical model of System T.

``denote`` interprets a term as a host value (see ``semval``).  Evaluation
caches results, which does not change any value:

* a ``fun x : nat . body`` whose body is not another ``fun`` remembers its
  result per index (streams ``nat -> bool`` are the main case),
* a closed subterm is evaluated at most once per ``denote`` call,
* ``Rec`` keeps the accumulator sequence for each (step function, zero value)
  pair and resumes it, so ``rec z s n`` after ``rec z s m`` costs ``n - m``
  steps when ``s`` is the same function object.

The term compiler is a kernel module.  The Cython build ``_model`` is used
when present, else ``_model_py`` (same source).  ``SYSTEMT_PURE_PYTHON=1``
forces the fallback.

Thread safety: cache writes are single dict/list stores of values that are
equal whichever thread computes them, so concurrent use can at worst
duplicate work.  The fuzz harness still gives each sample its own
denotation.
"""

from __future__ import annotations

import gc
import os
from contextlib import contextmanager
from typing import Callable, Iterator, Optional, Sequence

from . import _model_py
from .semval import (  # noqa: F401  re-exported model API
    S_FALSE,
    S_TRUE,
    DenotationError,
    NotAFunctionError,
    SBool,
    SemVal,
    SFun,
    SNat,
    apply_sem,
    as_bit,
    ground,
    host_fun,
    sbool,
)
from .syntax import Term

if os.environ.get("SYSTEMT_PURE_PYTHON") == "1":
    _kernel = _model_py
else:
    try:
        from . import _model as _kernel  # type: ignore[attr-defined]
    except ImportError:
        _kernel = _model_py

BACKEND = "cython" if _kernel is not _model_py else "python"
KERNELS = {"python": _model_py}
if BACKEND == "cython":
    KERNELS["cython"] = _kernel


def compile_term(term: Term, backend: Optional[str] = None) -> Callable[[tuple], SemVal]:
    """Compile ``term`` to a function of the environment tuple (``env[0]`` is ``Var(0)``)."""
    kernel = _kernel if backend is None else KERNELS[backend]
    return kernel.compile_term(term)


def denote(term: Term, env: Sequence[SemVal] = (), backend: Optional[str] = None) -> SemVal:
    """Interpret ``term``; ``env[0]`` is the value of ``Var(0)``."""
    return compile_term(term, backend)(tuple(env))


class BitStream:
    """An element of 2^N: a total bit function with a per-index cache."""

    __slots__ = ("_bit_at", "_memo")

    def __init__(self, bit_at: Callable[[int], int]):
        self._bit_at = bit_at
        self._memo: dict[int, int] = {}

    def bit_at(self, i: int) -> int:
        memo = self._memo
        bit = memo.get(i)
        if bit is None:
            if i < 0:
                raise IndexError(f"negative stream index {i}")
            bit = self._bit_at(i)
            if bit not in (0, 1):
                raise ValueError(f"stream produced non-bit {bit!r} at {i}")
            memo[i] = bit
        return bit

    __getitem__ = bit_at

    def prefix(self, k: int) -> list[int]:
        return [self.bit_at(i) for i in range(k)]

    def computed(self) -> int:
        """How many distinct indices have been forced so far."""
        return len(self._memo)


def stream_to_sem(s: BitStream) -> SFun:
    def query(arg):
        if type(arg) is not SNat:
            raise DenotationError(f"stream queried at non-natural {arg!r}")
        return sbool(s.bit_at(arg.n))

    return SFun(query)


def sem_to_stream(v: SemVal) -> BitStream:
    if type(v) is not SFun:
        raise NotAFunctionError(f"not a stream: {v!r}")

    def bit(i: int) -> int:
        out = apply_sem(v, SNat(i))
        if type(out) is not SBool:
            raise DenotationError(f"stream value at {i} is not a boolean: {out!r}")
        return out.b

    return BitStream(bit)


@contextmanager
def paused_gc() -> Iterator[None]:
    """Suspend the cyclic garbage collector for a block.

    Long searches fill the caches with millions of small objects.  Each full
    collection then re-scans all of them, which makes the run superlinear.
    Collection resumes, and catches up, when the block exits.
    """
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def bits(s: BitStream, k: int) -> str:
    return "".join(str(b) for b in s.prefix(k))
