"""Big-step evaluation of closed T terms on a call-by-value environment machine.

The machine loop lives in a kernel module.  The compiled ``_machine``
extension is used when it was built; otherwise ``_machine_py`` is imported.
``BACKEND`` records which one was chosen.  Set ``SYSTEMT_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Union

from . import _machine_py
from .syntax import (
    App,
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
    as_numeral,
    free_bound,
)

if os.environ.get("SYSTEMT_PURE_PYTHON") == "1":
    _kernel = _machine_py
else:
    try:
        from . import _machine as _kernel  # type: ignore[attr-defined]
    except ImportError:
        _kernel = _machine_py

BACKEND = "cython" if _kernel is not _machine_py else "python"
KERNELS = {"python": _machine_py}
if BACKEND == "cython":
    KERNELS["cython"] = _kernel

_VAR, _LAM, _APP, _NUM, _SUCC, _REC, _TRUE, _FALSE, _IF = range(9)


@dataclass(frozen=True)
class MNat:
    n: int


@dataclass(frozen=True)
class MBool:
    b: int


@dataclass(frozen=True)
class MClosure:
    env: list
    annotation: Type
    body: Term


MachineValue = Union[MNat, MBool, MClosure]


class StepBudgetExceeded(RuntimeError):
    """Evaluation ran past its step budget.  T is total, so this means a bug
    or a budget set too low for the term."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"step budget of {budget} exceeded")


def encode(term: Term) -> tuple:
    """Translate a core term into the kernel's tuple encoding.

    ``Succ`` chains collapse to one node carrying a count, and numerals to a
    constant.  ``Lam`` nodes keep a reference to their source term so
    closures can be read back.
    """
    if isinstance(term, Var):
        return (_VAR, term.index)
    if isinstance(term, Lam):
        return (_LAM, encode(term.body), term)
    if isinstance(term, App):
        return (_APP, encode(term.fn), encode(term.arg))
    if isinstance(term, Zero):
        return (_NUM, 0)
    if isinstance(term, Succ):
        literal = as_numeral(term)
        if literal is not None:
            return (_NUM, literal)
        count = 0
        while isinstance(term, Succ):
            term = term.arg
            count += 1
        return (_SUCC, encode(term), count)
    if isinstance(term, Rec):
        return (_REC, encode(term.zero_case), encode(term.step_case), encode(term.scrutinee))
    if isinstance(term, TrueT):
        return (_TRUE,)
    if isinstance(term, FalseT):
        return (_FALSE,)
    if isinstance(term, If):
        return (_IF, encode(term.cond), encode(term.then_branch), encode(term.else_branch))
    raise TypeError(f"not a term: {term!r}")


def _read_back(value) -> MachineValue:
    if type(value) is bool:
        return MBool(int(value))
    if type(value) is int:
        return MNat(value)
    code, env = value
    lam = code[2]
    values = []
    while env is not None:
        values.append(_read_back(env[0]))
        env = env[1]
    return MClosure(values, lam.annotation, lam.body)


def eval_closed(
    term: Term, budget: Optional[int] = None, backend: Optional[str] = None
) -> MachineValue:
    """Evaluate a closed, well-typed term.

    ``budget`` caps machine steps (``None`` means unlimited).  ``backend``
    picks ``"python"`` or ``"cython"`` explicitly; the default is ``BACKEND``.
    """
    if free_bound(term) != 0:
        raise ValueError("eval_closed needs a closed term")
    kernel = _kernel if backend is None else KERNELS[backend]
    limit = -1 if budget is None else budget
    try:
        raw = kernel.run(encode(term), limit)
    except kernel.BudgetExceeded:
        raise StepBudgetExceeded(limit) from None
    return _read_back(raw)


def ground_value(value: MachineValue) -> int:
    """The natural or bit carried by a ground machine value."""
    if isinstance(value, MNat):
        return value.n
    if isinstance(value, MBool):
        return value.b
    raise TypeError("closure is not a ground value")
