import os
import pathlib
import runpy
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from reference import evaluate
from systemt import machine
from systemt.fuzz import GenConfig, gen_term
from systemt.machine import (
    KERNELS, MBool, MClosure, MNat, StepBudgetExceeded, eval_closed, ground_value,
)
from systemt.parser import parse_term
from systemt.prelude import prelude_terms
from systemt.syntax import BOOL, NAT, Lam, Var

BACKENDS = sorted(KERNELS)


def run(src, **kw):
    return eval_closed(parse_term(src, prelude_terms()), **kw)


def test_fallback_is_always_available():
    assert "python" in KERNELS
    assert machine.BACKEND in KERNELS


@pytest.mark.parametrize("backend", BACKENDS)
def test_add_two_three(backend):
    assert run("add 2 3", backend=backend) == MNat(5)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize(
    "src, value",
    [
        ("mult 4 3", MNat(12)),
        ("pred 0", MNat(0)),
        ("pred 7", MNat(6)),
        ("iszero 0", MBool(1)),
        ("leq 5 4", MBool(0)),
        ("nbar 3 3", MBool(1)),
        ("cons zerobar 0", MBool(0)),
        ("eps (fun a : nat -> bool . not (a 3)) 3", MBool(0)),
        ("eps (fun a : nat -> bool . not (a 3)) 4", MBool(1)),
        ("test (fun a : nat -> bool . a 2)", MBool(1)),
        ("(rec (fun x : nat . x) (fun k : nat . fun g : nat -> nat . fun x : nat . g (g x)) 3) 1", MNat(1)),
        ("(rec [nat -> nat] (fun x : nat . succ x) (fun k : nat . fun g : nat -> nat . fun x : nat . g (g x)) 3) 0", MNat(8)),
    ],
)
def test_goldens(backend, src, value):
    assert run(src, backend=backend) == value


def test_closure_reads_back_with_environment():
    value = run("(fun x : nat . fun y : bool . x) 4")
    assert isinstance(value, MClosure)
    assert value.env == [MNat(4)]
    assert (value.annotation, value.body) == (BOOL, Var(1))
    with pytest.raises(TypeError):
        ground_value(value)


@pytest.mark.parametrize("backend", BACKENDS)
def test_step_budget(backend):
    with pytest.raises(StepBudgetExceeded):
        run("mult 30 30", budget=50, backend=backend)
    assert run("mult 30 30", budget=10**6, backend=backend) == MNat(900)


def test_rejects_open_terms():
    with pytest.raises(ValueError):
        eval_closed(Lam(NAT, Var(1)))


def test_large_recursion_does_not_overflow_the_host_stack():
    assert run("mult 300 300") == MNat(90000)


def _host(value):
    if isinstance(value, MNat):
        return value.n
    if isinstance(value, MBool):
        return bool(value.b)
    return None


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([NAT, BOOL]), st.integers(1, 45), st.integers(0, 10**6))
def test_backends_match_reference_evaluator(ty, max_size, seed):
    term = gen_term(GenConfig(ty, max_size, seed), 0)
    expected = evaluate(term)
    for backend in BACKENDS:
        assert _host(eval_closed(term, backend=backend)) == expected


def test_env_var_forces_the_fallbacks():
    code = "from systemt import denot, machine; print(machine.BACKEND, denot.BACKEND)"
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True,
        env={**os.environ, "SYSTEMT_PURE_PYTHON": "1"},
    )
    assert proc.stdout.split() == ["python", "python"]


def test_benchmark_script_runs(capsys):
    path = pathlib.Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    runpy.run_path(str(path), run_name="bench")["main"](["--repeat", "1"])
    out = capsys.readouterr().out
    assert "machine  python" in out and "model    python" in out
