"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records a PASS/FAIL line.  ``conftest.py`` prints them at the end
of a pytest run; ``python tests/test_acceptance.py`` runs them directly.
"""

from __future__ import annotations

import functools
import json
import subprocess
import sys
import time
from functools import lru_cache

from systemt.checker import typecheck
from systemt.denot import SNat, apply_sem, as_bit, denote, ground, paused_gc, sem_to_stream
from systemt.fuzz import (
    GenConfig, NO_WITNESS_CONFIRM, WITNESS_SCAN, check_eps_oracle, check_test_constancy,
    functional_corpus, gen_term,
)
from systemt.machine import eval_closed, ground_value
from systemt.ninf import INFINITY, Finite, member_prefix_check
from systemt.parser import parse_term
from systemt.prelude import tm_add, tm_eps, tm_mult, tm_test
from systemt.printer import pretty
from systemt.syntax import BOOL, NAT, PREDICATE, STREAM, Arrow, arrow

SEED = 20240601
MAX_SIZE = 40
PREFIX = 64

RESULTS: dict[int, str] = {}


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            status, note = "FAIL", ""
            try:
                note = fn(*args, **kwargs) or ""
                status = "PASS"
            except AssertionError as exc:
                note = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                raise
            finally:
                elapsed = time.perf_counter() - start
                line = f"criterion {number:2d} {status}: {title} ({elapsed:.2f} s) {note}".rstrip()
                RESULTS[number] = line
                print(line)

        return run

    return wrap


@lru_cache(maxsize=1)
def _predicates():
    cfg = GenConfig(PREDICATE, MAX_SIZE, SEED, 200)
    terms = list(functional_corpus()) + [gen_term(cfg, i) for i in range(cfg.count)]
    return terms, [denote(t) for t in terms]


def _at(p, x):
    from systemt.denot import stream_to_sem
    from systemt.ninf import embed

    return as_bit(apply_sem(p, stream_to_sem(embed(x))))


@criterion(1, "eps and test have their types")
def test_criterion_01_typing():
    start = time.perf_counter()
    assert typecheck(tm_eps()) == Arrow(Arrow(STREAM, BOOL), STREAM)
    assert typecheck(tm_test()) == Arrow(Arrow(STREAM, BOOL), BOOL)
    took = time.perf_counter() - start
    assert took < 1.0, f"typing took {took:.2f} s"


@criterion(2, "eps prefix 64 equals the brute-force infimum on 200 predicates plus corpus")
def test_criterion_02_eps_oracle():
    cfg = GenConfig(PREDICATE, MAX_SIZE, SEED, 200)
    start = time.perf_counter()
    report = check_eps_oracle(cfg, PREFIX)
    took = time.perf_counter() - start
    mismatches = [d for d in report.details if d["reason"] == "prefix mismatch"]
    assert not mismatches, f"{len(mismatches)} mismatches, first {mismatches[0]}"
    assert report.samples == 200 + len(functional_corpus())
    assert took < 60.0, f"took {took:.1f} s"
    return f"{report.samples} predicates"


@criterion(3, "every eps prefix is monotone")
def test_criterion_03_monotone():
    terms, preds = _predicates()
    eps = denote(tm_eps())
    with paused_gc():
        bad = [i for i, p in enumerate(preds)
               if not member_prefix_check(sem_to_stream(apply_sem(eps, p)), PREFIX)]
    assert not bad, f"non-monotone prefixes at {bad}"
    return f"{len(preds)} prefixes"


@criterion(4, "p(eps p) = 1 exactly when a witness exists")
def test_criterion_04_witness():
    _, preds = _predicates()
    eps = denote(tm_eps())
    violations = []
    with paused_gc():
        for i, p in enumerate(preds):
            at_eps = as_bit(apply_sem(p, apply_sem(eps, p)))
            at_inf = _at(p, INFINITY)
            witness = at_inf == 1 or any(_at(p, Finite(n)) for n in range(WITNESS_SCAN + 1))
            if at_eps != int(witness):
                violations.append(i)
            elif at_eps == 0 and any(_at(p, Finite(n)) for n in range(NO_WITNESS_CONFIRM + 1)):
                violations.append(i)
    assert not violations, f"violations at {violations}"
    return f"{len(preds)} predicates"


@criterion(5, "test is 1 on 500 generated functionals plus corpus")
def test_criterion_05_constancy():
    cfg = GenConfig(PREDICATE, MAX_SIZE, SEED + 1, 500)
    start = time.perf_counter()
    report = check_test_constancy(cfg)
    took = time.perf_counter() - start
    assert report.ok, f"failures at {report.failures}"
    assert report.samples == 500 + report.corpus_size
    assert took < 120.0, f"took {took:.1f} s"
    return f"{report.samples} functionals"


KREISEL_EXPECTED = {
    "test_value": 0,
    "antecedent_holds": 1,
    "consequent_holds": 0,
    "eps_prefix_zero_up_to": 100000,
    "f_kreisel_at_infinity": 1,
    "f_kreisel_at_zerobar": 0,
}


def _tw(*argv):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "systemt.cli", *argv], capture_output=True, text=True, check=False
    )
    return proc, time.perf_counter() - start


@criterion(6, "tw demo kreisel --bound 100000 gives test 0 in under 5 s; control gives 1")
def test_criterion_06_kreisel():
    proc, took = _tw("demo", "kreisel", "--bound", "100000", "--json")
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout) == KREISEL_EXPECTED
    assert took < 5.0, f"took {took:.2f} s"
    control, _ = _tw("demo", "kreisel", "--bound", "100000", "--control", "--json")
    assert control.returncode == 0 and json.loads(control.stdout)["test_value"] == 1
    return f"demo in {took:.2f} s"


@criterion(7, "machine and model agree on 1000 ground terms")
def test_criterion_07_agreement():
    mismatches = []
    for i in range(1000):
        ty = NAT if i % 2 == 0 else BOOL
        term = gen_term(GenConfig(ty, MAX_SIZE, SEED + 7), i)
        if ground_value(eval_closed(term)) != ground(denote(term)):
            mismatches.append(i)
    assert not mismatches, f"mismatches at {mismatches}"


ROUNDTRIP_TYPES = [NAT, BOOL, STREAM, PREDICATE, arrow(NAT, NAT), arrow(STREAM, STREAM)]


@criterion(8, "parse after pretty is the identity on 1000 terms")
def test_criterion_08_roundtrip():
    mismatches = []
    for i in range(1000):
        ty = ROUNDTRIP_TYPES[i % len(ROUNDTRIP_TYPES)]
        term = gen_term(GenConfig(ty, MAX_SIZE, SEED + 8), i)
        if parse_term(pretty(term, literals=i % 3 != 0)) != term:
            mismatches.append(i)
    assert not mismatches, f"mismatches at {mismatches}"


@criterion(9, "256-bit prefix of eps on the constant-false predicate in under 1 s")
def test_criterion_09_cost_guard():
    start = time.perf_counter()
    eps = denote(tm_eps())  # fresh compile: no caches from earlier tests
    stream = sem_to_stream(apply_sem(eps, denote(parse_term("fun a : nat -> bool . false"))))
    bits = stream.prefix(256)
    took = time.perf_counter() - start
    assert bits == [0] * 256
    assert took < 1.0, f"took {took:.3f} s"
    return f"{took * 1000:.0f} ms"


@criterion(10, "add and mult agree with host arithmetic up to 12")
def test_criterion_10_arithmetic():
    add, mult = denote(tm_add()), denote(tm_mult())
    for m in range(13):
        for n in range(13):
            assert apply_sem(apply_sem(add, SNat(m)), SNat(n)) == SNat(m + n), (m, n)
            assert apply_sem(apply_sem(mult, SNat(m)), SNat(n)) == SNat(m * n), (m, n)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
