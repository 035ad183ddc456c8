"""Compare the compiled kernels with their pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Machine workload: closed arithmetic and search terms on the CEK machine.
Model workload: eps prefixes and ``test`` over the fixed functional corpus,
compiled afresh for each run so caches start cold.
"""

from __future__ import annotations

import argparse
import statistics
import time

from systemt import denot, machine
from systemt.denot import apply_sem, as_bit, paused_gc, sem_to_stream
from systemt.fuzz import functional_corpus
from systemt.parser import parse_term
from systemt.prelude import prelude_terms, tm_eps, tm_test

MACHINE_PROGRAMS = [
    "mult 60 60",
    "leq 400 399",
    "eps (fun a : nat -> bool . and (a 40) (not (a 30))) 200",
    "test (fun a : nat -> bool . a (if a 0 then 9 else 3))",
]


def bench_machine(backend: str) -> float:
    defs = prelude_terms()
    terms = [parse_term(src, defs) for src in MACHINE_PROGRAMS]
    start = time.perf_counter()
    for term in terms:
        machine.eval_closed(term, backend=backend)
    return time.perf_counter() - start


def bench_model(backend: str, prefix: int = 512) -> float:
    corpus = functional_corpus()
    start = time.perf_counter()
    with paused_gc():
        eps = denot.denote(tm_eps(), backend=backend)
        test = denot.denote(tm_test(), backend=backend)
        for term in corpus:
            p = denot.denote(term, backend=backend)
            sem_to_stream(apply_sem(eps, p)).prefix(prefix)
            assert as_bit(apply_sem(test, p)) == 1
    return time.perf_counter() - start


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    for name, bench, kernels in (
        ("machine", bench_machine, machine.KERNELS),
        ("model", bench_model, denot.KERNELS),
    ):
        timings = {}
        for backend in sorted(kernels):
            timings[backend] = statistics.median(bench(backend) for _ in range(args.repeat))
            print(f"{name:8s} {backend:7s} {timings[backend] * 1000:9.1f} ms")
        if "cython" in timings:
            print(f"{name:8s} speedup {timings['python'] / timings['cython']:9.2f}x")
        else:
            print(f"{name:8s} compiled kernel not built; only the fallback ran")


if __name__ == "__main__":
    main()
