"""``tw``: command-line front end for the workbench.

Exit codes: 0 success, 1 a property failed, 2 usage, parse or type errors.
Source files see the prelude definitions unless they define the same names.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .checker import TypeCheckError, typecheck
from .denot import apply_sem, denote, paused_gc, sem_to_stream
from .machine import MBool, MClosure, MNat, StepBudgetExceeded, eval_closed
from .ninf import (
    INFINITY,
    ConstantOnFinite,
    classify_prefix,
    f_kreisel,
    run_counterexample,
)
from .parser import FrontendError, SourceFile, parse, parse_type, tokenize
from .prelude import prelude_terms, tm_eps
from .syntax import PREDICATE, Type


class UsageError(Exception):
    """Bad input that is the user's to fix; exit code 2."""


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _color(text: str, ok: bool) -> str:
    if os.environ.get("TW_COLOR", "0") != "1":
        return text
    return f"\x1b[{32 if ok else 31}m{text}\x1b[0m"


def _emit(args, payload: dict, human: str):
    print(json.dumps(payload, sort_keys=True) if args.json else human)


def _let_names(text: str) -> set[str]:
    toks = tokenize(text)
    return {b.text for a, b in zip(toks, toks[1:]) if a.kind == "kw" and a.text == "let" and b.kind == "ident"}


def load_source(path: str) -> SourceFile:
    """Parse ``path`` with the prelude pre-bound; the file's own lets take precedence."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        own = _let_names(text)
        defs = {k: t for k, t in prelude_terms().items() if k not in own}
        return parse(text, defs)
    except FrontendError as exc:
        raise UsageError(f"{path}:{exc}") from None


def _main_term(src: SourceFile, path: str, expected: Optional[Type] = None):
    if src.main is None:
        raise UsageError(f"{path}: no main term after the definitions")
    ty = _typecheck(src.main, path)
    if expected is not None and ty != expected:
        raise UsageError(f"{path}: main term has type {ty}, expected {expected}")
    return src.main, ty


def _typecheck(term, where: str) -> Type:
    try:
        return typecheck(term)
    except TypeCheckError as exc:
        raise UsageError(f"{where}: type error: {exc}") from None


def cmd_check(args) -> int:
    src = load_source(args.file)
    entries = [(name, str(_typecheck(term, f"{args.file}: {name}"))) for name, term in src.definitions]
    if src.main is not None:
        entries.append(("main", str(_typecheck(src.main, f"{args.file}: main"))))
    _emit(
        args,
        {"file": args.file, "ok": True, "types": dict(entries)},
        "\n".join(f"{name} : {ty}" for name, ty in entries),
    )
    return 0


def _show_value(value) -> tuple[object, str]:
    if isinstance(value, MNat):
        return value.n, str(value.n)
    if isinstance(value, MBool):
        text = "true" if value.b else "false"
        return bool(value.b), text
    assert isinstance(value, MClosure)
    return None, "<closure>"


def cmd_eval(args) -> int:
    src = load_source(args.file)
    term, ty = _main_term(src, args.file)
    try:
        value = eval_closed(term, budget=args.budget)
    except StepBudgetExceeded as exc:
        print(f"tw: {exc}", file=sys.stderr)
        return 1
    raw, text = _show_value(value)
    _emit(args, {"type": str(ty), "value": raw, "text": text}, text)
    return 0


def _classification(bits: list[int]) -> tuple[Optional[str], str]:
    point = classify_prefix(bits)
    if point is None:
        return None, "not monotone"
    if point is INFINITY:
        return "infinity", f"infinity (no 1 in the first {len(bits)} bits)"
    return f"nbar {point.n}", f"nbar {point.n}"


def cmd_eps(args) -> int:
    if args.prefix < 1:
        raise UsageError("--prefix must be at least 1")
    src = load_source(args.file)
    term, _ = _main_term(src, args.file, PREDICATE)
    with paused_gc():
        stream = sem_to_stream(apply_sem(denote(tm_eps()), denote(term)))
        bits = stream.prefix(args.prefix)
    text = "".join(map(str, bits))
    tag, human = _classification(bits)
    _emit(args, {"prefix": text, "length": len(bits), "classification": tag}, f"{text}\n{human}")
    return 0 if tag is not None else 1


def cmd_modulus(args) -> int:
    from .fuzz import NotFoundUpTo, agreement_index

    if args.max < 0:
        raise UsageError("--max must be non-negative")
    src = load_source(args.file)
    term, _ = _main_term(src, args.file, PREDICATE)
    with paused_gc():
        found = agreement_index(denote(term), args.max)
    if isinstance(found, NotFoundUpTo):
        _emit(args, {"agreement_index": None, "max": args.max},
              f"no n <= {args.max} with f(nbar n) = f(infinity)")
        return 1
    _emit(args, {"agreement_index": found, "max": args.max}, str(found))
    return 0


def _constant_one(x) -> int:
    return 1


def cmd_demo(args) -> int:
    if args.bound < 1:
        raise UsageError("--bound must be at least 1")
    if args.control:
        report = run_counterexample(args.bound, f=_constant_one)
        expected_test = 1
    else:
        report = run_counterexample(args.bound, f=f_kreisel, policy=ConstantOnFinite(0))
        expected_test = 0
    ok = report.test_value == expected_test
    lines = [f"{k}: {v}" for k, v in report.to_dict().items()]
    verdict = "test returns 1 on the constant control" if args.control else \
        "test returns 0 on f(a) = [a = infinity]"
    lines.append(_color(verdict if ok else "unexpected test value", ok))
    _emit(args, report.to_dict(), "\n".join(lines))
    return 0 if ok else 1


def cmd_fuzz(args) -> int:
    from .fuzz import GenConfig, check_eps_oracle, check_test_constancy

    try:
        target = parse_type(args.type)
    except FrontendError as exc:
        raise UsageError(f"--type: {exc}") from None
    if args.count < 0 or args.max_size < 1:
        raise UsageError("--count must be >= 0 and --max-size >= 1")
    cfg = GenConfig(target, args.max_size, args.seed, args.count)
    try:
        if args.mode == "constancy":
            report = check_test_constancy(cfg, corpus=not args.no_corpus, workers=args.workers)
        else:
            report = check_eps_oracle(cfg, args.prefix, corpus=not args.no_corpus, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    human = (
        f"mode {report.mode}: {report.samples} samples "
        f"({report.corpus_size} corpus), seed {report.seed}, {report.elapsed_ms} ms\n"
        + _color(f"failures: {report.failures}", report.ok)
    )
    _emit(args, report.to_dict(), human)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgParser(prog="tw", description="System T workbench")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    p = sub.add_parser("check", parents=[common], help="typecheck every definition")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("eval", parents=[common], help="evaluate the main term")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=None, help="machine step limit")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("eps", parents=[common], help="prefix of eps applied to a predicate")
    p.add_argument("file")
    p.add_argument("--prefix", type=int, required=True)
    p.set_defaults(run=cmd_eps)

    p = sub.add_parser("modulus", parents=[common], help="least n with f(nbar n) = f(infinity)")
    p.add_argument("file")
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(run=cmd_modulus)

    p = sub.add_parser("demo", parents=[common], help="run a canned demonstration")
    p.add_argument("name", choices=["kreisel"])
    p.add_argument("--bound", type=int, default=10**5)
    p.add_argument("--control", action="store_true", help="use the constant function 1 instead")
    p.set_defaults(run=cmd_demo)

    p = sub.add_parser("fuzz", parents=[common], help="property checks on generated terms")
    p.add_argument("--type", default="(nat -> bool) -> bool")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["constancy", "eps"], default="constancy")
    p.add_argument("--max-size", type=int, default=40)
    p.add_argument("--prefix", type=int, default=64, help="stream prefix for eps mode")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-corpus", action="store_true", help="skip the fixed corpus")
    p.set_defaults(run=cmd_fuzz)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        print(f"tw: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
