import pytest
from hypothesis import given, settings, strategies as st

from systemt.checker import typecheck
from systemt.denot import SFun, SNat, apply_sem, denote, sbool, stream_to_sem
from systemt.fuzz import (
    GenConfig, GenerationError, NotFoundUpTo, agreement_index, check_eps_oracle,
    check_point_oracle, check_test_constancy, functional_corpus, gen_term, oracle_eps_prefix,
    term_depth,
)
from systemt.ninf import INFINITY, Finite, embed
from systemt.parser import parse_term
from systemt.prelude import prelude_terms
from systemt.syntax import BOOL, NAT, PREDICATE, STREAM, Rec, arrow, as_numeral, children, is_closed, size

TYPES = [NAT, BOOL, STREAM, PREDICATE, arrow(NAT, NAT), arrow(BOOL, NAT, BOOL)]


def _nodes(t):
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children(node))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TYPES), st.integers(4, 60), st.integers(0, 2**32), st.integers(0, 50))
def test_generated_terms_are_closed_typed_and_bounded(ty, max_size, seed, index):
    term = gen_term(GenConfig(ty, max_size, seed), index)
    assert is_closed(term)
    assert typecheck(term) == ty
    assert size(term) <= max_size
    # the cap applies to generated recursion; prelude combinators bring their own
    inherited = {t.body for t in (prelude_terms()["iszero"], prelude_terms()["pred"])}
    for node in _nodes(term):
        if isinstance(node, Rec) and node not in inherited:
            n = as_numeral(node.scrutinee)
            assert n is not None and n <= 6


def test_generation_is_deterministic():
    cfg = GenConfig(PREDICATE, 40, 17)
    assert [gen_term(cfg, i) for i in range(20)] == [gen_term(cfg, i) for i in range(20)]
    other = GenConfig(PREDICATE, 40, 18)
    assert [gen_term(cfg, i) for i in range(20)] != [gen_term(other, i) for i in range(20)]


def test_impossible_budget_is_an_error():
    with pytest.raises(GenerationError):
        gen_term(GenConfig(PREDICATE, 1, 0), 0)
    with pytest.raises(ValueError):
        GenConfig(NAT, 0, 0)


def test_generator_reaches_the_stream_argument():
    # enough samples must tell zerobar from infinity to make constancy checks meaningful
    cfg = GenConfig(PREDICATE, 40, 3)
    zero, inf = stream_to_sem(embed(Finite(0))), stream_to_sem(embed(INFINITY))
    fs = [denote(gen_term(cfg, i)) for i in range(100)]
    assert sum(apply_sem(f, zero) != apply_sem(f, inf) for f in fs) >= 10


def test_corpus_terms_have_the_functional_type():
    assert all(typecheck(t) == PREDICATE for t in functional_corpus())
    assert len(functional_corpus()) >= 11


@pytest.mark.parametrize(
    "src, expected",
    [
        ("fun a : nat -> bool . a 3", 4),
        ("fun a : nat -> bool . true", 0),
        ("fun a : nat -> bool . not (a 0)", 1),
        ("fun a : nat -> bool . and (a 6) (not (a 2))", 0),
        ("fun a : nat -> bool . cons a 5", 5),
    ],
)
def test_agreement_index(src, expected):
    assert agreement_index(denote(parse_term(src, prelude_terms())), 100) == expected


def test_agreement_index_not_found():
    # a host functional that is not continuous at infinity
    # "all of the first 40 bits are 0": separates nbar 0 .. nbar 39 from infinity
    looks_infinite = SFun(lambda a: sbool(all(a(SNat(i)).b == 0 for i in range(40))))
    assert agreement_index(looks_infinite, 30) == NotFoundUpTo(30)
    assert agreement_index(looks_infinite, 45) == 40


def test_oracle_eps_prefix_by_hand():
    p = denote(parse_term("fun a : nat -> bool . and (a 4) (not (a 1))", prelude_terms()))
    assert oracle_eps_prefix(p, 6) == [0, 0, 1, 1, 1, 1]
    never = denote(parse_term("fun a : nat -> bool . false"))
    assert oracle_eps_prefix(never, 5) == [0] * 5


def test_reports_reproduce_apart_from_timing():
    cfg = GenConfig(PREDICATE, 30, 5, 25)
    a, b = check_test_constancy(cfg), check_test_constancy(cfg)
    assert a.to_json(timing=False) == b.to_json(timing=False)
    assert a.ok and a.samples == 25 + a.corpus_size
    assert set(a.to_dict()) >= {"samples", "failures", "seed", "elapsed_ms"}


def test_eps_report_small():
    report = check_eps_oracle(GenConfig(PREDICATE, 30, 9, 30), prefix_len=32)
    assert report.ok, report.details
    assert report.max_term_depth >= max(term_depth(t) for t in functional_corpus())


def test_wrong_target_type_is_rejected():
    with pytest.raises(ValueError):
        check_test_constancy(GenConfig(NAT, 10, 0, 1))


def test_point_oracle_agrees():
    report = check_point_oracle(GenConfig(STREAM, 30, 11, 40), bound=32)
    assert report.ok, report.details


def test_parallel_workers_give_the_same_report():
    cfg = GenConfig(PREDICATE, 25, 2, 12)
    serial = check_eps_oracle(cfg, 16, workers=1)
    parallel = check_eps_oracle(cfg, 16, workers=2)
    assert serial.to_json(timing=False) == parallel.to_json(timing=False)
