import json

import pytest
from hypothesis import given, strategies as st

from systemt.denot import BitStream, apply_sem, as_bit, denote, sem_to_stream
from systemt.ninf import (
    INFINITY, BoundedSearch, CertificateViolation, ConstantOnFinite, CounterexampleReport, Finite,
    NoWitnessUpTo, UndecidedSearch, classify_prefix, discontinuity_certificate, embed,
    eps_point, f_kreisel, member_prefix_check, point_le, restrict_to_finite, run_counterexample,
    succ_point, tagged,
)
from systemt.parser import parse_term
from systemt.prelude import prelude_terms, tm_eps

points = st.one_of(st.just(INFINITY), st.builds(Finite, st.integers(0, 50)))


def test_finite_rejects_negatives():
    with pytest.raises(ValueError):
        Finite(-1)


def test_infinity_is_a_singleton_and_pickles():
    import pickle

    assert pickle.loads(pickle.dumps(INFINITY)) is INFINITY


@given(points, points)
def test_order_matches_embedded_streams(x, y):
    # x <= y in N-infinity iff embed(y) <= embed(x) pointwise
    pointwise = all(a >= b for a, b in zip(embed(x).prefix(60), embed(y).prefix(60)))
    assert point_le(x, y) == pointwise


@given(points)
def test_embed_is_monotone_and_classified(x):
    s = embed(x)
    assert member_prefix_check(s, 60) == 1
    expected = x if x is INFINITY or x.n < 60 else INFINITY
    assert classify_prefix(s.prefix(60)) == expected


def test_succ_point():
    assert succ_point(Finite(3)) == Finite(4)
    assert succ_point(INFINITY) is INFINITY


def test_prefix_checks():
    assert member_prefix_check(BitStream(lambda i: int(i == 2)), 5) == 0
    assert member_prefix_check(BitStream(lambda i: int(i == 2)), 3) == 1
    assert classify_prefix([0, 1, 0]) is None
    with pytest.raises(ValueError):
        member_prefix_check(embed(INFINITY), 0)


def test_eps_point_policies():
    assert eps_point(lambda x: int(x == Finite(7)), BoundedSearch(10)) == Finite(7)
    assert eps_point(lambda x: 0, BoundedSearch(10)) == NoWitnessUpTo(10)
    assert eps_point(lambda x: 0, ConstantOnFinite(0)) is INFINITY
    assert eps_point(lambda x: 1, ConstantOnFinite(1)) == Finite(0)
    with pytest.raises(CertificateViolation):
        eps_point(lambda x: 1, ConstantOnFinite(0))
    with pytest.raises(ValueError):
        BoundedSearch(0)


def test_tagged_view_of_a_definable_predicate():
    p = tagged(denote(parse_term("fun a : nat -> bool . not (a 3)", prelude_terms())))
    assert [p(Finite(n)) for n in range(6)] == [0, 0, 0, 0, 1, 1]
    assert p(INFINITY) == 1


def test_restrict_to_finite_feeds_definable_eps():
    # out-of-order queries force the decoder off its hint
    r = restrict_to_finite(lambda x: int(x.n in (5, 9)))
    nbar = lambda n: denote(parse_term(f"nbar {n}", prelude_terms()))
    assert [as_bit(apply_sem(r, nbar(n))) for n in (9, 2, 5, 6)] == [1, 0, 1, 0]
    stream = sem_to_stream(apply_sem(denote(tm_eps()), restrict_to_finite(lambda x: int(x.n >= 5))))
    assert stream.prefix(8) == [0] * 5 + [1] * 3


def test_kreisel_function():
    assert f_kreisel(INFINITY) == 1
    assert {f_kreisel(Finite(n)) for n in range(100)} == {0}


@pytest.mark.parametrize("bound", [1, 10, 1000])
def test_counterexample_small_bounds(bound):
    report = run_counterexample(bound)
    assert report.to_dict() == {
        "test_value": 0,
        "antecedent_holds": 1,
        "consequent_holds": 0,
        "eps_prefix_zero_up_to": bound,
        "f_kreisel_at_infinity": 1,
        "f_kreisel_at_zerobar": 0,
    }
    assert json.loads(report.to_json()) == report.to_dict()


def test_counterexample_on_continuous_functions():
    # f(a) = a(3): the inner predicate first holds at Finite(3)
    f = lambda x: int(x is not INFINITY and x.n <= 3)
    report = run_counterexample(50, f=f)
    assert report.test_value == 1
    assert report.eps_prefix_zero_up_to == 3
    assert run_counterexample(50, f=lambda x: 1).test_value == 1


def test_counterexample_needs_a_witness_or_certificate():
    with pytest.raises(UndecidedSearch):
        run_counterexample(20, f=lambda x: 1 if x is INFINITY else 0, policy=BoundedSearch(20))


def test_report_invariant():
    with pytest.raises(AssertionError):
        CounterexampleReport(1, 1, 0, 0, 0, 0)


def test_discontinuity_certificate():
    cert = discontinuity_certificate(1000)
    assert cert.agreement_index is None and cert.discontinuous_up_to_bound
    assert cert.finite_values == (0,) and cert.value_at_infinity == 1
    continuous = discontinuity_certificate(100, f=lambda x: int(x is INFINITY or x.n > 7))
    assert continuous.agreement_index == 8
