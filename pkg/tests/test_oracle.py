"""Randomized checks, their generators, and the encoding-failure demos."""

import itertools
import random

import pytest

from forestpi import encode, mvl, oracle


def test_unknown_check_rejected():
    with pytest.raises(ValueError, match="unknown check"):
        oracle.check_property("prop9")
    with pytest.raises(ValueError, match="trials"):
        oracle.check_property("prop1", trials=0)


@pytest.mark.parametrize("name", oracle.CHECK_NAMES)
def test_checks_pass(name):
    report = oracle.check_property(name, trials=120, seed=7)
    assert report.passed, report.failures
    assert report.trials == 120
    assert report.name == name


def test_reports_are_deterministic():
    a = oracle.check_property("prop4", trials=40, seed=13)
    b = oracle.check_property("prop4", trials=40, seed=13)
    assert a.as_dict() == b.as_dict()


def test_report_serialization():
    report = oracle.check_property("def1", trials=5, seed=7)
    d = report.as_dict()
    assert d["name"] == "def1"
    assert d["passed"] is True
    assert d["failures"] == []
    assert d["details"]["witness"]


def test_random_space_bounds():
    rng = random.Random(0)
    for _ in range(50):
        space = oracle.random_space(rng)
        assert 1 <= len(space.variables) <= 3
        for var in space.variables:
            assert 2 <= var.domain_size <= 4
            assert len(var.value_labels) == var.domain_size


def test_bool_truth_mask_matches_evaluate():
    expr = encode.Or((
        encode.And((encode.Var(0), encode.Not(encode.Var(2)))),
        encode.Var(1),
    ))
    n = 3
    mask = oracle.bool_truth_mask(expr, n)
    for bit, bits in enumerate(itertools.product((False, True), repeat=n)):
        assert bool((mask >> bit) & 1) == encode.evaluate(expr, bits)
        assert oracle.assignment_of_bit(bit, n) == bits


def test_boolean_prime_implicants_classic():
    # f = (a ∨ ¬c)(b ∨ c)(a ∨ b) has primes ab, ac and b¬c.
    a, b, c = encode.Var(0), encode.Var(1), encode.Var(2)
    f = encode.And((
        encode.Or((a, encode.Not(c))),
        encode.Or((b, c)),
        encode.Or((a, b)),
    ))
    primes = oracle.boolean_prime_implicants(oracle.bool_truth_mask(f, 3), 3)
    assert primes == [
        encode.BoolTerm(((0, True), (1, True))),
        encode.BoolTerm(((0, True), (2, True))),
        encode.BoolTerm(((1, True), (2, False))),
    ]


def test_boolean_prime_implicants_edge_cases():
    assert oracle.boolean_prime_implicants((1 << 8) - 1, 3) == [encode.BoolTerm(())]
    assert oracle.boolean_prime_implicants(0, 3) == []


def test_demo_prefix_failure():
    report = oracle.demo_prefix_failure()
    assert report.passed, report.failures
    assert report.details["target"] == ["X∈{x1,x3}"]
    assert report.details["boolean_primes"] == [
        "¬X#2 ∧ ¬X#3 ∧ ¬X#4",
        "X#2 ∧ X#3 ∧ ¬X#4",
    ]
    # Both Boolean primes decode, but only to single values, never the target.
    assert report.details["recovered_primes"] == []
    assert report.details["decoded"] == [
        "¬X#2 ∧ ¬X#3 ∧ ¬X#4 → X=x1",
        "X#2 ∧ X#3 ∧ ¬X#4 → X=x3",
    ]
    assert report.details["one_hot_control"] == ["X∈{x1,x3}"]


def test_demo_highest_bit_failure():
    report = oracle.demo_highest_bit_failure()
    assert report.passed, report.failures
    assert report.details["boolean_primes"] == ["¬X#2 ∧ ¬X#4", "X#3 ∧ ¬X#4"]
    # One prime is spurious; the other only recovers a strict strengthening.
    assert report.details["decoded"] == [
        "¬X#2 ∧ ¬X#4 → (no multi-valued term)",
        "X#3 ∧ ¬X#4 → X=x3",
    ]
    assert report.details["recovered_primes"] == []
    assert report.details["one_hot_control"] == ["X∈{x1,x3}"]


def test_demo_decoded_terms_are_only_implicants():
    """Whatever the failing schemes recover is implied, just never prime."""
    space = mvl.Space((mvl.MvVariable(0, "X", 4, ("x1", "x2", "x3", "x4")),))
    delta = mvl.Lit(mvl.MvLiteral(0, (1, 3)))
    mask = mvl.truth_mask(space, delta)
    primes = mvl.prime_implicants_bruteforce(space, delta)
    for report in (oracle.demo_prefix_failure(), oracle.demo_highest_bit_failure()):
        for row in report.details["decoded"]:
            rendered = row.split(" → ")[1]
            if rendered.startswith("("):
                continue
            value = int(rendered.removeprefix("X=x"))
            term = mvl.MvTerm((mvl.MvLiteral(0, (value,)),))
            assert mvl.is_implicant(space, term, mask)
            assert term not in primes
