"""Negative-prime enumeration, decoding, and instance explanations."""

import json
import random

import pytest

from forestpi import boolfn, encode, ingest, mvl, oracle, pi
from forestpi.errors import CapacityError, ParseError


def ternary_pair() -> mvl.Space:
    return mvl.Space((
        mvl.MvVariable(0, "X", 3, ("x1", "x2", "x3")),
        mvl.MvVariable(1, "Y", 3, ("y1", "y2", "y3")),
    ))


def test_enumerate_negative_primes_single_literal():
    space = mvl.Space((mvl.MvVariable(0, "X", 3, ("x1", "x2", "x3")),))
    vmap = encode.var_map(space)
    manager = boolfn.BddManager(vmap.n_vars)
    psi = manager.compile(encode.build_constraints(vmap).psi)
    delta = manager.compile(encode.encode_expression(
        mvl.Lit(mvl.MvLiteral(0, (1, 3))), vmap))
    gamma = manager.combine("implies", psi, delta)
    primes = pi.enumerate_negative_primes(manager, gamma, vmap)
    assert primes == [encode.BoolTerm(((1, False),))]
    assert encode.decode_negative_term(primes[0], vmap) == mvl.MvTerm(
        (mvl.MvLiteral(0, (1, 3)),))


def test_tautology_has_empty_prime():
    space = ternary_pair()
    vmap = encode.var_map(space)
    manager = boolfn.BddManager(vmap.n_vars)
    primes = pi.enumerate_negative_primes(manager, boolfn.TRUE, vmap)
    assert primes == [encode.BoolTerm(())]
    assert pi.prime_implicants(mvl.Const(True), space) == [mvl.MvTerm(())]


def test_contradiction_has_no_primes():
    space = ternary_pair()
    assert pi.prime_implicants(mvl.Const(False), space) == []


def test_pipeline_matches_bruteforce_randomized():
    rng = random.Random(3)
    for _ in range(60):
        space = oracle.random_space(rng)
        delta = oracle.random_expression(rng, space)
        assert pi.prime_implicants(delta, space) == \
            mvl.prime_implicants_bruteforce(space, delta)


def test_fig1_positive_explanations(fig1):
    forest, space = fig1
    exps = pi.pi_explanations(forest, {0: 2, 1: 2}, space)
    assert exps[0].decision == 1
    assert [e.term for e in exps] == [
        mvl.MvTerm((mvl.MvLiteral(0, (2,)),)),
        mvl.MvTerm((mvl.MvLiteral(0, (1, 2)), mvl.MvLiteral(1, (2,)))),
    ]
    assert [e.text for e in exps] == [
        "X∈[2,6)",
        "X∈(-inf,6) ∧ Y∈[-7,+inf)",
    ]


def test_fig1_negative_explanations(fig1):
    forest, space = fig1
    exps = pi.pi_explanations(forest, {0: 3, 1: 1}, space)
    assert exps[0].decision == 0
    assert [e.term for e in exps] == [
        mvl.MvTerm((mvl.MvLiteral(0, (3,)),)),
        mvl.MvTerm((mvl.MvLiteral(0, (1, 3)), mvl.MvLiteral(1, (1,)))),
    ]
    assert [e.text for e in exps] == [
        "X∈[6,+inf)",
        "X∈(-inf,2) ∪ [6,+inf) ∧ Y∈(-inf,-7)",
    ]


def test_explanations_are_consistent_with_instance(ternary):
    forest, space = ternary
    inst = {0: 1, 1: 2}
    exps = pi.pi_explanations(forest, inst, space)
    assert exps[0].decision == 0
    assert len(exps) == 1
    assert exps[0].term == mvl.MvTerm(
        (mvl.MvLiteral(0, (1, 2)), mvl.MvLiteral(1, (2, 3))))
    for e in exps:
        for lit in e.term.literals:
            assert inst[lit.variable] in lit.values


def test_constant_model_has_empty_explanation(const1):
    forest, space = const1
    exps = pi.pi_explanations(forest, {0: 1}, space)
    assert len(exps) == 1
    assert exps[0].decision == 1
    assert exps[0].term == mvl.MvTerm(())
    assert exps[0].text == "⊤"


def test_tie_explained_as_class_zero(even_tie):
    forest, space = even_tie
    inst = ingest.lift_instance({0: 5.0}, space)
    exps = pi.pi_explanations(forest, inst, space)
    assert exps[0].decision == 0
    assert [e.text for e in exps] == ["X∈[2,+inf)"]


def test_multiclass_single_tree():
    doc = json.dumps({
        "n_classes": 3,
        "features": [{"id": 0, "name": "X", "kind": "continuous"}],
        "trees": [{
            "feature": 0, "threshold": 1,
            "true": {"leaf": 0},
            "false": {"feature": 0, "threshold": 2,
                      "true": {"leaf": 1}, "false": {"leaf": 2}},
        }],
    })
    forest, space = ingest.parse_model(doc)
    for value, cls in ((1, 0), (2, 1), (3, 2)):
        exps = pi.pi_explanations(forest, {0: value}, space)
        assert exps[0].decision == cls
        assert [e.term for e in exps] == [mvl.MvTerm((mvl.MvLiteral(0, (value,)),))]


def test_multiclass_three_way_tie():
    doc = json.dumps({
        "n_classes": 3,
        "features": [{"id": 0, "name": "X", "kind": "continuous"}],
        "trees": [{"leaf": 0}, {"leaf": 1}, {"leaf": 2}],
    })
    forest, space = ingest.parse_model(doc)
    assert ingest.evaluate_forest(forest, {0: 0.0}, space) == 0
    exps = pi.pi_explanations(forest, {0: 1}, space)
    assert exps[0].decision == 0
    assert exps[0].term == mvl.MvTerm(())


def test_explanations_sorted_smallest_first(fig1):
    forest, space = fig1
    exps = pi.pi_explanations(forest, {0: 2, 1: 2}, space)
    sizes = [len(e.term.literals) for e in exps]
    assert sizes == sorted(sizes)


def test_node_budget_propagates(fig1):
    forest, space = fig1
    with pytest.raises(CapacityError):
        pi.pi_explanations(forest, {0: 2, 1: 2}, space, node_budget=3)


def test_forest_agreement_randomized():
    """Compiled class functions match direct vote counting everywhere."""
    rng = random.Random(41)

    def random_tree(rng, features, depth):
        if depth == 0 or rng.random() < 0.4:
            return {"leaf": rng.randrange(2)}
        fid = rng.choice(features)
        return {
            "feature": fid,
            "threshold": float(rng.randint(1, 3)),
            "true": random_tree(rng, features, depth - 1),
            "false": random_tree(rng, features, depth - 1),
        }

    for _ in range(20):
        n_features = rng.randint(1, 3)
        features = list(range(n_features))
        doc = {
            "n_classes": 2,
            "features": [
                {"id": i, "name": f"F{i}", "kind": "continuous"} for i in features
            ],
            "trees": [
                random_tree(rng, features, 3) for _ in range(rng.randint(1, 5))
            ],
        }
        try:
            forest, space = ingest.parse_model(json.dumps(doc))
        except ParseError:
            continue  # a random tree may repeat an ancestor test
        vmap = encode.var_map(space)
        manager = boolfn.BddManager(vmap.n_vars)
        fns = pi.class_functions(manager, forest, space, vmap)
        for inst_values in space.instances():
            inst = {var.id: v for var, v in zip(space.variables, inst_values)}
            raw = ingest.raw_point(space, inst)
            direct = ingest.evaluate_forest(forest, raw, space)
            assignment = encode.instance_assignment(inst, vmap)
            compiled = [c for c, fn in enumerate(fns)
                        if manager.evaluate(fn, assignment)]
            assert compiled == [direct]
