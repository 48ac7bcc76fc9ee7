"""End-to-end acceptance checks, one per shipped guarantee, all exact.

Each test prints a single PASS line on success; any mismatch fails the
test outright (no tolerances, no approximations).
"""

import itertools
import json
import random

from forestpi import boolfn, encode, ingest, mvl, oracle, pi
from forestpi.errors import ParseError

SEED = 7

# Discrete function of the two-feature reference tree, keyed by value pair.
REFERENCE_TABLE = {
    (1, 1): 0,
    (1, 2): 1,
    (2, 1): 1,
    (2, 2): 1,
    (3, 1): 0,
    (3, 2): 0,
}


def test_tree_pipeline_truth_table_and_lifting(fig1):
    forest, space = fig1
    expr = ingest.tree_to_expression(forest.trees[0], 1, space, forest.n_classes)
    for (xv, yv), want in REFERENCE_TABLE.items():
        assert mvl.evaluate(expr, {0: xv, 1: yv}) == (want == 1)
    target = mvl.Or((
        mvl.And((mvl.Lit(mvl.MvLiteral(0, (1,))), mvl.Lit(mvl.MvLiteral(1, (2,))))),
        mvl.Lit(mvl.MvLiteral(0, (2,))),
    ))
    assert mvl.truth_mask(space, expr) == mvl.truth_mask(space, target)
    assert ingest.lift_instance({0: 3, 1: 12}, space) == {0: 2, 1: 2}
    assert ingest.lift_instance({0: 10, 1: -20}, space) == {0: 3, 1: 1}
    print("PASS tree pipeline: truth table and instance lifting")


def test_instance_explanations_exact(fig1):
    forest, space = fig1
    positive = pi.pi_explanations(forest, {0: 2, 1: 2}, space)
    assert positive[0].decision == 1
    assert [e.term for e in positive] == [
        mvl.MvTerm((mvl.MvLiteral(0, (2,)),)),
        mvl.MvTerm((mvl.MvLiteral(0, (1, 2)), mvl.MvLiteral(1, (2,)))),
    ]
    negative = pi.pi_explanations(forest, {0: 3, 1: 1}, space)
    assert negative[0].decision == 0
    assert [e.term for e in negative] == [
        mvl.MvTerm((mvl.MvLiteral(0, (3,)),)),
        mvl.MvTerm((mvl.MvLiteral(0, (1, 3)), mvl.MvLiteral(1, (1,)))),
    ]
    print("PASS explanations: exact sets for both decisions")


def test_ternary_function_prime_implicants(ternary):
    forest, space = ternary
    expr = ingest.tree_to_expression(forest.trees[0], 1, space, forest.n_classes)
    # The fixture realizes the six-entry table with ones at y1 or x3.
    table = {(xv, yv): int(yv == 1 or xv == 3)
             for xv in (1, 2, 3) for yv in (1, 2, 3)}
    for (xv, yv), want in table.items():
        assert mvl.evaluate(expr, {0: xv, 1: yv}) == (want == 1)
    assert pi.prime_implicants(expr, space) == [
        mvl.MvTerm((mvl.MvLiteral(0, (3,)),)),
        mvl.MvTerm((mvl.MvLiteral(1, (1,)),)),
    ]
    assert pi.prime_implicants(mvl.Not(expr), space) == [
        mvl.MvTerm((mvl.MvLiteral(0, (1, 2)), mvl.MvLiteral(1, (2, 3)))),
    ]
    exps = pi.pi_explanations(forest, {0: 1, 1: 2}, space)
    assert exps[0].decision == 0
    assert [e.term for e in exps] == [
        mvl.MvTerm((mvl.MvLiteral(0, (1, 2)), mvl.MvLiteral(1, (2, 3)))),
    ]
    print("PASS ternary table: prime implicants and single explanation")


def test_model_count_parity():
    space = mvl.Space((
        mvl.MvVariable(0, "X", 3, ("x1", "x2", "x3")),
        mvl.MvVariable(1, "Y", 3, ("y1", "y2", "y3")),
    ))
    delta = mvl.Or((mvl.Lit(mvl.MvLiteral(0, (1,))), mvl.Lit(mvl.MvLiteral(1, (1,)))))
    mask = mvl.truth_mask(space, delta)
    models = [inst for i, inst in enumerate(space.instances()) if (mask >> i) & 1]
    assert models == [(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)]

    vmap = encode.var_map(space, encode.ONE_HOT)
    manager = boolfn.BddManager(vmap.n_vars)
    encoded = manager.combine(
        "and",
        manager.compile(encode.encode_expression(delta, vmap)),
        manager.compile(encode.build_constraints(vmap).psi),
    )
    assert manager.count_models(encoded) == 5
    expected_full = sorted([
        (True, False, False, True, False, False),
        (True, False, False, False, True, False),
        (True, False, False, False, False, True),
        (False, True, False, True, False, False),
        (False, False, True, True, False, False),
    ])
    assert list(manager.models(encoded)) == expected_full
    print("PASS model parity: five models on either side, listed exactly")


def test_encoding_failure_demos():
    prefix = oracle.demo_prefix_failure()
    assert prefix.passed, prefix.failures
    assert prefix.details["recovered_primes"] == []
    highest = oracle.demo_highest_bit_failure()
    assert highest.passed, highest.failures
    assert highest.details["boolean_primes"] == ["¬X#2 ∧ ¬X#4", "X#3 ∧ ¬X#4"]
    print("PASS encoding demos: prefix recovers nothing, highest-bit prime set exact")


def test_property_suites_1000_trials():
    for name in oracle.CHECK_NAMES:
        report = oracle.check_property(name, trials=1000, seed=SEED)
        assert report.trials == 1000
        assert report.failures == [], (name, report.failures[:3])
    print("PASS property suites: 7 checks x 1000 trials, zero failures")


def _random_tree(rng, features, depth):
    if depth == 0 or rng.random() < 0.4:
        return {"leaf": rng.randrange(2)}
    return {
        "feature": rng.choice(features),
        "threshold": float(rng.randint(1, 3)),
        "true": _random_tree(rng, features, depth - 1),
        "false": _random_tree(rng, features, depth - 1),
    }


def test_majority_gate_agreement(even_tie):
    rng = random.Random(SEED)
    checked = 0
    while checked < 50:
        n_features = rng.randint(1, 3)
        doc = {
            "n_classes": 2,
            "features": [
                {"id": i, "name": f"F{i}", "kind": "continuous"}
                for i in range(n_features)
            ],
            "trees": [
                _random_tree(rng, range(n_features), 3)
                for _ in range(rng.randint(1, 5))
            ],
        }
        try:
            forest, space = ingest.parse_model(json.dumps(doc))
        except ParseError:
            continue  # rejected for repeating an ancestor test
        vmap = encode.var_map(space)
        manager = boolfn.BddManager(vmap.n_vars)
        fns = pi.class_functions(manager, forest, space, vmap)
        for values in space.instances():
            inst = {var.id: v for var, v in zip(space.variables, values)}
            direct = ingest.evaluate_forest(forest, ingest.raw_point(space, inst), space)
            assignment = encode.instance_assignment(inst, vmap)
            agreed = [c for c, fn in enumerate(fns) if manager.evaluate(fn, assignment)]
            assert agreed == [direct], (doc, inst)
        checked += 1

    # Ties split 1-1 resolve to class 0, in both the gate and the counter.
    forest, space = even_tie
    assert ingest.evaluate_forest(forest, {0: 5.0}, space) == 0
    exps = pi.pi_explanations(forest, ingest.lift_instance({0: 5.0}, space), space)
    assert exps[0].decision == 0
    print("PASS majority gate: 50 forests agree everywhere, ties go to class 0")
