"""Verification harness.

Each named check draws small random spaces (up to 3 variables, domains
2 to 4) and random inputs, then compares two independently computed
sides of a claimed equivalence: one by exhaustive bitset semantics, the
other through the encoding/BDD pipeline.  The two demo functions build
the four-valued literal that separates the encodings and show why only
one_hot supports prime implicant computation.

Failures are serialized counterexamples; an empty failure list means the
property held on every trial.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from . import boolfn, encode, mvl, pi

CHECK_NAMES = ("prop1", "prop2", "prop3", "prop4", "lemma1", "lemma2", "def1")


@dataclass
class CheckReport:
    name: str
    trials: int
    failures: list[str]
    seed: int
    details: dict[str, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failures": self.failures,
            "details": self.details,
        }


# --- random generators --------------------------------------------------------

_NAMES = ("A", "B", "C")


def random_space(rng: random.Random) -> mvl.Space:
    n = rng.randint(1, 3)
    variables = []
    for i in range(n):
        domain = rng.randint(2, 4)
        labels = tuple(f"{_NAMES[i].lower()}{v}" for v in range(1, domain + 1))
        variables.append(mvl.MvVariable(i, _NAMES[i], domain, labels))
    return mvl.Space(tuple(variables))


def random_literal(rng: random.Random, var: mvl.MvVariable) -> mvl.MvLiteral:
    size = rng.randint(1, var.domain_size - 1)
    return mvl.literal(var, rng.sample(range(1, var.domain_size + 1), size))


def random_term(rng: random.Random, space: mvl.Space) -> mvl.MvTerm:
    literals = tuple(
        random_literal(rng, var) for var in space.variables if rng.random() < 0.5
    )
    return mvl.MvTerm(literals)


def random_instance(rng: random.Random, space: mvl.Space) -> dict[int, int]:
    return {var.id: rng.randint(1, var.domain_size) for var in space.variables}


def random_expression(rng: random.Random, space: mvl.Space, depth: int = 4) -> mvl.MvExpr:
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        return mvl.Lit(random_literal(rng, rng.choice(space.variables)))
    if roll < 0.65:
        return mvl.And((random_expression(rng, space, depth - 1),
                        random_expression(rng, space, depth - 1)))
    if roll < 0.9:
        return mvl.Or((random_expression(rng, space, depth - 1),
                       random_expression(rng, space, depth - 1)))
    return mvl.Not(random_expression(rng, space, depth - 1))


def random_bool_term(rng: random.Random, vmap: encode.VarMap, negative: bool) -> encode.BoolTerm:
    lits = []
    for index in range(vmap.n_vars):
        if rng.random() < 0.4:
            lits.append((index, False if negative else rng.random() < 0.5))
    return encode.BoolTerm(tuple(lits))


def random_bool_expression(rng: random.Random, vmap: encode.VarMap, depth: int = 4) -> encode.BoolExpr:
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        return encode.Var(rng.randrange(vmap.n_vars))
    if roll < 0.65:
        return encode.And((random_bool_expression(rng, vmap, depth - 1),
                           random_bool_expression(rng, vmap, depth - 1)))
    if roll < 0.9:
        return encode.Or((random_bool_expression(rng, vmap, depth - 1),
                          random_bool_expression(rng, vmap, depth - 1)))
    return encode.Not(random_bool_expression(rng, vmap, depth - 1))


# --- exhaustive Boolean semantics ----------------------------------------------


@lru_cache(maxsize=64)
def _bool_var_masks(n_vars: int) -> tuple[int, ...]:
    """Truth mask per variable over all 2^n assignments.

    Assignment bits are indexed with variable 0 most significant, so the
    mask order matches lexicographic assignment enumeration.
    """
    total = 1 << n_vars
    masks = []
    for i in range(n_vars):
        block = 1 << (n_vars - 1 - i)
        mask, span = ((1 << block) - 1) << block, 2 * block
        while span < total:
            mask |= mask << span
            span *= 2
        masks.append(mask & ((1 << total) - 1))
    return tuple(masks)


def bool_truth_mask(expr: encode.BoolExpr, n_vars: int) -> int:
    """Exhaustive truth mask of a Boolean expression, one bit per assignment."""
    full = (1 << (1 << n_vars)) - 1
    masks = _bool_var_masks(n_vars)
    if isinstance(expr, encode.Const):
        return full if expr.value else 0
    if isinstance(expr, encode.Var):
        return masks[expr.index]
    if isinstance(expr, encode.Not):
        return full ^ bool_truth_mask(expr.arg, n_vars)
    if isinstance(expr, encode.And):
        out = full
        for a in expr.args:
            out &= bool_truth_mask(a, n_vars)
        return out
    out = 0
    for a in expr.args:
        out |= bool_truth_mask(a, n_vars)
    return out


def bool_term_mask(term: encode.BoolTerm, n_vars: int) -> int:
    full = (1 << (1 << n_vars)) - 1
    masks = _bool_var_masks(n_vars)
    out = full
    for index, pos in term.literals:
        out &= masks[index] if pos else full ^ masks[index]
    return out


def assignment_of_bit(bit: int, n_vars: int) -> tuple[bool, ...]:
    return tuple(bool((bit >> (n_vars - 1 - i)) & 1) for i in range(n_vars))


def boolean_prime_implicants(fn_mask: int, n_vars: int) -> list[encode.BoolTerm]:
    """All prime implicants of a masked Boolean function, by enumeration.

    States per variable: absent, positive, negative.  An implicant is
    prime when removing any single literal breaks implication; removal
    candidates are looked up in the implicant set itself.
    """
    masks = _bool_var_masks(n_vars)
    full = (1 << (1 << n_vars)) - 1
    inv = full ^ fn_mask
    implicants = set()
    for combo in itertools.product((0, 1, 2), repeat=n_vars):
        m = inv
        for i, state in enumerate(combo):
            if state == 1:
                m &= masks[i]
            elif state == 2:
                m &= full ^ masks[i]
        if not m:
            implicants.add(combo)
    primes = []
    for combo in implicants:
        weaker = any(
            combo[:i] + (0,) + combo[i + 1 :] in implicants
            for i, state in enumerate(combo)
            if state
        )
        if not weaker:
            primes.append(encode.BoolTerm(tuple(
                (i, state == 1) for i, state in enumerate(combo) if state
            )))
    return sorted(primes, key=lambda t: (len(t.literals), t.literals))


# --- shared pipeline pieces -----------------------------------------------------


@lru_cache(maxsize=128)
def _pipeline(space: mvl.Space, scheme: str):
    """Cached (VarMap, manager, Ψ expression, Ψ node) for a space and scheme."""
    vmap = encode.var_map(space, scheme)
    manager = boolfn.BddManager(vmap.n_vars)
    psi_expr = encode.build_constraints(vmap).psi
    return vmap, manager, psi_expr, manager.compile(psi_expr)


def _render_term(space: mvl.Space, term: mvl.MvTerm) -> str:
    return space.render_term(term)


# --- property checks -------------------------------------------------------------


def _check_prop1(rng: random.Random, cap: int) -> str | None:
    """Term encoding round-trips; subsumption matches literal containment."""
    space = random_space(rng)
    vmap, _, _, _ = _pipeline(space, encode.ONE_HOT)
    t1, t2 = random_term(rng, space), random_term(rng, space)
    if encode.decode_negative_term(encode.encode_term(t1, vmap), vmap) != t1:
        return f"round-trip broke on {_render_term(space, t1)}"
    e1 = set(encode.encode_term(t1, vmap).literals)
    e2 = set(encode.encode_term(t2, vmap).literals)
    syntactic = mvl.term_subsumes(t2, t1, space)
    boolean = e2 <= e1
    m1, m2 = mvl.term_mask(space, t1, cap), mvl.term_mask(space, t2, cap)
    semantic = m1 & ~m2 == 0
    if not (syntactic == boolean == semantic):
        return (f"subsumption split on {_render_term(space, t1)} vs {_render_term(space, t2)}: "
                f"syntactic={syntactic} boolean={boolean} semantic={semantic}")
    return None


def _check_prop2(rng: random.Random, cap: int) -> str | None:
    """Entailment relative to Ψ coincides with implying Ψ ⇒ Γ."""
    space = random_space(rng)
    vmap, manager, psi_expr, psi = _pipeline(space, encode.ONE_HOT)
    rho = random_bool_term(rng, vmap, negative=True)
    gamma_expr = random_bool_expression(rng, vmap)
    n = vmap.n_vars
    psi_mask = bool_truth_mask(psi_expr, n)
    gamma_mask = bool_truth_mask(gamma_expr, n)
    rho_mask = bool_term_mask(rho, n)
    left = rho_mask & psi_mask & ~gamma_mask == 0
    g = manager.combine("implies", psi, manager.compile(gamma_expr))
    right = manager.restrict_term(g, rho) == boolfn.TRUE
    if left != right:
        return (f"ρ={encode.render_term(rho, vmap)}: completion-wise={left} "
                f"vs implication={right}")
    return None


def _check_prop3(rng: random.Random, cap: int) -> str | None:
    """A term implies Δ iff its encoding implies Ψ ⇒ Δ_b."""
    space = random_space(rng)
    vmap, manager, _, psi = _pipeline(space, encode.ONE_HOT)
    delta = random_expression(rng, space)
    tau = random_term(rng, space)
    left = mvl.is_implicant(space, tau, mvl.truth_mask(space, delta, cap), cap)
    gamma = manager.combine("implies", psi, manager.compile(encode.encode_expression(delta, vmap)))
    right = manager.restrict_term(gamma, encode.encode_term(tau, vmap)) == boolfn.TRUE
    if left != right:
        return f"τ={_render_term(space, tau)}: direct={left} vs encoded={right}"
    return None


def _check_prop4(rng: random.Random, cap: int) -> str | None:
    """The Boolean pipeline returns exactly the brute-force prime implicants."""
    space = random_space(rng)
    delta = random_expression(rng, space)
    through_pipeline = pi.prime_implicants(delta, space)
    by_force = mvl.prime_implicants_bruteforce(space, delta, cap)
    if through_pipeline != by_force:
        return ("prime sets differ: pipeline={" +
                ", ".join(_render_term(space, t) for t in through_pipeline) +
                "} brute-force={" +
                ", ".join(_render_term(space, t) for t in by_force) + "}")
    return None


def _check_lemma1(rng: random.Random, cap: int) -> str | None:
    """An instance satisfies Δ iff its full encoding satisfies Δ_b."""
    space = random_space(rng)
    vmap, _, _, _ = _pipeline(space, encode.ONE_HOT)
    delta = random_expression(rng, space)
    inst = random_instance(rng, space)
    left = mvl.evaluate(delta, inst)
    assignment = encode.instance_assignment(inst, vmap)
    right = encode.evaluate(encode.encode_expression(delta, vmap), assignment)
    if left != right:
        return f"instance {inst}: direct={left} vs encoded={right}"
    return None


def _check_lemma2(rng: random.Random, cap: int) -> str | None:
    """Completions of τ map one-to-one onto Ψ-consistent completions of τ_b."""
    space = random_space(rng)
    vmap, _, psi_expr, _ = _pipeline(space, encode.ONE_HOT)
    tau = random_term(rng, space)
    n = vmap.n_vars
    value_sets = [tau.value_set(var) for var in space.variables]
    mv_side = set()
    for choice in itertools.product(*value_sets):
        inst = {var.id: v for var, v in zip(space.variables, choice)}
        mv_side.add(tuple(encode.instance_assignment(inst, vmap)))
    tau_b = encode.encode_term(tau, vmap)
    fixed = dict(tau_b.literals)
    psi_mask = bool_truth_mask(psi_expr, n)
    bool_side = set()
    for bit in range(1 << n):
        assignment = assignment_of_bit(bit, n)
        if any(assignment[i] != pol for i, pol in fixed.items()):
            continue
        if (psi_mask >> bit) & 1:
            bool_side.add(assignment)
    if mv_side != bool_side:
        return (f"completions of {_render_term(space, tau)} do not correspond: "
                f"{len(mv_side)} direct vs {len(bool_side)} encoded")
    return None


def _check_def1(rng: random.Random, cap: int) -> str | None:
    """Plain implication entails Ψ-relative entailment (never the converse)."""
    space = random_space(rng)
    vmap, _, psi_expr, _ = _pipeline(space, encode.ONE_HOT)
    rho = random_bool_term(rng, vmap, negative=False)
    gamma_expr = random_bool_expression(rng, vmap)
    n = vmap.n_vars
    rho_mask = bool_term_mask(rho, n)
    gamma_mask = bool_truth_mask(gamma_expr, n)
    if rho_mask & ~gamma_mask == 0:
        psi_mask = bool_truth_mask(psi_expr, n)
        if rho_mask & psi_mask & ~gamma_mask != 0:
            return f"ρ={encode.render_term(rho, vmap)} implies Γ but not relative to Ψ"
    return None


def _def1_witness() -> list[str]:
    """Fixed converse witness: entailment relative to Ψ without plain implication."""
    space = mvl.Space((
        mvl.MvVariable(0, "X", 3, ("x1", "x2", "x3")),
        mvl.MvVariable(1, "Y", 3, ("y1", "y2", "y3")),
    ))
    vmap, _, psi_expr, _ = _pipeline(space, encode.ONE_HOT)
    delta = mvl.Or((mvl.Lit(mvl.MvLiteral(0, (1,))), mvl.Lit(mvl.MvLiteral(1, (1,)))))
    gamma_expr = encode.And((encode.encode_expression(delta, vmap), psi_expr))
    rho = encode.encode_literal_term(mvl.MvLiteral(0, (1,)), vmap)
    n = vmap.n_vars
    gamma_mask = bool_truth_mask(gamma_expr, n)
    psi_mask = bool_truth_mask(psi_expr, n)
    rho_mask = bool_term_mask(rho, n)
    failures = []
    if rho_mask & psi_mask & ~gamma_mask != 0:
        failures.append("witness: ρ should entail Δ_b ∧ Ψ relative to Ψ")
    if rho_mask & ~gamma_mask == 0:
        failures.append("witness: ρ should not plainly imply Δ_b ∧ Ψ")
    # x1 true, y1 and y2 both true: extends ρ but breaks Y's exactly-one.
    witness = (True, False, False, True, True, False)
    if encode.evaluate(gamma_expr, witness):
        failures.append("witness completion unexpectedly satisfies Δ_b ∧ Ψ")
    if any(witness[i] != pol for i, pol in rho.literals):
        failures.append("witness completion does not extend ρ")
    return failures


_CHECKS = {
    "prop1": _check_prop1,
    "prop2": _check_prop2,
    "prop3": _check_prop3,
    "prop4": _check_prop4,
    "lemma1": _check_lemma1,
    "lemma2": _check_lemma2,
    "def1": _check_def1,
}


def check_property(name: str, trials: int = 1000, seed: int = 7,
                   cap: int = mvl.DEFAULT_CAP) -> CheckReport:
    """Run one named check; failures carry serialized counterexamples."""
    if name not in _CHECKS:
        raise ValueError(f"unknown check {name!r}; expected one of {', '.join(CHECK_NAMES)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(f"{name}:{seed}")
    failures = []
    details: dict[str, list[str]] = {}
    if name == "def1":
        witness_failures = _def1_witness()
        failures.extend(witness_failures)
        details["witness"] = ["ρ=¬X#2 ∧ ¬X#3 entails Δ_b ∧ Ψ under Ψ but not plainly"]
    check = _CHECKS[name]
    for trial in range(trials):
        message = check(rng, cap)
        if message is not None:
            failures.append(f"trial {trial}: {message}")
    return CheckReport(name, trials, failures, seed, details)


# --- encoding-failure demonstrations ---------------------------------------------


def _demo_space() -> mvl.Space:
    return mvl.Space((mvl.MvVariable(0, "X", 4, ("x1", "x2", "x3", "x4")),))


def _demo_delta() -> mvl.MvExpr:
    return mvl.Lit(mvl.MvLiteral(0, (1, 3)))


def _decode_prefix_term(term: encode.BoolTerm, vmap: encode.VarMap) -> mvl.MvTerm | None:
    """The multi-valued term a prefix-scheme Boolean term stands for, if any.

    The term must accept exactly the value patterns of some value set.
    """
    n = vmap.n_vars
    models = [assignment_of_bit(b, n) for b in _mask_bits(bool_term_mask(term, n), n)]
    var = vmap.space.variables[0]
    values = set()
    for m in models:
        count = sum(m)
        if list(m) != [True] * count + [False] * (n - count):
            return None
        values.add(count + 1)
    patterns = {
        tuple(i <= v for i in range(2, var.domain_size + 1)) for v in values
    }
    if patterns != set(models):
        return None
    return mvl.make_term(vmap.space, [(var.id, values)])


def _decode_highest_bit_term(term: encode.BoolTerm, vmap: encode.VarMap) -> mvl.MvTerm | None:
    """The multi-valued term a highest-bit Boolean term stands for, if any.

    Every assignment maps to a value; the term must accept exactly the
    preimage of some value set.
    """
    n = vmap.n_vars
    model_bits = set(_mask_bits(bool_term_mask(term, n), n))
    value_of = {}
    for bit in range(1 << n):
        assignment = assignment_of_bit(bit, n)
        highest = 0
        for i, b in enumerate(assignment):
            if b:
                highest = i + 2
        value_of[bit] = highest if highest else 1
    values = {value_of[b] for b in model_bits}
    preimage = {b for b, v in value_of.items() if v in values}
    if preimage != model_bits:
        return None
    return mvl.make_term(vmap.space, [(vmap.space.variables[0].id, values)])


def _mask_bits(mask: int, n_vars: int) -> list[int]:
    return [b for b in range(1 << n_vars) if (mask >> b) & 1]


def _one_hot_control(space: mvl.Space, delta: mvl.MvExpr) -> tuple[list[str], list[str]]:
    """Pipeline primes under one_hot, expected to match the brute-force set."""
    oracle = mvl.prime_implicants_bruteforce(space, delta)
    piped = pi.prime_implicants(delta, space)
    failures = []
    if piped != oracle:
        failures.append("one_hot control diverged from the brute-force oracle")
    return [space.render_term(t) for t in piped], failures


def _failure_demo(scheme: str, expected: list[encode.BoolTerm], decoder) -> CheckReport:
    space = _demo_space()
    delta = _demo_delta()
    vmap = encode.var_map(space, scheme)
    mv_primes = mvl.prime_implicants_bruteforce(space, delta)
    delta_mask = mvl.truth_mask(space, delta)

    n = vmap.n_vars
    psi_expr = encode.build_constraints(vmap).psi
    encoded = encode.And((encode.encode_expression(delta, vmap), psi_expr))
    bool_primes = boolean_prime_implicants(bool_truth_mask(encoded, n), n)

    failures = []
    if bool_primes != sorted(expected, key=lambda t: (len(t.literals), t.literals)):
        failures.append(
            "Boolean prime set is {" +
            ", ".join(encode.render_term(t, vmap) for t in bool_primes) + "}"
        )

    decoded_primes: list[str] = []
    decoded_all: list[str] = []
    for rho in bool_primes:
        term = decoder(rho, vmap)
        if term is None:
            decoded_all.append(f"{encode.render_term(rho, vmap)} → (no multi-valued term)")
            continue
        rendered = space.render_term(term)
        decoded_all.append(f"{encode.render_term(rho, vmap)} → {rendered}")
        if not mvl.is_implicant(space, term, delta_mask):
            failures.append(f"decoded term {rendered} is not an implicant")
        if term in mv_primes:
            decoded_primes.append(rendered)

    if decoded_primes:
        failures.append("some Boolean primes decode to multi-valued primes: "
                        + ", ".join(decoded_primes))

    control, control_failures = _one_hot_control(space, delta)
    failures.extend(control_failures)

    report = CheckReport(f"demo_{scheme}_failure", 1, failures, 0)
    report.details = {
        "target": [space.render_term(t) for t in mv_primes],
        "boolean_primes": [encode.render_term(t, vmap) for t in bool_primes],
        "decoded": decoded_all,
        "recovered_primes": decoded_primes,
        "one_hot_control": control,
    }
    return report


def demo_prefix_failure() -> CheckReport:
    """X∈{x1,x3} over four values: no prefix-scheme Boolean prime recovers it."""
    expected = [
        encode.BoolTerm(((0, False), (1, False), (2, False))),
        encode.BoolTerm(((0, True), (1, True), (2, False))),
    ]
    return _failure_demo(encode.PREFIX, expected, _decode_prefix_term)


def demo_highest_bit_failure() -> CheckReport:
    """Same target: the highest-bit primes are spurious or non-prime."""
    expected = [
        encode.BoolTerm(((0, False), (2, False))),
        encode.BoolTerm(((1, True), (2, False))),
    ]
    return _failure_demo(encode.HIGHEST_BIT, expected, _decode_highest_bit_term)
