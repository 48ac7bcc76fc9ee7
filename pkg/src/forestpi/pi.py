"""Prime implicants and PI-explanations over the one_hot encoding.

The pipeline encodes an expression, compiles Ψ ⇒ Δ_b, enumerates the
negative prime implicants that respect the domain constraints, and
decodes them back into multi-valued terms.  A PI-explanation for a
decision is such a prime of the decision's function (the class function
for positive decisions, its negation for negative ones) that is
consistent with the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from . import boolfn, encode, ingest, mvl


@dataclass(frozen=True)
class Explanation:
    """A prime implicant of the decision function, consistent with the instance."""

    term: mvl.MvTerm
    rendered: tuple[tuple[str, str], ...]
    decision: int
    instance: tuple[tuple[int, int], ...]

    @property
    def text(self) -> str:
        if not self.rendered:
            return "⊤"
        return " ∧ ".join(r for _, r in self.rendered)


def enumerate_negative_primes(
    manager: boolfn.BddManager, gamma: int, vmap: encode.VarMap
) -> list[encode.BoolTerm]:
    """Negative prime implicants of gamma that keep every variable satisfiable.

    Depth-first over the variable order, branching only on negated
    literals.  A branch is cut when even negating every remaining
    variable fails to reach a tautology (adding literals only shrinks a
    term's models, so implication is monotone along the branch).  A
    candidate is kept when no single literal can be dropped from it and
    no variable has its whole indicator block excluded.
    """
    n = manager.n_vars
    blocks = {var.id: set(vmap.indices(var.id)) for var in vmap.space.variables}
    out: list[encode.BoolTerm] = []

    def minimal(chosen: tuple[int, ...]) -> bool:
        for skip in chosen:
            g = gamma
            for index in chosen:
                if index != skip:
                    g = manager.restrict(g, index, False)
            if g == boolfn.TRUE:
                return False
        return True

    def consistent(chosen: tuple[int, ...]) -> bool:
        picked = set(chosen)
        return all(not block <= picked for block in blocks.values() if block)

    def walk(position: int, g: int, chosen: tuple[int, ...]) -> None:
        if g == boolfn.TRUE:
            if minimal(chosen) and consistent(chosen):
                out.append(encode.BoolTerm(tuple((i, False) for i in chosen)))
            return
        rest = g
        for index in range(position, n):
            rest = manager.restrict(rest, index, False)
        if rest != boolfn.TRUE:
            return
        walk(position + 1, manager.restrict(g, position, False), chosen + (position,))
        walk(position + 1, g, chosen)

    walk(0, gamma, ())
    return sorted(out, key=lambda t: (len(t.literals), t.literals))


def prime_implicants(
    delta: mvl.MvExpr,
    space: mvl.Space,
    node_budget: int = boolfn.DEFAULT_NODE_BUDGET,
) -> list[mvl.MvTerm]:
    """Prime implicants of a multi-valued expression, via the Boolean pipeline."""
    vmap = encode.var_map(space, encode.ONE_HOT)
    manager = boolfn.BddManager(vmap.n_vars, node_budget)
    psi = manager.compile(encode.build_constraints(vmap).psi)
    delta_b = manager.compile(encode.encode_expression(delta, vmap))
    gamma = manager.combine("implies", psi, delta_b)
    primes = enumerate_negative_primes(manager, gamma, vmap)
    return sorted(
        (encode.decode_negative_term(rho, vmap) for rho in primes),
        key=mvl.MvTerm.sort_key,
    )


def class_functions(
    manager: boolfn.BddManager, forest: ingest.Forest, space: ingest.FeatureSpace,
    vmap: encode.VarMap,
) -> list[int]:
    """Per-class decision BDDs for a forest, aggregated over tree votes."""
    votes = []
    for tree in forest.trees:
        row = [
            manager.compile(encode.encode_expression(
                ingest.tree_to_expression(tree, c, space, forest.n_classes), vmap))
            for c in range(forest.n_classes)
        ]
        votes.append(row)
    if forest.n_classes == 2:
        class1 = manager.majority([row[1] for row in votes])
        return [manager.negate(class1), class1]
    return manager.winners(votes)


def _term_consistent(term: mvl.MvTerm, inst: dict[int, int]) -> bool:
    return all(inst[lit.variable] in lit.values for lit in term.literals)


def pi_explanations(
    model: Union[ingest.Forest, mvl.MvExpr],
    inst: dict[int, int],
    space: mvl.Space,
    node_budget: int = boolfn.DEFAULT_NODE_BUDGET,
) -> list[Explanation]:
    """Sorted PI-explanations of the model's decision on an instance.

    The decision function is the class function the instance lands in;
    for a two-class model that is the majority function or its negation.
    """
    vmap = encode.var_map(space, encode.ONE_HOT)
    manager = boolfn.BddManager(vmap.n_vars, node_budget)
    psi = manager.compile(encode.build_constraints(vmap).psi)
    assignment = encode.instance_assignment(inst, vmap)

    if isinstance(model, ingest.Forest):
        class_fns = class_functions(manager, model, space, vmap)
    else:
        delta = manager.compile(encode.encode_expression(model, vmap))
        class_fns = [manager.negate(delta), delta]

    decision = next(
        c for c, fn in enumerate(class_fns) if manager.evaluate(fn, assignment)
    )
    gamma = manager.combine("implies", psi, class_fns[decision])
    primes = enumerate_negative_primes(manager, gamma, vmap)

    explanations = []
    inst_key = tuple(sorted(inst.items()))
    for rho in primes:
        term = encode.decode_negative_term(rho, vmap)
        if not _term_consistent(term, inst):
            continue
        rendered = tuple(
            (space.var(lit.variable).name, space.render_literal(lit))
            for lit in term.literals
        )
        explanations.append(Explanation(term, rendered, decision, inst_key))
    explanations.sort(key=lambda e: e.term.sort_key())
    return explanations
