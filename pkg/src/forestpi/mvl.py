"""Multi-valued propositional logic over finite-domain variables.

A variable ranges over values 1..domain_size.  A literal constrains one
variable to a non-empty proper subset of its domain, a term conjoins
literals over distinct variables, and arbitrary formulas are built from
literals with And/Or/Not.  Semantics are exhaustive: a formula over a
space of N instances is represented as an N-bit integer mask with bit i
standing for the i-th instance, which keeps equivalence and implication
checks cheap for the small spaces used by the test oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Iterable, Iterator, Union

from .errors import CapacityError

# Exhaustive routines refuse to enumerate spaces larger than this many
# instances (or candidate terms) unless the caller raises the cap.
DEFAULT_CAP = 1 << 20


@dataclass(frozen=True)
class MvVariable:
    """A finite-domain variable with values 1..domain_size.

    ``value_labels``, when given, supplies one display label per value.
    A domain of size 1 is allowed (a feature the model never actually
    distinguishes); such a variable admits no literals.
    """

    id: int
    name: str
    domain_size: int
    value_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError(f"variable {self.name}: domain_size must be >= 1")
        if self.value_labels and len(self.value_labels) != self.domain_size:
            raise ValueError(f"variable {self.name}: need one label per value")

    def label(self, value: int) -> str:
        return self.value_labels[value - 1] if self.value_labels else str(value)


@dataclass(frozen=True)
class MvLiteral:
    """Constraint ``variable in values``; values is sorted and duplicate-free."""

    variable: int
    values: tuple[int, ...]


def literal(var: MvVariable, values: Iterable[int]) -> MvLiteral:
    """Build a literal on ``var``, validating a non-empty proper value set."""
    vals = tuple(sorted(set(values)))
    if not vals:
        raise ValueError(f"literal on {var.name}: empty value set")
    if vals[0] < 1 or vals[-1] > var.domain_size:
        raise ValueError(f"literal on {var.name}: value out of domain")
    if len(vals) == var.domain_size:
        raise ValueError(f"literal on {var.name}: full-domain value set")
    return MvLiteral(var.id, vals)


@dataclass(frozen=True)
class MvTerm:
    """Conjunction of literals over distinct variables, sorted by variable id.

    The empty term is valid and denotes true.
    """

    literals: tuple[MvLiteral, ...] = ()

    def value_set(self, var: MvVariable) -> tuple[int, ...]:
        """Values permitted for ``var``; the full domain when unconstrained."""
        for lit in self.literals:
            if lit.variable == var.id:
                return lit.values
        return tuple(range(1, var.domain_size + 1))

    def sort_key(self) -> tuple:
        return (len(self.literals), tuple((l.variable, l.values) for l in self.literals))


@dataclass(frozen=True)
class Space:
    """An ordered collection of variables; ids must be strictly increasing."""

    variables: tuple[MvVariable, ...]

    def __post_init__(self):
        ids = [v.id for v in self.variables]
        if ids != sorted(set(ids)):
            raise ValueError("variable ids must be unique and sorted")

    def var(self, var_id: int) -> MvVariable:
        for v in self.variables:
            if v.id == var_id:
                return v
        raise KeyError(var_id)

    @property
    def n_instances(self) -> int:
        return prod(v.domain_size for v in self.variables)

    def instances(self) -> Iterator[tuple[int, ...]]:
        """All instances as value tuples, last variable varying fastest."""
        return itertools.product(*(range(1, v.domain_size + 1) for v in self.variables))

    def instance_index(self, values: tuple[int, ...]) -> int:
        """Bit position of an instance in this space's truth masks."""
        idx = 0
        for v, val in zip(self.variables, values):
            idx = idx * v.domain_size + (val - 1)
        return idx

    def render_literal(self, lit: MvLiteral) -> str:
        var = self.var(lit.variable)
        if len(lit.values) == 1:
            return f"{var.name}={var.label(lit.values[0])}"
        return f"{var.name}∈{{{','.join(var.label(v) for v in lit.values)}}}"

    def render_term(self, term: MvTerm) -> str:
        if not term.literals:
            return "⊤"
        return " ∧ ".join(self.render_literal(l) for l in term.literals)


def make_term(space: Space, constraints: Iterable[tuple[int, Iterable[int]]]) -> MvTerm | None:
    """Conjoin per-variable value constraints into a term.

    Constraints on the same variable are intersected.  Returns None when
    some intersection is empty (a contradictory conjunction); full-domain
    sets are dropped.
    """
    by_var: dict[int, set[int]] = {}
    for var_id, values in constraints:
        vals = set(values)
        if var_id in by_var:
            by_var[var_id] &= vals
        else:
            by_var[var_id] = vals
    literals = []
    for var_id in sorted(by_var):
        vals = by_var[var_id]
        if not vals:
            return None
        var = space.var(var_id)
        if min(vals) < 1 or max(vals) > var.domain_size:
            raise ValueError(f"constraint on {var.name}: value out of domain")
        if len(vals) < var.domain_size:
            literals.append(MvLiteral(var_id, tuple(sorted(vals))))
    return MvTerm(tuple(literals))


def literal_subsumes(weak: MvLiteral, strong: MvLiteral, *, strict: bool = False) -> bool:
    """True when ``strong`` entails ``weak``, i.e. strong.values ⊆ weak.values.

    With ``strict`` the value sets must additionally differ.
    """
    if weak.variable != strong.variable:
        raise ValueError("literals constrain different variables")
    if strict and weak.values == strong.values:
        return False
    return set(strong.values) <= set(weak.values)


def term_subsumes(general: MvTerm, specific: MvTerm, space: Space, *, strict: bool = False) -> bool:
    """True when every model of ``specific`` is a model of ``general``.

    With ``strict`` the terms must additionally differ.
    """
    if strict and general == specific:
        return False
    for lit in general.literals:
        var = space.var(lit.variable)
        if not set(specific.value_set(var)) <= set(lit.values):
            return False
    return True


# --- formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    literal: MvLiteral


@dataclass(frozen=True)
class Not:
    arg: "MvExpr"


@dataclass(frozen=True)
class And:
    args: tuple["MvExpr", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["MvExpr", ...]


@dataclass(frozen=True)
class Const:
    value: bool


MvExpr = Union[Lit, Not, And, Or, Const]


def conj(args: Iterable[MvExpr]) -> MvExpr:
    args = tuple(args)
    if not args:
        return Const(True)
    return args[0] if len(args) == 1 else And(args)


def disj(args: Iterable[MvExpr]) -> MvExpr:
    args = tuple(args)
    if not args:
        return Const(False)
    return args[0] if len(args) == 1 else Or(args)


def term_expr(term: MvTerm) -> MvExpr:
    return conj([Lit(l) for l in term.literals])


def evaluate(expr: MvExpr, assignment: dict[int, int]) -> bool:
    """Evaluate a formula under a total assignment {variable id: value}."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Lit):
        return assignment[expr.literal.variable] in expr.literal.values
    if isinstance(expr, Not):
        return not evaluate(expr.arg, assignment)
    if isinstance(expr, And):
        return all(evaluate(a, assignment) for a in expr.args)
    if isinstance(expr, Or):
        return any(evaluate(a, assignment) for a in expr.args)
    raise TypeError(f"not a formula: {expr!r}")


# --- exhaustive semantics ---------------------------------------------------


@lru_cache(maxsize=256)
def _value_masks(space: Space) -> dict[tuple[int, int], int]:
    """Mask per (variable id, value): bit i set iff instance i takes that value."""
    n = space.n_instances
    masks: dict[tuple[int, int], int] = {}
    stride = n
    for var in space.variables:
        stride //= var.domain_size
        period = stride * var.domain_size
        for value in range(1, var.domain_size + 1):
            block = ((1 << stride) - 1) << ((value - 1) * stride)
            mask, span = block, period
            while span < n:
                mask |= mask << span
                span *= 2
            masks[(var.id, value)] = mask & ((1 << n) - 1)
    return masks


def _check_cap(space: Space, cap: int) -> None:
    if space.n_instances > cap:
        raise CapacityError(
            f"instance space has {space.n_instances} elements, over the cap of {cap}"
        )


def literal_mask(space: Space, lit: MvLiteral, cap: int = DEFAULT_CAP) -> int:
    _check_cap(space, cap)
    masks = _value_masks(space)
    out = 0
    for value in lit.values:
        out |= masks[(lit.variable, value)]
    return out


def term_mask(space: Space, term: MvTerm, cap: int = DEFAULT_CAP) -> int:
    _check_cap(space, cap)
    out = (1 << space.n_instances) - 1
    for lit in term.literals:
        out &= literal_mask(space, lit, cap)
    return out


def truth_mask(space: Space, expr: MvExpr, cap: int = DEFAULT_CAP) -> int:
    """Truth mask of a formula: bit i set iff the i-th instance satisfies it."""
    _check_cap(space, cap)
    full = (1 << space.n_instances) - 1
    if isinstance(expr, Const):
        return full if expr.value else 0
    if isinstance(expr, Lit):
        return literal_mask(space, expr.literal, cap)
    if isinstance(expr, Not):
        return full ^ truth_mask(space, expr.arg, cap)
    if isinstance(expr, And):
        out = full
        for a in expr.args:
            out &= truth_mask(space, a, cap)
        return out
    if isinstance(expr, Or):
        out = 0
        for a in expr.args:
            out |= truth_mask(space, a, cap)
        return out
    raise TypeError(f"not a formula: {expr!r}")


def mask_instances(space: Space, mask: int) -> list[tuple[int, ...]]:
    """Instances whose bit is set in ``mask``, in enumeration order."""
    return [inst for i, inst in enumerate(space.instances()) if (mask >> i) & 1]


def is_implicant(space: Space, term: MvTerm, expr_mask: int, cap: int = DEFAULT_CAP) -> bool:
    """True when every model of ``term`` is a model of the masked formula."""
    return term_mask(space, term, cap) & ~expr_mask == 0


@lru_cache(maxsize=256)
def _subset_masks(space: Space) -> list[dict[int, int]]:
    """Per variable: truth mask of every non-empty value subset, keyed by bitmask.

    Bit v-1 of the key stands for value v; the full-domain key denotes an
    absent literal.
    """
    masks = _value_masks(space)
    out = []
    for var in space.variables:
        per_var = {}
        for bits in range(1, 1 << var.domain_size):
            m = 0
            for v in range(1, var.domain_size + 1):
                if (bits >> (v - 1)) & 1:
                    m |= masks[(var.id, v)]
            per_var[bits] = m
        out.append(per_var)
    return out


def _implicant_combos(space: Space, expr_mask: int, cap: int) -> set[tuple[int, ...]]:
    """Implicants as tuples of per-variable value bitmasks (full set = absent)."""
    _check_cap(space, cap)
    total = 1
    for var in space.variables:
        total *= (1 << var.domain_size) - 1
        if total > cap:
            raise CapacityError(f"term candidate count exceeds the cap of {cap}")
    subset_masks = _subset_masks(space)
    out = set()
    inv = ((1 << space.n_instances) - 1) ^ expr_mask
    for combo in itertools.product(*(sorted(per_var) for per_var in subset_masks)):
        m = inv
        for per_var, bits in zip(subset_masks, combo):
            m &= per_var[bits]
            if not m:
                break
        if not m:
            out.add(combo)
    return out


def _combo_term(space: Space, combo: tuple[int, ...]) -> MvTerm:
    literals = []
    for var, bits in zip(space.variables, combo):
        if bits != (1 << var.domain_size) - 1:
            vals = tuple(v for v in range(1, var.domain_size + 1) if (bits >> (v - 1)) & 1)
            literals.append(MvLiteral(var.id, vals))
    return MvTerm(tuple(literals))


def all_implicants(space: Space, expr_mask: int, cap: int = DEFAULT_CAP) -> list[MvTerm]:
    """Every implicant term of the masked formula, by candidate enumeration."""
    combos = _implicant_combos(space, expr_mask, cap)
    return sorted((_combo_term(space, c) for c in combos), key=MvTerm.sort_key)


def prime_implicants_bruteforce(space: Space, expr: MvExpr, cap: int = DEFAULT_CAP) -> list[MvTerm]:
    """The exact, sorted set of prime implicants of ``expr``.

    Enumerates every candidate term, keeps the implicants, and discards
    any implicant with a weaker implicant above it.  Because term models
    are products of per-variable value sets, an implicant has a strictly
    weaker implicant iff adding some single value to one of its literals
    yields an implicant, so the filter only inspects one-step weakenings.
    """
    expr_mask = truth_mask(space, expr, cap)
    combos = _implicant_combos(space, expr_mask, cap)
    primes = []
    for combo in combos:
        weaker = False
        for i, var in enumerate(space.variables):
            full = (1 << var.domain_size) - 1
            bits = combo[i]
            if bits == full:
                continue
            rest = full & ~bits
            while rest and not weaker:
                low = rest & -rest
                rest ^= low
                weaker = combo[:i] + (bits | low,) + combo[i + 1 :] in combos
            if weaker:
                break
        if not weaker:
            primes.append(_combo_term(space, combo))
    return sorted(primes, key=MvTerm.sort_key)
