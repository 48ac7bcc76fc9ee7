"""Boolean encodings of multi-valued logic.

Three schemes are provided.  ``one_hot`` assigns an indicator per value
and encodes a literal by negating the indicators of excluded values; it
is the scheme the explanation pipeline relies on.  ``prefix`` and
``highest_bit`` use n-1 indicators per variable and are kept for the
counterexample demonstrations that show why they cannot support prime
implicant computation.

Indicator variables are named "<feature name>#<value index>" and ordered
globally by (feature id, value index).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from . import mvl

PREFIX = "prefix"
HIGHEST_BIT = "highest_bit"
ONE_HOT = "one_hot"
SCHEMES = (PREFIX, HIGHEST_BIT, ONE_HOT)


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


@dataclass(frozen=True)
class And:
    args: tuple["BoolExpr", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["BoolExpr", ...]


@dataclass(frozen=True)
class Const:
    value: bool


BoolExpr = Union[Var, Not, And, Or, Const]


def bconj(args: Iterable[BoolExpr]) -> BoolExpr:
    args = tuple(args)
    if not args:
        return Const(True)
    return args[0] if len(args) == 1 else And(args)


def bdisj(args: Iterable[BoolExpr]) -> BoolExpr:
    args = tuple(args)
    if not args:
        return Const(False)
    return args[0] if len(args) == 1 else Or(args)


def evaluate(expr: BoolExpr, assignment) -> bool:
    """Evaluate under a total assignment (indexable by variable index)."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return bool(assignment[expr.index])
    if isinstance(expr, Not):
        return not evaluate(expr.arg, assignment)
    if isinstance(expr, And):
        return all(evaluate(a, assignment) for a in expr.args)
    if isinstance(expr, Or):
        return any(evaluate(a, assignment) for a in expr.args)
    raise TypeError(f"not a Boolean expression: {expr!r}")


@dataclass(frozen=True)
class BoolTerm:
    """Conjunction of Boolean literals: (variable index, polarity) pairs."""

    literals: tuple[tuple[int, bool], ...] = ()

    @property
    def is_negative(self) -> bool:
        return all(not pos for _, pos in self.literals)

    def variables(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.literals)


def bool_term(polarity_by_var: dict[int, bool]) -> BoolTerm:
    return BoolTerm(tuple(sorted(polarity_by_var.items())))


def term_expression(term: BoolTerm) -> BoolExpr:
    return bconj([Var(i) if pos else Not(Var(i)) for i, pos in term.literals])


class VarMap:
    """Indicator variables for a space under one scheme.

    one_hot owns one indicator per value; prefix and highest_bit own one
    per value from 2 upward.
    """

    def __init__(self, space: mvl.Space, scheme: str):
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {scheme!r}")
        self.space = space
        self.scheme = scheme
        names: list[str] = []
        owners: list[tuple[int, int]] = []
        blocks: dict[int, tuple[int, ...]] = {}
        for var in space.variables:
            first = 1 if scheme == ONE_HOT else 2
            block = []
            for value in range(first, var.domain_size + 1):
                block.append(len(names))
                owners.append((var.id, value))
                names.append(f"{var.name}#{value}")
            blocks[var.id] = tuple(block)
        self.names = tuple(names)
        self._owners = tuple(owners)
        self._blocks = blocks
        self._index = {owner: i for i, owner in enumerate(owners)}

    @property
    def n_vars(self) -> int:
        return len(self.names)

    def name(self, index: int) -> str:
        return self.names[index]

    def owner(self, index: int) -> tuple[int, int]:
        """(variable id, value index) owning a Boolean variable."""
        return self._owners[index]

    def indices(self, var_id: int) -> tuple[int, ...]:
        return self._blocks[var_id]

    def index_of(self, var_id: int, value: int) -> int:
        return self._index[(var_id, value)]


def var_map(space: mvl.Space, scheme: str = ONE_HOT) -> VarMap:
    return VarMap(space, scheme)


# --- literal and expression encodings ---------------------------------------


def _prefix_pattern(vmap: VarMap, var: mvl.MvVariable, value: int) -> BoolExpr:
    # Value i sets indicators 2..i and clears the rest.
    lits = []
    for i in range(2, var.domain_size + 1):
        v = Var(vmap.index_of(var.id, i))
        lits.append(v if i <= value else Not(v))
    return bconj(lits)


def _highest_bit_term(vmap: VarMap, var: mvl.MvVariable, value: int) -> BoolExpr:
    # Value 1 clears everything; value i >= 2 sets indicator i and clears those above.
    lits: list[BoolExpr] = []
    if value >= 2:
        lits.append(Var(vmap.index_of(var.id, value)))
    for i in range(max(2, value + 1), var.domain_size + 1):
        lits.append(Not(Var(vmap.index_of(var.id, i))))
    return bconj(lits)


def encode_literal(lit: mvl.MvLiteral, vmap: VarMap) -> BoolExpr:
    var = vmap.space.var(lit.variable)
    if vmap.scheme == ONE_HOT:
        return term_expression(encode_literal_term(lit, vmap))
    if vmap.scheme == PREFIX:
        return bdisj([_prefix_pattern(vmap, var, v) for v in lit.values])
    # highest_bit: a value set containing 1..j collapses to the negative
    # suffix term of j; remaining values keep their own terms.
    values = set(lit.values)
    j = 0
    while j + 1 in values:
        j += 1
    parts: list[BoolExpr] = []
    if j >= 1:
        parts.append(bconj([Not(Var(vmap.index_of(var.id, i)))
                            for i in range(j + 1, var.domain_size + 1)]))
    parts.extend(_highest_bit_term(vmap, var, v) for v in sorted(values) if v > j)
    return bdisj(parts)


def encode_literal_term(lit: mvl.MvLiteral, vmap: VarMap) -> BoolTerm:
    """Negative term excluding the values outside the literal's set (one_hot)."""
    if vmap.scheme != ONE_HOT:
        raise ValueError("negative-term encoding needs the one_hot scheme")
    var = vmap.space.var(lit.variable)
    excluded = [v for v in range(1, var.domain_size + 1) if v not in lit.values]
    return BoolTerm(tuple((vmap.index_of(var.id, v), False) for v in excluded))


def encode_term(term: mvl.MvTerm, vmap: VarMap) -> BoolTerm:
    """Negative term for a multi-valued term (one_hot); blocks are disjoint."""
    lits: list[tuple[int, bool]] = []
    for lit in term.literals:
        lits.extend(encode_literal_term(lit, vmap).literals)
    return BoolTerm(tuple(sorted(lits)))


def encode_expression(expr: mvl.MvExpr, vmap: VarMap) -> BoolExpr:
    if isinstance(expr, mvl.Const):
        return Const(expr.value)
    if isinstance(expr, mvl.Lit):
        return encode_literal(expr.literal, vmap)
    if isinstance(expr, mvl.Not):
        return Not(encode_expression(expr.arg, vmap))
    if isinstance(expr, mvl.And):
        return And(tuple(encode_expression(a, vmap) for a in expr.args))
    if isinstance(expr, mvl.Or):
        return Or(tuple(encode_expression(a, vmap) for a in expr.args))
    raise TypeError(f"not a formula: {expr!r}")


# --- domain constraints ------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSet:
    """Per-variable domain constraints and their conjunction."""

    per_variable: tuple[tuple[int, BoolExpr], ...]
    psi: BoolExpr


def build_constraints(vmap: VarMap) -> ConstraintSet:
    per_var = []
    for var in vmap.space.variables:
        if vmap.scheme == ONE_HOT:
            indicators = [Var(i) for i in vmap.indices(var.id)]
            clauses: list[BoolExpr] = [bdisj(indicators)]
            for a in range(len(indicators)):
                for b in range(a + 1, len(indicators)):
                    clauses.append(Not(And((indicators[a], indicators[b]))))
            expr = bconj(clauses)
        elif vmap.scheme == PREFIX:
            expr = bconj([
                Or((Not(Var(vmap.index_of(var.id, i))), Var(vmap.index_of(var.id, i - 1))))
                for i in range(3, var.domain_size + 1)
            ])
        else:
            expr = Const(True)
        per_var.append((var.id, expr))
    return ConstraintSet(tuple(per_var), bconj([e for _, e in per_var]))


# --- decoding and instances --------------------------------------------------


def decode_negative_term(rho: BoolTerm, vmap: VarMap) -> mvl.MvTerm:
    """Invert the one_hot term encoding.

    Fails on non-negative terms and on terms that exclude every value of
    some variable (those are inconsistent with the domain constraints).
    """
    if vmap.scheme != ONE_HOT:
        raise ValueError("decoding needs the one_hot scheme")
    if not rho.is_negative:
        raise ValueError("term is not negative")
    excluded: dict[int, set[int]] = {}
    for index, _ in rho.literals:
        var_id, value = vmap.owner(index)
        excluded.setdefault(var_id, set()).add(value)
    literals = []
    for var_id in sorted(excluded):
        var = vmap.space.var(var_id)
        values = tuple(v for v in range(1, var.domain_size + 1) if v not in excluded[var_id])
        if not values:
            raise ValueError(f"term excludes every value of variable {var.name}")
        literals.append(mvl.MvLiteral(var_id, values))
    return mvl.MvTerm(tuple(literals))


def encode_instance_full(inst: dict[int, int], vmap: VarMap) -> BoolTerm:
    """Full one_hot encoding: chosen indicators positive, the rest negative."""
    if vmap.scheme != ONE_HOT:
        raise ValueError("full encoding needs the one_hot scheme")
    lits = []
    for var in vmap.space.variables:
        chosen = inst[var.id]
        for value in range(1, var.domain_size + 1):
            lits.append((vmap.index_of(var.id, value), value == chosen))
    return BoolTerm(tuple(sorted(lits)))


def instance_assignment(inst: dict[int, int], vmap: VarMap) -> list[bool]:
    """Canonical total assignment encoding an instance under any scheme."""
    out = [False] * vmap.n_vars
    for var in vmap.space.variables:
        chosen = inst[var.id]
        for value in range(2 if vmap.scheme != ONE_HOT else 1, var.domain_size + 1):
            idx = vmap.index_of(var.id, value)
            if vmap.scheme == PREFIX:
                out[idx] = value <= chosen
            elif vmap.scheme == HIGHEST_BIT:
                out[idx] = value == chosen
            else:
                out[idx] = value == chosen
    return out


def decode_assignment(assignment, vmap: VarMap) -> dict[int, int]:
    """Value chosen by a total assignment for each variable.

    prefix requires the set indicators of a block to form a prefix;
    one_hot requires exactly one set indicator; highest_bit is total.
    """
    out = {}
    for var in vmap.space.variables:
        bits = [bool(assignment[i]) for i in vmap.indices(var.id)]
        if vmap.scheme == ONE_HOT:
            if sum(bits) != 1:
                raise ValueError(f"assignment picks {sum(bits)} values for {var.name}")
            out[var.id] = bits.index(True) + 1
        elif vmap.scheme == PREFIX:
            count = sum(bits)
            if bits != [True] * count + [False] * (len(bits) - count):
                raise ValueError(f"assignment is not a prefix pattern for {var.name}")
            out[var.id] = count + 1
        else:
            highest = 0
            for pos, b in enumerate(bits):
                if b:
                    highest = pos + 2
            out[var.id] = highest if highest else 1
    return out


# --- rendering ---------------------------------------------------------------


def render_term(term: BoolTerm, vmap: VarMap) -> str:
    if not term.literals:
        return "⊤"
    return " ∧ ".join(
        ("" if pos else "¬") + vmap.name(i) for i, pos in term.literals
    )


def render_expression(expr: BoolExpr, vmap: VarMap) -> str:
    def walk(e: BoolExpr, parent: str) -> str:
        if isinstance(e, Const):
            return "⊤" if e.value else "⊥"
        if isinstance(e, Var):
            return vmap.name(e.index)
        if isinstance(e, Not):
            inner = walk(e.arg, "not")
            return f"¬{inner}" if isinstance(e.arg, (Var, Const, Not)) else f"¬({inner})"
        op = " ∧ " if isinstance(e, And) else " ∨ "
        kind = "and" if isinstance(e, And) else "or"
        body = op.join(walk(a, kind) for a in e.args)
        # A "not" parent adds its own parentheses.
        return body if parent in ("", kind, "not") else f"({body})"

    return walk(expr, "")


# --- CNF export ---------------------------------------------------------------


def _fold(expr: BoolExpr) -> BoolExpr:
    """Remove constants so Tseitin only sees live connectives."""
    if isinstance(expr, (Var, Const)):
        return expr
    if isinstance(expr, Not):
        arg = _fold(expr.arg)
        return Const(not arg.value) if isinstance(arg, Const) else Not(arg)
    args = [_fold(a) for a in expr.args]
    if isinstance(expr, And):
        if any(isinstance(a, Const) and not a.value for a in args):
            return Const(False)
        live = [a for a in args if not isinstance(a, Const)]
        return bconj(live)
    if any(isinstance(a, Const) and a.value for a in args):
        return Const(True)
    live = [a for a in args if not isinstance(a, Const)]
    return bdisj(live)


def tseitin_cnf(expr: BoolExpr, vmap: VarMap) -> str:
    """DIMACS text for the expression, with a name comment per input variable.

    Input variables keep DIMACS ids 1..n in VarMap order; auxiliary
    definition variables follow.
    """
    expr = _fold(expr)
    clauses: list[list[int]] = []
    next_var = [vmap.n_vars]

    def lit_of(e: BoolExpr) -> int:
        if isinstance(e, Var):
            return e.index + 1
        if isinstance(e, Not):
            return -lit_of(e.arg)
        next_var[0] += 1
        aux = next_var[0]
        parts = [lit_of(a) for a in e.args]
        if isinstance(e, And):
            for p in parts:
                clauses.append([-aux, p])
            clauses.append([aux] + [-p for p in parts])
        else:
            clauses.append([-aux] + parts)
            for p in parts:
                clauses.append([aux, -p])
        return aux

    if isinstance(expr, Const):
        if not expr.value:
            clauses.append([])
    else:
        clauses.append([lit_of(expr)])

    lines = [f"c {i + 1} {name}" for i, name in enumerate(vmap.names)]
    lines.append(f"p cnf {next_var[0]} {len(clauses)}")
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in clauses)
    return "\n".join(lines) + "\n"
