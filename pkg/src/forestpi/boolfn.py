"""Reduced ordered binary decision diagrams over a fixed variable order.

Nodes are hash-consed, so two equivalent functions built in the same
manager get the same node id; equivalence checks are identity checks.
Variable indices follow the VarMap global order.  Handles returned by a
manager are plain ints and stay valid for the manager's lifetime.
"""

from __future__ import annotations

from itertools import count
from typing import Iterator, Sequence

from . import encode
from .errors import CapacityError

DEFAULT_NODE_BUDGET = 10**7

FALSE = 0
TRUE = 1

_OPS = {
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "implies": lambda a, b: (not a) or b,
}


class BddManager:
    """Node store with an apply cache; single-writer, shareable once built."""

    def __init__(self, n_vars: int, node_budget: int = DEFAULT_NODE_BUDGET):
        if node_budget <= 0:
            raise ValueError("node budget must be positive")
        self.n_vars = n_vars
        self.node_budget = node_budget
        # Terminals sit below every variable level.
        self._level = [n_vars, n_vars]
        self._lo = [FALSE, TRUE]
        self._hi = [FALSE, TRUE]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}

    def _node(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        found = self._unique.get(key)
        if found is not None:
            return found
        if len(self._level) >= self.node_budget + 2:
            raise CapacityError(f"node budget of {self.node_budget} exhausted")
        node = len(self._level)
        self._level.append(level)
        self._lo.append(lo)
        self._hi.append(hi)
        self._unique[key] = node
        return node

    def var(self, level: int) -> int:
        if not 0 <= level < self.n_vars:
            raise ValueError(f"variable index {level} out of range")
        return self._node(level, FALSE, TRUE)

    def combine(self, op: str, f: int, g: int) -> int:
        fn = _OPS[op]
        if f <= TRUE and g <= TRUE:
            return int(fn(f == TRUE, g == TRUE))
        # Terminal short circuits.
        if op == "and":
            if f == FALSE or g == FALSE:
                return FALSE
            if f == TRUE:
                return g
            if g == TRUE:
                return f
            if f == g:
                return f
        elif op == "or":
            if f == TRUE or g == TRUE:
                return TRUE
            if f == FALSE:
                return g
            if g == FALSE:
                return f
            if f == g:
                return f
        else:
            if f == FALSE or g == TRUE:
                return TRUE
            if f == TRUE:
                return g
            if f == g:
                return TRUE
        key = (op, f, g)
        found = self._cache.get(key)
        if found is not None:
            return found
        level = min(self._level[f], self._level[g])
        f0, f1 = (self._lo[f], self._hi[f]) if self._level[f] == level else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if self._level[g] == level else (g, g)
        out = self._node(level, self.combine(op, f0, g0), self.combine(op, f1, g1))
        self._cache[key] = out
        return out

    def negate(self, f: int) -> int:
        if f <= TRUE:
            return TRUE - f
        key = ("not", f)
        found = self._cache.get(key)
        if found is not None:
            return found
        out = self._node(self._level[f], self.negate(self._lo[f]), self.negate(self._hi[f]))
        self._cache[key] = out
        return out

    def compile(self, expr: encode.BoolExpr) -> int:
        if isinstance(expr, encode.Const):
            return TRUE if expr.value else FALSE
        if isinstance(expr, encode.Var):
            return self.var(expr.index)
        if isinstance(expr, encode.Not):
            return self.negate(self.compile(expr.arg))
        op = "and" if isinstance(expr, encode.And) else "or"
        if not isinstance(expr, (encode.And, encode.Or)):
            raise TypeError(f"not a Boolean expression: {expr!r}")
        out = TRUE if op == "and" else FALSE
        for a in expr.args:
            out = self.combine(op, out, self.compile(a))
        return out

    def restrict(self, f: int, level: int, value: bool) -> int:
        if f <= TRUE or self._level[f] > level:
            return f
        if self._level[f] == level:
            return self._hi[f] if value else self._lo[f]
        key = ("restrict", f, level, value)
        found = self._cache.get(key)
        if found is not None:
            return found
        out = self._node(
            self._level[f],
            self.restrict(self._lo[f], level, value),
            self.restrict(self._hi[f], level, value),
        )
        self._cache[key] = out
        return out

    def restrict_term(self, f: int, term: encode.BoolTerm) -> int:
        for index, pos in term.literals:
            f = self.restrict(f, index, pos)
        return f

    def evaluate(self, f: int, assignment: Sequence[bool]) -> bool:
        while f > TRUE:
            f = self._hi[f] if assignment[self._level[f]] else self._lo[f]
        return f == TRUE

    def count_models(self, f: int, n_vars: int | None = None) -> int:
        """Number of total assignments over n_vars variables satisfying f."""
        n = self.n_vars if n_vars is None else n_vars
        memo: dict[int, int] = {FALSE: 0, TRUE: 1}

        def walk(node: int) -> int:
            if node in memo:
                return memo[node]
            level = self._level[node]
            total = 0
            for child in (self._lo[node], self._hi[node]):
                total += walk(child) << (self._level[child] - level - 1)
            memo[node] = total
            return total

        if n < self.n_vars:
            raise ValueError("n_vars below the manager's variable count")
        base = memo[f] << self.n_vars if f <= TRUE else walk(f) << self._level[f]
        return base << (n - self.n_vars)

    def models(self, f: int) -> Iterator[tuple[bool, ...]]:
        """Satisfying total assignments in lexicographic order (False < True)."""

        def walk(level: int, node: int) -> Iterator[list[bool]]:
            if node == FALSE:
                return
            if level == self.n_vars:
                yield []
                return
            if self._level[node] == level:
                children = (self._lo[node], self._hi[node])
            else:
                children = (node, node)
            for bit, child in zip((False, True), children):
                for rest in walk(level + 1, child):
                    yield [bit] + rest

        for assignment in walk(0, f):
            yield tuple(assignment)

    def majority(self, fs: Sequence[int]) -> int:
        """True iff strictly more than half the inputs are true.

        Built as "at least k of the first i" functions, one dynamic
        programming sweep per input.
        """
        if not fs:
            raise ValueError("majority needs at least one input")
        need = len(fs) // 2 + 1
        at_least = [TRUE] + [FALSE] * need
        for f in fs:
            new = [TRUE]
            for k in range(1, need + 1):
                new.append(self.combine(
                    "or",
                    self.combine("and", f, at_least[k - 1]),
                    self.combine("and", self.negate(f), at_least[k]),
                ))
            at_least = new
        return at_least[need]

    def winners(self, votes: Sequence[Sequence[int]]) -> list[int]:
        """Per-class decision functions for a vote among tree outputs.

        votes[t][c] says tree t votes class c; each tree votes exactly
        once.  Class c wins when it out-votes every lower class strictly
        and every higher class at least equally.
        """
        n_classes = len(votes[0])
        out = []
        for c in range(n_classes):
            parts = []
            for d in range(n_classes):
                if d != c:
                    parts.append(self._vote_lead(votes, c, d, strict=d < c))
            fn = TRUE
            for p in parts:
                fn = self.combine("and", fn, p)
            out.append(fn)
        return out

    def _vote_lead(self, votes, c: int, d: int, strict: bool) -> int:
        # Difference DP: diff[j] is "votes for c minus votes for d equals j".
        t = len(votes)
        diff = {0: TRUE}
        for row in votes:
            f, g = row[c], row[d]
            neither = self.combine("and", self.negate(f), self.negate(g))
            new: dict[int, int] = {}
            for j, fn in diff.items():
                for delta, gate in ((1, self.combine("and", f, self.negate(g))),
                                    (-1, self.combine("and", g, self.negate(f))),
                                    (0, neither)):
                    if gate == FALSE or fn == FALSE:
                        continue
                    k = j + delta
                    piece = self.combine("and", fn, gate)
                    new[k] = self.combine("or", new.get(k, FALSE), piece)
            diff = new
        lead = FALSE
        for j, fn in diff.items():
            if j > 0 or (not strict and j == 0):
                lead = self.combine("or", lead, fn)
        return lead

    def to_expression(self, f: int) -> encode.BoolExpr:
        """Shannon expansion of a node back into an expression tree."""
        memo: dict[int, encode.BoolExpr] = {
            FALSE: encode.Const(False),
            TRUE: encode.Const(True),
        }

        def walk(node: int) -> encode.BoolExpr:
            found = memo.get(node)
            if found is not None:
                return found
            v = encode.Var(self._level[node])
            lo, hi = walk(self._lo[node]), walk(self._hi[node])
            parts = []
            if hi != encode.Const(False):
                parts.append(v if hi == encode.Const(True) else encode.And((v, hi)))
            if lo != encode.Const(False):
                parts.append(encode.Not(v) if lo == encode.Const(True)
                             else encode.And((encode.Not(v), lo)))
            out = parts[0] if len(parts) == 1 else encode.Or(tuple(parts))
            memo[node] = out
            return out

        return walk(f)

    def to_dot(self, f: int, names: Sequence[str] | None = None) -> str:
        """Graphviz rendering; dashed edges are low branches."""
        lines = ["digraph bdd {", '  0 [shape=box,label="0"];', '  1 [shape=box,label="1"];']
        seen = {FALSE, TRUE}
        stack = [f]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            level = self._level[node]
            label = names[level] if names else f"x{level}"
            lines.append(f'  {node} [label="{label}"];')
            lines.append(f"  {node} -> {self._lo[node]} [style=dashed];")
            lines.append(f"  {node} -> {self._hi[node]};")
            stack.extend((self._lo[node], self._hi[node]))
        lines.append("}")
        return "\n".join(lines)

    @property
    def n_nodes(self) -> int:
        return len(self._level)
