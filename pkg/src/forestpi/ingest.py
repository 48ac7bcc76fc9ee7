"""Tree-ensemble ingestion.

Parses the JSON model format, derives a multi-valued feature space by
discretizing each continuous feature against every threshold the forest
tests it with, lifts raw instances into that space, and converts trees
into multi-valued class expressions.

Model schema: {"n_classes": int, "features": [...], "trees": [<node>]}
where <node> is {"feature": int, "threshold": number, "true": <node>,
"false": <node>} or {"leaf": int}.  A test reads "feature < threshold"
and the "true" child is taken when it holds.  Categorical features are
tested against their 0-based category index.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Union

from . import mvl
from .errors import ParseError

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class FeatureSpec:
    """One input feature; thresholds apply to continuous features only."""

    id: int
    name: str
    kind: str
    thresholds: tuple[float, ...] = ()
    categories: tuple[str, ...] = ()


@dataclass(frozen=True)
class Leaf:
    class_index: int


@dataclass(frozen=True)
class Internal:
    feature: int
    threshold: float
    true_child: "TreeNode"
    false_child: "TreeNode"


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class Forest:
    trees: tuple[TreeNode, ...]
    n_classes: int


@dataclass(frozen=True)
class FeatureSpace(mvl.Space):
    """Lifted space: one multi-valued variable per feature.

    A continuous feature with k thresholds becomes a (k+1)-valued
    variable; value i covers the half-open interval [t_{i-1}, t_i), so a
    raw value equal to a threshold lands in the upper interval.  A
    categorical feature keeps its category list verbatim.
    """

    specs: tuple[FeatureSpec, ...] = ()

    def spec(self, var_id: int) -> FeatureSpec:
        for s in self.specs:
            if s.id == var_id:
                return s
        raise KeyError(var_id)

    def render_literal(self, lit: mvl.MvLiteral) -> str:
        spec = self.spec(lit.variable)
        var = self.var(lit.variable)
        if spec.kind == CATEGORICAL:
            if len(lit.values) == 1:
                return f"{var.name}={spec.categories[lit.values[0] - 1]}"
            cats = ",".join(spec.categories[v - 1] for v in lit.values)
            return f"{var.name}∈{{{cats}}}"
        parts = []
        for run_start, run_end in _runs(lit.values):
            lo = "(-inf" if run_start == 1 else f"[{_fmt(spec.thresholds[run_start - 2])}"
            hi = "+inf)" if run_end > len(spec.thresholds) else f"{_fmt(spec.thresholds[run_end - 1])})"
            parts.append(f"{lo},{hi}")
        return f"{var.name}∈" + " ∪ ".join(parts)


def _runs(values: tuple[int, ...]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive values, as (first, last) pairs."""
    runs = []
    start = prev = values[0]
    for v in values[1:]:
        if v != prev + 1:
            runs.append((start, prev))
            start = v
        prev = v
    runs.append((start, prev))
    return runs


def _fmt(x: float) -> str:
    return f"{x:g}"


def _interval_labels(thresholds: tuple[float, ...]) -> tuple[str, ...]:
    bounds = ["-inf"] + [_fmt(t) for t in thresholds] + ["+inf"]
    labels = []
    for i in range(len(bounds) - 1):
        left = "(" if i == 0 else "["
        labels.append(f"{left}{bounds[i]}, {bounds[i + 1]})")
    return tuple(labels)


def feature_space(specs: list[FeatureSpec] | tuple[FeatureSpec, ...]) -> FeatureSpace:
    """Build the lifted space for the given feature specs."""
    variables = []
    for s in sorted(specs, key=lambda s: s.id):
        if s.kind == CATEGORICAL:
            variables.append(mvl.MvVariable(s.id, s.name, len(s.categories), s.categories))
        else:
            labels = _interval_labels(s.thresholds)
            variables.append(mvl.MvVariable(s.id, s.name, len(s.thresholds) + 1, labels))
    return FeatureSpace(tuple(variables), tuple(sorted(specs, key=lambda s: s.id)))


# --- parsing ----------------------------------------------------------------


def _require(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise ParseError(message, path)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_node(doc, path: str, n_classes: int, feature_ids: set[int], seen: frozenset) -> TreeNode:
    _require(isinstance(doc, dict), "node must be an object", path)
    if "leaf" in doc:
        _require(set(doc) == {"leaf"}, "leaf node admits no other keys", path)
        leaf = doc["leaf"]
        _require(isinstance(leaf, int) and not isinstance(leaf, bool), "leaf must be an integer", path + ".leaf")
        _require(0 <= leaf < n_classes, f"leaf class {leaf} out of range 0..{n_classes - 1}", path + ".leaf")
        return Leaf(leaf)
    _require(set(doc) == {"feature", "threshold", "true", "false"},
             "internal node needs exactly feature/threshold/true/false", path)
    feature = doc["feature"]
    _require(isinstance(feature, int) and not isinstance(feature, bool), "feature must be an integer", path + ".feature")
    _require(feature in feature_ids, f"unknown feature id {feature}", path + ".feature")
    threshold = doc["threshold"]
    _require(_is_number(threshold), "threshold must be a number", path + ".threshold")
    _require(math.isfinite(threshold), "threshold must be finite", path + ".threshold")
    test = (feature, float(threshold))
    _require(test not in seen, "node repeats an ancestor's test", path)
    seen = seen | {test}
    return Internal(
        feature,
        float(threshold),
        _parse_node(doc["true"], path + ".true", n_classes, feature_ids, seen),
        _parse_node(doc["false"], path + ".false", n_classes, feature_ids, seen),
    )


def _collect_thresholds(node: TreeNode, acc: dict[int, set[float]]) -> None:
    if isinstance(node, Internal):
        acc.setdefault(node.feature, set()).add(node.threshold)
        _collect_thresholds(node.true_child, acc)
        _collect_thresholds(node.false_child, acc)


def parse_model(document: str) -> tuple[Forest, FeatureSpace]:
    """Parse a model document; the space merges thresholds across all trees."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    _require(isinstance(doc, dict), "model must be an object", "$")
    _require(set(doc) == {"n_classes", "features", "trees"},
             "model needs exactly n_classes/features/trees", "$")
    n_classes = doc["n_classes"]
    _require(isinstance(n_classes, int) and not isinstance(n_classes, bool) and n_classes >= 2,
             "n_classes must be an integer >= 2", "$.n_classes")
    _require(isinstance(doc["features"], list), "features must be a list", "$.features")

    raw_specs = []
    ids: set[int] = set()
    names: set[str] = set()
    for i, f in enumerate(doc["features"]):
        path = f"$.features[{i}]"
        _require(isinstance(f, dict), "feature must be an object", path)
        _require({"id", "name", "kind"} <= set(f), "feature needs id/name/kind", path)
        _require(set(f) <= {"id", "name", "kind", "categories"}, "unexpected feature key", path)
        fid, name, kind = f["id"], f["name"], f["kind"]
        _require(isinstance(fid, int) and not isinstance(fid, bool) and fid >= 0, "id must be a non-negative integer", path + ".id")
        _require(fid not in ids, f"duplicate feature id {fid}", path + ".id")
        _require(isinstance(name, str) and name, "name must be a non-empty string", path + ".name")
        _require(name not in names, f"duplicate feature name {name!r}", path + ".name")
        _require(kind in (CONTINUOUS, CATEGORICAL), "kind must be continuous or categorical", path + ".kind")
        cats: tuple[str, ...] = ()
        if kind == CATEGORICAL:
            _require("categories" in f, "categorical feature needs categories", path)
            _require(isinstance(f["categories"], list) and f["categories"]
                     and all(isinstance(c, str) for c in f["categories"]),
                     "categories must be a non-empty list of strings", path + ".categories")
            cats = tuple(f["categories"])
            _require(len(set(cats)) == len(cats), "categories must be unique", path + ".categories")
        else:
            _require("categories" not in f, "continuous feature admits no categories", path)
        ids.add(fid)
        names.add(name)
        raw_specs.append((fid, name, kind, cats))

    _require(isinstance(doc["trees"], list) and doc["trees"], "trees must be a non-empty list", "$.trees")
    trees = tuple(
        _parse_node(t, f"$.trees[{i}]", n_classes, ids, frozenset())
        for i, t in enumerate(doc["trees"])
    )
    forest = Forest(trees, n_classes)

    thresholds: dict[int, set[float]] = {}
    for tree in trees:
        _collect_thresholds(tree, thresholds)
    specs = []
    for fid, name, kind, cats in raw_specs:
        if kind == CATEGORICAL:
            if fid in thresholds:
                _require(len(cats) >= 2, "tested categorical feature needs at least two categories",
                         f"$.features (id {fid})")
            specs.append(FeatureSpec(fid, name, kind, (), cats))
        else:
            specs.append(FeatureSpec(fid, name, kind, tuple(sorted(thresholds.get(fid, set()))), ()))
    return forest, feature_space(specs)


def parse_instance(document: str, space: FeatureSpace) -> dict[int, float | str]:
    """Parse an instance document {feature name: value} into an id-keyed map."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    return raw_instance(doc, space)


def raw_instance(doc, space: FeatureSpace) -> dict[int, float | str]:
    _require(isinstance(doc, dict), "instance must be an object", "$")
    by_name = {s.name: s for s in space.specs}
    _require(set(doc) == set(by_name),
             f"instance keys {sorted(doc)} do not match features {sorted(by_name)}", "$")
    out: dict[int, float | str] = {}
    for name, value in doc.items():
        s = by_name[name]
        if s.kind == CATEGORICAL:
            _require(isinstance(value, str), f"{name} expects a category string", f"$.{name}")
        else:
            _require(_is_number(value), f"{name} expects a number", f"$.{name}")
            _require(math.isfinite(value), f"{name} must be finite", f"$.{name}")
        out[s.id] = value
    return out


def lift_instance(raw: dict[int, float | str], space: FeatureSpace) -> dict[int, int]:
    """Map raw feature values to value indices of the lifted space."""
    out = {}
    for s in space.specs:
        if s.id not in raw:
            raise ParseError(f"feature {s.name} missing from instance")
        value = raw[s.id]
        if s.kind == CATEGORICAL:
            if value not in s.categories:
                raise ParseError(f"unknown category {value!r} for feature {s.name}")
            out[s.id] = s.categories.index(value) + 1
        else:
            if not (_is_number(value) and math.isfinite(value)):
                raise ParseError(f"feature {s.name} needs a finite number, got {value!r}")
            out[s.id] = bisect_right(s.thresholds, value) + 1
    return out


# --- trees as expressions ---------------------------------------------------


def _below_values(spec: FeatureSpec, threshold: float) -> set[int]:
    """Value indices whose entire interval (or category index) is below the test."""
    if spec.kind == CATEGORICAL:
        return {v for v in range(1, len(spec.categories) + 1) if v - 1 < threshold}
    # The space's thresholds include every tested threshold, so each value
    # interval falls entirely on one side of the test.
    return {v for v in range(1, len(spec.thresholds) + 2)
            if v <= len(spec.thresholds) and spec.thresholds[v - 1] <= threshold}


def tree_to_expression(
    root: TreeNode, class_index: int, space: FeatureSpace, n_classes: int | None = None
) -> mvl.MvExpr:
    """Disjunction of path terms for all leaves of the given class.

    Paths whose tests contradict each other contribute nothing.
    """
    if class_index < 0 or (n_classes is not None and class_index >= n_classes):
        raise ValueError(f"class index {class_index} out of range")
    paths: list[mvl.MvExpr] = []

    def walk(node: TreeNode, constraints: list[tuple[int, set[int]]]) -> None:
        if isinstance(node, Leaf):
            if node.class_index == class_index:
                term = mvl.make_term(space, constraints)
                if term is not None:
                    paths.append(mvl.term_expr(term))
            return
        spec = space.spec(node.feature)
        var = space.var(node.feature)
        below = _below_values(spec, node.threshold)
        above = set(range(1, var.domain_size + 1)) - below
        walk(node.true_child, constraints + [(node.feature, below)])
        walk(node.false_child, constraints + [(node.feature, above)])

    walk(root, [])
    return mvl.disj(paths)


def evaluate_tree(root: TreeNode, raw: dict[int, float | str], space: FeatureSpace) -> int:
    """Class reached by direct traversal on a raw point."""
    node = root
    while isinstance(node, Internal):
        spec = space.spec(node.feature)
        value = raw[node.feature]
        if spec.kind == CATEGORICAL:
            test = spec.categories.index(value) < node.threshold
        else:
            test = value < node.threshold
        node = node.true_child if test else node.false_child
    return node.class_index


def evaluate_forest(forest: Forest, raw: dict[int, float | str], space: FeatureSpace) -> int:
    """Majority vote over trees; ties go to the lowest class index."""
    votes = [0] * forest.n_classes
    for tree in forest.trees:
        votes[evaluate_tree(tree, raw, space)] += 1
    return max(range(forest.n_classes), key=lambda c: (votes[c], -c))


def representatives(space: FeatureSpace) -> dict[int, list[float | str]]:
    """One raw witness per value of each feature, in value order.

    Bounded intervals use their midpoint; unbounded ends use the nearest
    threshold shifted by one.
    """
    out: dict[int, list[float | str]] = {}
    for s in space.specs:
        if s.kind == CATEGORICAL:
            out[s.id] = list(s.categories)
            continue
        ts = s.thresholds
        if not ts:
            out[s.id] = [0.0]
            continue
        reps: list[float | str] = [ts[0] - 1.0]
        for lo, hi in zip(ts, ts[1:]):
            reps.append((lo + hi) / 2.0)
        reps.append(ts[-1] + 1.0)
        out[s.id] = reps
    return out


def raw_point(space: FeatureSpace, inst: dict[int, int]) -> dict[int, float | str]:
    """A representative raw point for a lifted instance."""
    reps = representatives(space)
    return {var_id: reps[var_id][value - 1] for var_id, value in inst.items()}
