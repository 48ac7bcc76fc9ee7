#!/usr/bin/env python3
"""Export fitted scikit-learn tree classifiers to the explainer's JSON schema.

Supports DecisionTreeClassifier and RandomForestClassifier (and
ExtraTreesClassifier, which shares the estimator layout).  A scikit-learn
split reads "feature <= t" while the schema's tests read "feature < t", so
every threshold is shifted to nextafter(t, +inf), the smallest float above
t; both tests then agree on every representable input.  Each leaf exports
the class with the largest count, ties to the lowest index, which is the
same rule predict applies.

Usage:
    export_model.py MODEL -o model.json --features name1,name2,...

MODEL is either a pickle file or a "module:attribute" reference; the
attribute is called if it is callable.  Unpickling executes arbitrary
code, so only export files you trust.
"""

from __future__ import annotations

import argparse
import importlib
import json
import math
import operator
import pickle
import sys
from pathlib import Path

import numpy as np
from sklearn.ensemble import ExtraTreesClassifier, RandomForestClassifier
from sklearn.exceptions import NotFittedError
from sklearn.tree import DecisionTreeClassifier
from sklearn.utils.validation import check_is_fitted

SUPPORTED = (DecisionTreeClassifier, RandomForestClassifier, ExtraTreesClassifier)


class ExportError(Exception):
    """The model cannot be translated to the JSON schema."""


def _tree_node(tree, node: int) -> dict:
    """One scikit-learn tree node as a schema node, recursively."""
    if tree.children_left[node] < 0:
        return {"leaf": int(np.argmax(tree.value[node][0]))}
    threshold = float(tree.threshold[node])
    if not math.isfinite(threshold):
        raise ExportError(f"non-finite threshold at node {node}")
    # "x <= t" sends samples left, so the left child is the "true" branch
    # of the shifted strict test.
    return {
        "feature": int(tree.feature[node]),
        "threshold": math.nextafter(threshold, math.inf),
        "true": _tree_node(tree, int(tree.children_left[node])),
        "false": _tree_node(tree, int(tree.children_right[node])),
    }


def export(model, feature_names: list[str]) -> str:
    """The model as JSON text conforming to the tree-model schema."""
    kind = type(model).__name__
    if not isinstance(model, SUPPORTED):
        if "Regress" in kind:
            raise ExportError(f"{kind}: regression trees are not supported")
        if "GradientBoosting" in kind:
            raise ExportError(f"{kind}: gradient-boosted trees are not supported")
        raise ExportError(f"{kind} is not a supported tree classifier")
    try:
        check_is_fitted(model)
    except NotFittedError as exc:
        raise ExportError(f"{kind} is not fitted") from exc
    if model.n_outputs_ != 1:
        raise ExportError("multi-output models are not supported")
    names = list(feature_names)
    if len(names) != model.n_features_in_:
        raise ExportError(
            f"model has {model.n_features_in_} features, got {len(names)} names"
        )
    if len(set(names)) != len(names):
        raise ExportError("feature names must be unique")
    if not all(names):
        raise ExportError("feature names must be non-empty")
    estimators = [model] if isinstance(model, DecisionTreeClassifier) else model.estimators_
    doc = {
        "n_classes": max(2, len(model.classes_)),
        "features": [
            {"id": i, "name": name, "kind": "continuous"}
            for i, name in enumerate(names)
        ],
        "trees": [_tree_node(est.tree_, 0) for est in estimators],
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def load_model(spec: str):
    """A model from a pickle path or a module:attribute reference."""
    path = Path(spec)
    if path.is_file():
        try:
            with path.open("rb") as fh:
                return pickle.load(fh)
        except (pickle.UnpicklingError, EOFError, AttributeError, ImportError) as exc:
            raise ExportError(f"{spec}: not a loadable pickle ({exc})") from exc
    if ":" in spec:
        module_name, _, attr = spec.partition(":")
        try:
            module = importlib.import_module(module_name)
        except (ImportError, ValueError) as exc:
            raise ExportError(f"cannot import {module_name!r}: {exc}") from exc
        try:
            obj = operator.attrgetter(attr)(module)
        except AttributeError as exc:
            raise ExportError(f"{module_name!r} has no attribute {attr!r}") from exc
        return obj() if callable(obj) else obj
    raise ExportError(f"{spec}: no such file and not a module:attribute reference")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="export_model.py",
        description="Export a fitted scikit-learn tree classifier to the JSON tree-model schema.",
    )
    parser.add_argument("model", help="pickle file or module:attribute reference to a fitted model")
    parser.add_argument("-o", "--output", required=True, help="path of the JSON document to write")
    parser.add_argument(
        "--features", required=True,
        help="comma-separated feature names, one per model input column",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    names = [name.strip() for name in args.features.split(",")]
    try:
        document = export(load_model(args.model), names)
        Path(args.output).write_text(document + "\n", encoding="utf-8")
    except (ExportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
