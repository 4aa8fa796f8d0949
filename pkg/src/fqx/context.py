"""Fuzzy formal contexts and their derivation operators.

A context holds an objects x attributes matrix of membership degrees in
[0, 1] plus a finite truth scale (the distinct degrees occurring in the
matrix, always including 0 and 1).  The two derivation ("sufficiency")
operators map fuzzy object sets to fuzzy attribute sets and back:

    up(X)(y)   = inf over x of  X(x) -> R(x, y)
    down(Y)(x) = inf over y of  Y(y) -> R(x, y)

with a residuated implication.  On {0,1}-valued contexts and sets these
reduce to the classical derivations "attributes shared by all objects of
X" / "objects having all attributes of Y".  Their composition is a
closure operator; its fixpoints are the formal concepts.
"""

from __future__ import annotations

import csv
import io
import json
import numpy as np

from . import logic
from .config import IndexSettings
from .tree import DocumentTree, LevelSets, NodeKind, level_labels, require_element
from .validation import (
    check_degree_matrix,
    check_degree_vector,
    check_same_universe,
    check_unique_labels,
)
from .weighting import DocStats, node_weight, subtree_terms

KEY_DECIMALS = 12  # rounding used when hashing degree vectors


class FuzzySet:
    """Degree-valued set over a fixed, ordered universe of labels."""

    __slots__ = ("universe", "values")

    def __init__(self, universe, values):
        self.universe = tuple(universe)
        self.values = check_degree_vector(values, size=len(self.universe))
        self.values.flags.writeable = False

    @classmethod
    def from_dict(cls, universe, degrees: dict) -> "FuzzySet":
        universe = tuple(universe)
        index = {label: i for i, label in enumerate(universe)}
        values = np.zeros(len(universe))
        for label, degree in degrees.items():
            if label not in index:
                raise KeyError(f"{label!r} is not in the universe")
            values[index[label]] = degree
        return cls(universe, values)

    @classmethod
    def zeros(cls, universe) -> "FuzzySet":
        return cls(universe, np.zeros(len(tuple(universe))))

    @classmethod
    def ones(cls, universe) -> "FuzzySet":
        return cls(universe, np.ones(len(tuple(universe))))

    def degree(self, label) -> float:
        return float(self.values[self.universe.index(label)])

    def to_dict(self, all_elements=False) -> dict:
        return {
            label: float(v)
            for label, v in zip(self.universe, self.values)
            if all_elements or v > 0.0
        }

    def support(self) -> tuple:
        return tuple(l for l, v in zip(self.universe, self.values) if v > 0.0)

    def leq(self, other: "FuzzySet") -> bool:
        """Pointwise order: self(e) <= other(e) everywhere."""
        return bool(np.all(self.values <= other.values))

    def key(self) -> tuple:
        return tuple(np.round(self.values, KEY_DECIMALS))

    def __eq__(self, other):
        return (
            isinstance(other, FuzzySet)
            and self.universe == other.universe
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.universe, self.key()))

    def __repr__(self):
        return f"FuzzySet({self.to_dict()})"


class LContext:
    """Fuzzy formal context: ordered objects, ordered attributes, degree matrix."""

    def __init__(self, objects, attributes, degrees, scale=None, origin=None):
        self.objects = check_unique_labels(objects, "object labels")
        self.attributes = check_unique_labels(attributes, "attribute labels")
        self.degrees = check_degree_matrix(degrees)
        if self.degrees.shape != (len(self.objects), len(self.attributes)):
            raise ValueError(
                f"degree matrix shape {self.degrees.shape} does not match "
                f"{len(self.objects)} objects x {len(self.attributes)} attributes"
            )
        self.degrees.flags.writeable = False
        self.scale = self._normalize_scale(scale)
        self.origin = origin

    def _normalize_scale(self, scale) -> tuple[float, ...]:
        values = set([0.0, 1.0])
        if scale is None:
            values.update(float(v) for v in np.unique(self.degrees))
        else:
            values.update(float(v) for v in scale)
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"scale degree {v} outside [0, 1]")
        return tuple(sorted(values))

    @property
    def shape(self) -> tuple[int, int]:
        return self.degrees.shape

    def row(self, obj) -> FuzzySet:
        return FuzzySet(self.attributes, self.degrees[self.objects.index(obj)])

    def column(self, attr) -> FuzzySet:
        return FuzzySet(self.objects, self.degrees[:, self.attributes.index(attr)])

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "objects": list(self.objects),
            "attributes": list(self.attributes),
            "degrees": [[float(v) for v in row] for row in self.degrees],
            "scale": [float(v) for v in self.scale],
        }
        if self.origin is not None:
            doc["origin"] = self.origin
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "LContext":
        return cls(
            doc["objects"],
            doc["attributes"],
            doc["degrees"],
            scale=doc.get("scale"),
            origin=doc.get("origin"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LContext":
        return cls.from_json_dict(json.loads(text))

    def to_csv(self, decimals: int = 4) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["R", *self.attributes])
        for label, row in zip(self.objects, self.degrees):
            writer.writerow([label, *[f"{v:.{decimals}f}" for v in row]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, origin=None) -> "LContext":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if len(rows) < 2:
            raise ValueError("context CSV needs a header row and at least one object row")
        attributes = [c.strip() for c in rows[0][1:]]
        objects, degrees = [], []
        for row in rows[1:]:
            objects.append(row[0].strip())
            degrees.append([float(c) for c in row[1:]])
        return cls(objects, attributes, degrees, origin=origin)


# -- derivation operators -------------------------------------------------


def sufficiency_up(X: FuzzySet, ctx: LContext, imp: str = logic.GODEL) -> FuzzySet:
    """Fuzzy set of attributes sufficiently shared by the objects of X."""
    check_same_universe(X.universe, ctx.objects, "object set")
    arrow = logic.implication(imp)
    if not ctx.objects:
        return FuzzySet.ones(ctx.attributes)
    values = arrow(X.values[:, None], ctx.degrees).min(axis=0)
    return FuzzySet(ctx.attributes, values)


def sufficiency_down(Y: FuzzySet, ctx: LContext, imp: str = logic.GODEL) -> FuzzySet:
    """Fuzzy set of objects sufficiently carrying the attributes of Y."""
    check_same_universe(Y.universe, ctx.attributes, "attribute set")
    arrow = logic.implication(imp)
    if not ctx.attributes:
        return FuzzySet.ones(ctx.objects)
    values = arrow(Y.values[None, :], ctx.degrees).min(axis=1)
    return FuzzySet(ctx.objects, values)


def attribute_closure(Y: FuzzySet, ctx: LContext, imp: str = logic.GODEL) -> FuzzySet:
    """Closure on attribute sets: up(down(Y)). Extensive, monotone, idempotent."""
    return sufficiency_up(sufficiency_down(Y, ctx, imp), ctx, imp)


def extent_closure(X: FuzzySet, ctx: LContext, imp: str = logic.GODEL) -> FuzzySet:
    """Closure on object sets: down(up(X))."""
    return sufficiency_down(sufficiency_up(X, ctx, imp), ctx, imp)


# -- building contexts from a document ------------------------------------


def context_bearing_nodes(tree: DocumentTree, levels: LevelSets) -> list[int]:
    """Nodes that get their own context, in document order.

    Every element of height >= 2 gets one; a root of height 1 (document
    whose root holds only text) gets one as well so trivial documents
    still index.
    """
    out = []
    for node in tree.nodes:  # document order
        if node.kind is not NodeKind.ELEMENT:
            continue
        h = levels.level_of(node.id)
        if h >= 2 or (node.id == tree.root and h == 1):
            out.append(node.id)
    return out


def build_level_context(
    parent_id: int,
    tree: DocumentTree,
    levels: LevelSets,
    stats: DocStats,
    settings: IndexSettings | None = None,
) -> LContext:
    """Context of one parent node.

    For a parent whose subtree is two levels deep the columns are the
    document's distinct leaf values and a cell holds the merged weight of
    that value inside the row-labeled child.  For higher parents the
    columns are the labels of the level just below the parent and a cell
    holds the overall weight of the row-labeled part inside that child
    subtree.  Rows are drawn from the document-wide label set of the
    relevant level, so siblings lacking a part keep an all-zero row and
    every context over the same level is row-aligned.
    """
    settings = settings or IndexSettings()
    parent = require_element(tree, parent_id, "build_level_context")
    h = levels.level_of(parent_id)

    if h <= 2:
        row_level, leaf_columns = 1, True
    else:
        row_level, leaf_columns = h - 2, False

    rows = level_labels(tree, levels, row_level)
    if leaf_columns:
        cols = level_labels(tree, levels, 0)
    else:
        cols = level_labels(tree, levels, h - 1)

    # Row-labeled carriers inside the parent: its children at the row
    # level, or the parent itself when it directly wraps text.
    def carriers_under(node_id: int) -> dict[str, list[int]]:
        found: dict[str, list[int]] = {}
        for n in tree.iter_preorder(node_id):
            if n.kind is NodeKind.ELEMENT and n.id in levels.levels[row_level]:
                found.setdefault(tree.display_name(n.id), []).append(n.id)
        return found

    merge = logic.snorm(settings.s_norm)
    matrix = np.zeros((len(rows), len(cols)))

    if leaf_columns:
        carriers = carriers_under(parent_id)
        for i, r in enumerate(rows):
            for node_id in carriers.get(r, ()):
                for j, value in enumerate(cols):
                    w = node_weight(
                        value, node_id, tree, stats,
                        settings.log_base, settings.clamp, settings.s_norm,
                    )
                    matrix[i, j] = merge([x for x in (matrix[i, j], w) if x > 0.0])
    else:
        child_level = levels.levels[h - 1]
        for child in tree.children(parent_id):
            if child.id not in child_level:
                continue  # ragged branch below the expected level; not indexed here
            j = cols.index(tree.display_name(child.id))
            for r_label, ids in carriers_under(child.id).items():
                if r_label not in rows:
                    continue
                i = rows.index(r_label)
                weights = []
                for node_id in ids:
                    for term in subtree_terms(tree, node_id, stats):
                        w = node_weight(
                            term, node_id, tree, stats,
                            settings.log_base, settings.clamp, settings.s_norm,
                        )
                        if w > 0.0:
                            weights.append(w)
                if weights:
                    cell = merge(weights)
                    matrix[i, j] = merge([x for x in (matrix[i, j], cell) if x > 0.0])

    return LContext(rows, cols, matrix, origin=tree.path(parent_id))


def document_contexts(
    tree: DocumentTree,
    levels: LevelSets,
    stats: DocStats,
    settings: IndexSettings | None = None,
) -> list[LContext]:
    """Per-node contexts for the whole document, in document order."""
    return [
        build_level_context(nid, tree, levels, stats, settings)
        for nid in context_bearing_nodes(tree, levels)
    ]
