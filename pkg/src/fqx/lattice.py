"""Concept lattices over fuzzy contexts.

Concepts are the fixpoints of the derivation operators: pairs
(extent, intent) with up(extent) == intent and down(intent) == extent.
Enumeration walks closed intents from the most general one upward: every
known closed intent is bumped on one attribute to the next scale degree
and re-closed.  Because closure(closure(A) v B) == closure(A v B), this
reaches the closure of every scale-valued attribute set, which is the
complete concept set for the Goedel implication (whose closures never
leave the scale) and exactly matches brute-force candidate closure for
the others.

Concepts are ordered by pointwise extent inclusion; the stored cover
relation is the transitive reduction of that order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import logic
from .context import FuzzySet, LContext, attribute_closure, sufficiency_down, sufficiency_up
from .errors import CrossLatticeError, IncompatibleContextsError


class Comparison(Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class FuzzyConcept:
    id: int
    extent: FuzzySet
    intent: FuzzySet


class ConceptLattice:
    """All concepts of one context plus the cover relation of their order."""

    def __init__(self, ctx: LContext, concepts, imp: str, origin=None, seq=None):
        self.ctx = ctx
        self.concepts = tuple(concepts)
        self.imp = imp
        self.origin = origin if origin is not None else ctx.origin
        self.seq = seq
        self._by_intent_key = {c.intent.key(): c.id for c in self.concepts}
        self._leq = self._order_matrix()
        self.order = self._covers()
        self.top_id = self._extreme(greatest=True)
        self.bottom_id = self._extreme(greatest=False)

    # -- order structure ---------------------------------------------------

    def _order_matrix(self) -> np.ndarray:
        n = len(self.concepts)
        extents = np.array([c.extent.values for c in self.concepts]).reshape(n, -1)
        # leq[i, j] <=> extent_i <= extent_j pointwise
        return np.all(extents[:, None, :] <= extents[None, :, :], axis=2)

    def _covers(self) -> frozenset[tuple[int, int]]:
        strict = self._leq & ~np.eye(len(self.concepts), dtype=bool)
        # (i, j) is a cover iff i < j with no k strictly between
        between = (strict.astype(np.uint8) @ strict.astype(np.uint8)) > 0
        covers = strict & ~between
        return frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(covers)))

    def _extreme(self, greatest: bool) -> int:
        n = len(self.concepts)
        for i in range(n):
            row = self._leq[:, i] if greatest else self._leq[i, :]
            if row.all():
                return i
        raise CrossLatticeError("lattice has no greatest/least element")  # unreachable

    @property
    def top(self) -> FuzzyConcept:
        return self.concepts[self.top_id]

    @property
    def bottom(self) -> FuzzyConcept:
        return self.concepts[self.bottom_id]

    def concept_by_intent(self, intent: FuzzySet) -> FuzzyConcept | None:
        cid = self._by_intent_key.get(intent.key())
        return self.concepts[cid] if cid is not None else None

    def _resolve(self, c) -> FuzzyConcept:
        concept = self.concepts[c.id if isinstance(c, FuzzyConcept) else int(c)]
        if isinstance(c, FuzzyConcept) and concept is not c:
            if concept.extent != c.extent or concept.intent != c.intent:
                raise CrossLatticeError("concept does not belong to this lattice")
        return concept

    def leq(self, a, b) -> bool:
        return bool(self._leq[self._resolve(a).id, self._resolve(b).id])

    def compare(self, a, b) -> Comparison:
        a, b = self._resolve(a), self._resolve(b)
        le, ge = self._leq[a.id, b.id], self._leq[b.id, a.id]
        if le and ge:
            return Comparison.EQUAL
        if le:
            return Comparison.LESS
        if ge:
            return Comparison.GREATER
        return Comparison.INCOMPARABLE

    def upset(self, c) -> list[int]:
        """Ids of all concepts >= c (its generalizations), c included."""
        return [int(i) for i in np.nonzero(self._leq[self._resolve(c).id, :])[0]]

    def covers_above(self, c) -> list[int]:
        cid = self._resolve(c).id
        return sorted(j for i, j in self.order if i == cid)

    # -- meet / join --------------------------------------------------------

    def meet(self, a, b) -> FuzzyConcept:
        """Greatest concept below both: intent = closure of the intent union."""
        a, b = self._resolve(a), self._resolve(b)
        target = attribute_closure(
            FuzzySet(self.ctx.attributes, np.maximum(a.intent.values, b.intent.values)),
            self.ctx,
            self.imp,
        )
        found = self.concept_by_intent(target)
        if found is None:  # only reachable for non-Goedel scales; fall back to order
            found = self._bound(a, b, lower=True)
        return found

    def join(self, a, b) -> FuzzyConcept:
        """Least concept above both: intent = pointwise meet of the intents."""
        a, b = self._resolve(a), self._resolve(b)
        target = FuzzySet(self.ctx.attributes, np.minimum(a.intent.values, b.intent.values))
        found = self.concept_by_intent(target)
        if found is None:
            found = self._bound(a, b, lower=False)
        return found

    def _bound(self, a, b, lower: bool) -> FuzzyConcept:
        if lower:
            ok = self._leq[:, a.id] & self._leq[:, b.id]
            ids = np.nonzero(ok)[0]
            best = ids[np.argmax([self._leq[ids, i].sum() for i in ids])]
        else:
            ok = self._leq[a.id, :] & self._leq[b.id, :]
            ids = np.nonzero(ok)[0]
            best = ids[np.argmax([self._leq[i, ids].sum() for i in ids])]
        return self.concepts[int(best)]

    # -- serialization -------------------------------------------------------

    def to_json_dict(self, decimals: int | None = None) -> dict:
        def fmt(fs: FuzzySet) -> dict:
            d = fs.to_dict()
            if decimals is not None:
                d = {k: round(v, decimals) for k, v in d.items()}
            return d

        doc = {
            "concepts": [
                {"id": c.id, "extent": fmt(c.extent), "intent": fmt(c.intent)}
                for c in self.concepts
            ],
            "covers": sorted([list(p) for p in self.order]),
            "top": self.top_id,
            "bottom": self.bottom_id,
            "implication": self.imp,
            "context": self.ctx.to_json_dict(),
        }
        if self.origin is not None:
            doc["origin"] = self.origin
        if self.seq is not None:
            doc["seq"] = self.seq
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ConceptLattice":
        ctx = LContext.from_json_dict(doc["context"])
        concepts = [
            FuzzyConcept(
                int(c["id"]),
                FuzzySet.from_dict(ctx.objects, c["extent"]),
                FuzzySet.from_dict(ctx.attributes, c["intent"]),
            )
            for c in doc["concepts"]
        ]
        return cls(ctx, concepts, doc.get("implication", logic.GODEL),
                   origin=doc.get("origin"), seq=doc.get("seq"))

    def to_json(self, decimals: int | None = None) -> str:
        return json.dumps(self.to_json_dict(decimals), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConceptLattice":
        return cls.from_json_dict(json.loads(text))


def enumerate_concepts(ctx: LContext, imp: str = logic.GODEL,
                       origin=None, seq=None) -> ConceptLattice:
    """Enumerate every concept whose intent is the closure of a scale-valued
    attribute set, ids in deterministic generation order."""
    scale = [s for s in ctx.scale]
    start = attribute_closure(FuzzySet.zeros(ctx.attributes), ctx, imp)
    concepts: list[FuzzyConcept] = []
    seen: dict[tuple, int] = {}
    queue: deque[FuzzySet] = deque()

    def admit(intent: FuzzySet) -> None:
        key = intent.key()
        if key in seen:
            return
        extent = sufficiency_down(intent, ctx, imp)
        seen[key] = len(concepts)
        concepts.append(FuzzyConcept(len(concepts), extent, intent))
        queue.append(intent)

    admit(start)
    n_attrs = len(ctx.attributes)
    while queue:
        intent = queue.popleft()
        for j in range(n_attrs):
            current = intent.values[j]
            for s in scale:
                if s <= current:
                    continue
                bumped = intent.values.copy()
                bumped[j] = s
                admit(attribute_closure(FuzzySet(ctx.attributes, bumped), ctx, imp))

    return ConceptLattice(ctx, concepts, imp, origin=origin, seq=seq)


# -- nesting ----------------------------------------------------------------


@dataclass(frozen=True)
class NestedMember:
    origin: str
    start: int  # first column of this member in the combined context
    stop: int   # one past the last column


class NestedLattice:
    """One lattice over the column-wise concatenation of row-aligned contexts."""

    def __init__(self, combined_context: LContext, lattice: ConceptLattice,
                 members: tuple[NestedMember, ...]):
        self.combined_context = combined_context
        self.lattice = lattice
        self.members = tuple(members)

    def member_for_attribute(self, index: int) -> NestedMember:
        for m in self.members:
            if m.start <= index < m.stop:
                return m
        raise IndexError(index)

    def to_json_dict(self, decimals: int | None = None) -> dict:
        return {
            "members": [
                {"origin": m.origin, "start": m.start, "stop": m.stop}
                for m in self.members
            ],
            "context": self.combined_context.to_json_dict(),
            "lattice": self.lattice.to_json_dict(decimals),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "NestedLattice":
        ctx = LContext.from_json_dict(doc["context"])
        lattice = ConceptLattice.from_json_dict(doc["lattice"])
        members = tuple(
            NestedMember(m["origin"], int(m["start"]), int(m["stop"]))
            for m in doc["members"]
        )
        return cls(ctx, lattice, members)


def combine_contexts(contexts: list[LContext], origins: list[str] | None = None
                     ) -> tuple[LContext, tuple[NestedMember, ...]]:
    """Concatenate row-aligned contexts column-wise.

    All contexts must share the same ordered object list.  Attribute
    labels colliding across members are prefixed with their member's
    origin to stay unique.
    """
    if not contexts:
        raise IncompatibleContextsError("need at least one context to combine")
    base_objects = contexts[0].objects
    for ctx in contexts[1:]:
        if ctx.objects != base_objects:
            raise IncompatibleContextsError(
                "contexts share no common object list and cannot be nested"
            )
    if origins is None:
        origins = [ctx.origin or f"member{i}" for i, ctx in enumerate(contexts)]

    counts: dict[str, int] = {}
    for ctx in contexts:
        for a in ctx.attributes:
            counts[a] = counts.get(a, 0) + 1

    attributes: list[str] = []
    members: list[NestedMember] = []
    start = 0
    for ctx, origin in zip(contexts, origins):
        for a in ctx.attributes:
            attributes.append(f"{origin}/{a}" if counts[a] > 1 else a)
        members.append(NestedMember(origin, start, start + len(ctx.attributes)))
        start += len(ctx.attributes)

    degrees = np.hstack([ctx.degrees for ctx in contexts])
    scale = sorted(set().union(*[ctx.scale for ctx in contexts]))
    combined = LContext(base_objects, attributes, degrees, scale=scale, origin="nested")
    return combined, tuple(members)


def nest(lattices: list[ConceptLattice], contexts: list[LContext] | None = None,
         imp: str | None = None) -> NestedLattice:
    """Fold per-node lattices into one generalized lattice.

    The combined context is the column-wise concatenation of the member
    contexts (shared object rows); its concepts are re-enumerated.  Member
    column ranges are kept so exports can attribute columns to origins.
    """
    if not lattices:
        raise IncompatibleContextsError("need at least one lattice to nest")
    if contexts is None:
        contexts = [lat.ctx for lat in lattices]
    if imp is None:
        imp = lattices[0].imp
    origins = [lat.origin or f"member{i}" for i, lat in enumerate(lattices)]
    combined, members = combine_contexts(contexts, origins)
    lattice = enumerate_concepts(combined, imp, origin="nested")
    return NestedLattice(combined, lattice, members)


# -- DOT export --------------------------------------------------------------

_PALETTE = (
    "#ffffff", "#fde0dd", "#e0ecf4", "#e5f5e0", "#fee6ce",
    "#efedf5", "#fff7bc", "#d9f0d3", "#f2f0f7",
)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def lattice_to_dot(lattice: ConceptLattice, members: tuple[NestedMember, ...] = (),
                   name: str = "concept_lattice") -> str:
    """Graphviz rendering: one node per concept labeled with its intent
    support, edges along the cover relation, member provenance as fill
    colors when column ranges are supplied."""
    attr_index = {a: i for i, a in enumerate(lattice.ctx.attributes)}
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=BT;",
             '  node [shape=box, style="rounded,filled", fillcolor="#ffffff"];']
    for c in lattice.concepts:
        supp = [f"{a}:{v:.4f}" for a, v in zip(c.intent.universe, c.intent.values) if v > 0]
        label = f"#{c.id}" + ("\\n" + "\\n".join(_dot_escape(s) for s in supp) if supp else "")
        color = "#ffffff"
        if members:
            for idx, m in enumerate(members):
                if any(m.start <= attr_index[a] < m.stop
                       for a, v in zip(c.intent.universe, c.intent.values) if v > 0):
                    color = _PALETTE[(idx + 1) % len(_PALETTE)]
                    break
        lines.append(f'  c{c.id} [label="{label}", fillcolor="{color}"];')
    for sub, sup in sorted(lattice.order):
        lines.append(f"  c{sub} -> c{sup};")
    lines.append("}")
    return "\n".join(lines) + "\n"
