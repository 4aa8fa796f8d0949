"""Membership degrees for document content.

A text leaf gets a weight per term it contains:

    weight = tf * log_base(n_t / nf)        clamped into [0, 1]

where tf counts the term's occurrences in that leaf, n_t counts the text
leaves of the document and nf counts the leaves containing the term.
Base 10 by default.  An element's weight for a term merges its children's
weights with an s-norm (max by default), so weights only grow toward the
root.

Terms come in two granularities: "atomic" treats the whole normalized
leaf value as one term (this is what context columns are built from),
"tokens" splits into lowercase words.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import Callable

from . import logic
from .config import IndexSettings
from .errors import MissingStatisticsError
from .tree import DocumentTree, NodeKind, normalize_text, require_element

_STRIP = string.punctuation + string.whitespace


def tokenize(text: str, stopwords: tuple[str, ...] = ()) -> list[str]:
    """Lowercase, punctuation-stripped, whitespace-split tokens; empties removed."""
    out = []
    drop = set(stopwords)
    for raw in text.lower().split():
        tok = raw.strip(_STRIP)
        if tok and tok not in drop:
            out.append(tok)
    return out


def atomic_terms(text: str, stopwords: tuple[str, ...] = ()) -> list[str]:
    """The whole normalized leaf value as a single term."""
    value = normalize_text(text)
    if not value or value in set(stopwords):
        return []
    return [value]


@dataclass
class DocStats:
    """Term statistics over the text leaves of one document.

    n_t is the leaf population size; nf maps each term to the number of
    leaves containing it; tf maps (term, node id) to the occurrence count
    inside that leaf.
    """

    n_t: int
    nf: dict[str, int] = field(default_factory=dict)
    tf: dict[tuple[str, int], int] = field(default_factory=dict)

    @classmethod
    def from_tree(
        cls,
        tree: DocumentTree,
        mode: str = "atomic",
        stopwords: tuple[str, ...] = (),
        transform: Callable[[str], str] | None = None,
    ) -> "DocStats":
        """Collect statistics over all text leaves.

        `transform` is an optional per-term hook (e.g. a stemmer) applied
        after extraction.
        """
        extract = atomic_terms if mode == "atomic" else tokenize
        stats = cls(n_t=0)
        for node in tree.text_nodes():
            stats.n_t += 1
            terms = extract(node.label, stopwords)
            if transform is not None:
                terms = [transform(t) for t in terms]
            seen = set()
            for term in terms:
                stats.tf[(term, node.id)] = stats.tf.get((term, node.id), 0) + 1
                if term not in seen:
                    seen.add(term)
                    stats.nf[term] = stats.nf.get(term, 0) + 1
        return stats

    def terms(self) -> list[str]:
        return sorted(self.nf)


def term_weight(
    term: str,
    node_id: int,
    stats: DocStats,
    log_base: float = 10.0,
    clamp: bool = True,
) -> float:
    """Weight of a term inside one text leaf; raises if the pair was never seen."""
    tf = stats.tf.get((term, node_id))
    if tf is None:
        raise MissingStatisticsError(f"no statistics for term {term!r} in node {node_id}")
    nf = stats.nf[term]
    w = tf * math.log(stats.n_t / nf, log_base)
    if clamp:
        w = min(1.0, max(0.0, w))
    return w


def node_weight(
    term: str,
    element_id: int,
    tree: DocumentTree,
    stats: DocStats,
    log_base: float = 10.0,
    clamp: bool = True,
    s_norm: str = "max",
) -> float:
    """Merged weight of a term over an element's subtree (0 when absent)."""
    require_element(tree, element_id, "node_weight")
    merge = logic.snorm(s_norm)

    def weight_of(node_id: int) -> float:
        node = tree.node(node_id)
        if node.kind is NodeKind.TEXT:
            if (term, node_id) in stats.tf:
                return term_weight(term, node_id, stats, log_base, clamp)
            return 0.0
        parts = [weight_of(c) for c in node.children]
        return merge([p for p in parts if p > 0.0])

    return weight_of(element_id)


def subtree_terms(tree: DocumentTree, element_id: int, stats: DocStats) -> list[str]:
    """Distinct recorded terms occurring under an element, in document order."""
    by_node: dict[int, list[str]] = {}
    for (term, nid) in stats.tf:
        by_node.setdefault(nid, []).append(term)
    out: list[str] = []
    seen: set[str] = set()
    for node in tree.iter_preorder(element_id):
        if node.kind is NodeKind.TEXT:
            for term in sorted(by_node.get(node.id, ())):
                if term not in seen:
                    seen.add(term)
                    out.append(term)
    return out


def stats_for(tree: DocumentTree, settings: IndexSettings) -> DocStats:
    return DocStats.from_tree(tree, mode=settings.term_mode, stopwords=settings.stopwords)
