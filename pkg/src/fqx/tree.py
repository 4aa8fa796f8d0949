"""XML ingestion: typed node tree and per-level node sets.

The document is loaded into a tree of two node kinds: text leaves and
element nodes.  XML attributes are normalized into child elements (tag =
attribute name, single text child = attribute value) so that attribute
data and element data are indexed uniformly.  Comments, processing
instructions and whitespace-only text are dropped.  Elements left with no
children after normalization are dropped bottom-up; the tree therefore
satisfies: text nodes are exactly the leaves, element nodes always have
at least one child.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, Sequence

from .errors import EmptyDocumentError, WrongNodeKindError, XmlParseError


class NodeKind(Enum):
    TEXT = "text"
    ELEMENT = "element"


@dataclass(frozen=True)
class XmlNode:
    id: int
    kind: NodeKind
    label: str              # tag name for elements, raw text for text nodes
    ordinal: int            # index among same-tag (or text-run) siblings
    parent: int | None
    children: tuple[int, ...] = ()

    @property
    def is_text(self) -> bool:
        return self.kind is NodeKind.TEXT


class DocumentTree:
    """Immutable typed tree over one XML document.

    Nodes are stored in document (pre-)order; ``nodes[i].id == i``.
    """

    def __init__(self, nodes: Sequence[XmlNode], root: int):
        self.nodes = tuple(nodes)
        self.root = root
        self._repeated_tags = self._find_repeated_tags()

    def _find_repeated_tags(self) -> frozenset[str]:
        # A tag needs ordinal suffixes whenever some parent has two or more
        # children sharing it; the decision is global so that e.g. a lone
        # author still lines up with author[0] rows elsewhere.
        repeated = set()
        for node in self.nodes:
            seen = {}
            for cid in node.children:
                child = self.nodes[cid]
                if child.is_text:
                    continue
                seen[child.label] = seen.get(child.label, 0) + 1
            repeated.update(tag for tag, n in seen.items() if n > 1)
        return frozenset(repeated)

    def node(self, node_id: int) -> XmlNode:
        return self.nodes[node_id]

    def children(self, node_id: int) -> tuple[XmlNode, ...]:
        return tuple(self.nodes[c] for c in self.nodes[node_id].children)

    def display_name(self, node_id: int) -> str:
        """Element name with ordinal suffix where the tag repeats (book[0], author[1])."""
        node = self.nodes[node_id]
        if node.is_text:
            return normalize_text(node.label)
        if node.label in self._repeated_tags:
            return f"{node.label}[{node.ordinal}]"
        return node.label

    def path(self, node_id: int) -> str:
        parts = []
        cur: int | None = node_id
        while cur is not None:
            parts.append(self.display_name(cur))
            cur = self.nodes[cur].parent
        return "/".join(reversed(parts))

    def iter_preorder(self, start: int | None = None) -> Iterator[XmlNode]:
        stack = [self.root if start is None else start]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def text_nodes(self) -> list[XmlNode]:
        return [n for n in self.nodes if n.is_text]

    def descendant_ids(self, node_id: int) -> set[int]:
        return {n.id for n in self.iter_preorder(node_id)}

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class LevelSets:
    """Node ids grouped by height: level 0 = text leaves, last level = {root}."""

    levels: tuple[frozenset[int], ...]

    def level_of(self, node_id: int) -> int:
        for i, ids in enumerate(self.levels):
            if node_id in ids:
                return i
        raise KeyError(node_id)

    def __len__(self) -> int:
        return len(self.levels)


def normalize_text(text: str) -> str:
    """Canonical form of a leaf value: lowercase, whitespace collapsed."""
    return " ".join(text.split()).lower()


def _read_source(source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, Path):
        return source.read_bytes()
    if isinstance(source, str):
        if source.lstrip().startswith("<"):
            return source.encode("utf-8")
        return Path(source).read_bytes()
    if hasattr(source, "read"):
        data = source.read()
        return data.encode("utf-8") if isinstance(data, str) else data
    raise TypeError(f"unsupported XML source: {type(source)!r}")


def parse_document(source) -> DocumentTree:
    """Parse XML from bytes, markup string, path or file object into a DocumentTree.

    Raises XmlParseError (with line/column) on malformed input and
    EmptyDocumentError when no indexable content remains.
    """
    data = _read_source(source)
    if not data.strip():
        raise EmptyDocumentError("document is empty")
    try:
        root_elem = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise XmlParseError(str(exc.msg if hasattr(exc, "msg") else exc), line, column) from exc

    nodes: list[XmlNode] = []

    def add_node(kind, label, ordinal, parent) -> int:
        nid = len(nodes)
        nodes.append(XmlNode(nid, kind, label, ordinal, parent))
        return nid

    def build(elem: ET.Element, parent: int | None, ordinal: int) -> int | None:
        nid = add_node(NodeKind.ELEMENT, elem.tag, ordinal, parent)
        children: list[int] = []
        tag_counts: dict[str, int] = {}
        text_runs = 0

        def add_text(text: str | None):
            nonlocal text_runs
            if text and text.strip():
                children.append(add_node(NodeKind.TEXT, text, text_runs, nid))
                text_runs += 1

        # Attributes become leading child elements, in source order.
        for name, value in elem.attrib.items():
            if not value.strip():
                continue
            k = tag_counts.get(name, 0)
            tag_counts[name] = k + 1
            attr_id = add_node(NodeKind.ELEMENT, name, k, nid)
            text_id = add_node(NodeKind.TEXT, value, 0, attr_id)
            nodes[attr_id] = replace_children(nodes[attr_id], (text_id,))
            children.append(attr_id)

        add_text(elem.text)
        for child in elem:
            if not isinstance(child.tag, str):  # comments / processing instructions
                add_text(child.tail)
                continue
            k = tag_counts.get(child.tag, 0)
            tag_counts[child.tag] = k + 1
            child_id = build(child, nid, k)
            if child_id is not None:
                children.append(child_id)
            add_text(child.tail)

        if not children:
            return None  # empty elements carry no content; drop bottom-up
        nodes[nid] = replace_children(nodes[nid], tuple(children))
        return nid

    root_id = build(root_elem, None, 0)
    if root_id is None:
        raise EmptyDocumentError("document contains no text content")
    kept = compact(nodes, root_id)
    return DocumentTree(kept, 0)


def replace_children(node: XmlNode, children: tuple[int, ...]) -> XmlNode:
    return XmlNode(node.id, node.kind, node.label, node.ordinal, node.parent, children)


def compact(nodes: list[XmlNode], root_id: int) -> list[XmlNode]:
    """Renumber reachable nodes into dense pre-order ids (dropped nodes vanish)."""
    order: list[XmlNode] = []
    mapping: dict[int, int] = {}
    stack = [root_id]
    while stack:
        old = nodes[stack.pop()]
        mapping[old.id] = len(order)
        order.append(old)
        stack.extend(reversed(old.children))
    out = []
    for node in order:
        out.append(
            XmlNode(
                mapping[node.id],
                node.kind,
                node.label,
                node.ordinal,
                mapping[node.parent] if node.parent is not None else None,
                tuple(mapping[c] for c in node.children if c in mapping),
            )
        )
    return out


def extract_levels(tree: DocumentTree) -> LevelSets:
    """Group nodes by height above the leaves.

    Text leaves sit at level 0; an element sits one level above its
    highest child, so the root always occupies the top level alone.
    """
    height: dict[int, int] = {}

    def h(node_id: int) -> int:
        if node_id in height:
            return height[node_id]
        node = tree.node(node_id)
        value = 0 if node.is_text else 1 + max(h(c) for c in node.children)
        height[node_id] = value
        return value

    top = h(tree.root)
    buckets: list[set[int]] = [set() for _ in range(top + 1)]
    for node in tree.nodes:
        buckets[h(node.id)].add(node.id)
    return LevelSets(tuple(frozenset(b) for b in buckets))


def level_labels(tree: DocumentTree, levels: LevelSets, level: int) -> list[str]:
    """Distinct display labels of one level, in document order of first occurrence.

    Level 0 yields normalized leaf values; higher levels yield element names.
    """
    ids = levels.levels[level]
    labels: list[str] = []
    seen = set()
    for node in tree.nodes:  # nodes are stored in document order
        if node.id not in ids:
            continue
        name = tree.display_name(node.id)
        if name not in seen:
            seen.add(name)
            labels.append(name)
    return labels


def require_element(tree: DocumentTree, node_id: int, op: str) -> XmlNode:
    node = tree.node(node_id)
    if node.is_text:
        raise WrongNodeKindError(f"{op} requires an element node, got text node {node_id}")
    return node


def debug_dump(tree: DocumentTree, levels: LevelSets | None = None) -> dict:
    """JSON-ready dump of the typed tree (and level sets) for inspection."""
    doc = {
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind.value,
                "label": n.label,
                "ordinal": n.ordinal,
                "parent": n.parent,
            }
            for n in tree.nodes
        ],
        "root": tree.root,
    }
    if levels is not None:
        doc["levels"] = [sorted(ids) for ids in levels.levels]
    return doc


def dump_debug_json(tree: DocumentTree, levels: LevelSets | None = None) -> str:
    return json.dumps(debug_dump(tree, levels), sort_keys=True, indent=2)
