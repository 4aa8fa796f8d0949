"""Index settings: the knobs that determine weights, contexts and lattices.

A settings snapshot travels inside every index bundle so a rebuild from
the same document and snapshot reproduces the bundle byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from . import logic

TERM_MODES = ("atomic", "tokens")


@dataclass(frozen=True)
class IndexSettings:
    log_base: float = 10.0
    s_norm: str = "max"
    clamp: bool = True
    implication: str = logic.GODEL
    term_mode: str = "atomic"       # "atomic": whole leaf value; "tokens": word level
    stopwords: tuple[str, ...] = ()
    widen_neighborhood: bool = False  # also admit sub-concept extents when ranking

    def __post_init__(self):
        if self.s_norm not in logic.SNORMS:
            raise ValueError(f"unknown s-norm {self.s_norm!r}")
        if self.implication not in logic.IMPLICATIONS:
            raise ValueError(f"unknown implication {self.implication!r}")
        if self.term_mode not in TERM_MODES:
            raise ValueError(f"term_mode must be one of {TERM_MODES}")
        if self.log_base <= 1.0:
            raise ValueError("log_base must exceed 1")

    def to_mapping(self) -> dict:
        doc = asdict(self)
        doc["stopwords"] = list(self.stopwords)
        return doc

    @classmethod
    def from_mapping(cls, doc: dict) -> "IndexSettings":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown settings keys: {sorted(unknown)}")
        doc = dict(doc)
        if "stopwords" in doc and doc["stopwords"] is not None:
            doc["stopwords"] = tuple(doc["stopwords"])
        return cls(**doc)


def load_settings(path: str | Path) -> IndexSettings:
    """Read settings from a JSON or TOML file. A `stopwords` key may name a
    file (one term per line) instead of listing terms inline."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            import tomli as tomllib
        doc = tomllib.loads(text)
    else:
        doc = json.loads(text)
    sw = doc.get("stopwords")
    if isinstance(sw, str):
        doc["stopwords"] = load_stopwords(Path(path.parent, sw))
    return IndexSettings.from_mapping(doc)


def load_stopwords(path: str | Path) -> tuple[str, ...]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return tuple(w.strip().lower() for w in lines if w.strip())
