"""Finite relational structures and their JSON document format.

A structure document is a JSON object::

    {"domain": ["a", "b"],
     "arities": {"R": 2},
     "relations": {"R": [["a", "a"], ["b", "b"]]}}

Relations declared in ``arities`` but absent from ``relations`` are empty.
Structures are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .errors import StructureError, VocabularyError
from .syntax import Vocabulary

# Separator appended by disjoint_union when tagging element copies.
COPY_SEP = "#"


@dataclass(frozen=True)
class Structure:
    """Finite interpretation: ordered domain plus one tuple-set per symbol."""

    domain: tuple[str, ...]
    relations: Mapping[str, frozenset[tuple[str, ...]]]
    vocabulary: Vocabulary

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise StructureError("domain must be nonempty")
        elems = set(self.domain)
        if len(elems) != len(self.domain):
            raise StructureError("domain contains duplicate elements")
        rels: dict[str, frozenset[tuple[str, ...]]] = {}
        for name, tuples in self.relations.items():
            if name not in self.vocabulary:
                raise StructureError(f"relation {name!r} is not declared in the vocabulary")
            arity = self.vocabulary.arity(name)
            frozen = frozenset(tuple(t) for t in tuples)
            for t in frozen:
                if len(t) != arity:
                    raise StructureError(
                        f"tuple {t!r} of relation {name!r} has length {len(t)}, "
                        f"declared arity is {arity}")
                for component in t:
                    if component not in elems:
                        raise StructureError(
                            f"tuple component {component!r} of relation {name!r} "
                            f"is not a domain element")
            rels[name] = frozen
        for name in self.vocabulary.symbols:
            rels.setdefault(name, frozenset())
        object.__setattr__(self, "relations", rels)

    def rel(self, name: str) -> frozenset[tuple[str, ...]]:
        if name not in self.vocabulary:
            raise VocabularyError(f"unknown relation symbol {name!r}")
        return self.relations[name]

    @property
    def size(self) -> int:
        return len(self.domain)


def parse_structure(text: str) -> Structure:
    """Parse and fully validate a structure document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureError(f"malformed structure document: {e}") from None
    return structure_from_doc(doc)


def structure_from_doc(doc: Any) -> Structure:
    if not isinstance(doc, dict):
        raise StructureError("structure document must be a JSON object")
    missing = {"domain", "arities"} - doc.keys()
    if missing:
        raise StructureError(f"structure document lacks required keys: {sorted(missing)}")
    domain = doc["domain"]
    arities = doc["arities"]
    relations = doc.get("relations", {})
    if not isinstance(domain, list) or not all(isinstance(e, str) for e in domain):
        raise StructureError("'domain' must be a list of strings")
    if not isinstance(arities, dict):
        raise StructureError("'arities' must be an object mapping names to integers")
    if not isinstance(relations, dict):
        raise StructureError("'relations' must be an object mapping names to tuple lists")
    try:
        vocab = Vocabulary(arities)
    except VocabularyError as e:
        raise StructureError(str(e)) from None
    rels = {}
    for name, tuples in relations.items():
        if not isinstance(tuples, list) or not all(isinstance(t, list) for t in tuples):
            raise StructureError(f"relation {name!r} must be a list of tuples (lists)")
        rels[name] = [tuple(t) for t in tuples]
    return Structure(tuple(domain), rels, vocab)


def structure_to_doc(s: Structure) -> dict:
    """Inverse of structure_from_doc, with deterministically sorted tuples."""
    return {
        "domain": list(s.domain),
        "arities": dict(sorted(s.vocabulary.symbols.items())),
        "relations": {name: sorted(list(t) for t in tuples)
                      for name, tuples in sorted(s.relations.items())},
    }


def dump_structure(s: Structure) -> str:
    return json.dumps(structure_to_doc(s), indent=2, sort_keys=True)


def make_structure(domain: Iterable[str], arities: Mapping[str, int],
                   relations: Mapping[str, Iterable[tuple[str, ...]]] | None = None) -> Structure:
    """Convenience constructor used throughout tests and generators."""
    return Structure(tuple(domain), dict(relations or {}), Vocabulary(arities))


def disjoint_union(s1: Structure, s2: Structure) -> Structure:
    """Tagged disjoint union; elements are suffixed with '#1' / '#2'.

    Both structures must share the same vocabulary.
    """
    if s1.vocabulary.symbols != s2.vocabulary.symbols:
        raise VocabularyError("disjoint_union requires identical vocabularies")

    def tag(e: str, i: int) -> str:
        return f"{e}{COPY_SEP}{i}"

    domain = tuple(tag(e, 1) for e in s1.domain) + tuple(tag(e, 2) for e in s2.domain)
    relations = {
        name: frozenset(tuple(tag(c, 1) for c in t) for t in s1.relations[name])
        | frozenset(tuple(tag(c, 2) for c in t) for t in s2.relations[name])
        for name in s1.vocabulary.symbols
    }
    return Structure(domain, relations, s1.vocabulary)


def tag_elements(elements: Iterable[str], copy: int) -> frozenset[str]:
    """Elements of one copy inside a disjoint union, by tag index (1 or 2)."""
    return frozenset(f"{e}{COPY_SEP}{copy}" for e in elements)
