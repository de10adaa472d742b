"""Type-similarity scoring between the query and candidate classes.

Combines a definite cast-compatibility check (primitive widening, declared
subtyping, boxing, type variables) with embedding similarity for unrelated
class types. Scores live in {-1} or [tt, 1]: -1 forbids a mapping, 1 marks
cast-compatible pairs, and gated cosine scores cover the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .embedding import ClassIndex, EmbeddingModel, cosine
from .model import ClassDescriptor, TypeRef
from .tokens import split_identifier

SENTINEL = -1.0

# widening chains; char deliberately skips short
_WIDENS: dict[str, frozenset[str]] = {
    "byte": frozenset({"short", "int", "long", "float", "double"}),
    "short": frozenset({"int", "long", "float", "double"}),
    "char": frozenset({"int", "long", "float", "double"}),
    "int": frozenset({"long", "float", "double"}),
    "long": frozenset({"float", "double"}),
    "float": frozenset({"double"}),
}

_BOXES: dict[str, str] = {
    "Boolean": "boolean",
    "Byte": "byte",
    "Short": "short",
    "Character": "char",
    "Integer": "int",
    "Long": "long",
    "Float": "float",
    "Double": "double",
}


class Hierarchy:
    """Supertype reachability over a corpus, by exact qualified or simple name."""

    def __init__(self, corpus: Mapping[str, ClassDescriptor] | None = None):
        self._by_name: dict[str, ClassDescriptor] = {}
        for c in (corpus or {}).values():
            self._by_name.setdefault(c.qualified_name, c)
            self._by_name.setdefault(c.simple_name, c)

    def resolve(self, name: str) -> ClassDescriptor | None:
        return self._by_name.get(name) or self._by_name.get(name.rsplit(".", 1)[-1])

    def is_subtype(self, sub: str, sup: str) -> bool:
        target = self.resolve(sup)
        target_names = {sup, sup.rsplit(".", 1)[-1]}
        if target is not None:
            target_names.update({target.qualified_name, target.simple_name})
        seen: set[str] = set()
        frontier = [sub]
        while frontier:
            name = frontier.pop()
            c = self.resolve(name)
            if c is None or c.qualified_name in seen:
                continue
            seen.add(c.qualified_name)
            for s in c.supertypes:
                if s in target_names or s.rsplit(".", 1)[-1] in target_names:
                    return True
                frontier.append(s)
        return False


def _boxing_compatible(a: TypeRef, b: TypeRef) -> bool:
    if a.kind == "primitive" and b.kind == "class":
        return _BOXES.get(b.simple_name) == a.name
    if a.kind == "class" and b.kind == "primitive":
        return _BOXES.get(a.simple_name) == b.name
    return False


def type_cast_check(a: TypeRef, b: TypeRef, hierarchy: Hierarchy | None = None) -> bool:
    """True iff a value of type ``a`` can stand in for type ``b``.

    Identity, primitive widening, declared subtyping through the corpus,
    boxing both ways, and type variables against any non-primitive type.
    Arrays need equal dimensions and compatible elements.
    """
    if a == b:
        return True
    if a.kind == "primitive" and b.kind == "primitive":
        return b.name in _WIDENS.get(a.name, frozenset())
    if a.kind == "typevar":
        return b.kind != "primitive"
    if b.kind == "typevar":
        return a.kind != "primitive"
    if a.kind == "array" or b.kind == "array":
        if a.kind != b.kind or a.dimensions != b.dimensions:
            return False
        return type_cast_check(a.element, b.element, hierarchy)
    if _boxing_compatible(a, b):
        return True
    if a.kind == "class" and b.kind == "class":
        if a.name == b.name or a.simple_name == b.name or a.name == b.simple_name:
            return True
        return (hierarchy or Hierarchy()).is_subtype(a.name, b.name)
    return False


@dataclass(frozen=True)
class TypeSimilarityMatrix:
    """Scores for (query type, candidate type) pairs; missing pairs are -1."""

    query_class: str
    candidate_class: str
    threshold: float
    entries: tuple[tuple[TypeRef, TypeRef, float], ...]

    @cached_property
    def _lookup(self) -> dict[tuple[TypeRef, TypeRef], float]:
        return {(a, b): v for a, b, v in self.entries}

    def score(self, a: TypeRef, b: TypeRef) -> float:
        return self._lookup.get((a, b), SENTINEL)

    def as_dict(self) -> dict[tuple[TypeRef, TypeRef], float]:
        return dict(self._lookup)

    def non_sentinel_count(self) -> int:
        return len(self.entries)


def types_of(c: ClassDescriptor) -> tuple[TypeRef, ...]:
    """Every type used by the class: fields, returns, parameters (deduplicated,
    first-use order)."""
    seen: list[TypeRef] = []
    def add(t: TypeRef):
        if t not in seen:
            seen.append(t)
    for f in c.fields:
        add(f.type)
    for m in c.methods:
        add(m.return_type)
        for _, t in m.parameters:
            add(t)
    return tuple(seen)


def _class_vector(t: TypeRef, by_name: Mapping, by_simple: Mapping, model: EmbeddingModel):
    vec = by_name.get(t.name)
    if vec is not None:
        return vec
    matches = by_simple.get(t.simple_name, ())
    if len(matches) == 1:
        return matches[0]
    # type not in the corpus: embed the split tokens of its simple name
    return model.embed_bag(split_identifier(t.simple_name))


def type_similarity_matrix(
    q: ClassDescriptor,
    r: ClassDescriptor,
    index: ClassIndex,
    model: EmbeddingModel,
    tt: float,
    hierarchy: Hierarchy | None = None,
) -> TypeSimilarityMatrix:
    """Score every (Types(Q), Types(R)) pair.

    Pairs start forbidden; cast-compatible pairs score 1; unrelated class
    pairs score their class-embedding cosine when it clears ``tt``. The
    (query-as-type, candidate-as-type) pair is pinned to 1 regardless.
    """
    if not (-1.0 <= tt <= 1.0):
        raise ValueError("tt must lie in [-1, 1]")
    hier = hierarchy or Hierarchy()
    entries: dict[tuple[TypeRef, TypeRef], float] = {}
    by_name = dict(index.entries)
    by_simple: dict[str, list] = {}
    for n, v in index.entries:
        by_simple.setdefault(n.rsplit(".", 1)[-1], []).append(v)
    vec_cache: dict[str, object] = {}

    def vector_for(t: TypeRef):
        v = vec_cache.get(t.name)
        if v is None:
            v = _class_vector(t, by_name, by_simple, model)
            vec_cache[t.name] = v
        return v

    for ti in types_of(q):
        for tj in types_of(r):
            if type_cast_check(ti, tj, hier):
                entries[(ti, tj)] = 1.0
            elif ti.kind == "class" and tj.kind == "class":
                score = cosine(vector_for(ti), vector_for(tj))
                if score > tt:
                    entries[(ti, tj)] = score

    for qt in (TypeRef.named(q.simple_name), TypeRef.named(q.qualified_name)):
        for rt in (TypeRef.named(r.simple_name), TypeRef.named(r.qualified_name)):
            entries[(qt, rt)] = 1.0

    ordered = tuple((a, b, v) for (a, b), v in entries.items())
    return TypeSimilarityMatrix(q.qualified_name, r.qualified_name, tt, ordered)
