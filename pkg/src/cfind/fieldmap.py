"""Field mapping: usage-similarity plus type-similarity scoring, then optimal
assignment and threshold filtering.

Fields read and written by similar sets of methods score high; the blended
score also weighs the type-similarity entry for the field types. The final
map is one-to-one and keeps only pairs at or above the field threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .assignment import SENTINEL, ScoreMatrix, optimize
from .embedding import EmbeddingModel, cosine
from .extract import CallGraph, build_call_graph
from .model import ClassDescriptor, FieldDescriptor
from .tokens import split_identifier
from .typesim import TypeSimilarityMatrix


class UnknownFieldError(Exception):
    pass


@dataclass(frozen=True)
class FieldMap:
    """One-to-one map from query field names to (candidate field, score)."""

    pairs: tuple[tuple[str, str, float], ...]
    field_weight: float
    threshold: float

    def target(self, q_field: str) -> str | None:
        for f, g, _ in self.pairs:
            if f == q_field:
                return g
        return None

    def as_dict(self) -> dict[str, tuple[str, float]]:
        return {f: (g, s) for f, g, s in self.pairs}

    def total_score(self) -> float:
        return float(sum(s for _, _, s in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)


def modifier_compatibility(f: FieldDescriptor, g: FieldDescriptor) -> bool:
    """Reject static/instance mixing and mutable-to-immutable mappings."""
    if f.is_static != g.is_static:
        return False
    if not f.is_final and g.is_final:
        return False
    return True


def field_read_writes(
    field: str, c: ClassDescriptor, cg: CallGraph
) -> tuple[frozenset[str], frozenset[str]]:
    """Method-name sets that read/write ``field``, directly or via self calls.

    A method that reaches a direct reader through the call graph is itself a
    reader (and the same for writers).
    """
    if field not in c.field_names():
        raise UnknownFieldError(f"field '{field}' not declared in {c.qualified_name}")
    readers = {m.key for m in c.methods if field in m.fields_read}
    writers = {m.key for m in c.methods if field in m.fields_written}
    reverse = cg.reverse_edges()

    def close(seed: set[str]) -> frozenset[str]:
        seen = set(seed)
        frontier = list(seed)
        while frontier:
            key = frontier.pop()
            for caller in reverse.get(key, ()):
                if caller not in seen:
                    seen.add(caller)
                    frontier.append(caller)
        names = {k.split("(", 1)[0] for k in seen}
        return frozenset(names)

    return close(readers), close(writers)


def _usage_similarity(
    names_a: frozenset[str], names_b: frozenset[str], model: EmbeddingModel
) -> float:
    """Cosine of the embedded method-name bags; mutual absence counts as 1."""
    if not names_a and not names_b:
        return 1.0
    if not names_a or not names_b:
        return 0.0
    bag_a = [t for n in sorted(names_a) for t in split_identifier(n)]
    bag_b = [t for n in sorted(names_b) for t in split_identifier(n)]
    return cosine(model.embed_bag(bag_a), model.embed_bag(bag_b))


def field_score_components(
    q: ClassDescriptor,
    r: ClassDescriptor,
    ts: TypeSimilarityMatrix,
    model: EmbeddingModel,
    fw: float,
    cg_q: CallGraph | None = None,
    cg_r: CallGraph | None = None,
):
    """Score matrix over Fields(Q) x Fields(R) plus per-pair components."""
    cg_q = cg_q or build_call_graph(q)
    cg_r = cg_r or build_call_graph(r)
    rows = [list(row) for row in ScoreMatrix.init(len(q.fields), len(r.fields)).data]
    components: dict[tuple[str, str], dict] = {}

    usage_q = {f.name: field_read_writes(f.name, q, cg_q) for f in q.fields}
    usage_r = {g.name: field_read_writes(g.name, r, cg_r) for g in r.fields}

    for i, f in enumerate(q.fields):
        for j, g in enumerate(r.fields):
            if not modifier_compatibility(f, g):
                continue
            readers_f, writers_f = usage_q[f.name]
            readers_g, writers_g = usage_r[g.name]
            r_score = _usage_similarity(readers_f, readers_g, model)
            w_score = _usage_similarity(writers_f, writers_g, model)
            escore = (r_score + w_score) / 2.0
            ts_val = ts.score(f.type, g.type)
            rows[i][j] = fw * escore + (1.0 - fw) * ts_val
            components[(f.name, g.name)] = {
                "read_score": r_score,
                "write_score": w_score,
                "usage_score": escore,
                "type_score": ts_val,
                "blended": rows[i][j],
            }
    return ScoreMatrix.from_rows(rows) if rows else ScoreMatrix.init(0, len(r.fields)), components


def field_map(
    q: ClassDescriptor,
    r: ClassDescriptor,
    ts: TypeSimilarityMatrix,
    model: EmbeddingModel,
    fw: float = 0.5,
    ft: float = 0.5,
    cg_q: CallGraph | None = None,
    cg_r: CallGraph | None = None,
) -> FieldMap:
    """Build the field map: blend usage and type scores, assign, filter."""
    if not (0.0 <= fw <= 1.0):
        raise ValueError("fw must lie in [0, 1]")
    if not (-1.0 <= ft <= 1.0):
        raise ValueError("ft must lie in [-1, 1]")
    fs, _ = field_score_components(q, r, ts, model, fw, cg_q, cg_r)
    matching = optimize(fs)
    pairs = tuple(
        (q.fields[i].name, r.fields[j].name, fs.entry(i, j))
        for i, j in matching
        if fs.entry(i, j) >= ft
    )
    return FieldMap(pairs, fw, ft)
