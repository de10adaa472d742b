"""End-to-end query pipeline: embed, prefilter, map, and rank candidates.

For the query class and each prefiltered candidate: build the type-similarity
matrix, derive the field map, rewrite the candidate, derive the method map,
then rank all candidates by how much of the query they can replace.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .config import SearchConfig
from .embedding import ClassIndex, EmbeddingModel, index_lookup
from .extract import CycleError, build_call_graph, flatten_inheritance
from .fieldmap import FieldMap, field_map
from .methodmap import MethodMap, method_map
from .model import ClassDescriptor, validate_descriptor
from .tokens import class_tokens
from .typesim import Hierarchy, TypeSimilarityMatrix, type_similarity_matrix

log = logging.getLogger(__name__)

RESULT_FORMAT = "cf-result"
RESULT_VERSION = 1


class EngineError(Exception):
    pass


class EmptyIndexError(EngineError):
    pass


class InvalidQueryError(EngineError):
    pass


@dataclass(frozen=True)
class RankedResult:
    """One candidate's outcome: rank, mappings, and aggregate scores."""

    class_name: str
    final_rank: int
    embedding_rank: int
    embedding_score: float
    sigma: FieldMap
    alpha: MethodMap

    @property
    def mapped_method_count(self) -> int:
        return self.alpha.mapped_count()

    @property
    def aggregate_method_score(self) -> float:
        return self.alpha.total_score()

    @property
    def mapped_field_count(self) -> int:
        return len(self.sigma)

    @property
    def aggregate_field_score(self) -> float:
        return self.sigma.total_score()


def rank_key(r: RankedResult):
    """Descending on method count, method score, field count, field score;
    ascending class name breaks full ties."""
    return (
        -r.mapped_method_count,
        -r.aggregate_method_score,
        -r.mapped_field_count,
        -r.aggregate_field_score,
        r.class_name,
    )


def rank_results(results: Sequence[RankedResult]) -> list[RankedResult]:
    """Stable total order over candidate results; reassigns final ranks."""
    ordered = sorted(results, key=rank_key)
    return [
        RankedResult(
            class_name=r.class_name,
            final_rank=i + 1,
            embedding_rank=r.embedding_rank,
            embedding_score=r.embedding_score,
            sigma=r.sigma,
            alpha=r.alpha,
        )
        for i, r in enumerate(ordered)
    ]


def make_lookup(corpus: Sequence[ClassDescriptor]) -> dict[str, ClassDescriptor]:
    """Resolution map over qualified names, plus unique simple names."""
    lookup: dict[str, ClassDescriptor] = {}
    simple_seen: dict[str, int] = {}
    for c in corpus:
        lookup[c.qualified_name] = c
        simple_seen[c.simple_name] = simple_seen.get(c.simple_name, 0) + 1
    for c in corpus:
        if simple_seen[c.simple_name] == 1 and c.simple_name not in lookup:
            lookup[c.simple_name] = c
    return lookup


def map_candidate(
    q: ClassDescriptor,
    r: ClassDescriptor,
    index: ClassIndex,
    model: EmbeddingModel,
    config: SearchConfig,
    hierarchy: Hierarchy | None = None,
) -> tuple[TypeSimilarityMatrix, FieldMap, MethodMap]:
    """Type matrix, field map, and method map for one candidate."""
    ts = type_similarity_matrix(q, r, index, model, config.tt, hierarchy)
    sigma = field_map(q, r, ts, model, fw=config.fw, ft=config.ft)
    alpha = method_map(
        q, r, sigma, ts, model,
        mw=config.mw, mt=config.mt, inline_depth=config.inline_depth,
        include_constructors=config.include_constructors,
        include_own_name=config.include_own_name,
        strict_static=config.strict_static,
        strict_return=config.strict_return,
    )
    return ts, sigma, alpha


def query(
    q: ClassDescriptor,
    index: ClassIndex,
    corpus: Sequence[ClassDescriptor],
    model: EmbeddingModel,
    config: SearchConfig | None = None,
) -> list[RankedResult]:
    """Run the full pipeline for one query class.

    Prefilters `config.candidates` classes by class-vector cosine, maps each,
    ranks, and truncates to `config.top`. Candidates that fail to flatten or
    map are skipped with a warning.
    """
    cfg = config or SearchConfig()
    cfg.validate()
    if len(index) == 0:
        raise EmptyIndexError("the class index is empty")
    violations = validate_descriptor(q)
    if violations:
        raise InvalidQueryError(
            f"query class {q.qualified_name}: " + "; ".join(violations)
        )

    lookup = make_lookup(corpus)
    hierarchy = Hierarchy(lookup)
    q_flat = flatten_inheritance(q, lookup, cfg.inherit_depth)

    q_vec = model.embed_bag(class_tokens(q_flat))
    neighbors = index_lookup(index, q_vec, cfg.candidates)

    def one(item):
        position, (name, score) = item
        cand = lookup.get(name)
        if cand is None:
            log.warning("candidate %s missing from corpus; skipped", name)
            return None
        try:
            cand_flat = flatten_inheritance(cand, lookup, cfg.inherit_depth)
            _, sigma, alpha = map_candidate(
                q_flat, cand_flat, index, model, cfg, hierarchy
            )
        except (CycleError, ValueError) as e:
            log.warning("candidate %s skipped: %s", name, e)
            return None
        return RankedResult(
            class_name=name,
            final_rank=0,
            embedding_rank=position + 1,
            embedding_score=score,
            sigma=sigma,
            alpha=alpha,
        )

    items = list(enumerate(neighbors))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            mapped = list(pool.map(one, items))
    else:
        mapped = [one(it) for it in items]
    results = [r for r in mapped if r is not None]
    return rank_results(results)[: cfg.top]


# --- structured result document ------------------------------------------------


def result_document(
    q: ClassDescriptor, results: Sequence[RankedResult], config: SearchConfig
) -> dict:
    return {
        "format": RESULT_FORMAT,
        "version": RESULT_VERSION,
        "query": q.qualified_name,
        "config": config.as_dict(),
        "results": [
            {
                "rank": r.final_rank,
                "class": r.class_name,
                "embedding_rank": r.embedding_rank,
                "embedding_score": r.embedding_score,
                "mapped_methods": r.mapped_method_count,
                "method_score_total": r.aggregate_method_score,
                "mapped_fields": r.mapped_field_count,
                "field_score_total": r.aggregate_field_score,
                "sigma": {
                    f: {"to": g, "score": s} for f, g, s in r.sigma.pairs
                },
                "alpha": {
                    key: {
                        "to": e.target,
                        "score": e.score,
                        "params": (
                            {p: {"to": p2, "score": s} for p, p2, s in e.param_map}
                            if e.param_map is not None
                            else None
                        ),
                    }
                    for key, e in r.alpha.entries
                },
            }
            for r in results
        ],
    }


def dump_result_document(doc: dict) -> bytes:
    """Canonical bytes for a result document (stable across reruns)."""
    return (
        json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        + "\n"
    ).encode("utf-8")


def load_result_document(data: bytes) -> dict:
    doc = json.loads(data.decode("utf-8"))
    if doc.get("format") != RESULT_FORMAT:
        raise EngineError("not a result document")
    if doc.get("version") != RESULT_VERSION:
        raise EngineError(f"unsupported result version {doc.get('version')}")
    return doc


# --- per-candidate explanation --------------------------------------------------


def explain_candidate(
    q: ClassDescriptor,
    r: ClassDescriptor,
    index: ClassIndex,
    model: EmbeddingModel,
    config: SearchConfig,
    corpus: Sequence[ClassDescriptor] = (),
) -> dict:
    """Recompute one candidate's mapping with per-pair score components."""
    from .fieldmap import field_score_components
    from .methodmap import method_score_components, rewrite_fields

    cfg = config
    lookup = make_lookup(corpus) if corpus else {}
    hierarchy = Hierarchy(lookup) if lookup else None
    if lookup:
        q = flatten_inheritance(q, lookup, cfg.inherit_depth)
        r = flatten_inheritance(r, lookup, cfg.inherit_depth)
    ts = type_similarity_matrix(q, r, index, model, cfg.tt, hierarchy)
    _, field_parts = field_score_components(q, r, ts, model, cfg.fw)
    sigma = field_map(q, r, ts, model, fw=cfg.fw, ft=cfg.ft)
    r2 = rewrite_fields(r, sigma)
    _, _, method_parts = method_score_components(
        q, r2, ts, model, cfg.mw, cfg.inline_depth,
        cfg.include_constructors, cfg.include_own_name,
        cfg.strict_static, cfg.strict_return,
    )
    alpha = method_map(
        q, r, sigma, ts, model,
        mw=cfg.mw, mt=cfg.mt, inline_depth=cfg.inline_depth,
        include_constructors=cfg.include_constructors,
        include_own_name=cfg.include_own_name,
        strict_static=cfg.strict_static,
        strict_return=cfg.strict_return,
    )
    return {
        "query": q.qualified_name,
        "candidate": r.qualified_name,
        "type_similarity": [
            {"query_type": str(a), "candidate_type": str(b), "score": v}
            for a, b, v in ts.entries
        ],
        "field_components": [
            {"query_field": f, "candidate_field": g, **parts}
            for (f, g), parts in sorted(field_parts.items())
        ],
        "sigma": {f: {"to": g, "score": s} for f, g, s in sigma.pairs},
        "method_components": [
            {
                "query_method": a,
                "candidate_method": b,
                "embedding_score": parts["embedding_score"],
                "parameter_score": parts["parameter_score"],
                "blended": parts["blended"],
            }
            for (a, b), parts in sorted(method_parts.items())
        ],
        "alpha": {
            key: {"to": e.target, "score": e.score}
            for key, e in alpha.entries
        },
    }
