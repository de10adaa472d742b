"""Method mapping: rewrite the candidate under the field map, score method
pairs by token-embedding and parameter-assignment similarity, then map each
public query method to its best candidate or to none.

The parameter score frames parameter pairing as an assignment problem over
type-similarity entries and normalizes the matched total into [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .assignment import ScoreMatrix, optimize
from .embedding import EmbeddingModel, cosine
from .extract import CallGraph, build_call_graph
from .model import ClassDescriptor, MethodDescriptor, with_fields
from .tokens import method_tokens
from .typesim import TypeSimilarityMatrix, type_cast_check
from .fieldmap import FieldMap


class RenameCollisionError(Exception):
    pass


@dataclass(frozen=True)
class MethodMapping:
    """One query method's outcome: a target method key or none."""

    target: str | None
    score: float | None
    param_map: tuple[tuple[str, str, float], ...] | None

    @property
    def mapped(self) -> bool:
        return self.target is not None


@dataclass(frozen=True)
class MethodMap:
    """Per-public-method outcomes plus the configuration that produced them."""

    entries: tuple[tuple[str, MethodMapping], ...]
    method_weight: float
    threshold: float
    inline_depth: int

    def as_dict(self) -> dict[str, MethodMapping]:
        return dict(self.entries)

    def mapped_count(self) -> int:
        return sum(1 for _, e in self.entries if e.mapped)

    def total_score(self) -> float:
        return float(sum(e.score for _, e in self.entries if e.mapped))

    def __len__(self) -> int:
        return len(self.entries)


def rewrite_fields(r: ClassDescriptor, sigma: FieldMap) -> ClassDescriptor:
    """Rename every mapped candidate field to its query-side name.

    Renames apply to the field declarations, the per-method access sets, and
    the raw body tokens. Pairs whose target field is no longer present are
    skipped, which makes a second application a no-op. A rename that would
    shadow a distinct existing field raises.
    """
    renames: dict[str, str] = {}
    present = r.field_names()
    for f, g, _ in sigma.pairs:
        if g not in present:
            continue
        if f != g:
            if f in present:
                raise RenameCollisionError(
                    f"cannot rename '{g}' to '{f}': field '{f}' already exists in "
                    f"{r.qualified_name}"
                )
            renames[g] = f
    if not renames:
        return r

    def rn(name: str) -> str:
        return renames.get(name, name)

    fields = tuple(replace(fd, name=rn(fd.name)) for fd in r.fields)
    methods = tuple(
        MethodDescriptor(
            name=m.name,
            parameters=m.parameters,
            return_type=m.return_type,
            is_public=m.is_public,
            is_static=m.is_static,
            body_tokens=tuple(rn(t) for t in m.body_tokens),
            invoked_methods=m.invoked_methods,
            fields_read=frozenset(rn(x) for x in m.fields_read),
            fields_written=frozenset(rn(x) for x in m.fields_written),
            local_variables=m.local_variables,
        )
        for m in r.methods
    )
    return with_fields(r, fields=fields, methods=methods)


def parameter_map_score(
    mi: MethodDescriptor, mj: MethodDescriptor, ts: TypeSimilarityMatrix
) -> tuple[tuple[tuple[str, str, float], ...], float]:
    """Optimal parameter pairing plus the normalized score in [-1, 1].

    Two parameterless methods score 1; otherwise the matched similarity mass
    is scaled by the larger parameter count, so missing parameters drag the
    score toward -1.
    """
    p, q = mi.arity, mj.arity
    if max(p, q) == 0:
        return (), 1.0
    rows = [
        [ts.score(ti, tj) for _, tj in mj.parameters]
        for _, ti in mi.parameters
    ]
    ps = ScoreMatrix.from_rows(rows) if rows else ScoreMatrix.init(0, q)
    matching = optimize(ps)
    matched_mass = sum((ps.entry(i, j) + 1.0) / 2.0 for i, j in matching)
    par_score = 2.0 * matched_mass / max(p, q) - 1.0
    pairs = tuple(
        (mi.parameters[i][0], mj.parameters[j][0], ps.entry(i, j))
        for i, j in matching
    )
    return pairs, par_score


def method_score_components(
    q: ClassDescriptor,
    r_rewritten: ClassDescriptor,
    ts: TypeSimilarityMatrix,
    model: EmbeddingModel,
    mw: float,
    inline_depth: int,
    include_constructors: bool = False,
    include_own_name: bool = False,
    strict_static: bool = False,
    strict_return: bool = False,
    cg_q: CallGraph | None = None,
    cg_r: CallGraph | None = None,
):
    """Blended scores for every public (query, candidate) method pair."""
    cg_q = cg_q or build_call_graph(q)
    cg_r = cg_r or build_call_graph(r_rewritten)
    q_methods = q.public_methods(include_constructors)
    r_methods = r_rewritten.public_methods(include_constructors)

    vec_q = {
        m.key: model.embed_bag(method_tokens(m, q, cg_q, inline_depth, include_own_name))
        for m in q_methods
    }
    vec_r = {
        m.key: model.embed_bag(
            method_tokens(m, r_rewritten, cg_r, inline_depth, include_own_name)
        )
        for m in r_methods
    }

    scores: dict[tuple[str, str], dict] = {}
    for mi in q_methods:
        for mj in r_methods:
            if strict_static and mi.is_static != mj.is_static:
                continue
            if strict_return and not type_cast_check(mi.return_type, mj.return_type):
                continue
            emb = cosine(vec_q[mi.key], vec_r[mj.key])
            pairs, par = parameter_map_score(mi, mj, ts)
            blended = mw * emb + (1.0 - mw) * par
            scores[(mi.key, mj.key)] = {
                "embedding_score": emb,
                "parameter_score": par,
                "parameter_map": pairs,
                "blended": blended,
            }
    return q_methods, r_methods, scores


def method_map(
    q: ClassDescriptor,
    r: ClassDescriptor,
    sigma: FieldMap,
    ts: TypeSimilarityMatrix,
    model: EmbeddingModel,
    mw: float = 0.5,
    mt: float = 0.5,
    inline_depth: int = 5,
    include_constructors: bool = False,
    include_own_name: bool = False,
    strict_static: bool = False,
    strict_return: bool = False,
) -> MethodMap:
    """Map each public query method to its best-scoring candidate method.

    The candidate is rewritten under the field map first. A method maps to
    the argmax over candidate methods when that score clears ``mt``; ties
    prefer the higher parameter score, then the smaller method key.
    """
    if not (0.0 <= mw <= 1.0):
        raise ValueError("mw must lie in [0, 1]")
    if not (-1.0 <= mt <= 1.0):
        raise ValueError("mt must lie in [-1, 1]")
    if inline_depth < 0:
        raise ValueError("inline depth must be >= 0")

    r2 = rewrite_fields(r, sigma)
    q_methods, r_methods, scores = method_score_components(
        q, r2, ts, model, mw, inline_depth,
        include_constructors, include_own_name, strict_static, strict_return,
    )

    entries: list[tuple[str, MethodMapping]] = []
    for mi in q_methods:
        best: tuple[float, float, str] | None = None  # (-score, -par, key)
        for mj in r_methods:
            cell = scores.get((mi.key, mj.key))
            if cell is None:
                continue
            cand = (-cell["blended"], -cell["parameter_score"], mj.key)
            if best is None or cand < best:
                best = cand
        if best is not None and -best[0] >= mt:
            key = best[2]
            cell = scores[(mi.key, key)]
            entries.append(
                (
                    mi.key,
                    MethodMapping(key, cell["blended"], cell["parameter_map"]),
                )
            )
        else:
            entries.append((mi.key, MethodMapping(None, None, None)))
    return MethodMap(tuple(entries), mw, mt, inline_depth)
