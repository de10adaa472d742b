"""cfind: replacement-class search over source corpora.

Given a query class and a corpus, cfind returns ranked candidate replacement
classes together with a field map and a per-method mapping, by combining an
embedding-based prefilter with type-aware optimization-based matching.
"""

__version__ = "0.1.0"

from .assignment import ScoreMatrix, optimize
from .config import SearchConfig
from .embedding import (
    ClassIndex,
    EmbeddingModel,
    TrainConfig,
    cosine,
    index_build,
    index_lookup,
    load_index,
    load_model,
    save_index,
    save_model,
    train_model,
)
from .engine import (
    RankedResult,
    explain_candidate,
    map_candidate,
    query,
    rank_results,
    result_document,
)
from .evaluation import (
    QualityBreakdown,
    classify_mapping,
    compare_rankings,
    load_ideal,
    save_ideal,
)
from .extract import (
    CallGraph,
    ParseError,
    build_call_graph,
    flatten_inheritance,
    parse_source,
)
from .fieldmap import FieldMap, field_map, field_read_writes, modifier_compatibility
from .methodmap import MethodMap, method_map, parameter_map_score, rewrite_fields
from .model import (
    ClassDescriptor,
    FieldDescriptor,
    Invocation,
    MethodDescriptor,
    TypeRef,
    load_interchange,
    save_interchange,
    validate_descriptor,
)
from .tokens import TokenBag, class_tokens, method_tokens, split_identifier
from .typesim import (
    Hierarchy,
    TypeSimilarityMatrix,
    type_cast_check,
    type_similarity_matrix,
)

__all__ = [
    "CallGraph",
    "ClassDescriptor",
    "ClassIndex",
    "EmbeddingModel",
    "FieldDescriptor",
    "FieldMap",
    "Hierarchy",
    "Invocation",
    "MethodDescriptor",
    "MethodMap",
    "ParseError",
    "QualityBreakdown",
    "RankedResult",
    "ScoreMatrix",
    "SearchConfig",
    "TokenBag",
    "TrainConfig",
    "TypeRef",
    "TypeSimilarityMatrix",
    "build_call_graph",
    "class_tokens",
    "classify_mapping",
    "compare_rankings",
    "cosine",
    "explain_candidate",
    "field_map",
    "field_read_writes",
    "flatten_inheritance",
    "index_build",
    "index_lookup",
    "load_ideal",
    "load_index",
    "load_interchange",
    "load_model",
    "map_candidate",
    "method_map",
    "method_tokens",
    "modifier_compatibility",
    "optimize",
    "parameter_map_score",
    "parse_source",
    "query",
    "rank_results",
    "result_document",
    "rewrite_fields",
    "save_ideal",
    "save_index",
    "save_interchange",
    "save_model",
    "split_identifier",
    "train_model",
    "type_cast_check",
    "type_similarity_matrix",
    "validate_descriptor",
]
