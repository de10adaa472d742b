"""Subword CBOW embeddings, cosine similarity, and the exact class index.

The trainer is a continuous-bag-of-words model with negative sampling where
every token is represented by the mean of its character n-gram vectors (with
word boundary markers) plus a known-word vector when the token is in the
training vocabulary. Subword hashing keeps unseen tokens embeddable.

Training is single-threaded and fully seeded: the same corpus, configuration,
and seed always produce bitwise-identical models. Hyperparameters beyond the
embedding dimension are this implementation's documented defaults and can all
be overridden from the CLI.

File formats (little-endian):

* model  — magic ``CFEM``, version u32, dimension u32, ngram_min u32,
  ngram_max u32, bucket_count u32, vocabulary (count u32, then per entry:
  UTF-8 length u16 + bytes, count u64), float32 vocab vectors, then the used
  subword buckets (count u32, bucket ids u32[n], float32 vectors). Buckets
  never touched by training are reconstructed from their seeded initializer,
  so the file only stores the trained ones.
* index  — magic ``CFIX``, version u32, dimension u32, count u32, then per
  record: name length u16, UTF-8 name bytes, float32[dimension].
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .model import ClassDescriptor
from .tokens import TokenBag, class_tokens

MODEL_MAGIC = b"CFEM"
INDEX_MAGIC = b"CFIX"
FORMAT_VERSION = 1


class EmbeddingError(Exception):
    pass


class DimensionMismatchError(EmbeddingError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    """CBOW training configuration. Only the dimension default is inherited
    from the published setting; the rest are this artifact's defaults."""

    dimension: int = 150
    window: int = 5
    negatives: int = 5
    epochs: int = 10
    learning_rate: float = 0.05
    min_count: int = 1
    ngram_min: int = 3
    ngram_max: int = 6
    buckets: int = 1 << 21
    seed: int = 42

    def validate(self):
        for name in ("dimension", "window", "negatives", "epochs", "min_count",
                     "ngram_min", "ngram_max", "buckets"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.ngram_min > self.ngram_max:
            raise ValueError("ngram_min must not exceed ngram_max")


def _fnv1a(data: bytes) -> int:
    h = 0x811C9DC5
    for b in data:
        h ^= b
        h = (h * 0x01000193) & 0xFFFFFFFF
    return h


def token_ngrams(token: str, n_min: int, n_max: int) -> list[str]:
    """Character n-grams of '<token>' with lengths in [n_min, n_max]."""
    marked = f"<{token}>"
    out = []
    for n in range(n_min, n_max + 1):
        for i in range(len(marked) - n + 1):
            out.append(marked[i : i + n])
    return out


class EmbeddingModel:
    """Trained subword CBOW model: composes token vectors on demand."""

    def __init__(
        self,
        dimension: int,
        ngram_min: int,
        ngram_max: int,
        buckets: int,
        vocab: dict[str, int],
        vocab_counts: list[int],
        vectors_vocab: np.ndarray,
        bucket_vectors: dict[int, np.ndarray],
        seed: int,
    ):
        self.dimension = dimension
        self.ngram_min = ngram_min
        self.ngram_max = ngram_max
        self.buckets = buckets
        self.vocab = vocab
        self.vocab_counts = vocab_counts
        self.vectors_vocab = vectors_vocab
        self._bucket_vectors = bucket_vectors
        self.seed = seed

    # -- subword machinery

    def bucket_of(self, ngram: str) -> int:
        return _fnv1a(ngram.encode("utf-8")) % self.buckets

    def _init_bucket(self, bucket: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64([self.seed, 0x5B, bucket]))
        bound = 1.0 / self.dimension
        return rng.uniform(-bound, bound, self.dimension).astype(np.float32)

    def bucket_vector(self, bucket: int) -> np.ndarray:
        vec = self._bucket_vectors.get(bucket)
        if vec is None:
            vec = self._init_bucket(bucket)
            self._bucket_vectors[bucket] = vec
        return vec

    def token_rows(self, token: str) -> list[np.ndarray]:
        rows = [
            self.bucket_vector(self.bucket_of(g))
            for g in token_ngrams(token, self.ngram_min, self.ngram_max)
        ]
        idx = self.vocab.get(token)
        if idx is not None:
            rows.append(self.vectors_vocab[idx])
        return rows

    def embed_token(self, token: str) -> np.ndarray:
        """Mean of the token's subword vectors plus its known-word vector."""
        if not token:
            raise ValueError("empty token")
        rows = self.token_rows(token)
        return np.mean(rows, axis=0, dtype=np.float64).astype(np.float32)

    def embed_bag(self, bag: TokenBag | Sequence[str]) -> np.ndarray:
        """Multiset mean over the bag; the empty bag embeds to the zero vector."""
        tokens = bag.tokens if isinstance(bag, TokenBag) else tuple(bag)
        if not tokens:
            return np.zeros(self.dimension, dtype=np.float32)
        acc = np.zeros(self.dimension, dtype=np.float64)
        for t in tokens:
            acc += self.embed_token(t)
        return (acc / len(tokens)).astype(np.float32)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; zero vectors compare as 0."""
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")
    a64 = a.astype(np.float64, copy=False)
    b64 = b.astype(np.float64, copy=False)
    na = float(np.dot(a64, a64)) ** 0.5
    nb = float(np.dot(b64, b64)) ** 0.5
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a64, b64) / (na * nb))


def train_model(
    sentences: Iterable[Sequence[str] | TokenBag], config: TrainConfig | None = None
) -> EmbeddingModel:
    """Train the subword CBOW model on ordered token sequences.

    Each sequence is one training sentence (one class, in descriptor order).
    Deterministic for a fixed seed; raises on an empty corpus.
    """
    cfg = config or TrainConfig()
    cfg.validate()
    corpus: list[tuple[str, ...]] = []
    for s in sentences:
        toks = s.tokens if isinstance(s, TokenBag) else tuple(s)
        if toks:
            corpus.append(toks)
    if not corpus:
        raise EmbeddingError("empty training corpus")

    counts: dict[str, int] = {}
    for sent in corpus:
        for t in sent:
            counts[t] = counts.get(t, 0) + 1
    vocab_items = sorted(
        ((t, n) for t, n in counts.items() if n >= cfg.min_count),
        key=lambda kv: (-kv[1], kv[0]),
    )
    if not vocab_items:
        raise EmbeddingError("no token meets min_count")
    vocab = {t: i for i, (t, _) in enumerate(vocab_items)}
    vocab_counts = [n for _, n in vocab_items]
    v = len(vocab)
    d = cfg.dimension

    rng_vocab = np.random.Generator(np.random.PCG64([cfg.seed, 0xA1]))
    bound = 1.0 / d
    vectors_vocab = rng_vocab.uniform(-bound, bound, (v, d)).astype(np.float32)
    outputs = np.zeros((v, d), dtype=np.float32)

    model = EmbeddingModel(
        d, cfg.ngram_min, cfg.ngram_max, cfg.buckets,
        vocab, vocab_counts, vectors_vocab, {}, cfg.seed,
    )

    # per-token row index cache: vocab row id, bucket ids
    ngram_cache: dict[str, tuple[int, tuple[int, ...]]] = {}

    def rows_of(token: str) -> tuple[int, tuple[int, ...]]:
        hit = ngram_cache.get(token)
        if hit is None:
            gs = tuple(
                model.bucket_of(g)
                for g in token_ngrams(token, cfg.ngram_min, cfg.ngram_max)
            )
            hit = (vocab[token], gs)
            ngram_cache[token] = hit
        return hit

    # unigram^0.75 negative sampling table
    freqs = np.array(vocab_counts, dtype=np.float64) ** 0.75
    cumulative = np.cumsum(freqs / freqs.sum())

    rng = np.random.Generator(np.random.PCG64([cfg.seed, 0xC3]))
    total_tokens = sum(len(s) for s in corpus) * cfg.epochs
    processed = 0

    for _ in range(cfg.epochs):
        for sent in corpus:
            ids = [t for t in sent if t in vocab]
            for pos, center in enumerate(ids):
                processed += 1
                lr = cfg.learning_rate * max(
                    1e-4, 1.0 - processed / (total_tokens + 1)
                )
                span = int(rng.integers(1, cfg.window + 1))
                context = [
                    ids[k]
                    for k in range(max(0, pos - span), min(len(ids), pos + span + 1))
                    if k != pos
                ]
                if not context:
                    continue
                # hidden state: flat average over all input rows of the context
                word_rows: list[int] = []
                gram_rows: list[int] = []
                for tok in context:
                    wid, gids = rows_of(tok)
                    word_rows.append(wid)
                    gram_rows.extend(gids)
                hidden = np.zeros(d, dtype=np.float64)
                for wid in word_rows:
                    hidden += vectors_vocab[wid]
                for gid in gram_rows:
                    hidden += model.bucket_vector(gid)
                hidden /= len(word_rows) + len(gram_rows)

                grad = np.zeros(d, dtype=np.float64)
                target = vocab[center]
                samples = [(target, 1.0)]
                attempts = 0
                while len(samples) < cfg.negatives + 1 and attempts < 10 * cfg.negatives:
                    attempts += 1
                    r = float(rng.random())
                    neg = int(np.searchsorted(cumulative, r))
                    neg = min(neg, v - 1)
                    if neg != target:
                        samples.append((neg, 0.0))
                for wid, label in samples:
                    out = outputs[wid].astype(np.float64)
                    z = min(60.0, max(-60.0, float(np.dot(hidden, out))))
                    score = 1.0 / (1.0 + np.exp(-z))
                    g = (label - score) * lr
                    grad += g * out
                    outputs[wid] += (g * hidden).astype(np.float32)

                # standard trick: the full gradient lands on every input row
                share = grad.astype(np.float32)
                for wid in word_rows:
                    vectors_vocab[wid] += share
                for gid in gram_rows:
                    model._bucket_vectors[gid] = model._bucket_vectors[gid] + share
    return model


# --- class index --------------------------------------------------------------


@dataclass(frozen=True)
class ClassIndex:
    """One embedding vector per corpus class, in corpus order."""

    dimension: int
    entries: tuple[tuple[str, np.ndarray], ...] = field(default_factory=tuple)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def vector(self, name: str) -> np.ndarray | None:
        for n, v in self.entries:
            if n == name:
                return v
        return None

    def __len__(self) -> int:
        return len(self.entries)


def index_build(corpus: Sequence[ClassDescriptor], model: EmbeddingModel) -> ClassIndex:
    """Embed every class's token bag; entry order follows the corpus."""
    entries = tuple(
        (c.qualified_name, model.embed_bag(class_tokens(c))) for c in corpus
    )
    return ClassIndex(model.dimension, entries)


def index_lookup(
    idx: ClassIndex, query: np.ndarray, k: int
) -> list[tuple[str, float]]:
    """Exact top-k by descending cosine; ties broken by ascending class name."""
    if k <= 0:
        raise ValueError("k must be positive")
    if len(query) != idx.dimension:
        raise DimensionMismatchError(
            f"query dimension {len(query)} != index dimension {idx.dimension}"
        )
    scored = [(name, cosine(vec, query)) for name, vec in idx.entries]
    scored.sort(key=lambda nv: (-nv[1], nv[0]))
    return scored[:k]


# --- binary serialization ------------------------------------------------------


def _write_str(out: list[bytes], s: str):
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise EmbeddingError(f"string too long to serialize ({len(raw)} bytes)")
    out.append(struct.pack("<H", len(raw)))
    out.append(raw)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise EmbeddingError("truncated file")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def string(self) -> str:
        return self.take(self.u16()).decode("utf-8")

    def f32s(self, n: int) -> np.ndarray:
        return np.frombuffer(self.take(4 * n), dtype="<f4").copy()


def save_model(model: EmbeddingModel) -> bytes:
    out: list[bytes] = [MODEL_MAGIC, struct.pack("<I", FORMAT_VERSION)]
    out.append(
        struct.pack(
            "<IIIII",
            model.dimension, model.ngram_min, model.ngram_max, model.buckets,
            len(model.vocab),
        )
    )
    out.append(struct.pack("<q", model.seed))
    tokens = sorted(model.vocab, key=model.vocab.get)
    for i, tok in enumerate(tokens):
        _write_str(out, tok)
        out.append(struct.pack("<Q", model.vocab_counts[i]))
    out.append(np.ascontiguousarray(model.vectors_vocab, dtype="<f4").tobytes())
    used = sorted(model._bucket_vectors)
    out.append(struct.pack("<I", len(used)))
    for b in used:
        out.append(struct.pack("<I", b))
    for b in used:
        out.append(np.ascontiguousarray(model._bucket_vectors[b], dtype="<f4").tobytes())
    return b"".join(out)


def load_model(data: bytes) -> EmbeddingModel:
    r = _Reader(data)
    if r.take(4) != MODEL_MAGIC:
        raise EmbeddingError("not a model file (bad magic)")
    version = r.u32()
    if version != FORMAT_VERSION:
        raise EmbeddingError(f"unsupported model version {version}")
    d, n_min, n_max, buckets, v = struct.unpack("<IIIII", r.take(20))
    seed = struct.unpack("<q", r.take(8))[0]
    vocab: dict[str, int] = {}
    vocab_counts: list[int] = []
    for i in range(v):
        vocab[r.string()] = i
        vocab_counts.append(r.u64())
    vectors_vocab = r.f32s(v * d).reshape(v, d)
    used_n = r.u32()
    ids = [r.u32() for _ in range(used_n)]
    bucket_vectors = {b: r.f32s(d) for b in ids}
    return EmbeddingModel(
        d, n_min, n_max, buckets, vocab, vocab_counts, vectors_vocab,
        bucket_vectors, seed,
    )


def save_index(idx: ClassIndex) -> bytes:
    out: list[bytes] = [INDEX_MAGIC, struct.pack("<I", FORMAT_VERSION)]
    out.append(struct.pack("<II", idx.dimension, len(idx.entries)))
    for name, vec in idx.entries:
        _write_str(out, name)
        out.append(np.ascontiguousarray(vec, dtype="<f4").tobytes())
    return b"".join(out)


def load_index(data: bytes) -> ClassIndex:
    r = _Reader(data)
    if r.take(4) != INDEX_MAGIC:
        raise EmbeddingError("not an index file (bad magic)")
    version = r.u32()
    if version != FORMAT_VERSION:
        raise EmbeddingError(f"unsupported index version {version}")
    d = r.u32()
    count = r.u32()
    entries = tuple((r.string(), r.f32s(d)) for _ in range(count))
    return ClassIndex(d, entries)
