"""Corpus-specific subword word embeddings and mean-pooled post vectors.

Skip-gram with negative sampling over word + hashed character-n-gram rows.
The inner training loop runs in a compiled kernel (``corpuscompare._sgns``)
when the extension is available, otherwise in a mini-batched numpy engine;
selection happens at import time and can be overridden per call.
"""

from __future__ import annotations

import struct
import threading
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .ingest import CleanPost
from .textprep import TokenStream

try:
    from . import _sgns  # compiled extension

    HAVE_FAST_KERNEL = True
except ImportError:  # pragma: no cover - depends on build environment
    _sgns = None
    HAVE_FAST_KERNEL = False

DEFAULT_ENGINE = "fast" if HAVE_FAST_KERNEL else "numpy"

# Post shorter than this many characters are not embedded.
MIN_EMBED_CHARS = 50

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1

MODEL_MAGIC = b"CCEM"
MODEL_VERSION = 1


@dataclass(frozen=True)
class EmbedConfig:
    dim: int = 25
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    min_count: int = 5
    subword_min: int = 3
    subword_max: int = 6
    bucket_count: int = 1 << 21
    learning_rate: float = 0.025
    seed: int = 1

    def validate(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.subword_min > self.subword_max:
            raise ValueError("subword_min must be <= subword_max")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")
        if self.window < 1 or self.negatives < 0 or self.epochs < 1:
            raise ValueError("window >= 1, negatives >= 0, epochs >= 1 required")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U64
    return h


def subword_ngrams(word: str, cfg: EmbedConfig) -> np.ndarray:
    """Bucket indices of the character n-grams of '<word>'.

    Each n-gram (lengths subword_min..subword_max) hashes through FNV-1a
    64-bit modulo bucket_count. Repeated n-gram strings contribute one index,
    first occurrence order.
    """
    if not word:
        raise ValueError("word must be non-empty")
    padded = f"<{word}>"
    seen = {}
    for n in range(cfg.subword_min, cfg.subword_max + 1):
        for i in range(len(padded) - n + 1):
            gram = padded[i : i + n]
            if gram not in seen:
                seen[gram] = fnv1a_64(gram.encode("utf-8")) % cfg.bucket_count
    return np.array(list(seen.values()), dtype=np.int64)


@dataclass
class EmbeddingModel:
    vocab: dict[str, int]
    counts: np.ndarray  # per-vocab-word corpus frequency
    input_vectors: np.ndarray  # (|vocab| + bucket_count) x dim, float32
    output_vectors: np.ndarray  # |vocab| x dim, float32
    config: EmbedConfig
    epoch_losses: list[float] = field(default_factory=list)

    def __post_init__(self):
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _rows(self, word: str) -> np.ndarray:
        idx = self.vocab[word]
        buckets = subword_ngrams(word, self.config) + len(self.vocab)
        return np.concatenate(([idx], buckets))

    def word_vector(self, word: str) -> np.ndarray:
        """In-vocab: mean of the word row and its subword rows.
        Out-of-vocab: sum of the subword bucket rows."""
        with self._lock:
            cached = self._cache.get(word)
        if cached is not None:
            return cached
        if word in self.vocab:
            vec = self.input_vectors[self._rows(word)].mean(axis=0, dtype=np.float64)
        else:
            rows = subword_ngrams(word, self.config) + len(self.vocab)
            vec = self.input_vectors[rows].sum(axis=0, dtype=np.float64)
        vec = vec.astype(np.float32)
        with self._lock:
            self._cache[word] = vec
        return vec


@dataclass(frozen=True)
class DocVector:
    post_id: str
    vector: np.ndarray
    token_count: int


# --- per-pair objective (float64 reference shared by both engines) ---


def _sigmoid(x: np.ndarray | float):
    return 1.0 / (1.0 + np.exp(-x))


def pair_loss(h: np.ndarray, u_pos: np.ndarray, u_negs: np.ndarray) -> float:
    """Loss of one (center, context) pair given negatives.

    h is the subword-summed input vector of the center word; u_pos/u_negs are
    output rows of the context and the sampled negatives.
    """
    loss = np.logaddexp(0.0, -float(np.dot(h, u_pos)))
    for u in np.atleast_2d(u_negs):
        loss += np.logaddexp(0.0, float(np.dot(h, u)))
    return float(loss)


def pair_gradients(
    h: np.ndarray, u_pos: np.ndarray, u_negs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of :func:`pair_loss` wrt h, u_pos, and each negative row."""
    u_negs = np.atleast_2d(u_negs)
    g_pos = _sigmoid(np.dot(h, u_pos)) - 1.0
    g_negs = _sigmoid(u_negs @ h)
    grad_h = g_pos * u_pos + g_negs @ u_negs
    grad_pos = g_pos * h
    grad_negs = g_negs[:, None] * h[None, :]
    return grad_h, grad_pos, grad_negs


# --- vocabulary / corpus encoding shared by the engines ---


@dataclass
class _TrainingData:
    words: list[str]
    counts: np.ndarray
    rows_flat: np.ndarray  # int32; per-word input rows (own row then buckets)
    row_offsets: np.ndarray  # int64, len = vocab+1
    sent_flat: np.ndarray  # int32 vocab indices, sentences concatenated
    sent_offsets: np.ndarray  # int64, len = n_sentences+1
    neg_cdf: np.ndarray  # float64 cumulative unigram^0.75


def _build_training_data(corpus: Sequence[TokenStream], cfg: EmbedConfig) -> _TrainingData:
    freq: Counter[str] = Counter()
    for stream in corpus:
        freq.update(stream.tokens)
    kept = [(w, c) for w, c in freq.items() if c >= cfg.min_count]
    if not kept:
        raise ValueError("empty vocabulary")
    kept.sort(key=lambda wc: (-wc[1], wc[0]))
    words = [w for w, _ in kept]
    counts = np.array([c for _, c in kept], dtype=np.int64)
    index = {w: i for i, w in enumerate(words)}

    rows: list[np.ndarray] = []
    offsets = np.zeros(len(words) + 1, dtype=np.int64)
    for i, w in enumerate(words):
        r = np.concatenate(([i], subword_ngrams(w, cfg) + len(words)))
        rows.append(r.astype(np.int32))
        offsets[i + 1] = offsets[i] + len(r)
    rows_flat = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int32)

    sents: list[np.ndarray] = []
    sent_offsets = [0]
    for stream in corpus:
        enc = np.array([index[t] for t in stream.tokens if t in index], dtype=np.int32)
        if len(enc) == 0:
            continue
        sents.append(enc)
        sent_offsets.append(sent_offsets[-1] + len(enc))
    sent_flat = np.concatenate(sents) if sents else np.zeros(0, dtype=np.int32)

    probs = counts.astype(np.float64) ** 0.75
    neg_cdf = np.cumsum(probs / probs.sum())
    neg_cdf[-1] = 1.0

    return _TrainingData(
        words=words,
        counts=counts,
        rows_flat=rows_flat,
        row_offsets=offsets,
        sent_flat=sent_flat,
        sent_offsets=np.array(sent_offsets, dtype=np.int64),
        neg_cdf=neg_cdf,
    )


def _init_matrices(cfg: EmbedConfig, vocab_size: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed & _U64, 0xE3B]))
    bound = 0.5 / cfg.dim
    inp = rng.random((vocab_size + cfg.bucket_count, cfg.dim), dtype=np.float32)
    inp *= np.float32(2 * bound)
    inp -= np.float32(bound)
    out = np.zeros((vocab_size, cfg.dim), dtype=np.float32)
    return inp, out


def _epoch_seed(seed: int, epoch: int, shard: int = 0) -> int:
    return (seed * 0x9E3779B97F4A7C15 + epoch * 0x2545F4914F6CDD1D + shard) & _U64


def train(
    corpus: Sequence[TokenStream],
    cfg: EmbedConfig = EmbedConfig(),
    engine: str = "auto",
    workers: int = 1,
) -> EmbeddingModel:
    """Train skip-gram/negative-sampling subword embeddings.

    ``engine`` is "auto", "fast" (compiled kernel) or "numpy" (mini-batched
    fallback). With workers == 1 training is deterministic for a fixed seed;
    the fast engine additionally supports lock-free multi-threaded updates
    (non-deterministic) when workers > 1.
    """
    cfg.validate()
    if engine == "auto":
        engine = DEFAULT_ENGINE
    if engine == "fast" and not HAVE_FAST_KERNEL:
        raise RuntimeError("compiled kernel not available; use engine='numpy'")
    if engine not in ("fast", "numpy"):
        raise ValueError(f"unknown engine: {engine!r}")

    data = _build_training_data(corpus, cfg)
    inp, out = _init_matrices(cfg, len(data.words))
    n_positions = len(data.sent_flat)
    total_positions = n_positions * cfg.epochs

    epoch_losses: list[float] = []
    for epoch in range(cfg.epochs):
        positions_done = epoch * n_positions
        if engine == "fast":
            if workers > 1:
                loss_sum, pairs = _train_epoch_fast_parallel(
                    data, inp, out, cfg, epoch, positions_done, total_positions, workers
                )
            else:
                loss_sum, pairs, _ = _sgns.train_epoch(
                    inp,
                    out,
                    data.rows_flat,
                    data.row_offsets,
                    data.sent_flat,
                    data.sent_offsets,
                    data.neg_cdf,
                    cfg.window,
                    cfg.negatives,
                    cfg.learning_rate,
                    total_positions,
                    positions_done,
                    _epoch_seed(cfg.seed, epoch),
                )
        else:
            from . import sgns_numpy

            loss_sum, pairs, _ = sgns_numpy.train_epoch(
                inp,
                out,
                data.rows_flat,
                data.row_offsets,
                data.sent_flat,
                data.sent_offsets,
                data.neg_cdf,
                cfg.window,
                cfg.negatives,
                cfg.learning_rate,
                total_positions,
                positions_done,
                _epoch_seed(cfg.seed, epoch),
            )
        epoch_losses.append(loss_sum / pairs if pairs else 0.0)

    if not np.all(np.isfinite(inp)) or not np.all(np.isfinite(out)):
        raise RuntimeError("training produced non-finite vectors")

    vocab = {w: i for i, w in enumerate(data.words)}
    return EmbeddingModel(
        vocab=vocab,
        counts=data.counts,
        input_vectors=inp,
        output_vectors=out,
        config=cfg,
        epoch_losses=epoch_losses,
    )


def _train_epoch_fast_parallel(data, inp, out, cfg, epoch, positions_done, total_positions, workers):
    """Hogwild-style sharded epoch; bounded interference, non-deterministic."""
    n_sent = len(data.sent_offsets) - 1
    bounds = np.linspace(0, n_sent, workers + 1, dtype=np.int64)
    results: list[tuple[float, int]] = [(0.0, 0)] * workers

    def run(shard: int) -> None:
        lo, hi = bounds[shard], bounds[shard + 1]
        if lo == hi:
            return
        offs = data.sent_offsets[lo : hi + 1]
        base = int(offs[0])
        flat = data.sent_flat[base : int(offs[-1])]
        offs = offs - base
        loss, pairs, _ = _sgns.train_epoch(
            inp,
            out,
            data.rows_flat,
            data.row_offsets,
            flat,
            offs,
            data.neg_cdf,
            cfg.window,
            cfg.negatives,
            cfg.learning_rate,
            total_positions,
            positions_done + base,
            _epoch_seed(cfg.seed, epoch, shard),
        )
        results[shard] = (loss, pairs)

    threads = [threading.Thread(target=run, args=(s,)) for s in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return sum(r[0] for r in results), max(1, sum(r[1] for r in results))


def embed_post(post: CleanPost, model: EmbeddingModel) -> DocVector | None:
    """Mean of token vectors; None for short posts or all-zero token vectors."""
    if post.char_len < MIN_EMBED_CHARS:
        return None
    if not post.tokens:
        return None
    vecs = [model.word_vector(t) for t in post.tokens]
    stacked = np.stack(vecs)
    if not stacked.any():
        return None
    mean = stacked.mean(axis=0, dtype=np.float64).astype(np.float32)
    return DocVector(post_id=post.id, vector=mean, token_count=len(vecs))


def embed_corpus(posts: Sequence[CleanPost], model: EmbeddingModel) -> list[DocVector]:
    out = []
    for p in posts:
        dv = embed_post(p, model)
        if dv is not None:
            out.append(dv)
    return out


# --- persistence (layout documented in docs/file-formats.md) ---


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    cfg = model.config
    vocab_size = len(model.vocab)
    words = sorted(model.vocab, key=model.vocab.get)
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(
            struct.pack(
                "<IIQQIIIIIIqd",
                MODEL_VERSION,
                cfg.dim,
                vocab_size,
                cfg.bucket_count,
                cfg.subword_min,
                cfg.subword_max,
                cfg.window,
                cfg.negatives,
                cfg.epochs,
                cfg.min_count,
                cfg.seed,
                cfg.learning_rate,
            )
        )
        for i, w in enumerate(words):
            raw = w.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<Q", int(model.counts[i])))
        fh.write(np.ascontiguousarray(model.input_vectors, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(model.output_vectors, dtype="<f4").tobytes())


def load_model(path: str | Path) -> EmbeddingModel:
    blob = Path(path).read_bytes()
    if blob[:4] != MODEL_MAGIC:
        raise ValueError(f"not an embedding model file: {path}")
    header = struct.Struct("<IIQQIIIIIIqd")
    (
        version,
        dim,
        vocab_size,
        bucket_count,
        subword_min,
        subword_max,
        window,
        negatives,
        epochs,
        min_count,
        seed,
        learning_rate,
    ) = header.unpack_from(blob, 4)
    if version != MODEL_VERSION:
        raise ValueError(f"unsupported model version {version}")
    pos = 4 + header.size

    words = []
    counts = np.zeros(vocab_size, dtype=np.int64)
    for i in range(vocab_size):
        (ln,) = struct.unpack_from("<H", blob, pos)
        pos += 2
        words.append(blob[pos : pos + ln].decode("utf-8"))
        pos += ln
        (counts[i],) = struct.unpack_from("<Q", blob, pos)
        pos += 8

    cfg = EmbedConfig(
        dim=dim,
        window=window,
        negatives=negatives,
        epochs=epochs,
        min_count=min_count,
        subword_min=subword_min,
        subword_max=subword_max,
        bucket_count=bucket_count,
        learning_rate=learning_rate,
        seed=seed,
    )
    n_in = (vocab_size + bucket_count) * dim
    inp = np.frombuffer(blob, dtype="<f4", count=n_in, offset=pos).reshape(
        vocab_size + bucket_count, dim
    )
    pos += n_in * 4
    out = np.frombuffer(blob, dtype="<f4", count=vocab_size * dim, offset=pos).reshape(
        vocab_size, dim
    )
    return EmbeddingModel(
        vocab={w: i for i, w in enumerate(words)},
        counts=counts,
        input_vectors=inp.copy(),
        output_vectors=out.copy(),
        config=cfg,
    )


# --- doc-vector persistence ---

VECTORS_MAGIC = b"CCDV"


def save_doc_vectors(vectors: Sequence[DocVector], path: str | Path) -> None:
    if not vectors:
        dim = 0
    else:
        dim = len(vectors[0].vector)
    with open(path, "wb") as fh:
        fh.write(VECTORS_MAGIC)
        fh.write(struct.pack("<IQI", 1, len(vectors), dim))
        for dv in vectors:
            raw = dv.post_id.encode("utf-8")
            fh.write(struct.pack("<HI", len(raw), dv.token_count))
            fh.write(raw)
            fh.write(np.ascontiguousarray(dv.vector, dtype="<f4").tobytes())


def load_doc_vectors(path: str | Path) -> list[DocVector]:
    blob = Path(path).read_bytes()
    if blob[:4] != VECTORS_MAGIC:
        raise ValueError(f"not a doc-vector file: {path}")
    version, count, dim = struct.unpack_from("<IQI", blob, 4)
    if version != 1:
        raise ValueError(f"unsupported doc-vector version {version}")
    pos = 4 + struct.calcsize("<IQI")
    out = []
    for _ in range(count):
        ln, token_count = struct.unpack_from("<HI", blob, pos)
        pos += struct.calcsize("<HI")
        post_id = blob[pos : pos + ln].decode("utf-8")
        pos += ln
        vec = np.frombuffer(blob, dtype="<f4", count=dim, offset=pos).copy()
        pos += dim * 4
        out.append(DocVector(post_id=post_id, vector=vec, token_count=token_count))
    return out
