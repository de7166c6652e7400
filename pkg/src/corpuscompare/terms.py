"""Keyword/hashtag ranking, synonym grouping, tf-idf, and cross-corpus trend analytics."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import textprep
from .ingest import CleanPost
from .textprep import TokenStream

# Keywords tracked across corpora for the organization comparison.
ORGANIZATION_TERMS = ("pfizer", "moderna", "astrazeneca", "johnsonjohnson")
# Keywords with emotional connotation tracked across corpora.
EMOTION_TERMS = ("trust", "lie", "concern", "worry", "forced", "hope", "amazing", "scare", "doubt")

DEFAULT_MAX_FEATURES = 2000
DEFAULT_NGRAM_RANGE = (1, 2)


class GroupingTable:
    """Surface term -> group key mapping; identity outside the table."""

    def __init__(self, mapping: dict[str, str]):
        for surface, key in mapping.items():
            target = mapping.get(key, key)
            if target != key:
                raise ValueError(f"group key {key!r} is itself mapped to {target!r}")
        self._mapping = dict(mapping)

    def apply(self, term: str) -> str:
        return self._mapping.get(term, term)

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self._mapping)

    @classmethod
    def from_file(cls, path: str | Path) -> "GroupingTable":
        """Parse ``group_key<TAB>surface1/surface2/...`` lines."""
        return cls(_parse_grouping(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def default(cls) -> "GroupingTable":
        text = resources.files("corpuscompare.data").joinpath("grouping_default.tsv").read_text(
            encoding="utf-8"
        )
        return cls(_parse_grouping(text))


def _parse_grouping(text: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            key, surfaces = line.split("\t", 1)
        except ValueError:
            raise ValueError(f"grouping line {lineno} is not 'key<TAB>surfaces'") from None
        key = key.strip()
        for surface in surfaces.split("/"):
            surface = surface.strip()
            if surface:
                mapping[surface] = key
    return mapping


def apply_grouping(term: str, table: GroupingTable) -> str:
    return table.apply(term)


@dataclass(frozen=True)
class TermRecord:
    group_key: str
    kind: str  # "keyword" | "hashtag"
    tweet_count: int
    prevalence: float
    dataset_tag: str


@dataclass(frozen=True)
class RankDelta:
    group_key: str
    rank_a: int | None
    rank_b: int | None
    prevalence_a: float
    prevalence_b: float
    pp_change: float
    rel_change: float | None


def keyword_tokens(post: CleanPost, stops: frozenset[str], extra: frozenset[str]) -> list[str]:
    """Keyword-bearing tokens of a post: hashtags contribute their bare tag,
    mentions are dropped, stopwords removed; order preserved."""
    out = []
    for tok in post.tokens:
        if tok.startswith("@"):
            continue
        word = tok.lstrip("#")
        if word and word not in stops and word not in extra:
            out.append(word)
    return out


def term_prevalence(
    corpus: Sequence[CleanPost],
    kind: str,
    table: GroupingTable,
    extra_stopwords: Iterable[str] | None = None,
) -> list[TermRecord]:
    """Per-group tweet counts and prevalences; each post counts once per group key.

    Keywords iterate tokens after stopword removal and grouping; hashtags
    iterate the extracted tags after grouping. ``extra_stopwords`` defaults to
    the bundled task-specific list.
    """
    if kind not in ("keyword", "hashtag"):
        raise ValueError(f"unknown term kind: {kind!r}")
    if not corpus:
        return []
    tag = corpus[0].dataset_tag
    stops = textprep.english_stopwords()
    extra = frozenset(extra_stopwords) if extra_stopwords is not None else textprep.task_stopwords()

    counts: Counter[str] = Counter()
    for post in corpus:
        if kind == "keyword":
            keys = {table.apply(w) for w in keyword_tokens(post, stops, extra)}
        else:
            keys = {table.apply(t) for t in post.hashtags}
        counts.update(keys)

    n = len(corpus)
    records = [
        TermRecord(group_key=k, kind=kind, tweet_count=c, prevalence=c / n, dataset_tag=tag)
        for k, c in counts.items()
    ]
    records.sort(key=lambda r: (-r.tweet_count, r.group_key))
    return records


@dataclass
class TfidfModel:
    vocabulary: tuple[str, ...]
    idf: np.ndarray
    n_docs: int
    max_features: int
    ngram_range: tuple[int, int]

    def __post_init__(self):
        self.term_index = {t: i for i, t in enumerate(self.vocabulary)}

    def transform(self, streams: Sequence[TokenStream]) -> np.ndarray:
        """L2-normalized tf*idf row per document (dense)."""
        X = np.zeros((len(streams), len(self.vocabulary)), dtype=np.float64)
        for row, stream in enumerate(streams):
            for feat, cnt in _feature_counts(stream.tokens, self.ngram_range).items():
                col = self.term_index.get(feat)
                if col is not None:
                    X[row, col] = cnt * self.idf[col]
        norms = np.linalg.norm(X, axis=1)
        nonzero = norms > 0
        X[nonzero] /= norms[nonzero, None]
        return X


def _feature_counts(tokens: Sequence[str], ngram_range: tuple[int, int]) -> Counter:
    lo, hi = ngram_range
    feats: Counter[str] = Counter()
    for n in range(lo, hi + 1):
        if n == 1:
            feats.update(tokens)
        else:
            for i in range(len(tokens) - n + 1):
                feats[" ".join(tokens[i : i + n])] += 1
    return feats


def fit_tfidf(
    corpus: Sequence[TokenStream],
    max_features: int = DEFAULT_MAX_FEATURES,
    ngram_range: tuple[int, int] = DEFAULT_NGRAM_RANGE,
) -> TfidfModel:
    """Fit vocabulary and idf weights over 1/2-gram features.

    Vocabulary keeps the ``max_features`` most frequent features (total
    occurrences, ties broken lexicographically) and is ordered the same way.
    idf(t) = ln((1+N)/(1+df(t))) + 1.
    """
    if not corpus:
        raise ValueError("empty corpus")
    totals: Counter[str] = Counter()
    df: Counter[str] = Counter()
    for stream in corpus:
        counts = _feature_counts(stream.tokens, ngram_range)
        totals.update(counts)
        df.update(counts.keys())

    ordered = sorted(totals, key=lambda t: (-totals[t], t))[:max_features]
    n = len(corpus)
    idf = np.array([math.log((1 + n) / (1 + df[t])) + 1.0 for t in ordered], dtype=np.float64)
    return TfidfModel(
        vocabulary=tuple(ordered),
        idf=idf,
        n_docs=n,
        max_features=max_features,
        ngram_range=ngram_range,
    )


def _prevalence_maps(records: Sequence[TermRecord]) -> dict[str, float]:
    return {r.group_key: r.prevalence for r in records}


def _delta(key: str, pa: float, pb: float, rank_a: int | None = None, rank_b: int | None = None) -> RankDelta:
    return RankDelta(
        group_key=key,
        rank_a=rank_a,
        rank_b=rank_b,
        prevalence_a=pa,
        prevalence_b=pb,
        pp_change=100.0 * (pb - pa),
        rel_change=(pb - pa) / pa if pa > 0 else None,
    )


def rank_diff(
    records_a: Sequence[TermRecord],
    records_b: Sequence[TermRecord],
    top_n: int,
) -> list[RankDelta]:
    """Movement of the union of both corpora's top-n keys; ranks absent outside a top-n."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    ranks_a = {r.group_key: i + 1 for i, r in enumerate(records_a[:top_n])}
    ranks_b = {r.group_key: i + 1 for i, r in enumerate(records_b[:top_n])}
    prev_a = _prevalence_maps(records_a)
    prev_b = _prevalence_maps(records_b)

    keys = set(ranks_a) | set(ranks_b)
    deltas = [
        _delta(k, prev_a.get(k, 0.0), prev_b.get(k, 0.0), ranks_a.get(k), ranks_b.get(k))
        for k in keys
    ]
    inf = float("inf")
    deltas.sort(key=lambda d: (d.rank_a if d.rank_a else inf, d.rank_b if d.rank_b else inf, d.group_key))
    return deltas


def shared_keyword_change(
    records_a: Sequence[TermRecord],
    records_b: Sequence[TermRecord],
    min_prevalence: float,
) -> list[RankDelta]:
    """Prevalence change for keys reaching ``min_prevalence`` in at least one corpus.

    Sorted by prevalence in the first corpus, descending.
    """
    if not 0.0 <= min_prevalence <= 1.0:
        raise ValueError("min_prevalence must be within [0, 1]")
    prev_a = _prevalence_maps(records_a)
    prev_b = _prevalence_maps(records_b)
    keys = set(prev_a) | set(prev_b)
    deltas = [
        _delta(k, prev_a.get(k, 0.0), prev_b.get(k, 0.0))
        for k in keys
        if prev_a.get(k, 0.0) >= min_prevalence or prev_b.get(k, 0.0) >= min_prevalence
    ]
    deltas.sort(key=lambda d: (-d.prevalence_a, d.group_key))
    return deltas


def track_term_set(
    records_a: Sequence[TermRecord],
    records_b: Sequence[TermRecord],
    terms: Sequence[str],
) -> list[RankDelta]:
    """Deltas for exactly the given group keys, in the given order; absent keys count as prevalence 0."""
    if not terms:
        raise ValueError("terms must be non-empty")
    seen = set()
    for t in terms:
        if t in seen:
            raise ValueError("duplicate tracked term")
        seen.add(t)
    prev_a = _prevalence_maps(records_a)
    prev_b = _prevalence_maps(records_b)
    return [_delta(t, prev_a.get(t, 0.0), prev_b.get(t, 0.0)) for t in terms]


# --- CSV serialization (stable column order) ---

TERM_RECORD_COLUMNS = ("group_key", "kind", "tweet_count", "prevalence", "dataset_tag")
RANK_DELTA_COLUMNS = (
    "group_key",
    "rank_a",
    "rank_b",
    "prevalence_a",
    "prevalence_b",
    "pp_change",
    "rel_change",
)


def records_to_csv(records: Sequence[TermRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(TERM_RECORD_COLUMNS)
    for r in records:
        w.writerow([r.group_key, r.kind, r.tweet_count, repr(r.prevalence), r.dataset_tag])
    return buf.getvalue()


def records_from_csv(text: str) -> list[TermRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != TERM_RECORD_COLUMNS:
        raise ValueError("not a term-record CSV")
    return [
        TermRecord(
            group_key=r[0],
            kind=r[1],
            tweet_count=int(r[2]),
            prevalence=float(r[3]),
            dataset_tag=r[4],
        )
        for r in rows[1:]
        if r
    ]


def deltas_to_csv(deltas: Sequence[RankDelta]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(RANK_DELTA_COLUMNS)
    for d in deltas:
        w.writerow(
            [
                d.group_key,
                "" if d.rank_a is None else d.rank_a,
                "" if d.rank_b is None else d.rank_b,
                repr(d.prevalence_a),
                repr(d.prevalence_b),
                repr(d.pp_change),
                "" if d.rel_change is None else repr(d.rel_change),
            ]
        )
    return buf.getvalue()


def deltas_from_csv(text: str) -> list[RankDelta]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != RANK_DELTA_COLUMNS:
        raise ValueError("not a rank-delta CSV")
    out = []
    for r in rows[1:]:
        if not r:
            continue
        out.append(
            RankDelta(
                group_key=r[0],
                rank_a=int(r[1]) if r[1] else None,
                rank_b=int(r[2]) if r[2] else None,
                prevalence_a=float(r[3]),
                prevalence_b=float(r[4]),
                pp_change=float(r[5]),
                rel_change=float(r[6]) if r[6] else None,
            )
        )
    return out
