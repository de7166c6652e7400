"""Rule-augmented lexicon sentiment scoring with bucket thresholds and extreme subsets.

A reimplementation of the core of the classic social-media lexicon scorer:
token valences, booster words within two tokens, negation within three
tokens, and the s/sqrt(s^2+15) compound normalization. Rules keyed on
punctuation or capitalization are deliberately absent; normalized posts
are lowercase and punctuation-free, so they could never fire.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .ingest import CleanPost

# Empirical valence shift contributed by a booster word.
BOOSTER_INCREMENT = 0.293
# Scaling of a booster two tokens back.
SECOND_BOOSTER_SCALE = 0.95
# Valence multiplier when a negation precedes within three tokens.
NEGATION_SCALAR = -0.74
# Normalization constant approximating the maximum expected valence sum.
ALPHA = 15.0

POSITIVE_THRESHOLD = 0.05
NEGATIVE_THRESHOLD = -0.05
EXTREME_THRESHOLD = 0.9

BUCKET_POSITIVE = "positive"
BUCKET_NEGATIVE = "negative"
BUCKET_NEUTRAL = "neutral"


@dataclass(frozen=True)
class SentimentLexicon:
    valences: dict[str, float]
    boosters: dict[str, float]
    negations: frozenset[str]

    def __post_init__(self):
        if not self.valences:
            raise ValueError("lexicon must be non-empty")
        for term, v in self.valences.items():
            if not math.isfinite(v):
                raise ValueError(f"non-finite valence for {term!r}")

    @classmethod
    def load(
        cls,
        lexicon_path: str | Path | None = None,
        boosters_path: str | Path | None = None,
        negations_path: str | Path | None = None,
    ) -> "SentimentLexicon":
        """Load from tab-separated term/valence files; bundled defaults when paths are None."""
        return cls(
            valences=_load_tsv(lexicon_path, "sentiment_lexicon.tsv"),
            boosters=_load_tsv(boosters_path, "sentiment_boosters.tsv"),
            negations=frozenset(_load_lines(negations_path, "sentiment_negations.txt")),
        )


def _read_data(path: str | Path | None, bundled_name: str) -> str:
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    return resources.files("corpuscompare.data").joinpath(bundled_name).read_text(encoding="utf-8")


def _load_tsv(path: str | Path | None, bundled_name: str) -> dict[str, float]:
    out = {}
    for line in _read_data(path, bundled_name).splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        term, value = line.split("\t")
        out[term.strip()] = float(value)
    return out


def _load_lines(path: str | Path | None, bundled_name: str) -> list[str]:
    return [t.strip() for t in _read_data(path, bundled_name).splitlines() if t.strip()]


def score(tokens: Sequence[str], lexicon: SentimentLexicon) -> float:
    """Compound sentiment of a lowercased token stream, in [-1, +1]."""
    total = 0.0
    for i, tok in enumerate(tokens):
        valence = lexicon.valences.get(tok)
        if valence is None or valence == 0.0:
            continue
        sign = 1.0 if valence > 0 else -1.0
        for dist, scale in ((1, 1.0), (2, SECOND_BOOSTER_SCALE)):
            j = i - dist
            if j >= 0:
                incr = lexicon.boosters.get(tokens[j])
                if incr is not None:
                    valence += sign * incr * scale
        if any(tokens[j] in lexicon.negations for j in range(max(0, i - 3), i)):
            valence *= NEGATION_SCALAR
        total += valence
    if total == 0.0:
        return 0.0
    compound = total / math.sqrt(total * total + ALPHA)
    return max(-1.0, min(1.0, compound))


def bucketize(compound: float) -> tuple[str, bool]:
    """(bucket, extreme) per the strict 0.05 / 0.9 thresholds."""
    if not -1.0 <= compound <= 1.0:
        raise ValueError(f"compound score out of range: {compound}")
    if compound > POSITIVE_THRESHOLD:
        bucket = BUCKET_POSITIVE
    elif compound < NEGATIVE_THRESHOLD:
        bucket = BUCKET_NEGATIVE
    else:
        bucket = BUCKET_NEUTRAL
    return bucket, abs(compound) > EXTREME_THRESHOLD


@dataclass(frozen=True)
class SentimentResult:
    post_id: str
    compound: float
    bucket: str
    extreme: bool


def score_post(post: CleanPost, lexicon: SentimentLexicon) -> SentimentResult:
    compound = score(post.tokens, lexicon)
    bucket, extreme = bucketize(compound)
    return SentimentResult(post_id=post.id, compound=compound, bucket=bucket, extreme=extreme)


@dataclass(frozen=True)
class FigureReport:
    figure: str
    positive: float
    negative: float
    neutral: float
    total: int


def figure_report(
    corpus: Sequence[CleanPost],
    figures: Sequence[str],
    lexicon: SentimentLexicon,
) -> list[FigureReport]:
    """Bucket ratios of posts mentioning each figure as an exact token.

    A post may count toward several figures; ratios are rounded to 2 decimals
    and are all zero when a figure is never mentioned.
    """
    if not figures:
        raise ValueError("figures must be non-empty")
    results = {p.id: score_post(p, lexicon) for p in corpus}
    reports = []
    for figure in figures:
        target = figure.lower()
        counts = {BUCKET_POSITIVE: 0, BUCKET_NEGATIVE: 0, BUCKET_NEUTRAL: 0}
        total = 0
        for p in corpus:
            if target in p.tokens:
                counts[results[p.id].bucket] += 1
                total += 1
        if total:
            reports.append(
                FigureReport(
                    figure=figure,
                    positive=round(counts[BUCKET_POSITIVE] / total, 2),
                    negative=round(counts[BUCKET_NEGATIVE] / total, 2),
                    neutral=round(counts[BUCKET_NEUTRAL] / total, 2),
                    total=total,
                )
            )
        else:
            reports.append(FigureReport(figure=figure, positive=0.0, negative=0.0, neutral=0.0, total=0))
    return reports


def extreme_samples(
    corpus: Sequence[CleanPost],
    figure: str,
    polarity: str,
    n: int,
    seed: int,
    lexicon: SentimentLexicon,
) -> list[CleanPost]:
    """Seeded sample of posts mentioning the figure with |compound| past 0.9."""
    if polarity not in (BUCKET_POSITIVE, BUCKET_NEGATIVE):
        raise ValueError(f"polarity must be positive or negative, got {polarity!r}")
    target = figure.lower()
    pool = []
    for p in sorted(corpus, key=lambda p: p.id):
        if target not in p.tokens:
            continue
        compound = score(p.tokens, lexicon)
        if polarity == BUCKET_POSITIVE and compound > EXTREME_THRESHOLD:
            pool.append(p)
        elif polarity == BUCKET_NEGATIVE and compound < -EXTREME_THRESHOLD:
            pool.append(p)
    if len(pool) <= n:
        return pool
    import numpy as np

    rng = np.random.default_rng(np.random.SeedSequence([seed & (2**63 - 1), 0x5E17]))
    idx = rng.choice(len(pool), size=n, replace=False)
    return [pool[i] for i in idx]


def results_to_json(results: Iterable[SentimentResult]) -> str:
    return json.dumps(
        [
            {"post_id": r.post_id, "compound": r.compound, "bucket": r.bucket, "extreme": r.extreme}
            for r in results
        ],
        sort_keys=True,
    )
