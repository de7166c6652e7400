"""Tokenization, stopword handling, and hashtag extraction shared by the analytics modules."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

# A hashtag is '#' followed by lowercase alphanumerics or underscores; any
# other character terminates the tag. The '#' must sit at a word start
# (mid-token '#' as in "abc#x" or "@#x" does not open a tag).
HASHTAG_RE = re.compile(r"(?<![\w#@'])#([a-z0-9_]+)")


@dataclass(frozen=True)
class TokenStream:
    """Lowercased, whitespace-free tokens of a single post."""

    post_id: str
    tokens: tuple[str, ...]


def tokenize(text: str) -> list[str]:
    """Split normalized text into tokens.

    Splits on whitespace, keeps '#'- and '@'-prefixed tokens intact, strips
    leading/trailing apostrophes, and drops anything that ends up empty.
    """
    out = []
    for raw in text.split():
        tok = raw.strip("'")
        if tok:
            out.append(tok)
    return out


def remove_stopwords(
    tokens: Iterable[str],
    extra_stopwords: Iterable[str] = (),
    base: frozenset[str] | None = None,
) -> list[str]:
    """Drop stopwords (bundled English list plus ``extra_stopwords``), preserving order."""
    stops = english_stopwords() if base is None else base
    extra = set(extra_stopwords)
    return [t for t in tokens if t not in stops and t not in extra]


def extract_hashtags(text: str) -> list[str]:
    """Return lowercased hashtags without '#', in order, duplicates preserved."""
    return HASHTAG_RE.findall(text.lower())


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a one-term-per-line stopword file."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(t.strip() for t in lines if t.strip())


def _bundled(name: str) -> str:
    return resources.files("corpuscompare.data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def english_stopwords() -> frozenset[str]:
    """The bundled 200-word English stopword list."""
    return frozenset(t for t in _bundled("stopwords_english.txt").split() if t)


@lru_cache(maxsize=None)
def task_stopwords() -> frozenset[str]:
    """Collection-keyword unigrams treated as task-specific stopwords.

    Organization names are deliberately not in this list; they are analysis
    targets, not noise.
    """
    return frozenset(t for t in _bundled("stopwords_task.txt").split() if t)


@lru_cache(maxsize=None)
def collection_phrases() -> tuple[str, ...]:
    """The archived-collection keyword phrases usable as an offline filter."""
    lines = _bundled("collection_phrases.txt").splitlines()
    return tuple(p.strip() for p in lines if p.strip())


def streams_from_posts(posts: Sequence) -> list[TokenStream]:
    """Adapt CleanPost-like objects (``.id``, ``.tokens``) to TokenStream."""
    return [TokenStream(post_id=p.id, tokens=tuple(p.tokens)) for p in posts]
