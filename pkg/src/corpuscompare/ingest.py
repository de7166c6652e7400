"""Load archived post corpora, apply the filtering cascade, and compute corpus statistics."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from . import textprep


class DataError(Exception):
    """A data-level failure (bad path, unusable input); maps to CLI exit code 2."""


@dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    author_id: str = ""
    created_at: str = ""
    lang_hint: str | None = None
    retweet_flag: bool | None = None


@dataclass(frozen=True)
class CleanPost:
    id: str
    normalized_text: str
    tokens: tuple[str, ...]
    hashtags: tuple[str, ...]
    char_len: int
    is_retweet: bool
    dataset_tag: str
    author_id: str = ""


@dataclass
class LoadResult:
    posts: list[RawPost]
    skipped_count: int
    path: str


@dataclass
class FilterReport:
    input_count: int = 0
    na_dropped: int = 0
    dup_dropped: int = 0
    non_english_dropped: int = 0
    survivors: int = 0

    def to_dict(self) -> dict:
        return {
            "input_count": self.input_count,
            "na_dropped": self.na_dropped,
            "dup_dropped": self.dup_dropped,
            "non_english_dropped": self.non_english_dropped,
            "survivors": self.survivors,
        }


@dataclass(frozen=True)
class CategoryCounts:
    n: int
    unique_users: int
    hashtags_total: int
    hashtags_unique: int


@dataclass(frozen=True)
class CorpusStats:
    dataset_tag: str
    retweets: CategoryCounts
    nonretweets: CategoryCounts
    total: CategoryCounts

    def to_dict(self) -> dict:
        def cat(c: CategoryCounts) -> dict:
            return {
                "n": c.n,
                "unique_users": c.unique_users,
                "hashtags_total": c.hashtags_total,
                "hashtags_unique": c.hashtags_unique,
            }

        return {
            "dataset_tag": self.dataset_tag,
            "retweets": cat(self.retweets),
            "nonretweets": cat(self.nonretweets),
            "total": cat(self.total),
        }


URL_RE = re.compile(r"(?:https?://|www\.)\S+")
# Emoji code points handled bit-exactly; see docs/file-formats.md.
EMOJI_RE = re.compile("[\U0001F300-\U0001FAFF☀-➿️‍]")
# Permitted characters after normalization: letters, digits, whitespace,
# '#', '@', apostrophe. '\w' covers letters+digits but also '_', excluded here.
DISALLOWED_RE = re.compile(r"[^\w\s#@']|_")
WS_RE = re.compile(r"\s+")

# Minimum fraction of tokens that must be English stopwords for the
# language heuristic to call a post English.
ENGLISH_STOPWORD_RATIO = 0.12
ENGLISH_MIN_TOKENS = 3

_HEURISTIC_STRIP_RE = re.compile(r"^\W+|\W+$")


def load_corpus(
    path: str | Path,
    dataset_tag: str,
    keyword_filter: Sequence[str] | None = None,
) -> LoadResult:
    """Read a JSONL corpus file into RawPosts.

    Malformed lines are skipped and counted, never fatal. With
    ``keyword_filter``, only posts whose lowercased text contains at least one
    filter phrase are kept.
    """
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read corpus file: {path}") from exc

    phrases = [p.lower() for p in keyword_filter] if keyword_filter else None
    posts: list[RawPost] = []
    skipped = 0
    for line in raw_lines:
        if not line.strip():
            continue
        post = _parse_line(line)
        if post is None:
            skipped += 1
            continue
        if phrases is not None:
            lowered = post.text.lower()
            if not any(p in lowered for p in phrases):
                continue
        posts.append(post)
    return LoadResult(posts=posts, skipped_count=skipped, path=str(path))


def _parse_line(line: str) -> RawPost | None:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(obj, dict):
        return None
    post_id = obj.get("id")
    if not isinstance(post_id, str) or not post_id:
        return None
    text = obj.get("text")
    if text is None:
        text = ""
    if not isinstance(text, str):
        return None
    retweeted = obj.get("retweeted")
    if retweeted is not None and not isinstance(retweeted, bool):
        retweeted = None
    return RawPost(
        id=post_id,
        text=text,
        author_id=str(obj.get("author_id") or ""),
        created_at=str(obj.get("created_at") or ""),
        lang_hint=obj.get("lang") if isinstance(obj.get("lang"), str) else None,
        retweet_flag=retweeted,
    )


def is_english(text: str, stopwords: frozenset[str] | None = None) -> bool:
    """Stopword-ratio language heuristic.

    A post is English when >= 12% of its tokens (at least one) appear in the
    bundled English stopword list. Posts with fewer than 3 tokens pass by
    default.
    """
    stops = stopwords if stopwords is not None else textprep.english_stopwords()
    tokens = [_HEURISTIC_STRIP_RE.sub("", w) for w in text.lower().split()]
    tokens = [t for t in tokens if t]
    if len(tokens) < ENGLISH_MIN_TOKENS:
        return True
    hits = sum(1 for t in tokens if t in stops)
    return hits >= 1 and hits >= ENGLISH_STOPWORD_RATIO * len(tokens)


def _dedup_key(text: str) -> str:
    # Duplicate = same tweet text modulo whitespace, before any normalization.
    return WS_RE.sub(" ", text).strip()


def filter_cascade(posts: Sequence[RawPost]) -> tuple[list[RawPost], FilterReport]:
    """Drop empty-text posts, exact-duplicate texts (first occurrence kept), then non-English posts."""
    report = FilterReport(input_count=len(posts))

    non_empty = []
    for p in posts:
        if p.text.strip():
            non_empty.append(p)
        else:
            report.na_dropped += 1

    seen: set[str] = set()
    unique: list[RawPost] = []
    for p in non_empty:
        key = _dedup_key(p.text)
        if key in seen:
            report.dup_dropped += 1
        else:
            seen.add(key)
            unique.append(p)

    survivors = []
    for p in unique:
        if is_english(p.text):
            survivors.append(p)
        else:
            report.non_english_dropped += 1

    report.survivors = len(survivors)
    return survivors, report


def normalize(post: RawPost, dataset_tag: str) -> CleanPost | None:
    """Lowercase, strip URLs/emoji/punctuation, extract hashtags, tokenize.

    Hashtags are pulled from the URL-free lowercased text before character
    stripping so tags like covid_19 keep their underscore. Returns None when
    nothing is left after stripping.
    """
    lowered = post.text.lower()
    is_retweet = post.retweet_flag if post.retweet_flag is not None else lowered.startswith("rt @")

    no_url = URL_RE.sub(" ", lowered)
    hashtags = tuple(textprep.extract_hashtags(no_url))

    stripped = EMOJI_RE.sub(" ", no_url)
    stripped = DISALLOWED_RE.sub(" ", stripped)
    normalized = WS_RE.sub(" ", stripped).strip()
    if not normalized:
        return None

    tokens = tuple(textprep.tokenize(normalized))
    return CleanPost(
        id=post.id,
        normalized_text=normalized,
        tokens=tokens,
        hashtags=hashtags,
        char_len=len(normalized),
        is_retweet=bool(is_retweet),
        dataset_tag=dataset_tag,
        author_id=post.author_id,
    )


def normalize_corpus(posts: Sequence[RawPost], dataset_tag: str) -> list[CleanPost]:
    out = []
    for p in posts:
        clean = normalize(p, dataset_tag)
        if clean is not None:
            out.append(clean)
    return out


def corpus_stats(posts: Sequence[CleanPost], dataset_tag: str | None = None) -> CorpusStats:
    """Tweet/user/hashtag counts split by retweet, non-retweet, and total."""
    if dataset_tag is None:
        dataset_tag = posts[0].dataset_tag if posts else ""

    def count(sub: Iterable[CleanPost]) -> CategoryCounts:
        n = 0
        users = set()
        tags_total = 0
        tags = set()
        for p in sub:
            n += 1
            users.add(p.author_id)
            tags_total += len(p.hashtags)
            tags.update(p.hashtags)
        return CategoryCounts(
            n=n,
            unique_users=len(users),
            hashtags_total=tags_total,
            hashtags_unique=len(tags),
        )

    retweets = [p for p in posts if p.is_retweet]
    nonretweets = [p for p in posts if not p.is_retweet]
    return CorpusStats(
        dataset_tag=dataset_tag,
        retweets=count(retweets),
        nonretweets=count(nonretweets),
        total=count(posts),
    )


def write_clean_posts(posts: Sequence[CleanPost], path: str | Path) -> None:
    """Persist CleanPosts as JSONL (schema in docs/file-formats.md)."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in posts:
            fh.write(
                json.dumps(
                    {
                        "id": p.id,
                        "normalized_text": p.normalized_text,
                        "tokens": list(p.tokens),
                        "hashtags": list(p.hashtags),
                        "char_len": p.char_len,
                        "is_retweet": p.is_retweet,
                        "dataset_tag": p.dataset_tag,
                        "author_id": p.author_id,
                    },
                    ensure_ascii=True,
                )
            )
            fh.write("\n")


def read_clean_posts(path: str | Path) -> list[CleanPost]:
    """Load CleanPosts written by :func:`write_clean_posts`."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read clean-post file: {path}") from exc
    out = []
    for line in lines:
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            out.append(
                CleanPost(
                    id=obj["id"],
                    normalized_text=obj["normalized_text"],
                    tokens=tuple(obj["tokens"]),
                    hashtags=tuple(obj["hashtags"]),
                    char_len=obj["char_len"],
                    is_retweet=obj["is_retweet"],
                    dataset_tag=obj["dataset_tag"],
                    author_id=obj.get("author_id", ""),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"malformed clean-post line in {path}") from exc
    return out
