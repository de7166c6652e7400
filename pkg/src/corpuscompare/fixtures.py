"""Synthetic two-corpus fixture with planted clusters, term trends, and sentiment.

Generates two JSONL corpora plus a planted.json sidecar recording the ground
truth: per-post topic labels, exact trend-term counts, figure sentiment
counts, and hashtag counts. Everything is driven by one seed, so the files
are byte-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TOPICS = ("logistics", "efficacy", "trialnews", "distrust", "flucompare")

TOPIC_VOCAB = {
    "logistics": (
        "appointment scheduling pharmacy clinic waitlist registration website portal "
        "booking slots supply shipment delivery queue county eligibility signup "
        "confirmation paperwork logistics distribution center"
    ).split(),
    "efficacy": (
        "efficacy variants immunity antibodies protection effectiveness trials dosage "
        "strains mutation duration studies comparison baseline evidence findings "
        "measurement laboratory cohort interval sample threshold"
    ).split(),
    "trialnews": (
        "headline breaking reported investigation paused suspended adverse reaction "
        "hospitalized volunteer incident monitoring regulators reviewing bulletin "
        "coverage journalists statement agency announcement followup briefing"
    ).split(),
    "distrust": (
        "officials agenda lobbying transparency secrecy accountability politicians "
        "bureaucrats censorship narrative institutions elites skeptics pressure "
        "oversight disclosure hearings motives funding contracts paperwork puppets"
    ).split(),
    "flucompare": (
        "influenza seasonal sniffles statistics comparison ordinary mild symptoms "
        "fever commonplace routine overblown exaggerated hysteria overreaction "
        "recoveries percentages wintertime colds sneezing bedrest chicken"
    ).split(),
}

FILLERS = ("the", "to", "of", "and", "for", "with", "this", "that", "have", "will")

# Exact trend plants: (term, prevalence in corpus A, prevalence in corpus B).
TREND_PLANTS = (
    ("curfew", 0.03, 0.02),
    ("mandate", 0.02, 0.03),
    ("booster", 0.02, 0.02),
)

HASHTAG_PLANTS = {
    "fall2020": (
        ("covid19", 0.10),
        ("election", 0.08),
        ("debate", 0.06),
        ("fluseason", 0.05),
        ("research", 0.04),
        ("safety", 0.03),
        ("holidays", 0.02),
        ("winter", 0.016),
    ),
    "spring2021": (
        ("covid19", 0.11),
        ("vaccinated", 0.09),
        ("lockdown", 0.076),
        ("safety", 0.064),
        ("variant", 0.052),
        ("research", 0.042),
        ("stimulus", 0.032),
        ("reopening", 0.022),
    ),
}

# Per figure: fractions of corpus size for (positive, negative, neutral,
# extreme-positive, extreme-negative); extremes are subsets of pos/neg.
FIGURE_PLANTS = {
    "fall2020": {
        "biden": (0.012, 0.006, 0.006, 0.002, 0.002),
        "trump": (0.008, 0.010, 0.006, 0.002, 0.002),
        "fauci": (0.009, 0.007, 0.004, 0.001, 0.001),
    },
    "spring2021": {
        "biden": (0.008, 0.009, 0.007, 0.002, 0.002),
        "trump": (0.006, 0.014, 0.004, 0.001, 0.003),
        "fauci": (0.008, 0.008, 0.004, 0.001, 0.001),
    },
}

_MILD_POSITIVE = "response was great effective"
_EXTREME_POSITIVE = "response amazing wonderful fantastic brilliant"
_MILD_NEGATIVE = "response was terrible dangerous"
_EXTREME_NEGATIVE = "response terrible horrible disgusting awful"
_NEUTRAL = "response discussed during briefing today"

FRENCH_JUNK = (
    "le gouvernement annonce une nouvelle campagne de vaccination demain matin",
    "je ne prendrai jamais ce vaccin car il me fait peur",
    "les resultats des essais cliniques seront publies la semaine prochaine",
    "nous refusons cette politique sanitaire absurde et dangereuse pour tous",
)
GERMAN_JUNK = "die regierung plant neue impfzentren in allen grossen staedten"


@dataclass(frozen=True)
class FixturePaths:
    corpus_a: Path
    corpus_b: Path
    planted: Path


def _base_text(rng: np.random.Generator, topic: str, short: bool) -> str:
    vocab = TOPIC_VOCAB[topic]
    if short:
        words = list(rng.choice(vocab, size=3, replace=True))
        words.append(FILLERS[int(rng.integers(len(FILLERS)))])
    else:
        n_topic = int(rng.integers(10, 14))
        words = list(rng.choice(vocab, size=n_topic, replace=True))
        for _ in range(4):
            words.insert(int(rng.integers(len(words) + 1)), FILLERS[int(rng.integers(len(FILLERS)))])
    return " ".join(words)


def _decorate_noise(rng: np.random.Generator, text: str) -> str:
    roll = rng.random()
    if roll < 0.05:
        text += " https://t.co/" + "".join(rng.choice(list("abcdefgh0123"), size=8))
    elif roll < 0.10:
        text += " \U0001F489"
    if rng.random() < 0.15:
        text += "!!!"
    if rng.random() < 0.10:
        # sprinkle capitalization; normalization lowercases it away
        words = text.split()
        i = int(rng.integers(len(words)))
        words[i] = words[i].upper()
        text = " ".join(words)
    return text


def _generate_corpus(tag: str, id_prefix: str, n: int, base_date: str, rng: np.random.Generator):
    short_count = max(1, n // 33)
    topics = [TOPICS[i % len(TOPICS)] for i in range(n)]
    perm = rng.permutation(n)
    short_set = set(int(i) for i in perm[n - short_count :])
    decorable = perm[: n - short_count]

    texts: list[str] = []
    seen: set[str] = set()
    for i in range(n):
        text = _base_text(rng, topics[i], short=i in short_set)
        while text in seen:
            text = _base_text(rng, topics[i], short=i in short_set)
        seen.add(text)
        texts.append(text)

    # figure sentiment plants on disjoint posts
    figure_counts: dict[str, dict[str, int]] = {}
    cursor = 0
    for figure, fracs in FIGURE_PLANTS[tag].items():
        pos, neg, neu, xpos, xneg = (int(round(f * n)) for f in fracs)
        figure_counts[figure] = {
            "positive": pos,
            "negative": neg,
            "neutral": neu,
            "extreme_positive": xpos,
            "extreme_negative": xneg,
        }
        specs = (
            [(figure, _EXTREME_POSITIVE)] * xpos
            + [(figure, _MILD_POSITIVE)] * (pos - xpos)
            + [(figure, _EXTREME_NEGATIVE)] * xneg
            + [(figure, _MILD_NEGATIVE)] * (neg - xneg)
            + [(figure, _NEUTRAL)] * neu
        )
        for fig, snippet in specs:
            idx = int(decorable[cursor])
            cursor += 1
            texts[idx] = f"{texts[idx]} {fig} {snippet}"

    # exact-count trend terms
    trend_counts = {}
    for term, frac_a, frac_b in TREND_PLANTS:
        frac = frac_a if tag == "fall2020" else frac_b
        count = int(round(frac * n))
        trend_counts[term] = count
        chosen = rng.choice(n, size=count, replace=False)
        for idx in chosen:
            texts[int(idx)] += f" {term}"

    # exact-count hashtags
    hashtag_counts = {}
    for tag_name, frac in HASHTAG_PLANTS[tag]:
        count = int(round(frac * n))
        hashtag_counts[tag_name] = count
        chosen = rng.choice(n, size=count, replace=False)
        for idx in chosen:
            texts[int(idx)] += f" #{tag_name}"

    posts = []
    labels = {}
    for i in range(n):
        post_id = f"{id_prefix}{i:06d}"
        labels[post_id] = topics[i]
        text = _decorate_noise(rng, texts[i])
        retweeted = bool(rng.random() < 0.2)
        if not retweeted and rng.random() < 0.002:
            text = f"rt @user{int(rng.integers(1000))}: {text}"
        record = {
            "id": post_id,
            "text": text,
            "author_id": f"u{int(rng.integers(0, int(n * 0.7) or 1))}",
            "created_at": f"{base_date}T{(i // 3600) % 24:02d}:{(i // 60) % 60:02d}:{i % 60:02d}Z",
            "lang": "en",
        }
        if retweeted:
            record["retweeted"] = True
        posts.append(record)

    # junk appended last: empties, duplicates of earlier posts, non-English
    junk = []
    for j, text in enumerate(("", "   ", "\t")):
        junk.append({"id": f"{id_prefix}J{j:03d}", "text": text, "author_id": "junk", "created_at": base_date, "lang": "en"})
    for j in range(3):
        junk.append(
            {
                "id": f"{id_prefix}J1{j:02d}",
                "text": posts[j]["text"],
                "author_id": "copycat",
                "created_at": base_date,
                "lang": "en",
            }
        )
    for j, text in enumerate(FRENCH_JUNK + (GERMAN_JUNK,)):
        junk.append({"id": f"{id_prefix}J2{j:02d}", "text": text, "author_id": "junk", "created_at": base_date, "lang": "fr"})

    planted = {
        "labels": labels,
        "trend_counts": trend_counts,
        "hashtag_counts": hashtag_counts,
        "figures": figure_counts,
        "junk_count": len(junk),
    }
    return posts + junk, planted


def generate_fixture(outdir: str | Path, seed: int = 7, posts_per_corpus: int = 5000) -> FixturePaths:
    """Write corpus_fall.jsonl, corpus_spring.jsonl, and planted.json under outdir."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xF1C5]))

    n = posts_per_corpus
    posts_a, planted_a = _generate_corpus("fall2020", "F", n, "2020-10-19", rng)
    posts_b, planted_b = _generate_corpus("spring2021", "S", n, "2021-02-18", rng)

    path_a = outdir / "corpus_fall.jsonl"
    path_b = outdir / "corpus_spring.jsonl"
    for path, posts in ((path_a, posts_a), (path_b, posts_b)):
        with open(path, "w", encoding="utf-8") as fh:
            for p in posts:
                fh.write(json.dumps(p, ensure_ascii=True, sort_keys=True))
                fh.write("\n")

    planted_path = outdir / "planted.json"
    planted_path.write_text(
        json.dumps(
            {
                "n": n,
                "seed": seed,
                "topics": list(TOPICS),
                "per_corpus": {"fall2020": planted_a, "spring2021": planted_b},
            },
            indent=1,
            sort_keys=True,
        ),
        encoding="utf-8",
    )
    return FixturePaths(corpus_a=path_a, corpus_b=path_b, planted=planted_path)
