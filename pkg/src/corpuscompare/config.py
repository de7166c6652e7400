"""TOML pipeline configuration with environment-variable overrides."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

ENV_PREFIX = "CORPUSCOMPARE_"


@dataclass
class CorpusSpec:
    path: str = ""
    tag: str = ""
    k: int = 7


@dataclass
class PipelineConfig:
    corpus_a: CorpusSpec = field(default_factory=lambda: CorpusSpec(tag="fall2020", k=7))
    corpus_b: CorpusSpec = field(default_factory=lambda: CorpusSpec(tag="spring2021", k=5))
    keyword_filter: bool = False
    # embedding
    dim: int = 25
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    min_count: int = 5
    subword_min: int = 3
    subword_max: int = 6
    bucket_count: int = 1 << 21
    learning_rate: float = 0.025
    # terms
    top_n: int = 30
    max_features: int = 2000
    min_prevalence: float = 0.0001
    emotion_min_prevalence: float = 0.00001
    # clustering
    n_init: int = 10
    max_iter: int = 300
    tol: float = 1e-4
    sample_n: int = 100
    # sentiment
    figures: tuple[str, ...] = ("biden", "trump", "fauci")
    extreme_n: int = 10
    # run control
    seed: int = 42
    threads: int = 1

    def to_dict(self) -> dict:
        return {
            "corpus_a": {"path": self.corpus_a.path, "tag": self.corpus_a.tag, "k": self.corpus_a.k},
            "corpus_b": {"path": self.corpus_b.path, "tag": self.corpus_b.tag, "k": self.corpus_b.k},
            "ingest": {"keyword_filter": self.keyword_filter},
            "embed": {
                "dim": self.dim,
                "window": self.window,
                "negatives": self.negatives,
                "epochs": self.epochs,
                "min_count": self.min_count,
                "subword_min": self.subword_min,
                "subword_max": self.subword_max,
                "bucket_count": self.bucket_count,
                "learning_rate": self.learning_rate,
            },
            "terms": {
                "top_n": self.top_n,
                "max_features": self.max_features,
                "min_prevalence": self.min_prevalence,
                "emotion_min_prevalence": self.emotion_min_prevalence,
            },
            "cluster": {
                "n_init": self.n_init,
                "max_iter": self.max_iter,
                "tol": self.tol,
                "sample_n": self.sample_n,
            },
            "sentiment": {"figures": list(self.figures), "extreme_n": self.extreme_n},
            "run": {"seed": self.seed, "threads": self.threads},
        }

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        ).hexdigest()


_SECTION_FIELDS = {
    "ingest": ("keyword_filter",),
    "embed": (
        "dim",
        "window",
        "negatives",
        "epochs",
        "min_count",
        "subword_min",
        "subword_max",
        "bucket_count",
        "learning_rate",
    ),
    "terms": ("top_n", "max_features", "min_prevalence", "emotion_min_prevalence"),
    "cluster": ("n_init", "max_iter", "tol", "sample_n"),
    "sentiment": ("figures", "extreme_n"),
    "run": ("seed", "threads"),
}


def load_config(path: str | Path, env: dict[str, str] | None = None) -> PipelineConfig:
    """Parse a TOML config; CORPUSCOMPARE_<SECTION>__<KEY> env vars win over the file."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    cfg = PipelineConfig()

    for name in ("corpus_a", "corpus_b"):
        section = data.get(name, {})
        spec: CorpusSpec = getattr(cfg, name)
        spec.path = str(section.get("path", spec.path))
        spec.tag = str(section.get("tag", spec.tag))
        spec.k = int(section.get("k", spec.k))

    for section_name, fields in _SECTION_FIELDS.items():
        section = data.get(section_name, {})
        for key in fields:
            if key in section:
                _assign(cfg, key, section[key])

    env = os.environ if env is None else env
    for raw_key, raw_value in sorted(env.items()):
        if not raw_key.startswith(ENV_PREFIX):
            continue
        remainder = raw_key[len(ENV_PREFIX) :].lower()
        if "__" not in remainder:
            continue
        section_name, key = remainder.split("__", 1)
        if section_name in ("corpus_a", "corpus_b"):
            spec = getattr(cfg, section_name)
            if key == "path":
                spec.path = raw_value
            elif key == "tag":
                spec.tag = raw_value
            elif key == "k":
                spec.k = int(raw_value)
            continue
        if section_name in _SECTION_FIELDS and key in _SECTION_FIELDS[section_name]:
            _assign(cfg, key, _parse_scalar(raw_value))

    return cfg


def _assign(cfg: PipelineConfig, key: str, value) -> None:
    current = getattr(cfg, key)
    if isinstance(current, bool):
        setattr(cfg, key, bool(value))
    elif isinstance(current, int):
        setattr(cfg, key, int(value))
    elif isinstance(current, float):
        setattr(cfg, key, float(value))
    elif isinstance(current, tuple):
        if isinstance(value, str):
            value = [v.strip() for v in value.split(",") if v.strip()]
        setattr(cfg, key, tuple(str(v) for v in value))
    else:
        setattr(cfg, key, value)


def _parse_scalar(raw: str):
    lowered = raw.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw
