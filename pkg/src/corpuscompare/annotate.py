"""Persistence and HTTP service for the human labeling workflow.

Annotations land in an append-only JSONL log, fsynced before every
acknowledgment; restart replays the log. Later submissions by the same
(post, annotator) pair supersede earlier ones.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from pydantic import BaseModel

from . import cluster as cluster_mod
from .cluster import ClusterModel
from .ingest import CleanPost

SENTINEL_LABEL = "none/other"

TABLE3_LABELS = (
    "negative influence",
    "efficacy of the vaccines",
    "negative vaccine (trial) news",
    "distrust toward government and vaccine research",
    "blatantly refuse",
    "covid-19 is common flu",
    "complaints about vaccine distribution and appointment",
)


@dataclass(frozen=True)
class LabelTaxonomy:
    labels: tuple[str, ...] = TABLE3_LABELS
    sentinel: str = SENTINEL_LABEL

    def __post_init__(self):
        seen = set()
        for label in self.all_labels:
            if not label:
                raise ValueError("labels must be non-empty")
            if label in seen:
                raise ValueError(f"duplicate label: {label!r}")
            seen.add(label)

    @property
    def all_labels(self) -> tuple[str, ...]:
        return self.labels + (self.sentinel,)

    def __contains__(self, label: str) -> bool:
        return label in self.all_labels


@dataclass(frozen=True)
class Annotation:
    post_id: str
    dataset_tag: str
    cluster: int
    label: str
    annotator: str
    timestamp: str


@dataclass(frozen=True)
class PrevalenceRow:
    label: str
    count: int
    percentage: float


@dataclass(frozen=True)
class PrevalenceTable:
    rows: tuple[PrevalenceRow, ...]
    total_labeled: int  # positively labeled (sentinel excluded)
    total_sampled: int  # all annotated samples, sentinel included

    @classmethod
    def from_counts(
        cls,
        counts: dict[str, int],
        taxonomy: LabelTaxonomy,
        total_positive: int | None = None,
        total_sampled: int | None = None,
    ) -> "PrevalenceTable":
        """Build the table from per-label positive counts.

        ``total_positive`` overrides the denominator; by default it is the sum
        of the counts. Percentages are truncated (not rounded) to 1 decimal,
        matching the published table's arithmetic.
        """
        positive = sum(counts.get(label, 0) for label in taxonomy.labels)
        denom = positive if total_positive is None else total_positive
        rows = []
        for label in taxonomy.labels:
            c = counts.get(label, 0)
            pct = (c * 1000 // denom) / 10 if denom > 0 else 0.0
            rows.append(PrevalenceRow(label=label, count=c, percentage=pct))
        return cls(
            rows=tuple(rows),
            total_labeled=denom,
            total_sampled=total_sampled if total_sampled is not None else positive,
        )

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"label": r.label, "count": r.count, "percentage": r.percentage}
                for r in self.rows
            ],
            "total_labeled": self.total_labeled,
            "total_sampled": self.total_sampled,
        }


class AnnotationStore:
    """Append-only JSONL annotation log with replay on open."""

    def __init__(self, path: str | Path, taxonomy: LabelTaxonomy = LabelTaxonomy()):
        self.path = Path(path)
        self.taxonomy = taxonomy
        self._latest: dict[tuple[str, str], Annotation] = {}
        self._log_records = 0
        self._lock = threading.Lock()
        if self.path.exists():
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    def _replay(self) -> None:
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            ann = Annotation(
                post_id=obj["post_id"],
                dataset_tag=obj["dataset_tag"],
                cluster=int(obj["cluster"]),
                label=obj["label"],
                annotator=obj["annotator"],
                timestamp=obj["timestamp"],
            )
            self._latest[(ann.post_id, ann.annotator)] = ann
            self._log_records += 1

    def submit(self, ann: Annotation) -> None:
        """Validate, durably append, then update the in-memory tally."""
        if ann.label not in self.taxonomy:
            raise ValueError("unknown label")
        record = json.dumps(
            {
                "post_id": ann.post_id,
                "dataset_tag": ann.dataset_tag,
                "cluster": ann.cluster,
                "label": ann.label,
                "annotator": ann.annotator,
                "timestamp": ann.timestamp,
            },
            ensure_ascii=True,
        )
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(record + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._latest[(ann.post_id, ann.annotator)] = ann
            self._log_records += 1

    def annotations(self, dataset_tag: str | None = None) -> list[Annotation]:
        """Latest annotation per (post, annotator), optionally filtered by dataset."""
        with self._lock:
            out = list(self._latest.values())
        if dataset_tag is not None:
            out = [a for a in out if a.dataset_tag == dataset_tag]
        return out

    @property
    def log_records(self) -> int:
        return self._log_records

    def prevalence(self, dataset_tag: str | None = None) -> PrevalenceTable:
        anns = self.annotations(dataset_tag)
        counts: dict[str, int] = {}
        sampled = 0
        for a in anns:
            sampled += 1
            if a.label != self.taxonomy.sentinel:
                counts[a.label] = counts.get(a.label, 0) + 1
        return PrevalenceTable.from_counts(counts, self.taxonomy, total_sampled=sampled)


class AnnotationBody(BaseModel):
    post_id: str
    cluster: int
    label: str
    annotator: str


def build_app(
    store: AnnotationStore,
    model: ClusterModel,
    corpus: Sequence[CleanPost],
    taxonomy: LabelTaxonomy | None = None,
    static_dir: str | Path | None = None,
):
    """FastAPI app exposing the /v1 labeling API over a cluster model and corpus."""
    from fastapi import FastAPI, HTTPException
    from fastapi.middleware.cors import CORSMiddleware

    taxonomy = taxonomy or store.taxonomy
    posts = {p.id: p for p in corpus}
    missing = [pid for pid in model.assignments if pid not in posts]
    if missing:
        raise ValueError(
            f"cluster model references {len(missing)} post ids missing from corpus "
            f"(first: {missing[0]})"
        )

    app = FastAPI(title="corpuscompare annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/clusters")
    def clusters():
        return {
            "k": model.k,
            "inertia": model.inertia,
            "seed": model.seed,
            "sizes": model.sizes(),
        }

    @app.get("/v1/clusters/{index}/sample")
    def sample(index: int, n: int = 100, seed: int = 0):
        try:
            s = cluster_mod.sample_cluster(model, index, n=n, seed=seed)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "cluster": s.cluster,
            "seed": s.seed,
            "posts": [
                {"post_id": pid, "text": posts[pid].normalized_text} for pid in s.post_ids
            ],
        }

    @app.get("/v1/posts/{post_id}")
    def get_post(post_id: str):
        p = posts.get(post_id)
        if p is None:
            raise HTTPException(status_code=404, detail="unknown post_id")
        return {
            "id": p.id,
            "normalized_text": p.normalized_text,
            "tokens": list(p.tokens),
            "hashtags": list(p.hashtags),
            "char_len": p.char_len,
            "is_retweet": p.is_retweet,
            "dataset_tag": p.dataset_tag,
        }

    @app.post("/v1/annotations", status_code=201)
    def post_annotation(body: AnnotationBody):
        if body.label not in taxonomy:
            raise HTTPException(status_code=422, detail="unknown label")
        post = posts.get(body.post_id)
        if post is None:
            raise HTTPException(status_code=422, detail="unknown post_id")
        ann = Annotation(
            post_id=body.post_id,
            dataset_tag=post.dataset_tag,
            cluster=body.cluster,
            label=body.label,
            annotator=body.annotator,
            timestamp=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        )
        store.submit(ann)
        return {"status": "accepted", "post_id": ann.post_id, "label": ann.label}

    @app.get("/v1/prevalence")
    def prevalence(dataset: str | None = None):
        return store.prevalence(dataset).to_dict()

    @app.get("/v1/taxonomy")
    def get_taxonomy():
        return {"labels": list(taxonomy.labels), "sentinel": taxonomy.sentinel}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    store: AnnotationStore,
    model: ClusterModel,
    corpus: Sequence[CleanPost],
    host: str = "127.0.0.1",
    port: int = 8077,
    static_dir: str | Path | None = None,
) -> None:
    """Run the annotation service until interrupted."""
    import uvicorn

    app = build_app(store, model, corpus, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
