"""Seeded k-means over post vectors and per-cluster random sampling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .embed import DocVector


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray  # k x dim
    assignments: dict[str, int]  # post_id -> cluster index
    inertia: float
    iterations_run: int
    seed: int
    inertia_history: list[float] = field(default_factory=list)

    def members(self, cluster: int) -> list[str]:
        return sorted(pid for pid, c in self.assignments.items() if c == cluster)

    def sizes(self) -> list[int]:
        out = [0] * self.k
        for c in self.assignments.values():
            out[c] += 1
        return out

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "seed": self.seed,
            "inertia": self.inertia,
            "iterations_run": self.iterations_run,
            "centroids": [[float(x) for x in row] for row in self.centroids],
            "assignments": dict(sorted(self.assignments.items())),
        }
        return json.dumps(payload, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ClusterModel":
        obj = json.loads(text)
        return cls(
            k=obj["k"],
            centroids=np.array(obj["centroids"], dtype=np.float64),
            assignments={k: int(v) for k, v in obj["assignments"].items()},
            inertia=float(obj["inertia"]),
            iterations_run=int(obj["iterations_run"]),
            seed=int(obj["seed"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ClusterModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ClusterSample:
    cluster: int
    post_ids: tuple[str, ...]
    seed: int


def _squared_distances(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (n, k) squared Euclidean distances
    diff = X[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centroids[0] = X[first]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            # all remaining mass at distance zero; pick uniformly
            idx = int(rng.integers(n))
        else:
            u = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), u, side="right"))
            idx = min(idx, n - 1)
        centroids[c] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[c]) ** 2).sum(axis=1))
    return centroids


def _lloyd(
    X: np.ndarray, centroids: np.ndarray, max_iter: int, tol: float
) -> tuple[np.ndarray, np.ndarray, float, int, list[float]]:
    history: list[float] = []
    labels = np.zeros(len(X), dtype=np.int64)
    inertia = float("inf")
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        d2 = _squared_distances(X, centroids)
        labels = np.argmin(d2, axis=1)  # ties -> lowest index
        inertia = float(d2[np.arange(len(X)), labels].sum())
        if history and inertia > history[-1] + 1e-9 * max(1.0, history[-1]):
            raise RuntimeError("Lloyd iteration increased inertia")
        history.append(inertia)

        new_centroids = centroids.copy()
        empty = []
        for c in range(centroids.shape[0]):
            mask = labels == c
            if mask.any():
                new_centroids[c] = X[mask].mean(axis=0)
            else:
                empty.append(c)
        if empty:
            # reseed each empty cluster at the point farthest from its centroid
            dist_own = d2[np.arange(len(X)), labels]
            order = np.argsort(-dist_own, kind="stable")
            taken = 0
            for c in empty:
                new_centroids[c] = X[order[taken]]
                taken += 1

        shift = float(((new_centroids - centroids) ** 2).sum())
        centroids = new_centroids
        if shift < tol:
            break

    # final assignment against the converged centroids
    d2 = _squared_distances(X, centroids)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(len(X)), labels].sum())
    if history and inertia > history[-1] + 1e-9 * max(1.0, history[-1]):
        raise RuntimeError("final assignment increased inertia")
    history.append(inertia)
    return centroids, labels, inertia, iterations, history


def kmeans(
    vectors: Sequence[DocVector],
    k: int,
    seed: int,
    n_init: int = 10,
    max_iter: int = 300,
    tol: float = 1e-4,
    initial_centers: np.ndarray | None = None,
) -> ClusterModel:
    """Best-of-n_init k-means++ with Lloyd iterations; deterministic for a seed.

    ``initial_centers`` overrides k-means++ for a single run with explicitly
    selected centers.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(vectors) < k:
        raise ValueError(f"need at least k={k} vectors, got {len(vectors)}")

    ordered = sorted(vectors, key=lambda v: v.post_id)
    ids = [v.post_id for v in ordered]
    X = np.stack([v.vector for v in ordered]).astype(np.float64)

    best = None
    if initial_centers is not None:
        centers = np.asarray(initial_centers, dtype=np.float64)
        if centers.shape != (k, X.shape[1]):
            raise ValueError("initial_centers must have shape (k, dim)")
        best = _lloyd(X, centers, max_iter, tol)
    else:
        for restart in range(n_init):
            rng = np.random.default_rng(np.random.SeedSequence([seed & (2**63 - 1), restart]))
            centers = _kmeans_pp_init(X, k, rng)
            result = _lloyd(X, centers, max_iter, tol)
            if best is None or result[2] < best[2]:
                best = result

    centroids, labels, inertia, iterations, history = best
    return ClusterModel(
        k=k,
        centroids=centroids,
        assignments={pid: int(c) for pid, c in zip(ids, labels)},
        inertia=inertia,
        iterations_run=iterations,
        seed=seed,
        inertia_history=history,
    )


def sample_cluster(model: ClusterModel, cluster: int, n: int = 100, seed: int = 0) -> ClusterSample:
    """Uniform sample without replacement from one cluster; all members if small."""
    if cluster < 0 or cluster >= model.k:
        raise ValueError(f"cluster index {cluster} out of range for k={model.k}")
    members = model.members(cluster)
    if len(members) <= n:
        chosen = tuple(members)
    else:
        rng = np.random.default_rng(np.random.SeedSequence([seed & (2**63 - 1), cluster]))
        idx = rng.choice(len(members), size=n, replace=False)
        chosen = tuple(members[i] for i in idx)
    return ClusterSample(cluster=cluster, post_ids=chosen, seed=seed)


def sample_to_json(sample: ClusterSample) -> str:
    return json.dumps(
        {"cluster": sample.cluster, "seed": sample.seed, "post_ids": list(sample.post_ids)},
        sort_keys=True,
    )
