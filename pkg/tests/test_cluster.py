
import numpy as np
import pytest

from corpuscompare import cluster
from corpuscompare.embed import DocVector


def vecs_from(points, prefix="p"):
    return [
        DocVector(post_id=f"{prefix}{i}", vector=np.asarray(p, dtype=np.float64), token_count=1)
        for i, p in enumerate(points)
    ]


def brute_force_two_cluster_inertia(X):
    """Exhaustive optimum over all 2-partitions of up to ~10 points."""
    n = len(X)
    best = np.inf
    for mask in range(1, 2 ** n - 1):
        g1 = X[[i for i in range(n) if mask >> i & 1]]
        g2 = X[[i for i in range(n) if not mask >> i & 1]]
        inertia = ((g1 - g1.mean(axis=0)) ** 2).sum() + ((g2 - g2.mean(axis=0)) ** 2).sum()
        best = min(best, inertia)
    return best


def test_symmetric_four_points():
    model = cluster.kmeans(vecs_from([(0, 0), (0, 1), (10, 0), (10, 1)]), k=2, seed=3)
    assert model.inertia == pytest.approx(1.0)
    assert sorted(model.centroids.tolist()) == [[0.0, 0.5], [10.0, 0.5]]


def test_k_equals_n_zero_inertia():
    model = cluster.kmeans(vecs_from([(0, 0), (1, 1), (2, 2)]), k=3, seed=1)
    assert model.inertia == pytest.approx(0.0)


def test_matches_exhaustive_partition_optimum():
    rng = np.random.default_rng(17)
    X = rng.normal(size=(6, 2))
    model = cluster.kmeans(vecs_from(X), k=2, seed=5, n_init=10)
    assert model.inertia == pytest.approx(brute_force_two_cluster_inertia(X), rel=1e-9)


def test_too_few_vectors():
    with pytest.raises(ValueError):
        cluster.kmeans(vecs_from([(0, 0)]), k=2, seed=1)


def test_bad_k():
    with pytest.raises(ValueError):
        cluster.kmeans(vecs_from([(0, 0)]), k=0, seed=1)


def test_assignment_optimality():
    rng = np.random.default_rng(23)
    X = rng.normal(size=(40, 3))
    vectors = vecs_from(X)
    model = cluster.kmeans(vectors, k=4, seed=9)
    ordered = sorted(vectors, key=lambda v: v.post_id)
    for v in ordered:
        own = model.assignments[v.post_id]
        dists = ((model.centroids - v.vector) ** 2).sum(axis=1)
        assert dists[own] <= dists.min() + 1e-9


def test_inertia_consistent_with_assignments():
    rng = np.random.default_rng(31)
    X = rng.normal(size=(30, 4))
    vectors = vecs_from(X)
    model = cluster.kmeans(vectors, k=3, seed=2)
    total = 0.0
    for v in vectors:
        c = model.assignments[v.post_id]
        total += float(((v.vector - model.centroids[c]) ** 2).sum())
    assert total == pytest.approx(model.inertia, rel=1e-9)


def test_lloyd_monotone_history():
    rng = np.random.default_rng(41)
    X = rng.normal(size=(60, 5))
    model = cluster.kmeans(vecs_from(X), k=5, seed=7)
    hist = model.inertia_history
    assert len(hist) >= 2
    for prev, cur in zip(hist, hist[1:]):
        assert cur <= prev + 1e-9 * max(1.0, prev)


def test_permutation_invariance():
    rng = np.random.default_rng(53)
    X = rng.normal(size=(25, 3))
    vectors = vecs_from(X)
    shuffled = list(vectors)
    rng.shuffle(shuffled)
    m1 = cluster.kmeans(vectors, k=3, seed=11)
    m2 = cluster.kmeans(shuffled, k=3, seed=11)
    assert m1.assignments == m2.assignments
    assert np.array_equal(m1.centroids, m2.centroids)


def test_explicit_initial_centers():
    X = np.array([(0, 0), (0, 1), (10, 0), (10, 1)], dtype=float)
    centers = np.array([(0.0, 0.0), (10.0, 0.0)])
    model = cluster.kmeans(vecs_from(X), k=2, seed=1, initial_centers=centers)
    assert model.inertia == pytest.approx(1.0)


def test_empty_cluster_reseeded():
    # one far outlier and a tight pack; forcing a center far away can empty it
    points = [(0.0, 0.0), (0.1, 0.0), (0.2, 0.0), (0.3, 0.0), (100.0, 0.0)]
    centers = np.array([(0.15, 0.0), (500.0, 500.0)])
    model = cluster.kmeans(vecs_from(points), k=2, seed=1, initial_centers=centers)
    sizes = model.sizes()
    assert all(s > 0 for s in sizes)
    assert model.inertia == pytest.approx(brute_force_two_cluster_inertia(np.array(points)), rel=1e-9)


# --- sampling ---


def _clustered_model():
    points = [(0, 0), (0, 1), (0, 2), (10, 0), (10, 1)]
    return cluster.kmeans(vecs_from(points), k=2, seed=1)


def test_sample_small_cluster_returns_all():
    model = _clustered_model()
    big = max(range(model.k), key=lambda c: len(model.members(c)))
    sample = cluster.sample_cluster(model, big, n=100, seed=0)
    assert sorted(sample.post_ids) == model.members(big)


def test_sample_same_seed_stable():
    model = _clustered_model()
    s1 = cluster.sample_cluster(model, 0, n=2, seed=42)
    s2 = cluster.sample_cluster(model, 0, n=2, seed=42)
    assert s1.post_ids == s2.post_ids


def test_sample_bad_index():
    model = _clustered_model()
    with pytest.raises(ValueError):
        cluster.sample_cluster(model, model.k, n=1, seed=0)


def test_sample_without_replacement():
    model = _clustered_model()
    big = max(range(model.k), key=lambda c: len(model.members(c)))
    sample = cluster.sample_cluster(model, big, n=2, seed=3)
    assert len(sample.post_ids) == len(set(sample.post_ids)) == 2


def test_sample_uniform_chi_square():
    points = [(0, 0), (0, 1), (0, 2)]
    model = cluster.kmeans(vecs_from(points), k=1, seed=1)
    counts = {pid: 0 for pid in model.members(0)}
    draws = 10000
    for s in range(draws):
        (chosen,) = cluster.sample_cluster(model, 0, n=1, seed=s).post_ids
        counts[chosen] += 1
    expected = draws / 3
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 13.816  # df=2 critical value at p=0.001
    for c in counts.values():
        assert abs(c - expected) <= 100


# --- persistence ---


def test_model_json_roundtrip(tmp_path):
    model = _clustered_model()
    path = tmp_path / "model.json"
    model.save(path)
    back = cluster.ClusterModel.load(path)
    assert back.k == model.k
    assert back.assignments == model.assignments
    assert back.inertia == model.inertia
    assert np.allclose(back.centroids, model.centroids)
    assert back.seed == model.seed


def test_sample_json():
    model = _clustered_model()
    sample = cluster.sample_cluster(model, 0, n=2, seed=1)
    payload = cluster.sample_to_json(sample)
    assert '"cluster": 0' in payload
