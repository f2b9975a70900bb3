import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.cluster.hierarchy import cut_tree, linkage

from proofscope.clustering import (
    ClusteringError, build_cluster_tree, cluster, cluster_proofs, clusters_for,
    nested_partitions, recurrent_cluster,
)
from proofscope.corpus import parse_corpus
from proofscope.features import Encoder


@pytest.mark.parametrize("n, g, k", [(10, 3, 2), (20, 5, 4), (26, 4, 4), (26, 5, 5), (3, 1, 2)])
def test_clusters_for(n, g, k):
    assert clusters_for(n, g) == k


@pytest.mark.parametrize("g", [0, 6, -1])
def test_granularity_bounds(g):
    with pytest.raises(ClusteringError, match="between 1 and 5"):
        clusters_for(10, g)


def blobs():
    vecs = {f"a{i}": [0.0, 0.0] for i in range(5)}
    vecs.update({f"b{i}": [100.0, 0.0] for i in range(5)})
    return vecs


def test_planted_blobs_recovered():
    part = cluster(blobs(), 3)
    assert part.as_sets() == {frozenset(f"a{i}" for i in range(5)),
                              frozenset(f"b{i}" for i in range(5))}


def test_identical_vectors_give_one_cluster():
    part = cluster({f"e{i}": [1.0, 2.0] for i in range(6)}, 5)
    assert part.k == 1
    assert any("no separation" in d for d in part.diagnostics)


def test_zero_distance_pairs_never_cut():
    vecs = {f"a{i:02d}": [0.0] for i in range(10)}
    vecs.update({f"b{i:02d}": [1.0] for i in range(10)})
    part = cluster(vecs, 5)  # k(5) = 4, but only 2 distinct vectors
    assert part.requested_k == 4
    assert part.k == 2
    assert any("only 2 distinct" in d for d in part.diagnostics)


def test_too_few_vectors():
    with pytest.raises(ClusteringError):
        cluster({"a": [1.0]}, 3)


def test_mixed_lengths():
    with pytest.raises(ClusteringError, match="mixed lengths"):
        cluster({"a": [1.0], "b": [1.0, 2.0]}, 3)


def test_clusters_ordered_by_first_member():
    part = cluster({"z": [0.0], "y": [10.0], "x": [0.1], "w": [10.1]}, 1)
    assert part.clusters == (("z", "x"), ("y", "w"))


def test_partition_json_schema():
    part = cluster(blobs(), 3)
    data = json.loads(part.to_json(True, 2))
    assert set(data) == {"granularity", "k", "clusters", "converged", "passes"}
    assert data["clusters"][0] == {"id": 1, "members": sorted(f"a{i}" for i in range(5))}


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 18), st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_matches_scipy_average_linkage(n, dim, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, dim)) * 10
    names = [f"n{i:02d}" for i in range(n)]
    tree = build_cluster_tree(dict(zip(names, X)))
    Z = linkage(X, method="average", metric="euclidean")
    assert np.allclose([m.height for m in tree.merges], Z[:, 2])
    for k in range(1, n + 1):
        labels = cut_tree(Z, n_clusters=k).ravel()
        expected = {frozenset(names[i] for i in range(n) if labels[i] == c) for c in set(labels)}
        assert {frozenset(c) for c in tree.cut(k)} == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(12, 30), st.integers(0, 2**31 - 1))
def test_nested_chain_refines(n, seed):
    rng = np.random.default_rng(seed)
    vecs = {f"n{i}": rng.integers(0, 4, size=3).astype(float) for i in range(n)}
    parts = nested_partitions(vecs, [1, 2, 3, 4, 5])
    assert len(parts) == 5
    for coarse, fine in zip(parts, parts[1:]):
        assert fine.refines(coarse)
        assert fine.parent is coarse


def test_single_granularity_has_no_parent():
    [part] = nested_partitions(blobs(), [3])
    assert part.parent is None


@pytest.mark.parametrize("gs", [[3, 3], [5, 3], []])
def test_nested_needs_increasing(gs):
    with pytest.raises(ClusteringError):
        nested_partitions(blobs(), gs)


def test_normalize_scales_dimensions():
    vecs = {"a": [0.0, 0.0], "b": [0.0, 1.0], "c": [1000.0, 0.5], "d": [1000.0, 0.6]}
    assert cluster(vecs, 1).as_sets() == {frozenset("ab"), frozenset("cd")}
    assert cluster(vecs, 1, normalize=True).as_sets() == {frozenset("ab"), frozenset("cd")}
    flat = {"a": [5.0], "b": [5.0], "c": [5.0]}
    assert cluster(flat, 1, normalize=True).k == 1


TWINS = """
(primitive inductive T (type (sort Type)))
(entry definition first (statement (forall (u (const T)) (app (const T) (var u)))))
(entry definition second (statement (forall (v (const T)) (app (const T) (var v)))))
(entry definition third (statement (sort Prop)))
"""


def test_identical_definitions_share_cluster():
    c = parse_corpus(TWINS)
    result = recurrent_cluster(c, 1)
    assert result.partition.together("first", "second")
    assert result.converged and result.passes <= 2


def test_iteration_cap():
    c = parse_corpus(TWINS)
    result = recurrent_cluster(c, 1, max_iters=1)
    assert result.passes == 1
    assert not result.converged


def test_proofs_required():
    c = parse_corpus(TWINS)
    with pytest.raises(ClusteringError, match="no entries with proofs"):
        cluster_proofs(c, Encoder.initial(c), 3)


def test_recurrent_is_deterministic(sample):
    a = recurrent_cluster(sample, 3)
    b = recurrent_cluster(sample, 3)
    assert a.partition.clusters == b.partition.clusters
    assert a.encoder == b.encoder
