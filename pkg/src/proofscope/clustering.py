"""Deterministic agglomerative clustering and the recurrent term-clustering loop.

Average linkage over Euclidean distance.  Ties between equally close pairs are
broken by the lexicographically smallest member names, so the dendrogram
depends only on the data and the names.  Every granularity is a cut of one
dendrogram, which is what makes finer partitions nest inside coarser ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .corpus import Corpus
from .features import DEFAULT_D, DEFAULT_L, Encoder, statement_vectors
from .proof_features import DEFAULT_G, TacticTable, proof_vectors

MIN_GRANULARITY = 1
MAX_GRANULARITY = 5


class ClusteringError(ValueError):
    pass


def clusters_for(n: int, granularity: int) -> int:
    """Number of clusters requested at a granularity: max(2, n // (10 - g))."""
    check_granularity(granularity)
    return max(2, n // (10 - granularity))


def check_granularity(g: int):
    if not (MIN_GRANULARITY <= g <= MAX_GRANULARITY):
        raise ClusteringError(f"granularity must be between 1 and 5, got {g}")


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class ClusterTree:
    """Merge history; ids 0..n-1 are leaves, merge i creates id n+i."""

    leaves: tuple
    merges: tuple

    def zero_merges(self) -> int:
        return sum(1 for m in self.merges if m.height == 0.0)

    def cut(self, k: int) -> list[tuple]:
        """Clusters after the first n-k merges, ordered by earliest leaf."""
        n = len(self.leaves)
        k = max(1, min(k, n))
        parent = list(range(2 * n - 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, m in enumerate(self.merges[:n - k]):
            parent[find(m.left)] = n + i
            parent[find(m.right)] = n + i
        groups: dict[int, list[int]] = {}
        for leaf in range(n):
            groups.setdefault(find(leaf), []).append(leaf)
        ordered = sorted(groups.values(), key=lambda g: g[0])
        return [tuple(self.leaves[i] for i in g) for g in ordered]


@dataclass(frozen=True)
class Partition:
    granularity: int
    clusters: tuple
    requested_k: int = 0
    parent: Optional["Partition"] = field(default=None, compare=False, repr=False)
    diagnostics: tuple = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return len(self.clusters)

    def cluster_of(self, name: str) -> int:
        for i, c in enumerate(self.clusters):
            if name in c:
                return i
        raise KeyError(name)

    def together(self, a: str, b: str) -> bool:
        return self.cluster_of(a) == self.cluster_of(b)

    def as_sets(self) -> set:
        return {frozenset(c) for c in self.clusters}

    def refines(self, coarser: "Partition") -> bool:
        outer = coarser.as_sets()
        return all(sum(1 for o in outer if c <= o) == 1 for c in self.as_sets())

    def to_dict(self, converged: Optional[bool] = None, passes: Optional[int] = None) -> dict:
        return {
            "granularity": self.granularity,
            "k": self.k,
            "clusters": [{"id": i + 1, "members": sorted(c)} for i, c in enumerate(self.clusters)],
            "converged": converged,
            "passes": passes,
        }

    def to_json(self, converged=None, passes=None) -> str:
        return json.dumps(self.to_dict(converged, passes), indent=2, sort_keys=True) + "\n"


def _as_matrix(vectors: Mapping[str, Sequence[float]], normalize: bool):
    if len(vectors) < 2:
        raise ClusteringError(f"need at least 2 vectors to cluster, got {len(vectors)}")
    names = list(vectors)
    lengths = {len(v) for v in vectors.values()}
    if len(lengths) != 1:
        raise ClusteringError(f"feature vectors have mixed lengths {sorted(lengths)}")
    X = np.array([np.asarray(vectors[n], dtype=float) for n in names])
    if normalize:
        lo, hi = X.min(axis=0), X.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        X = np.where(hi > lo, (X - lo) / span, 0.0)
    return names, X


def pairwise_distances(X: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def build_cluster_tree(vectors: Mapping[str, Sequence[float]], normalize: bool = False) -> ClusterTree:
    names, X = _as_matrix(vectors, normalize)
    n = len(names)
    dist = pairwise_distances(X)
    np.fill_diagonal(dist, np.inf)
    active = list(range(n))       # slot indices still alive
    ids = list(range(n))          # slot -> cluster id
    sizes = [1] * n
    keys = list(names)            # slot -> smallest member name
    merges = []
    last = 0.0
    for step in range(n - 1):
        sub = dist[np.ix_(active, active)]
        best = sub.min()
        rows, cols = np.nonzero(sub == best)
        pairs = [(active[r], active[c]) for r, c in zip(rows, cols) if r < c]
        a, b = min(pairs, key=lambda p: tuple(sorted((keys[p[0]], keys[p[1]]))))
        if keys[b] < keys[a]:
            a, b = b, a
        height = max(float(best), last)
        last = height
        na, nb = sizes[a], sizes[b]
        merges.append(Merge(ids[a], ids[b], height, na + nb))
        # Lance-Williams update for average linkage, into slot a
        row = (na * dist[a] + nb * dist[b]) / (na + nb)
        dist[a, :] = row
        dist[:, a] = row
        dist[a, a] = np.inf
        dist[b, :] = np.inf
        dist[:, b] = np.inf
        active.remove(b)
        ids[a] = n + step
        sizes[a] = na + nb
        keys[a] = min(keys[a], keys[b])
    return ClusterTree(tuple(names), tuple(merges))


def _partition(tree: ClusterTree, granularity: int, parent=None) -> Partition:
    n = len(tree.leaves)
    k = clusters_for(n, granularity)
    distinct = n - tree.zero_merges()
    diags = []
    if distinct == 1:
        diags.append("no separation: all feature vectors are identical")
    elif distinct < k:
        diags.append(f"only {distinct} distinct feature vectors; returning {distinct} "
                     f"clusters instead of {k}")
    return Partition(granularity, tuple(tree.cut(min(k, distinct))), k, parent, tuple(diags))


def cluster(vectors: Mapping[str, Sequence[float]], granularity: int, seed: int = 0,
            normalize: bool = False) -> Partition:
    """Cut the average-linkage dendrogram into k(g) clusters.

    ``seed`` is accepted for interface stability; the algorithm is deterministic.
    """
    check_granularity(granularity)
    return _partition(build_cluster_tree(vectors, normalize), granularity)


def nested_partitions(vectors: Mapping[str, Sequence[float]], granularities: Sequence[int],
                      seed: int = 0, normalize: bool = False) -> list[Partition]:
    gs = list(granularities)
    if not gs:
        raise ClusteringError("no granularities given")
    for g in gs:
        check_granularity(g)
    if any(b <= a for a, b in zip(gs, gs[1:])):
        raise ClusteringError(f"granularities must be strictly increasing, got {gs}")
    tree = build_cluster_tree(vectors, normalize)
    out: list[Partition] = []
    for g in gs:
        out.append(_partition(tree, g, out[-1] if out else None))
    return out


@dataclass(frozen=True)
class RecurrentResult:
    encoder: Encoder
    partition: Partition
    converged: bool
    passes: int


def recurrent_cluster(corpus: Corpus, granularity: int, max_iters: int = 10, seed: int = 0,
                      D: int = DEFAULT_D, L: int = DEFAULT_L,
                      normalize: bool = False) -> RecurrentResult:
    """Cluster statements repeatedly, feeding cluster-derived constant codes back in.

    Pass 0 treats every entry as its own cluster.  Stops once a pass reproduces
    the previous partition or after ``max_iters`` passes.
    """
    check_granularity(granularity)
    if max_iters < 1:
        raise ClusteringError("max_iters must be at least 1")
    if len(corpus.entries) < 2:
        raise ClusteringError("recurrent clustering needs at least 2 entries")
    encoder = Encoder.initial(corpus)
    previous = {frozenset([name]) for name in corpus.names()}
    partition = None
    for i in range(1, max_iters + 1):
        vectors = statement_vectors(corpus, encoder, D, L)
        partition = cluster(vectors, granularity, seed, normalize)
        encoder = Encoder.from_clusters(corpus, partition.clusters, encoder)
        if partition.as_sets() == previous:
            return RecurrentResult(encoder, partition, True, i)
        previous = partition.as_sets()
    return RecurrentResult(encoder, partition, False, max_iters)


def cluster_proofs(corpus: Corpus, encoder: Encoder, granularity: int, seed: int = 0,
                   G: int = DEFAULT_G, tactics: Optional[TacticTable] = None,
                   allow_unknown: bool = False, normalize: bool = False) -> Partition:
    check_granularity(granularity)
    vectors = proof_vectors(corpus, encoder, tactics, G, allow_unknown)
    if not vectors:
        raise ClusteringError("no entries with proofs to cluster")
    return cluster(vectors, granularity, seed, normalize)


def nested_proof_partitions(corpus: Corpus, encoder: Encoder, granularities: Sequence[int],
                            seed: int = 0, G: int = DEFAULT_G,
                            tactics: Optional[TacticTable] = None, allow_unknown: bool = False,
                            normalize: bool = False) -> list[Partition]:
    vectors = proof_vectors(corpus, encoder, tactics, G, allow_unknown)
    if not vectors:
        raise ClusteringError("no entries with proofs to cluster")
    return nested_partitions(vectors, granularities, seed, normalize)
