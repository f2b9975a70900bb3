import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from proofscope.corpus import parse_corpus
from proofscope.depgraph import (
    CycleError, GraphError, build_dg1, build_dg2, emit_dep_dot, find_cycle,
    transitive_reduction, uses_relation,
)


def reach(nodes, edges):
    """Brute-force reachability by BFS from every node."""
    adj = {n: [b for a, b in edges if a == n] for n in nodes}
    out = set()
    for s in nodes:
        frontier, seen = [s], set()
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        out |= {(s, t) for t in seen}
    return out


def random_dag(rng, n, p):
    order = list(range(n))
    rng.shuffle(order)
    return {(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p}


def test_triangle():
    assert transitive_reduction({("a", "b"), ("b", "c"), ("a", "c")}) == {("a", "b"), ("b", "c")}


def test_empty():
    assert transitive_reduction(set()) == set()


def test_cycle_detected():
    with pytest.raises(CycleError) as exc:
        transitive_reduction({(1, 2), (2, 3), (3, 1)})
    assert exc.value.cycle[0] == exc.value.cycle[-1]
    assert find_cycle({(1, 2), (2, 3)}) is None


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10), st.floats(0.0, 1.0), st.integers(0, 2**31 - 1))
def test_reduction_matches_oracle(n, p, seed):
    edges = random_dag(random.Random(seed), n, p)
    red = transitive_reduction(edges)
    nodes = range(n)
    assert red <= edges
    assert reach(nodes, red) == reach(nodes, edges)
    for e in red:
        assert reach(nodes, red - {e}) != reach(nodes, edges)
    assert transitive_reduction(red) == red


CHAIN = """
(library Base (imports))
(library Mid (imports Base))
(library Top (imports Mid Base))
(primitive inductive D (library Base) (type (sort Type)))
(entry definition L (library Mid) (statement (arrow (const D) (const D))))
(entry theorem T (library Top) (statement (arrow (const L) (const D)))
  (proof (step exact (args (const L)) (goal (const D)) (subgoals 0))))
(entry definition Lone (library Top) (statement (sort Type)))
"""


@pytest.fixture(scope="module")
def chain():
    return parse_corpus(CHAIN)


def test_dg1_chain(chain):
    g = build_dg1(chain, "T")
    assert set(g.nodes) == {"T", "L", "D"}
    assert g.edges == {("T", "L"), ("L", "D")}
    assert g.roots == {"T"}
    assert ("T", "D") in uses_relation(chain, "T")


def test_dg1_isolated_root(chain):
    g = build_dg1(chain, "Lone")
    assert set(g.nodes) == {"Lone"}
    assert not g.edges


def test_dg1_unknown_root(chain):
    with pytest.raises(GraphError, match="unknown root"):
        build_dg1(chain, "nope")


def test_dg2_reduces_imports(chain):
    g = build_dg2(chain)
    assert g.edges == {("Top", "Mid"), ("Mid", "Base")}


def test_uses_relation_matches_mentions(chain):
    rel = uses_relation(chain)
    assert rel == {("L", "D"), ("T", "L"), ("T", "D")}


def test_dot_attributes(chain):
    dot = emit_dep_dot(build_dg1(chain, "T"))
    assert '"T" [label="T", fillcolor="orange", peripheries=2];' in dot
    assert '"L" [label="L", fillcolor="green"];' in dot
    assert 'subgraph "cluster_Base"' in dot
    assert dot.count("->") == 2


def test_dot_for_libraries(chain):
    dot = emit_dep_dot(build_dg2(chain))
    assert '"Top" -> "Mid";' in dot
    assert '"Top" -> "Base"' not in dot


def test_bundled_dg1_spans_libraries(sample):
    g = build_dg1(sample, "dpath_path_l")
    libs = {lib for _, lib in g.nodes.values()}
    assert len(libs) >= 2
    assert {"equiv_concat_r", "concat_1p", "paths"} <= set(g.nodes)
    assert g.roots == {"dpath_path_l"}


def test_bundled_dg2_is_a_chain(sample):
    g = build_dg2(sample)
    assert g.edges == {("Paths", "Equivalences"), ("Equivalences", "PathGroupoids"),
                       ("PathGroupoids", "Overture")}


def test_bundled_dg1_golden(sample, golden):
    golden("dg1_dpath_path_l.dot", emit_dep_dot(build_dg1(sample, "dpath_path_l")))


def test_every_sample_graph_is_acyclic(sample):
    for e in sample.entries:
        g = build_dg1(sample, e.name)
        assert reach(list(g.nodes), g.edges) == reach(list(g.nodes), uses_relation(sample, e.name))


def test_random_dags_unique_minimum():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(2, 6)
        edges = random_dag(rng, n, 0.6)
        red = transitive_reduction(edges)
        target = reach(range(n), edges)
        # the reduction is the unique smallest subset with the same reachability
        best = min((set(s) for r in range(len(edges) + 1)
                    for s in itertools.combinations(sorted(edges), r)
                    if reach(range(n), set(s)) == target), key=len)
        assert red == best
