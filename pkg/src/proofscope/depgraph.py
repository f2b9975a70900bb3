"""Dependency graphs: per-result uses graphs and library import graphs, with DOT output."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional

from .corpus import Corpus, entry_mentions
from .terms import constants

KIND_COLORS = {
    "theorem": "orange",
    "definition": "green",
    "inductive": "lightpink",
    "constructor": "blue",
    "inner-constructor": "deeppink",
}


class GraphError(ValueError):
    pass


class CycleError(GraphError):
    def __init__(self, cycle: list):
        self.cycle = cycle
        super().__init__("cycle detected: " + " -> ".join(map(str, cycle)))


@dataclass(frozen=True)
class DepGraph:
    nodes: dict  # name -> (kind, library)
    edges: frozenset  # (user, used)
    title: str = "dependencies"

    @property
    def roots(self) -> set:
        used = {b for _, b in self.edges}
        return {n for n in self.nodes if n not in used}


@dataclass(frozen=True)
class LibGraph:
    nodes: tuple
    edges: frozenset  # (importer, imported)


def _mentions(corpus: Corpus) -> dict[str, set]:
    out = {p.name: (constants(p.type) - {p.name}) if p.type is not None else set()
           for p in corpus.primitives}
    for e in corpus.entries:
        out[e.name] = entry_mentions(e)
    return out


def uses_relation(corpus: Corpus, root: Optional[str] = None) -> set:
    """Raw (user, used) edges, restricted to what ``root`` reaches when given."""
    mentions = _mentions(corpus)
    if root is None:
        return {(a, b) for a, bs in mentions.items() for b in bs if a != b}
    if root not in mentions:
        raise GraphError(f"unknown root {root!r}")
    seen = {root}
    stack = [root]
    while stack:
        a = stack.pop()
        for b in mentions.get(a, ()):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return {(a, b) for a in seen for b in mentions.get(a, ()) if a != b and b in seen}


def _adjacency(edges: Iterable[tuple]) -> dict:
    adj: dict = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj.setdefault(b, set())
    return adj


def find_cycle(edges: Iterable[tuple]) -> Optional[list]:
    adj = _adjacency(edges)
    color: dict = {}
    for start in sorted(adj, key=str):
        if start in color:
            continue
        path = [start]
        color[start] = 1
        iters = [iter(sorted(adj[start], key=str))]
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                color[path.pop()] = 2
                iters.pop()
            elif color.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            elif nxt not in color:
                color[nxt] = 1
                path.append(nxt)
                iters.append(iter(sorted(adj[nxt], key=str)))
    return None


def transitive_reduction(edges: Iterable[tuple]) -> set:
    """Drop every edge (u, v) that is implied by a longer path u -> ... -> v."""
    edges = set(edges)
    cycle = find_cycle(edges)
    if cycle:
        raise CycleError(cycle)
    adj = _adjacency(edges)
    kept = set()
    for u, v in edges:
        # search from u's other successors; hitting v means (u, v) is redundant
        stack = [w for w in adj[u] if w != v]
        seen = set(stack)
        redundant = False
        while stack:
            w = stack.pop()
            if w == v:
                redundant = True
                break
            for x in adj[w]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        if not redundant:
            kept.add((u, v))
    return kept


def build_dg1(corpus: Corpus, root: Optional[str] = None) -> DepGraph:
    info = corpus.node_info()
    if root is not None and root not in info:
        raise GraphError(f"unknown root {root!r}")
    raw = uses_relation(corpus, root)
    if root is None:
        names = set(info)
    else:
        names = {root} | {x for e in raw for x in e}
    nodes = {n: info[n] for n in names}
    return DepGraph(nodes, frozenset(transitive_reduction(raw)), root or "all")


def build_dg2(corpus: Corpus) -> LibGraph:
    raw = {(lib.name, imp) for lib in corpus.libraries for imp in lib.imports if imp != lib.name}
    return LibGraph(tuple(lib.name for lib in corpus.libraries),
                    frozenset(transitive_reduction(raw)))


def dot_id(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dep_dot(graph) -> str:
    if isinstance(graph, LibGraph):
        lines = ["digraph libraries {"]
        lines += [f"  {dot_id(n)};" for n in sorted(graph.nodes)]
        lines += [f"  {dot_id(a)} -> {dot_id(b)};" for a, b in sorted(graph.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"

    roots = graph.roots
    by_lib: dict = defaultdict(list)
    for name, (kind, lib) in graph.nodes.items():
        by_lib[lib].append((name, kind))
    lines = [f"digraph {dot_id(graph.title)} {{", '  node [style=filled];']
    for i, lib in enumerate(sorted(by_lib)):
        lines.append(f"  subgraph {dot_id('cluster_' + lib)} {{")
        lines.append(f"    label={dot_id(lib)};")
        for name, kind in sorted(by_lib[lib]):
            attrs = [f"label={dot_id(name)}", f"fillcolor={dot_id(KIND_COLORS.get(kind, 'white'))}"]
            if name in roots:
                attrs.append("peripheries=2")
            lines.append(f"    {dot_id(name)} [{', '.join(attrs)}];")
        lines.append("  }")
    lines += [f"  {dot_id(a)} -> {dot_id(b)};" for a, b in sorted(graph.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"
