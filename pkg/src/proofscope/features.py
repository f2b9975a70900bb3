"""Numeric term-feature tables.

Each node of a term-tree becomes a triple ``(term code, type code, parent
level index)`` at cell ``(depth, level index)`` of a D x L grid.

Code ranges never overlap:

* keywords: the negative integers -2..-8 (keyword nodes carry type code -1);
  binder and arrow types sit strictly between two keyword codes;
* bound variables: ``1/(1+i)`` for binding ordinal ``i >= 1``, in (0, 1);
* metavariables: ``1/(1.5+i)`` for ``i >= 1``, interleaved with variables;
* primitives: their fixed corpus codes (default range [2, 9));
* defined constants: ``10*(1 + cluster id) + ordinal/size`` from the latest
  clustering pass, so members of one cluster sit within 1 of each other.

Applications add ``1/(1+argcount)`` to the code of their head.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .corpus import Corpus, CorpusEntry
from .term_tree import TermTree, TermTreeNode, build_term_tree
from .terms import App, Arrow, Binder, Const, Meta, Sort, Term, Var, app_spine, binder_group

KEYWORD_CODES = {
    "forall": -2.0,
    "lambda": -3.0,
    "let": -4.0,
    "arrow": -5.0,
    "Type": -6.0,
    "Prop": -7.0,
    "Set": -8.0,
}
KEYWORD_TYPE_CODE = -1.0
ROOT_PARENT = -1
PROP_CODE = KEYWORD_CODES["Prop"]

DEFAULT_D = 10
DEFAULT_L = 10


class FeatureError(ValueError):
    pass


def var_code(ordinal: int) -> float:
    return 1.0 / (1.0 + ordinal)


def meta_code(index: int) -> float:
    # index is 0-based: ?X -> 1/2.5, ?Y -> 1/3.5, ...
    return 1.0 / (2.5 + index)


@dataclass(frozen=True)
class Encoder:
    """Immutable snapshot of constant codes for one clustering pass."""

    const_codes: Mapping[str, float]

    def const(self, name: str) -> float:
        try:
            return self.const_codes[name]
        except KeyError:
            raise FeatureError(f"encoder has no code for constant {name!r}") from None

    @classmethod
    def initial(cls, corpus: Corpus) -> "Encoder":
        """Pass-0 codes: each entry is its own cluster, numbered by definition order."""
        codes = {p.name: float(p.code) for p in corpus.primitives}
        for i, e in enumerate(corpus.entries):
            codes[e.name] = 10.0 * (1 + i)
        return cls(codes)

    @classmethod
    def from_clusters(cls, corpus: Corpus, clusters, base: Optional["Encoder"] = None) -> "Encoder":
        """Codes from an ordered list of clusters; entries outside them keep ``base`` codes."""
        codes = dict(base.const_codes) if base else dict(cls.initial(corpus).const_codes)
        order = {name: i for i, name in enumerate(corpus.names())}
        for cid, members in enumerate(clusters):
            ranked = sorted(members, key=order.__getitem__)
            for ordinal, name in enumerate(ranked):
                codes[name] = 10.0 * (1 + cid) + ordinal / len(ranked)
        return cls(codes)


def head_code(t: Term, scope: Mapping[str, int], enc: Encoder) -> float:
    """Code of the outermost symbol of ``t`` (no argument-count adjustment)."""
    head, _ = app_spine(t)
    if isinstance(head, Const):
        return enc.const(head.name)
    if isinstance(head, Var):
        return var_code(scope.get(head.name, 0))
    if isinstance(head, Sort):
        return KEYWORD_CODES[head.name]
    if isinstance(head, Meta):
        return meta_code(head.index)
    if isinstance(head, Binder):
        return KEYWORD_CODES[head.kind]
    if isinstance(head, Arrow):
        return KEYWORD_CODES["arrow"]
    raise TypeError(f"not a term: {head!r}")


def term_code(t: Optional[Term], scope: Mapping[str, int], enc: Encoder) -> float:
    """Scalar code of a whole term, used for type labels and tactic arguments."""
    if t is None:
        return 0.0
    if isinstance(t, App):
        head, args = app_spine(t)
        return head_code(head, scope, enc) + 1.0 / (1 + len(args))
    if isinstance(t, Binder):
        group, _ = binder_group(t)
        return KEYWORD_CODES[t.kind] - 1.0 / (1 + len(group))
    if isinstance(t, Arrow):
        arrows = 0
        while isinstance(t, Arrow):
            arrows += 1
            t = t.dst
        return KEYWORD_CODES["arrow"] - 1.0 / (1 + arrows)
    return head_code(t, scope, enc)


def node_codes(node: TermTreeNode, enc: Encoder) -> tuple[float, float]:
    role = node.role
    if role == "keyword":
        return KEYWORD_CODES[node.key], KEYWORD_TYPE_CODE
    if role in ("binder", "var"):
        term = var_code(node.key)
    elif role == "const":
        term = enc.const(node.key)
    elif role == "sort":
        term = KEYWORD_CODES[node.key]
    else:
        term = head_code(node.origin, node.scope, enc)
    return term, term_code(node.type_term, node.scope, enc)


@dataclass(frozen=True)
class TermFeatureMatrix:
    cells: np.ndarray  # shape (D, L, 3): term code, type code, parent index
    source: str = ""

    @property
    def D(self) -> int:
        return self.cells.shape[0]

    @property
    def L(self) -> int:
        return self.cells.shape[1]

    def cell(self, i: int, j: int) -> tuple[float, float, float]:
        return tuple(float(x) for x in self.cells[i, j])


def encode_tree(tree: TermTree, encoder: Encoder, D: int = DEFAULT_D, L: int = DEFAULT_L,
                source: str = "") -> TermFeatureMatrix:
    if tree.depth_count > D or tree.max_width > L:
        raise FeatureError(
            f"term-tree of {source or 'term'} needs a grid of at least "
            f"D={tree.depth_count}, L={tree.max_width} (have D={D}, L={L})")
    cells = np.zeros((D, L, 3), dtype=float)
    for node in tree.nodes():
        term, ty = node_codes(node, encoder)
        parent = ROOT_PARENT if node.parent is None else node.parent.level_index
        cells[node.depth, node.level_index] = (term, ty, parent)
    return TermFeatureMatrix(cells, source)


def flatten(matrix: TermFeatureMatrix) -> np.ndarray:
    """Row-major: depth, then level index, then (term, type, parent)."""
    return matrix.cells.reshape(-1).copy()


def statement_tree(entry: CorpusEntry, corpus: Corpus) -> TermTree:
    return build_term_tree(entry.statement, types=corpus.type_of)


def statement_matrix(entry: CorpusEntry, corpus: Corpus, encoder: Encoder,
                     D: int = DEFAULT_D, L: int = DEFAULT_L) -> TermFeatureMatrix:
    return encode_tree(statement_tree(entry, corpus), encoder, D, L, source=entry.name)


def statement_vectors(corpus: Corpus, encoder: Encoder, D: int = DEFAULT_D,
                      L: int = DEFAULT_L) -> dict[str, np.ndarray]:
    return {e.name: flatten(statement_matrix(e, corpus, encoder, D, L)) for e in corpus.entries}


def format_code(x: float) -> str:
    if math.isfinite(x) and x == int(x):
        return str(int(x))
    return f"{x:.6g}"


def matrix_csv(matrix: TermFeatureMatrix) -> str:
    """CSV with rows = depth, columns = level index, cells ``term:type:parent``."""
    lines = ["depth," + ",".join(f"li{j}" for j in range(matrix.L))]
    for i in range(matrix.D):
        cells = [":".join(format_code(v) for v in matrix.cell(i, j)) for j in range(matrix.L)]
        lines.append(f"td{i}," + ",".join(cells))
    return "\n".join(lines) + "\n"
