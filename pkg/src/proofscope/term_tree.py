"""Term-trees: rooted ordered trees of labelled term nodes with (depth, level index) coordinates.

Construction rules:

* a run of binders of one kind becomes a single keyword node whose children are
  the bound variables followed by the body subtree;
* an application becomes a node for its head with one child per argument;
* an arrow becomes a ``->`` keyword node with two children;
* variables, constants and sorts are leaves.

Level indices are assigned breadth-first, so index ``j`` at depth ``i`` is the
``j``-th node from the left across the whole depth, not within a parent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .terms import (
    App, Arrow, Binder, Const, Meta, Sort, Term, Var, app_spine, binder_group, render,
    substitute,
)

KEYWORD_TYPE = "#Gallina"
ARROW_LABEL = "->"

TypeLookup = Callable[[str], Optional[Term]]


class UnboundVariable(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


@dataclass(eq=False)
class TermTreeNode:
    term_label: str = ""
    type_label: str = ""
    depth: int = 0
    level_index: int = 0
    parent: Optional["TermTreeNode"] = field(default=None, repr=False)
    children: list = field(default_factory=list, repr=False)
    origin: Optional[Term] = field(default=None, repr=False)
    # role: keyword | binder | var | const | sort | other
    role: str = ""
    key: object = None
    # type term with pending implicits replaced by metas; None for keyword nodes
    type_term: Optional[Term] = field(default=None, repr=False)
    # variable name -> binding ordinal / declared type, as seen at this node
    scope: dict = field(default_factory=dict, repr=False)
    var_types: dict = field(default_factory=dict, repr=False)

    @property
    def is_keyword(self) -> bool:
        return self.role == "keyword"


@dataclass
class TermTree:
    root: TermTreeNode
    levels: list  # levels[d] = nodes at depth d, left to right

    @property
    def depth_count(self) -> int:
        return len(self.levels)

    @property
    def max_width(self) -> int:
        return max(len(level) for level in self.levels)

    def nodes(self):
        for level in self.levels:
            yield from level

    def at(self, depth: int, index: int) -> TermTreeNode:
        return self.levels[depth][index]


def implicit_prefix(ty: Optional[Term]) -> tuple[list[str], Optional[Term]]:
    """Leading ``forall`` binders whose type is a sort or a bare variable.

    These are the arguments left implicit in applications (``paths x1 x2`` for
    ``paths : forall A : Type, A -> A -> Type``).
    """
    names: list[str] = []
    while isinstance(ty, Binder) and ty.kind == "forall" and isinstance(ty.type, (Sort, Var)):
        names.append(ty.name)
        ty = ty.body
    return names, ty


def render_label(origin: Term, types: TypeLookup, next_meta: int = 0,
                 var_types: Optional[dict] = None) -> tuple[str, str, int]:
    """Render ``(term_label, type_label)`` for a leaf or application head.

    A constant with pending implicit arguments is shown partially applied to
    fresh metavariables ``?X, ?Y, ...`` starting at ``next_meta``; the type label
    is its type with those arguments instantiated.  Returns the labels and the
    next free metavariable index.
    """
    term_label, type_term, next_meta = _label_terms(origin, types, next_meta, var_types or {})
    return term_label, ("?" if type_term is None else render(type_term)), next_meta


def _label_terms(origin, types, next_meta, var_types):
    if isinstance(origin, Const):
        pending, rest = implicit_prefix(types(origin.name))
        metas = []
        for name in pending:
            m = Meta(next_meta)
            next_meta += 1
            metas.append(m)
            rest = substitute(rest, name, m)
        label = render(App(origin, tuple(metas))) if metas else origin.name
        return label, rest, next_meta
    if isinstance(origin, Sort):
        return origin.name, Sort("Type"), next_meta
    if isinstance(origin, Var):
        return origin.name, var_types.get(origin.name), next_meta
    if isinstance(origin, App):
        head, args = app_spine(origin)
        if isinstance(head, (Const, Var, Sort)):
            return _label_terms(head, types, next_meta, var_types)
        return render(head), None, next_meta
    return render(origin), None, next_meta


def _no_types(name: str) -> None:
    return None


def build_term_tree(term: Term, ctx: Sequence[tuple[str, Term]] = (),
                    types: Optional[TypeLookup] = None) -> TermTree:
    """Build the term-tree of ``term``; ``ctx`` binds its free variables (name, type)."""
    types = types or _no_types
    counter = [0]
    env: dict[str, tuple[int, Term]] = {}
    for name, ty in ctx:
        counter[0] += 1
        env[name] = (counter[0], ty)

    def scope_of(env):
        return {n: i for n, (i, _) in env.items()}

    def node(origin, role, key, env, children=()):
        return TermTreeNode(origin=origin, role=role, key=key, children=list(children),
                            scope=scope_of(env),
                            var_types={k: t for k, (_, t) in env.items()})

    def build(t: Term, env) -> TermTreeNode:
        if isinstance(t, Binder):
            group, body = binder_group(t)
            inner = dict(env)
            kids = []
            for b in group:
                # a binder's type sees the earlier binders of its group
                counter[0] += 1
                kid = node(b, "binder", counter[0], inner)
                kid.type_term = b.type
                kids.append(kid)
                inner = dict(inner)
                inner[b.name] = (counter[0], b.type)
            kids.append(build(body, inner))
            return node(t, "keyword", t.kind, env, kids)
        if isinstance(t, Arrow):
            return node(t, "keyword", "arrow", env, [build(t.src, env), build(t.dst, env)])
        if isinstance(t, App):
            head, args = app_spine(t)
            if isinstance(head, Var) and head.name not in env:
                raise UnboundVariable(head.name)
            kids = [build(a, env) for a in args]
            if isinstance(head, Var):
                return node(t, "var", env[head.name][0], env, kids)
            if isinstance(head, Const):
                return node(t, "const", head.name, env, kids)
            if isinstance(head, Sort):
                return node(t, "sort", head.name, env, kids)
            return node(t, "other", head, env, kids)
        if isinstance(t, Var):
            if t.name not in env:
                raise UnboundVariable(t.name)
            return node(t, "var", env[t.name][0], env)
        if isinstance(t, Const):
            return node(t, "const", t.name, env)
        if isinstance(t, Sort):
            return node(t, "sort", t.name, env)
        if isinstance(t, Meta):
            return node(t, "other", t, env)
        raise TypeError(f"not a term: {t!r}")

    root = build(term, env)

    levels: list[list[TermTreeNode]] = []
    frontier = [root]
    depth = 0
    while frontier:
        for j, n in enumerate(frontier):
            n.depth, n.level_index = depth, j
        levels.append(frontier)
        nxt = []
        for n in frontier:
            for c in n.children:
                c.parent = n
                nxt.append(c)
        frontier = nxt
        depth += 1

    next_meta = 0
    for level in levels:
        for n in level:
            if n.role == "keyword":
                n.term_label = ARROW_LABEL if n.key == "arrow" else n.key
                n.type_label = KEYWORD_TYPE
                n.type_term = None
            elif n.role == "binder":
                n.term_label = n.origin.name
                n.type_label = render(n.type_term)
            else:
                n.term_label, n.type_term, next_meta = _label_terms(
                    n.origin, types, next_meta, n.var_types)
                n.type_label = "?" if n.type_term is None else render(n.type_term)
    return TermTree(root, levels)


def tree_text(tree: TermTree) -> str:
    """Indented outline, one node per line: ``(depth,index) term : type``."""
    lines = []

    def walk(n, indent):
        lines.append(f"{'  ' * indent}({n.depth},{n.level_index}) {n.term_label} : {n.type_label}")
        for c in n.children:
            walk(c, indent + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _q(s: str) -> str:
    return f'"{_esc(s)}"'


def tree_dot(tree: TermTree, name: str = "termtree") -> str:
    lines = [f"digraph {_q(name)} {{", "  node [shape=box];"]
    for n in tree.nodes():
        nid = _q(f"n{n.depth}_{n.level_index}")
        # \n inside a DOT label is a line break
        label = "\\n".join(_esc(x) for x in (n.term_label, n.type_label,
                                             f"({n.depth},{n.level_index})"))
        lines.append(f'  {nid} [label="{label}"];')
    for n in tree.nodes():
        for c in n.children:
            lines.append(f"  {_q(f'n{n.depth}_{n.level_index}')} -> {_q(f'n{c.depth}_{c.level_index}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"
