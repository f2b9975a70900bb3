import pytest
from hypothesis import given, settings, strategies as st

from proofscope.features import statement_tree
from proofscope.term_tree import (
    KEYWORD_TYPE, UnboundVariable, build_term_tree, render_label, tree_dot, tree_text,
)
from proofscope.terms import (
    App, Arrow, Binder, Const, Sort, Var, app_spine, binder_group, render,
)


def test_dpath_root_and_p(sample):
    tree = statement_tree(sample.entry("dpath_path_l"), sample)
    root = tree.at(0, 0)
    assert root.term_label == "forall"
    assert root.type_label == KEYWORD_TYPE
    p = tree.at(1, 4)
    assert (p.term_label, p.type_label) == ("p", "paths x1 x2")
    assert p.parent is root


def test_dpath_depth_one_and_two(sample):
    tree = statement_tree(sample.entry("dpath_path_l"), sample)
    assert [n.term_label for n in tree.levels[1]] == ["A", "x1", "x2", "y", "p", "q", "r", "Equiv"]
    equiv = tree.at(1, 7)
    assert equiv.type_label == "Type -> Type -> Type"
    d2 = tree.levels[2]
    assert [n.term_label for n in d2] == ["paths ?X", "paths ?Y"]
    assert d2[0].type_label == "?X -> ?X -> Type"
    assert all(n.parent.level_index == 7 for n in d2)


def test_single_variable():
    tree = build_term_tree(Var("x"), [("x", Const("A"))])
    assert tree.depth_count == 1
    assert tree.at(0, 0).term_label == "x"


def test_application_expands_to_children():
    t = App(Const("f"), (Var("x"), Var("y")))
    tree = build_term_tree(t, [("x", Sort("Type")), ("y", Sort("Type"))])
    assert tree.at(0, 0).term_label == "f"
    assert [(n.term_label, n.depth, n.level_index) for n in tree.levels[1]] == [("x", 1, 0), ("y", 1, 1)]


def test_arrow_node_has_two_children():
    tree = build_term_tree(Arrow(Sort("Prop"), Sort("Type")))
    assert tree.at(0, 0).term_label == "->"
    assert [n.term_label for n in tree.levels[1]] == ["Prop", "Type"]


def test_unbound_variable_raises():
    with pytest.raises(UnboundVariable):
        build_term_tree(App(Const("f"), (Var("z"),)))


PATHS_TYPE = Binder("forall", "A", Sort("Type"),
                    Arrow(Var("A"), Arrow(Var("A"), Sort("Type"))))


def types(name):
    return {"paths": PATHS_TYPE}.get(name)


def test_partial_paths_label():
    term, ty, _ = render_label(Const("paths"), types)
    assert term == "paths ?X"
    assert ty == "?X -> ?X -> Type"


def test_full_application_renders_plainly():
    assert render(App(Const("paths"), (Var("x1"), Var("x2")))) == "paths x1 x2"


def test_metavariables_count_across_the_tree():
    t = App(Const("paths"), (App(Const("paths"), (Sort("Type"), Sort("Type"))), Sort("Type")))
    tree = build_term_tree(t, types=types)
    assert tree.at(0, 0).term_label == "paths ?X"
    assert tree.at(1, 0).term_label == "paths ?Y"


def test_sort_label():
    assert render_label(Sort("Type"), types)[0] == "Type"


def test_text_and_dot_render(sample):
    tree = statement_tree(sample.entry("dpath_path_l"), sample)
    text = tree_text(tree)
    assert text.splitlines()[0] == "(0,0) forall : #Gallina"
    dot = tree_dot(tree)
    assert dot.startswith("digraph")
    assert dot.count("->") >= sum(len(n.children) for n in tree.nodes())


# --- properties ---------------------------------------------------------------

NAMES = ["a", "b", "c", "d"]


@st.composite
def closed_terms(draw, depth=4, scope=()):
    """Random well-scoped terms; binders introduce names into scope."""
    choices = ["const", "sort"] + (["var"] * 2 if scope else [])
    if depth > 0:
        choices += ["app", "binder", "arrow"]
    kind = draw(st.sampled_from(choices))
    if kind == "var":
        return Var(draw(st.sampled_from(list(scope))))
    if kind == "const":
        return Const(draw(st.sampled_from(["c", "k"])))
    if kind == "sort":
        return Sort(draw(st.sampled_from(["Type", "Prop"])))
    if kind == "app":
        head = draw(st.one_of(st.sampled_from(["c", "k"]).map(Const),
                              *([st.sampled_from(list(scope)).map(Var)] if scope else [])))
        n = draw(st.integers(1, 3))
        return App(head, tuple(draw(closed_terms(depth - 1, scope)) for _ in range(n)))
    if kind == "arrow":
        return Arrow(draw(closed_terms(depth - 1, scope)), draw(closed_terms(depth - 1, scope)))
    name = draw(st.sampled_from(NAMES))
    ty = draw(closed_terms(depth - 1, scope))
    body = draw(closed_terms(depth - 1, tuple(scope) + (name,)))
    return Binder(draw(st.sampled_from(["forall", "lambda", "let"])), name, ty, body)


def expected_nodes(t):
    """Node count from the construction rules, computed without building a tree."""
    if isinstance(t, Binder):
        group, body = binder_group(t)
        return 1 + len(group) + expected_nodes(body)
    if isinstance(t, App):
        _, args = app_spine(t)
        return 1 + sum(expected_nodes(a) for a in args)
    if isinstance(t, Arrow):
        return 1 + expected_nodes(t.src) + expected_nodes(t.dst)
    return 1


@settings(max_examples=200, deadline=None)
@given(closed_terms())
def test_node_count_matches_rules(t):
    tree = build_term_tree(t)
    assert sum(1 for _ in tree.nodes()) == expected_nodes(t)


@settings(max_examples=200, deadline=None)
@given(closed_terms())
def test_level_indices_are_breadth_first(t):
    tree = build_term_tree(t)
    for d, level in enumerate(tree.levels):
        assert [n.level_index for n in level] == list(range(len(level)))
        assert all(n.depth == d for n in level)
        if d:
            parents = [n.parent.level_index for n in level]
            assert parents == sorted(parents)
            assert all(n in n.parent.children for n in level)


def rename(t, mapping):
    """Consistently rename every bound variable."""
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, App):
        return App(rename(t.head, mapping), tuple(rename(a, mapping) for a in t.args))
    if isinstance(t, Arrow):
        return Arrow(rename(t.src, mapping), rename(t.dst, mapping))
    if isinstance(t, Binder):
        return Binder(t.kind, mapping.get(t.name, t.name), rename(t.type, mapping),
                      rename(t.body, mapping))
    return t


@settings(max_examples=200, deadline=None)
@given(closed_terms())
def test_structure_is_alpha_invariant(t):
    fresh = {n: n.upper() + "_" for n in NAMES}
    a, b = build_term_tree(t), build_term_tree(rename(t, fresh))
    assert [[(n.role, n.key, n.level_index, len(n.children)) for n in lvl] for lvl in a.levels] == \
           [[(n.role, n.key, n.level_index, len(n.children)) for n in lvl] for lvl in b.levels]
