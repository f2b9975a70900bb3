import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from proofscope.corpus import parse_corpus
from proofscope.features import (
    KEYWORD_CODES, KEYWORD_TYPE_CODE, Encoder, FeatureError, TermFeatureMatrix, encode_tree,
    flatten, matrix_csv, meta_code, statement_matrix, statement_tree, statement_vectors, term_code,
    var_code,
)
from proofscope.term_tree import build_term_tree
from proofscope.terms import App, Arrow, Binder, Const, Meta, Sort, Var


@pytest.fixture(scope="module")
def dpath(sample):
    return statement_matrix(sample.entry("dpath_path_l"), sample, Encoder.initial(sample))


def test_root_cell_is_keyword(dpath):
    assert dpath.cell(0, 0) == (KEYWORD_CODES["forall"], KEYWORD_TYPE_CODE, -1.0)


def test_p_lands_at_1_4(dpath, sample):
    term, ty, parent = dpath.cell(1, 4)
    assert parent == 0
    assert term == var_code(5)  # p is the fifth binder
    paths = Encoder.initial(sample).const("paths")
    assert ty == pytest.approx(paths + 1 / 3)  # paths x1 x2


def test_unpopulated_cells_are_zero(dpath, sample):
    tree = statement_tree(sample.entry("dpath_path_l"), sample)
    filled = {(n.depth, n.level_index) for n in tree.nodes()}
    for i in range(dpath.D):
        for j in range(dpath.L):
            if (i, j) not in filled:
                assert dpath.cell(i, j) == (0.0, 0.0, 0.0)
            else:
                assert dpath.cell(i, j) != (0.0, 0.0, 0.0)


def test_depth_two_parent_is_equiv_index(dpath):
    assert dpath.cell(2, 0)[2] == 7
    assert dpath.cell(2, 1)[2] == 7


def test_single_variable_matrix():
    tree = build_term_tree(Var("x"), [("x", Sort("Type"))])
    m = encode_tree(tree, Encoder({}))
    nonzero = {tuple(ix[:2]) for ix in np.argwhere(m.cells != 0)}
    assert nonzero == {(0, 0)}


def test_flatten_shapes():
    m = TermFeatureMatrix(np.zeros((10, 10, 3)))
    v = flatten(m)
    assert v.shape == (300,)
    assert not v.any()
    cells = np.zeros((10, 10, 3))
    cells[0, 0] = (1.5, 2.5, 3.5)
    assert list(flatten(TermFeatureMatrix(cells))[:4]) == [1.5, 2.5, 3.5, 0.0]


def test_grid_overflow_reports_required_size(sample):
    with pytest.raises(FeatureError, match="D=7, L=8"):
        statement_matrix(sample.entry("dpath_path_l"), sample, Encoder.initial(sample), D=5, L=5)


@pytest.mark.parametrize("term, expected", [
    (App(Const("c"), (Sort("Type"), Sort("Type"))), 2.0 + 1 / 3),
    (Binder("forall", "x", Sort("Type"), Binder("forall", "y", Sort("Type"), Sort("Prop"))),
     -2.0 - 1 / 3),
    (Binder("lambda", "x", Sort("Type"), Sort("Prop")), -3.0 - 1 / 2),
    (Arrow(Sort("Type"), Arrow(Sort("Type"), Sort("Type"))), -5.0 - 1 / 3),
    (Meta(0), 1 / 2.5),
    (Sort("Set"), -8.0),
])
def test_term_codes(term, expected):
    assert term_code(term, {}, Encoder({"c": 2.0})) == pytest.approx(expected)


def test_code_ranges_are_disjoint():
    variables = [var_code(i) for i in range(1, 50)]
    metas = [meta_code(i) for i in range(50)]
    assert all(0 < x < 1 for x in variables + metas)
    assert not set(variables) & set(metas)
    assert max(KEYWORD_CODES.values()) < 0


def test_initial_encoder_numbers_entries(sample):
    enc = Encoder.initial(sample)
    assert [enc.const(n) for n in sample.names()[:3]] == [10.0, 20.0, 30.0]


def test_cluster_codes_group_members(sample):
    names = sample.names()
    enc = Encoder.from_clusters(sample, [tuple(names[:2]), tuple(names[2:])])
    assert enc.const(names[0]) == 10.0
    assert enc.const(names[1]) == 10.5
    assert 20.0 <= enc.const(names[-1]) < 21.0


def test_csv_layout(dpath):
    lines = matrix_csv(dpath).splitlines()
    assert lines[0].split(",")[:3] == ["depth", "li0", "li1"]
    assert lines[1].startswith("td0,-2:-1:-1,0:0:0")
    assert len(lines) == 11


CORPUS = """
(primitive inductive T (type (sort Type)))
(entry definition {a} (statement (forall (u (const T)) (forall (v (const T)) (app (const T) (var u) (var v))))))
(entry definition {b} (statement (forall (s (const T)) (forall (w (const T)) (app (const T) (var s) (var w))))))
"""


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["one", "two", "zed"]), st.sampled_from(["uno", "dos"]))
def test_renamed_entries_get_identical_vectors(a, b):
    c = parse_corpus(CORPUS.format(a=a, b=b))
    v = statement_vectors(c, Encoder.from_clusters(c, [tuple(c.names())]))
    assert np.array_equal(v[a], v[b])
