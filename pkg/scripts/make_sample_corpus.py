#!/usr/bin/env python3
"""Regenerate src/proofscope/data/paths.corpus.

The sample corpus is a synthetic stand-in for the HoTT ``Paths`` file: base
definitions are primitives spread over three libraries, and 26 theorems fall
into four statement families crossed with five proof strategies.

    python scripts/make_sample_corpus.py > src/proofscope/data/paths.corpus
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from proofscope.corpus import (  # noqa: E402
    Corpus, CorpusEntry, Library, Primitive, TacticStep, goal_context, serialize,
)
from proofscope.terms import App, Arrow, Binder, Const, Sort, Var, app_spine  # noqa: E402

TYPE = Sort("Type")


def v(name):
    return Var(name)


def c(name, *args):
    return App(Const(name), tuple(args)) if args else Const(name)


def va(name, *args):
    return App(Var(name), tuple(args))


def eq(a, b):
    return c("paths", a, b)


def pi(binds, body, kind="forall"):
    for name, ty in reversed(binds):
        body = Binder(kind, name, ty, body)
    return body


def lam(name, ty, body):
    return Binder("lambda", name, ty, body)


def arrows(*ts):
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def implicits(*names, ty=v("A")):
    return [(n, ty) for n in names]


# --- base libraries -----------------------------------------------------------

PRIMS = [
    ("inductive", "paths", "Overture",
     pi([("A", TYPE)], arrows(v("A"), v("A"), TYPE)), 2.0),
    ("constructor", "idpath", "Overture",
     pi([("A", TYPE), ("a", v("A"))], eq(v("a"), v("a"))), 2.1),
    ("definition", "concat", "Overture",
     pi([("A", TYPE)] + implicits("x", "y", "z"),
        arrows(eq(v("x"), v("y")), eq(v("y"), v("z")), eq(v("x"), v("z")))), 2.3),
    ("definition", "inverse", "Overture",
     pi([("A", TYPE)] + implicits("x", "y"), arrows(eq(v("x"), v("y")), eq(v("y"), v("x")))), 2.4),
    ("definition", "transport", "Overture",
     pi([("A", TYPE), ("P", arrows(v("A"), TYPE))] + implicits("x", "y"),
        arrows(eq(v("x"), v("y")), va("P", v("x")), va("P", v("y")))), 2.5),
    ("definition", "ap", "Overture",
     pi([("A", TYPE), ("B", TYPE), ("f", arrows(v("A"), v("B")))] + implicits("x", "y"),
        arrows(eq(v("x"), v("y")), eq(va("f", v("x")), va("f", v("y"))))), 2.6),
    ("inductive", "IsEquiv", "Overture",
     pi([("A", TYPE), ("B", TYPE)], arrows(arrows(v("A"), v("B")), TYPE)), 3.0),
    ("inner-constructor", "equiv_inv", "Overture",
     pi([("A", TYPE), ("B", TYPE), ("f", arrows(v("A"), v("B")))],
        arrows(c("IsEquiv", v("f")), v("B"), v("A"))), 3.1),
    ("inductive", "Equiv", "Overture", arrows(TYPE, TYPE, TYPE), 3.2),
    ("constructor", "BuildEquiv", "Overture",
     pi([("A", TYPE), ("B", TYPE), ("f", arrows(v("A"), v("B")))],
        arrows(c("IsEquiv", v("f")), c("Equiv", v("A"), v("B")))), 3.3),
    ("theorem", "concat_1p", "PathGroupoids",
     pi([("A", TYPE)] + implicits("x", "y") + [("p", eq(v("x"), v("y")))],
        eq(c("concat", c("idpath", v("x")), v("p")), v("p"))), 2.7),
    ("theorem", "concat_p1", "PathGroupoids",
     pi([("A", TYPE)] + implicits("x", "y") + [("p", eq(v("x"), v("y")))],
        eq(c("concat", v("p"), c("idpath", v("y"))), v("p"))), 2.75),
    ("theorem", "concat_pV", "PathGroupoids",
     pi([("A", TYPE)] + implicits("x", "y") + [("p", eq(v("x"), v("y")))],
        eq(c("concat", v("p"), c("inverse", v("p"))), c("idpath", v("x")))), 2.8),
    ("definition", "equiv_concat_l", "Equivalences",
     pi([("A", TYPE)] + implicits("x", "y", "z") + [("p", eq(v("x"), v("y")))],
        c("Equiv", eq(v("y"), v("z")), eq(v("x"), v("z")))), 3.5),
    ("definition", "equiv_concat_r", "Equivalences",
     pi([("A", TYPE)] + implicits("x", "y", "z") + [("p", eq(v("y"), v("z")))],
        c("Equiv", eq(v("x"), v("y")), eq(v("x"), v("z")))), 3.55),
    ("definition", "equiv_compose", "Equivalences",
     pi([("A", TYPE), ("B", TYPE), ("C", TYPE)],
        arrows(c("Equiv", v("B"), v("C")), c("Equiv", v("A"), v("B")), c("Equiv", v("A"), v("C")))),
     3.6),
    ("theorem", "isequiv_concat_l", "Equivalences",
     pi([("A", TYPE)] + implicits("x", "y", "z") + [("p", eq(v("x"), v("y")))],
        c("IsEquiv", c("concat", v("p")))), 3.7),
    ("theorem", "isequiv_concat_r", "Equivalences",
     pi([("A", TYPE)] + implicits("x", "y", "z") + [("p", eq(v("y"), v("z")))],
        c("IsEquiv", lam("q", eq(v("x"), v("y")), c("concat", v("q"), v("p"))))), 3.75),
]

LIBRARIES = [
    Library("Overture", ()),
    Library("PathGroupoids", ("Overture",)),
    Library("Equivalences", ("Overture", "PathGroupoids")),
    Library("Paths", ("Overture", "PathGroupoids", "Equivalences")),
]


# --- goal manipulation for the recorded traces -----------------------------------

def subst(t, name, value):
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(subst(t.head, name, value), tuple(subst(a, name, value) for a in t.args))
    if isinstance(t, Binder):
        body = t.body if t.name == name else subst(t.body, name, value)
        return Binder(t.kind, t.name, subst(t.type, name, value), body)
    if isinstance(t, Arrow):
        return Arrow(subst(t.src, name, value), subst(t.dst, name, value))
    return t


def simplify(t):
    """The reductions ``simpl`` performs on identity paths."""
    if isinstance(t, App):
        head, args = app_spine(t)
        args = [simplify(a) for a in args]
        if isinstance(head, Const):
            if head.name == "transport" and len(args) == 3 and _is_refl(args[1]):
                return args[2]
            if head.name == "concat" and len(args) == 2 and _is_refl(args[0]):
                return args[1]
            if head.name == "inverse" and len(args) == 1 and _is_refl(args[0]):
                return args[0]
            if head.name == "ap" and len(args) == 2 and _is_refl(args[1]):
                return c("idpath", App(args[0], (args[1].args[0],)))
        return App(head, tuple(args))
    if isinstance(t, Binder):
        return Binder(t.kind, t.name, simplify(t.type), simplify(t.body))
    if isinstance(t, Arrow):
        return Arrow(simplify(t.src), simplify(t.dst))
    return t


def _is_refl(t):
    return isinstance(t, App) and t.head == Const("idpath")


def destruct(goal, var):
    """Path induction on ``var : a = b`` with ``b`` (or ``a``) a free endpoint."""
    ctx, concl = goal_context(goal)
    ty = dict(ctx)[var]
    _, (a, b) = app_spine(ty)
    names = [n for n, _ in ctx]
    if isinstance(b, Var) and b.name in names and b != a:
        gone, keep = b.name, a
    else:
        gone, keep = a.name, b
    out = []
    for n, t in ctx:
        if n in (var, gone):
            continue
        out.append((n, t))
    new = pi(out, concl)
    new = subst(new, gone, keep)
    return subst(new, var, c("idpath", keep))


def step(tactic, goal, *args, subgoals=1):
    return TacticStep(tactic, tuple(args), goal, subgoals)


# strategy 1: case analysis on one path, refine, two exacts
def s1(stmt, path, left, right):
    g1 = stmt
    g2 = simplify(destruct(stmt, path))
    ctx, concl = goal_context(g2)
    _, (lhs, rhs) = app_spine(concl)
    mid = eq(left, right)
    g3 = pi(ctx, c("Equiv", lhs, mid))
    g4 = pi(ctx, c("Equiv", mid, rhs))
    return (step("destruct", g1, v(path)), step("simpl", g1),
            step("refine", g2, c("equiv_compose", c("equiv_concat_l", v("r")),
                                  c("equiv_concat_r", v("q"))), subgoals=2),
            step("exact", g3, c("equiv_concat_l", c("inverse", c("concat_p1", v("q"))), v("r")),
                 subgoals=1),
            step("exact", g4, c("equiv_concat_r", c("concat_1p", v("r")), v("q")), subgoals=0))


# strategy 2: case analysis on one path, then exact
def s2(stmt, path, proof_term):
    g2 = simplify(destruct(stmt, path))
    return (step("destruct", stmt, v(path)), step("simpl", stmt),
            step("exact", g2, proof_term, subgoals=0))


# strategy 3: case analysis on two paths, then reflexivity
def s3(stmt, p1, p2):
    g2 = simplify(destruct(destruct(stmt, p1), p2))
    return (step("destruct", stmt, v(p1)), step("destruct", stmt, v(p2)),
            step("reflexivity", g2, subgoals=0))


# strategy 4: case analysis on two paths, simplification, apply
def s4(stmt, p1, p2, lemma):
    g2 = simplify(destruct(destruct(stmt, p1), p2))
    return (step("destruct", stmt, v(p1)), step("destruct", stmt, v(p2)), step("simpl", stmt),
            step("apply", g2, lemma, subgoals=0))


# strategy 5: case analysis on one path, then apply
def s5(stmt, p1, lemma):
    g2 = destruct(stmt, p1)
    return (step("destruct", stmt, v(p1)), step("apply", g2, lemma, subgoals=0))


def thm(name, stmt, proof, deps=None):
    return CorpusEntry(name, "theorem", "Paths", stmt, proof, deps)


# --- statement families -------------------------------------------------------

A = [("A", TYPE)]


def dpath(binds, left, right, fam):
    """q = ... <~> transport fam p q = r"""
    return pi(binds, c("Equiv", eq(left, right),
                       eq(c("transport", fam, v("p"), v("q")), v("r"))))


def transport_stmt(binds, fam, rhs):
    return pi(binds, eq(c("transport", fam, v("p"), v("q")), rhs))


def cancel_stmt(binds, hyp, concl):
    return pi(binds, Arrow(hyp, concl))


def isequiv_stmt(binds, fn, *args):
    return pi(binds, c("IsEquiv", c(fn, *args)))


def build_entries():
    """Each statement family fixes one tree shape and one telescope length;
    members differ only in which variables fill the leaves.  Shapes are chosen
    for the planted-family tests, so not every member is a true lemma."""
    E = []
    pp, qq, rr = v("p"), v("q"), v("r")
    x1, x2, y = v("x1"), v("x2"), v("y")
    X, Y, Z = v("x"), v("y"), v("z")
    cat = lambda a, b: c("concat", a, b)
    vs = lambda names: [v(n) for n in names]

    left_tel = A + implicits("x1", "x2", "y") + [("p", eq(x1, x2)), ("q", eq(x1, y))]
    right_tel = A + implicits("x", "y1", "y2") + [("p", eq(v("y1"), v("y2"))),
                                                  ("q", eq(X, v("y1")))]
    left_fam = lam("w", v("A"), eq(v("w"), y))
    right_fam = lam("w", v("A"), eq(X, v("w")))
    tels = {"left": (left_tel, left_fam, ("r", eq(x2, y))),
            "right": (right_tel, right_fam, ("r", eq(X, v("y2"))))}

    # -- dependent paths: (a = b @ c) <~> (transport _ p q = r)
    dpaths = [
        ("dpath_path_l", "left", "qpr", 2, c("equiv_concat_r", c("concat_1p", rr), qq)),
        ("dpath_path_r", "right", "rqp", 2, c("equiv_concat_l", c("inverse", c("concat_p1", qq)), rr)),
        ("dpath_path_lr", "left", "qrp", 1, None),
        ("dpath_path_Vl", "right", "pqr", 1, None),
        ("dpath_path_lV", "left", "rpq", 1, None),
        ("dpath_path_rV", "right", "prq", 1, None),
    ]
    for name, side, leaves, strategy, term in dpaths:
        tel, fam, r_bind = tels[side]
        a, b, d = vs(leaves)
        st = dpath(tel + [r_bind], a, cat(b, d), fam)
        if strategy == 2:
            proof = s2(st, "p", term)
        else:
            proof = s1(st, "p", cat(qq, c("idpath", x1 if side == "left" else v("y1"))), rr)
        E.append(thm(name, st, proof, deps=("concat_pV",) if name == "dpath_path_rV" else None))

    # -- transport in path spaces: transport _ p q = a @ b
    transports = [
        ("transport_paths_l", "left", "pq", 3, None),
        ("transport_paths_r", "right", "qp", 3, None),
        ("transport_paths_lr", "left", "qp", 2,
         c("inverse", c("concat_p1", cat(c("idpath", x1), qq)))),
        ("transport_paths_Vl", "right", "pq", 3, None),
        ("transport_paths_rV", "left", "qq", 3, None),
        ("transport_paths_pp", "right", "pp", 2,
         c("inverse", c("concat_1p", cat(qq, c("idpath", v("y1")))))),
    ]
    for name, side, leaves, strategy, term in transports:
        tel, fam, _ = tels[side]
        st = transport_stmt(tel, fam, cat(*vs(leaves)))
        E.append(thm(name, st, s2(st, "p", term) if strategy == 2 else s3(st, "p", "q")))

    # -- cancellation and moves: a @ b = c -> d = e @ f
    xyz = A + implicits("x", "y", "z")
    path_tel = [("p", eq(X, Y)), ("q", eq(Y, Z)), ("r", eq(X, Z))]
    moves = [
        ("cancelL", "pqrqpr", c("concat_1p", rr)),
        ("cancelR", "qprpqr", c("concat_p1", rr)),
        ("moveR_Mp", "pqrrpq", c("concat_1p", rr)),
        ("moveR_pM", "qprrqp", c("concat_p1", rr)),
        ("moveL_Mp", "rpqqrp", c("concat_1p", rr)),
        ("moveL_pM", "rqpprq", c("concat_p1", rr)),
        ("moveR_Vp", "prqqpr", c("concat_1p", rr)),
    ]
    for name, leaves, lemma in moves:
        a, b, d, e, f, g = vs(leaves)
        st = cancel_stmt(xyz + path_tel, eq(cat(a, b), d), eq(e, cat(f, g)))
        E.append(thm(name, st, s4(st, "p", "q", lemma)))

    # -- equivalence of the moves: IsEquiv (move p q r)
    for i, (name, _, _) in enumerate(moves):
        st = isequiv_stmt(xyz + path_tel, name, pp, qq, rr)
        lemma = c("isequiv_concat_l" if i % 2 == 0 else "isequiv_concat_r", rr)
        E.append(thm("isequiv_" + name, st, s5(st, "p", lemma)))
    return E


HEADER = """\
; Synthetic stand-in for the HoTT Paths library.
; Generated by scripts/make_sample_corpus.py; edit the script, not this file.
;
; Statement families: dpath_path_* (Equiv ... ...), transport_paths_* (transport ... = ...),
; cancel/move implications (_ = _ -> _ = _), isequiv_* (IsEquiv (move ...)).
; Within a family only the leaves vary, so some members are not true lemmas.
; Proof strategies:
;   1  destruct; simpl | refine | exact | exact
;   2  destruct; simpl | exact
;   3  destruct; destruct | reflexivity
;   4  destruct; destruct; simpl | apply
;   5  destruct | apply
"""


def main():
    prims = tuple(Primitive(n, k, lib, ty, code) for k, n, lib, ty, code in PRIMS)
    corpus = Corpus(tuple(build_entries()), tuple(LIBRARIES), prims)
    sys.stdout.write(HEADER + serialize(corpus))


if __name__ == "__main__":
    main()
