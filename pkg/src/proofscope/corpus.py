"""Corpus data model, reader, writer and validator.

A corpus file is a sequence of s-expressions::

    (library Overture (imports))
    (primitive inductive paths (library Overture) (type ...) (code 2.0))
    (entry theorem foo (library Paths) (statement ...) (proof (step ...) ...) (deps ...))

See ``docs/corpus-format.md`` for the full grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .sexpr import Atom, SexprError, SList, read_all
from .terms import (
    BINDER_KINDS, SORTS, App, Arrow, Binder, Const, Sort, Term, Var, constants,
    free_vars, subterms, to_sexpr,
)

KINDS = ("theorem", "definition", "inductive", "constructor", "inner-constructor")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_QUALIFIED = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(\.[A-Za-z_][A-Za-z0-9_']*)*\Z")


class CorpusError(Exception):
    """Raised by :func:`parse_corpus` for syntax or validation failures."""

    def __init__(self, message: str, diagnostics=None, line: Optional[int] = None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])
        self.line = line


@dataclass(frozen=True)
class TacticStep:
    tactic: str
    args: tuple
    goal_before: Term
    subgoals_after: int


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    library: str
    statement: Term
    proof: Optional[tuple] = None
    declared_deps: Optional[tuple] = None
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class Primitive:
    """A base-library constant with a fixed numeric code."""

    name: str
    kind: str
    library: str
    type: Optional[Term]
    code: float
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class Library:
    name: str
    imports: tuple


@dataclass(frozen=True)
class Corpus:
    entries: tuple
    libraries: tuple = ()
    primitives: tuple = ()

    def entry(self, name: str) -> CorpusEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    @cached_property
    def _types(self) -> dict:
        types = {e.name: e.statement for e in reversed(self.entries)}
        types.update({p.name: p.type for p in reversed(self.primitives)})
        return types

    def type_of(self, name: str) -> Optional[Term]:
        """Declared type of a constant: a primitive's type or an entry's statement."""
        return self._types.get(name)

    def node_info(self) -> dict[str, tuple[str, str]]:
        """name -> (kind, library) for every primitive and entry."""
        info = {p.name: (p.kind, p.library) for p in self.primitives}
        info.update({e.name: (e.kind, e.library) for e in self.entries})
        return info


@dataclass(frozen=True)
class Diagnostic:
    entry: str
    rule: str
    detail: str = ""

    def __str__(self):
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.entry}: {self.rule}{tail}"


# --- reading ----------------------------------------------------------------

def _atom(x, what: str) -> str:
    if not isinstance(x, Atom):
        raise SexprError(x.line, x.col, what, "a list")
    return x.text


def _ident(x, what="identifier", pattern=_IDENT) -> str:
    text = _atom(x, what)
    if not pattern.match(text):
        raise SexprError(x.line, x.col, what, repr(text))
    return text


def _head(form: SList, *expected: str) -> str:
    if not form.items:
        raise SexprError(form.line, form.col, " or ".join(expected), "'()'")
    head = form.items[0]
    if not isinstance(head, Atom) or head.text not in expected:
        found = repr(head.text) if isinstance(head, Atom) else "a list"
        raise SexprError(head.line, head.col, " or ".join(repr(e) for e in expected), found)
    return head.text


def _list(x, what: str) -> SList:
    if not isinstance(x, SList):
        raise SexprError(x.line, x.col, what, repr(x.text))
    return x


def _arity(form: SList, n: int, what: str):
    if len(form.items) != n:
        raise SexprError(form.line, form.col, what,
                         f"{len(form.items) - 1} operand(s)")


def read_term(x) -> Term:
    form = _list(x, "a term")
    tag = _head(form, "var", "const", "sort", "app", "arrow", *BINDER_KINDS)
    items = form.items
    if tag == "var":
        _arity(form, 2, "(var <identifier>)")
        return Var(_ident(items[1], "variable name"))
    if tag == "const":
        _arity(form, 2, "(const <qualified-name>)")
        return Const(_ident(items[1], "qualified name", _QUALIFIED))
    if tag == "sort":
        _arity(form, 2, "(sort Type|Prop|Set)")
        name = _atom(items[1], "sort name")
        if name not in SORTS:
            raise SexprError(items[1].line, items[1].col, "Type, Prop or Set", repr(name))
        return Sort(name)
    if tag == "app":
        if len(items) < 3:
            raise SexprError(form.line, form.col, "(app <term> <term>+)",
                             f"{len(items) - 1} operand(s)")
        return App(read_term(items[1]), tuple(read_term(a) for a in items[2:]))
    if tag == "arrow":
        _arity(form, 3, "(arrow <term> <term>)")
        return Arrow(read_term(items[1]), read_term(items[2]))
    _arity(form, 3, f"({tag} (<name> <term>) <term>)")
    bound = _list(items[1], "(<name> <term>)")
    if len(bound.items) != 2:
        raise SexprError(bound.line, bound.col, "(<name> <term>)")
    return Binder(tag, _ident(bound.items[0], "bound variable name"),
                  read_term(bound.items[1]), read_term(items[2]))


def _read_step(x) -> TacticStep:
    form = _list(x, "(step ...)")
    _head(form, "step")
    _arity(form, 5, "(step <tactic> (args ...) (goal ...) (subgoals k))")
    tactic = _ident(form.items[1], "tactic name")
    args = _list(form.items[2], "(args <term>*)")
    _head(args, "args")
    goal = _list(form.items[3], "(goal <term>)")
    _head(goal, "goal")
    _arity(goal, 2, "(goal <term>)")
    sub = _list(form.items[4], "(subgoals <k>)")
    _head(sub, "subgoals")
    _arity(sub, 2, "(subgoals <k>)")
    k_text = _atom(sub.items[1], "subgoal count")
    if not k_text.isdigit():
        raise SexprError(sub.items[1].line, sub.items[1].col,
                         "a nonnegative integer", repr(k_text))
    return TacticStep(tactic, tuple(read_term(a) for a in args.items[1:]),
                      read_term(goal.items[1]), int(k_text))


def _clauses(form: SList, start: int, allowed: tuple) -> dict:
    seen: dict = {}
    for c in form.items[start:]:
        c = _list(c, "a clause")
        tag = _head(c, *allowed)
        if tag in seen:
            raise SexprError(c.line, c.col, f"at most one ({tag} ...) clause")
        seen[tag] = c
    return seen


def _read_library(form: SList) -> Library:
    _arity(form, 3, "(library <id> (imports <id>*))")
    name = _ident(form.items[1], "library name")
    imports = _list(form.items[2], "(imports <id>*)")
    _head(imports, "imports")
    return Library(name, tuple(_ident(i, "library name") for i in imports.items[1:]))


def _single_library(libraries) -> Optional[str]:
    if len(libraries) == 1:
        return libraries[0].name
    return "Top" if not libraries else None


def _clause_library(clauses, libraries, form) -> str:
    if "library" in clauses:
        c = clauses["library"]
        _arity(c, 2, "(library <id>)")
        return _ident(c.items[1], "library name")
    default = _single_library(libraries)
    if default is None:
        raise SexprError(form.line, form.col, "a (library <id>) clause")
    return default


def _read_primitive(form: SList, libraries) -> Primitive:
    if len(form.items) < 3:
        raise SexprError(form.line, form.col, "(primitive <kind> <name> ...)")
    kind = _atom(form.items[1], "kind")
    if kind not in KINDS:
        raise SexprError(form.items[1].line, form.items[1].col, "|".join(KINDS), repr(kind))
    name = _ident(form.items[2], "qualified name", _QUALIFIED)
    clauses = _clauses(form, 3, ("library", "type", "code"))
    ty = None
    if "type" in clauses:
        _arity(clauses["type"], 2, "(type <term>)")
        ty = read_term(clauses["type"].items[1])
    code = None
    if "code" in clauses:
        c = clauses["code"]
        _arity(c, 2, "(code <number>)")
        try:
            code = float(_atom(c.items[1], "number"))
        except ValueError:
            raise SexprError(c.items[1].line, c.items[1].col, "a number",
                             repr(c.items[1].text)) from None
    return Primitive(name, kind, _clause_library(clauses, libraries, form), ty,
                     code if code is not None else float("nan"), line=form.line)


def _read_entry(form: SList, libraries) -> CorpusEntry:
    if len(form.items) < 3:
        raise SexprError(form.line, form.col, "(entry <kind> <name> (statement ...) ...)")
    kind = _atom(form.items[1], "kind")
    if kind not in KINDS:
        raise SexprError(form.items[1].line, form.items[1].col, "|".join(KINDS), repr(kind))
    name = _ident(form.items[2], "qualified name", _QUALIFIED)
    clauses = _clauses(form, 3, ("library", "statement", "proof", "deps"))
    if "statement" not in clauses:
        raise SexprError(form.line, form.col, "a (statement <term>) clause")
    st = clauses["statement"]
    _arity(st, 2, "(statement <term>)")
    proof = None
    if "proof" in clauses:
        proof = tuple(_read_step(s) for s in clauses["proof"].items[1:])
    deps = None
    if "deps" in clauses:
        deps = tuple(_ident(d, "qualified name", _QUALIFIED)
                     for d in clauses["deps"].items[1:])
    return CorpusEntry(name, kind, _clause_library(clauses, libraries, form),
                       read_term(st.items[1]), proof, deps, line=form.line)


def _default_codes(prims: list[Primitive]) -> tuple:
    # unset codes spread over [2, 9): between variable codes (0, 1) and cluster codes (>= 10)
    n = len(prims)
    out = []
    for i, p in enumerate(prims):
        if p.code != p.code:  # NaN: no explicit code
            p = Primitive(p.name, p.kind, p.library, p.type, 2.0 + 7.0 * i / n, line=p.line)
        out.append(p)
    return tuple(out)


def read_corpus(text: str) -> Corpus:
    """Syntax-only read; no cross-entry checks."""
    libraries: list[Library] = []
    prims: list[Primitive] = []
    entries: list[CorpusEntry] = []
    for form in read_all(text):
        tag = _head(form, "library", "primitive", "entry")
        if tag == "library":
            if prims or entries:
                raise SexprError(form.line, form.col,
                                 "library declarations before primitives and entries")
            libraries.append(_read_library(form))
        elif tag == "primitive":
            if entries:
                raise SexprError(form.line, form.col, "primitives before entries")
            prims.append(_read_primitive(form, libraries))
        else:
            entries.append(_read_entry(form, libraries))
    return Corpus(tuple(entries), tuple(libraries), _default_codes(prims))


def parse_corpus(text: str) -> Corpus:
    """Read and validate a corpus; raise :class:`CorpusError` on any problem."""
    try:
        corpus = read_corpus(text)
    except SexprError as exc:
        raise CorpusError(f"syntax error at {exc}", line=exc.line) from exc
    diags = validate_corpus(corpus)
    if diags:
        first = diags[0]
        line = None
        try:
            line = corpus.entry(first.entry).line
        except KeyError:
            pass
        raise CorpusError(str(first), diags, line=line)
    return corpus


# --- writing ----------------------------------------------------------------

def _fmt_code(x: float) -> str:
    return repr(float(x))


def serialize(corpus: Corpus) -> str:
    out: list[str] = []
    for lib in corpus.libraries:
        out.append(f"(library {lib.name} (imports{''.join(' ' + i for i in lib.imports)}))")
    for p in corpus.primitives:
        parts = [f"(primitive {p.kind} {p.name} (library {p.library})"]
        if p.type is not None:
            parts.append(f" (type {to_sexpr(p.type)})")
        parts.append(f" (code {_fmt_code(p.code)}))")
        out.append("".join(parts))
    for e in corpus.entries:
        lines = [f"(entry {e.kind} {e.name} (library {e.library})",
                 f"  (statement {to_sexpr(e.statement)})"]
        if e.proof is not None:
            lines.append("  (proof")
            for s in e.proof:
                args = "".join(" " + to_sexpr(a) for a in s.args)
                lines.append(f"    (step {s.tactic} (args{args}) (goal {to_sexpr(s.goal_before)})"
                             f" (subgoals {s.subgoals_after}))")
            lines[-1] += ")"
        if e.declared_deps is not None:
            lines.append(f"  (deps{''.join(' ' + d for d in e.declared_deps)})")
        lines[-1] += ")"
        out.append("\n".join(lines))
    return "\n".join(out) + "\n"


# --- validation -------------------------------------------------------------

def goal_context(goal: Term) -> tuple[list[tuple[str, Term]], Term]:
    """Hypotheses of a goal are its leading ``forall`` binders; the rest is the conclusion."""
    ctx = []
    while isinstance(goal, Binder) and goal.kind == "forall":
        ctx.append((goal.name, goal.type))
        goal = goal.body
    return ctx, goal


def entry_mentions(entry: CorpusEntry) -> set[str]:
    """Every constant named by a statement, proof argument, proof goal or deps clause."""
    names = constants(entry.statement)
    for step in entry.proof or ():
        names |= constants(step.goal_before)
        for a in step.args:
            names |= constants(a)
    names |= set(entry.declared_deps or ())
    names.discard(entry.name)
    return names


def _term_shape_errors(t: Term) -> list[str]:
    errs = []
    for s in subterms(t):
        if isinstance(s, App) and not s.args:
            errs.append("application without arguments")
        elif isinstance(s, (Var, Binder)):
            name = s.name
            if not name or not _IDENT.match(name):
                errs.append(f"invalid variable name {name!r}")
        elif isinstance(s, Const) and not _QUALIFIED.match(s.name or ""):
            errs.append(f"invalid constant name {s.name!r}")
        elif isinstance(s, Sort) and s.name not in SORTS:
            errs.append(f"invalid sort {s.name!r}")
        elif isinstance(s, Binder) and s.kind not in BINDER_KINDS:
            errs.append(f"invalid binder kind {s.kind!r}")
    return errs


def validate_corpus(corpus: Corpus) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    libs = {lib.name for lib in corpus.libraries}
    for lib in corpus.libraries:
        for imp in lib.imports:
            if imp not in libs:
                diags.append(Diagnostic(lib.name, "unknown library", f"imports undeclared {imp!r}"))

    def check_library(owner, library):
        if corpus.libraries and library not in libs:
            diags.append(Diagnostic(owner, "unknown library", f"{library!r} is not declared"))

    known: set[str] = set()
    prim_names = [p.name for p in corpus.primitives]
    all_entry_names = {e.name for e in corpus.entries}
    for p in corpus.primitives:
        if p.name in known:
            diags.append(Diagnostic(p.name, "duplicate name"))
        check_library(p.name, p.library)
        if p.type is not None:
            for msg in _term_shape_errors(p.type):
                diags.append(Diagnostic(p.name, "malformed term", msg))
            for v in sorted(free_vars(p.type)):
                diags.append(Diagnostic(p.name, "unbound variable", v))
            for c in sorted(constants(p.type) - known - {p.name}):
                rule = "forward reference" if c in prim_names else "unresolved reference"
                diags.append(Diagnostic(p.name, rule, c))
        known.add(p.name)

    for e in corpus.entries:
        if e.name in known:
            diags.append(Diagnostic(e.name, "duplicate name"))
        if e.kind not in KINDS:
            diags.append(Diagnostic(e.name, "invalid kind", e.kind))
        check_library(e.name, e.library)
        terms = [("statement", e.statement)]
        for msg in _term_shape_errors(e.statement):
            diags.append(Diagnostic(e.name, "malformed term", msg))
        for v in sorted(free_vars(e.statement)):
            diags.append(Diagnostic(e.name, "unbound variable", f"{v} in statement"))
        if e.kind == "theorem" and not e.proof:
            diags.append(Diagnostic(e.name, "theorem without proof"))
        for i, step in enumerate(e.proof or (), start=1):
            if not step.tactic:
                diags.append(Diagnostic(e.name, "empty tactic", f"step {i}"))
            if step.subgoals_after < 0:
                diags.append(Diagnostic(e.name, "negative subgoal count", f"step {i}"))
            for v in sorted(free_vars(step.goal_before)):
                diags.append(Diagnostic(e.name, "unbound variable", f"{v} in goal of step {i}"))
            ctx = {n for n, _ in goal_context(step.goal_before)[0]}
            for a in step.args:
                for v in sorted(free_vars(a) - ctx):
                    diags.append(Diagnostic(e.name, "unbound variable",
                                            f"{v} in argument of step {i}"))
            terms.append(("goal", step.goal_before))
            terms += [("argument", a) for a in step.args]
        for _, t in terms[1:]:
            for msg in _term_shape_errors(t):
                diags.append(Diagnostic(e.name, "malformed term", msg))
        for c in sorted(entry_mentions(e) - known):
            rule = "forward reference" if c in all_entry_names else "unresolved reference"
            diags.append(Diagnostic(e.name, rule, c))
        known.add(e.name)
    return diags
