"""Term language: a minimal Gallina-like grammar plus canonical rendering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

SORTS = ("Type", "Prop", "Set")
BINDER_KINDS = ("forall", "lambda", "let")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Sort:
    name: str


@dataclass(frozen=True)
class App:
    head: "Term"
    args: tuple


@dataclass(frozen=True)
class Binder:
    kind: str
    name: str
    type: "Term"
    body: "Term"


@dataclass(frozen=True)
class Arrow:
    src: "Term"
    dst: "Term"


@dataclass(frozen=True)
class Meta:
    """Placeholder for a pending implicit argument (``?X``). Never parsed."""

    index: int


Term = Union[Var, Const, Sort, App, Binder, Arrow, Meta]

_META_LETTERS = "XYZWUV"


def meta_name(index: int) -> str:
    letter = _META_LETTERS[index % len(_META_LETTERS)]
    rnd = index // len(_META_LETTERS)
    return f"?{letter}{rnd}" if rnd else f"?{letter}"


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order walk over every subterm, binder types included."""
    yield t
    if isinstance(t, App):
        yield from subterms(t.head)
        for a in t.args:
            yield from subterms(a)
    elif isinstance(t, Binder):
        yield from subterms(t.type)
        yield from subterms(t.body)
    elif isinstance(t, Arrow):
        yield from subterms(t.src)
        yield from subterms(t.dst)


def constants(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Const)}


def free_vars(t: Term, bound: frozenset = frozenset()) -> set[str]:
    if isinstance(t, Var):
        return set() if t.name in bound else {t.name}
    if isinstance(t, App):
        out = free_vars(t.head, bound)
        for a in t.args:
            out |= free_vars(a, bound)
        return out
    if isinstance(t, Binder):
        return free_vars(t.type, bound) | free_vars(t.body, bound | {t.name})
    if isinstance(t, Arrow):
        return free_vars(t.src, bound) | free_vars(t.dst, bound)
    return set()


def binder_group(t: Term) -> tuple[list[Binder], Term]:
    """Split off the maximal run of binders of the same kind as ``t``."""
    group: list[Binder] = []
    if not isinstance(t, Binder):
        return group, t
    kind = t.kind
    while isinstance(t, Binder) and t.kind == kind:
        group.append(t)
        t = t.body
    return group, t


def app_spine(t: Term) -> tuple[Term, list[Term]]:
    """Flatten nested applications: ``(f a) b`` becomes ``f, [a, b]``."""
    args: list[Term] = []
    while isinstance(t, App):
        args[:0] = list(t.args)
        t = t.head
    return t, args


def substitute(t: Term, name: str, value: Term) -> Term:
    """Replace free occurrences of ``name``. Values are closed (metas), so no capture."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(substitute(t.head, name, value),
                   tuple(substitute(a, name, value) for a in t.args))
    if isinstance(t, Binder):
        body = t.body if t.name == name else substitute(t.body, name, value)
        return Binder(t.kind, t.name, substitute(t.type, name, value), body)
    if isinstance(t, Arrow):
        return Arrow(substitute(t.src, name, value), substitute(t.dst, name, value))
    return t


# --- rendering -------------------------------------------------------------

def _atomic(t: Term) -> bool:
    return isinstance(t, (Var, Const, Sort, Meta))


def render(t: Term) -> str:
    """Canonical text: minimal parentheses, single spaces."""
    if isinstance(t, (Var, Const, Sort)):
        return t.name
    if isinstance(t, Meta):
        return meta_name(t.index)
    if isinstance(t, App):
        head, args = app_spine(t)
        parts = [render(head) if _atomic(head) else f"({render(head)})"]
        parts += [render(a) if _atomic(a) else f"({render(a)})" for a in args]
        return " ".join(parts)
    if isinstance(t, Arrow):
        src = render(t.src)
        if isinstance(t.src, (Arrow, Binder)):
            src = f"({src})"
        return f"{src} -> {render(t.dst)}"
    if isinstance(t, Binder):
        group, body = binder_group(t)
        if t.kind == "let":
            head = " ".join(f"({b.name} : {render(b.type)})" for b in group)
            return f"let {head} in {render(body)}"
        binds = " ".join(f"({b.name} : {render(b.type)})" for b in group)
        if t.kind == "forall":
            return f"forall {binds}, {render(body)}"
        return f"fun {binds} => {render(body)}"
    raise TypeError(f"not a term: {t!r}")


# --- s-expression form -----------------------------------------------------

def to_sexpr(t: Term) -> str:
    if isinstance(t, Var):
        return f"(var {t.name})"
    if isinstance(t, Const):
        return f"(const {t.name})"
    if isinstance(t, Sort):
        return f"(sort {t.name})"
    if isinstance(t, App):
        return "(app " + " ".join(to_sexpr(x) for x in (t.head, *t.args)) + ")"
    if isinstance(t, Binder):
        return f"({t.kind} ({t.name} {to_sexpr(t.type)}) {to_sexpr(t.body)})"
    if isinstance(t, Arrow):
        return f"(arrow {to_sexpr(t.src)} {to_sexpr(t.dst)})"
    raise TypeError(f"cannot serialize {t!r}")
