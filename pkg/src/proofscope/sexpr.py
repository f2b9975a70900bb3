"""Tokenizer and reader for the corpus s-expression syntax."""

from __future__ import annotations

from dataclasses import dataclass


class SexprError(Exception):
    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"{line}:{col}: expected {expected}"
        if found:
            msg += f", found {found}"
        super().__init__(msg)


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


def tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col = line + 1, 1
            i += 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, line, col
            i += 1
            col += 1
        else:
            start = i
            while i < n and text[i] not in " \t\r\n();":
                i += 1
            yield text[start:i], line, col
            col += i - start


def read_all(text: str) -> list:
    """Read every top-level form. Bare top-level atoms are rejected."""
    forms: list = []
    stack: list[tuple[list, int, int]] = []
    last = (1, 1)
    for tok, line, col in tokenize(text):
        last = (line, col)
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise SexprError(line, col, "'(' or end of input", "')'")
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            if stack:
                stack[-1][0].append(node)
            else:
                forms.append(node)
        else:
            if not stack:
                raise SexprError(line, col, "'('", repr(tok))
            stack[-1][0].append(Atom(tok, line, col))
    if stack:
        _, l0, c0 = stack[-1]
        raise SexprError(last[0], last[1], f"')' closing the form opened at {l0}:{c0}",
                         "end of input")
    return forms
