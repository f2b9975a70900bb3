"""Text hint reports, nested-box similarity graphs and proof-flow automata."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .clustering import Partition
from .corpus import Corpus, TacticStep
from .depgraph import dot_id
from .proof_features import TacticTable, arg_kind


class ReportError(ValueError):
    pass


def text_report(partition: Partition, corpus: Corpus, title: Optional[str] = None) -> str:
    if not partition.clusters:
        raise ReportError("nothing clustered")
    libs = {e.name: e.library for e in corpus.entries}
    lines = []
    if title:
        lines += [title, ""]
    for i, members in enumerate(partition.clusters, start=1):
        lines.append(f"Cluster {i}")
        for name in sorted(members):
            lines.append(f"  {name}  [{libs.get(name, '?')}]")
        lines.append("")
    return "\n".join(lines)


def similarity_dot(outer: Partition, inner: Partition, name: str = "similarity") -> str:
    """Outer clusters as boxes; inner clusters of two or more members that split
    an outer cluster become boxes inside it."""
    if not inner.refines(outer) or set().union(*inner.as_sets()) != set().union(*outer.as_sets()):
        raise ReportError("inner partition does not refine the outer partition")
    lines = [f"digraph {dot_id(name)} {{", "  node [shape=ellipse];"]
    for i, box in enumerate(outer.clusters, start=1):
        lines.append(f"  subgraph {dot_id(f'cluster_{i}')} {{")
        lines.append(f"    label={dot_id(f'Cluster {i}')};")
        box_set = set(box)
        parts = [c for c in inner.clusters if set(c) <= box_set]
        if len(parts) == 1:
            lines += [f"    {dot_id(m)};" for m in box]
        else:
            j = 0
            for part in parts:
                if len(part) >= 2:
                    j += 1
                    lines.append(f"    subgraph {dot_id(f'cluster_{i}_{j}')} {{")
                    lines.append(f"      label={dot_id(f'{i}.{j}')};")
                    lines += [f"      {dot_id(m)};" for m in part]
                    lines.append("    }")
                else:
                    lines.append(f"    {dot_id(part[0])};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class Automaton:
    states: dict = field(default_factory=dict)        # id -> label
    transitions: dict = field(default_factory=dict)   # (src, dst) -> multiplicity
    start: str = ""
    accept: set = field(default_factory=set)
    index: dict = field(default_factory=dict, repr=False)  # (position, label) -> id

    def successors(self, state: str) -> list:
        return [d for (s, d) in self.transitions if s == state]

    def is_chain(self) -> bool:
        return all(len(self.successors(s)) <= 1 for s in self.states)

    def accepts(self, labels: Sequence[str]) -> bool:
        """Whether the abstracted trace is a path from the start to an accept state."""
        if not labels:
            return False
        if self.start == START:
            state = START
            seq = list(labels)
        else:
            if self.states.get(self.start) != labels[0]:
                return False
            state = self.start
            seq = list(labels[1:])
        for label in seq:
            nxt = [d for d in self.successors(state) if self.states[d] == label]
            if len(nxt) != 1:
                return False
            state = nxt[0]
        return state in self.accept


START = "start"


def abstract_step(step: TacticStep, tactics: TacticTable, allow_unknown: bool = False) -> str:
    kind = arg_kind(step, tactics, allow_unknown)
    return step.tactic if kind == "none" else f"{step.tactic}[{kind}]"


def build_automaton(traces: Mapping[str, Optional[Sequence[TacticStep]]],
                    tactics: Optional[TacticTable] = None,
                    allow_unknown: bool = False) -> Automaton:
    """Merge member traces position by position; equal abstract steps share a state."""
    if not traces:
        raise ReportError("cannot build an automaton for an empty cluster")
    tactics = tactics or TacticTable.default()
    label_seqs = []
    for name, proof in traces.items():
        if not proof:
            raise ReportError(f"{name} has no proof")
        label_seqs.append([abstract_step(s, tactics, allow_unknown) for s in proof])

    auto = Automaton()
    firsts = {seq[0] for seq in label_seqs}
    if len(firsts) > 1:
        auto.states[START] = START
        auto.start = START

    def state(pos, label):
        key = (pos, label)
        if key not in auto.index:
            sid = f"s{len(auto.index)}"
            auto.index[key] = sid
            auto.states[sid] = label
        return auto.index[key]

    for seq in label_seqs:
        prev = START if auto.start == START else None
        for pos, label in enumerate(seq):
            cur = state(pos, label)
            if prev is None:
                auto.start = cur
            else:
                auto.transitions[(prev, cur)] = auto.transitions.get((prev, cur), 0) + 1
            prev = cur
        auto.accept.add(prev)
    return auto


def automaton_dot(a: Automaton, name: str = "automaton") -> str:
    lines = [f"digraph {dot_id(name)} {{", "  rankdir=LR;"]
    for sid, label in a.states.items():
        attrs = [f"label={dot_id(label)}"]
        attrs.append("shape=doublecircle" if sid in a.accept else "shape=circle")
        if sid == a.start:
            attrs.append("style=bold")
        lines.append(f"  {dot_id(sid)} [{', '.join(attrs)}];")
    for (src, dst), mult in a.transitions.items():
        extra = f" [label={dot_id(f'x{mult}')}]" if mult > 1 else ""
        lines.append(f"  {dot_id(src)} -> {dot_id(dst)}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"
