"""Per-goal proof feature tables built from tactic traces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .corpus import Corpus, CorpusEntry, TacticStep, goal_context
from .features import PROP_CODE, Encoder, FeatureError, format_code, head_code, term_code
from .terms import App, Arrow, Binder, Const, Sort, Var, app_spine

TACTIC_SLOTS = 4
ARG_SLOTS = 4
SYMBOL_SLOTS = 3
ROW_WIDTH = TACTIC_SLOTS + 1 + ARG_SLOTS + ARG_SLOTS + SYMBOL_SLOTS + 1
DEFAULT_G = 8
UNKNOWN_TACTIC_CODE = 99.0
TACTIC_KINDS = ("hypothesis", "term", "none")


@dataclass(frozen=True)
class TacticTable:
    """name -> (code, kind). ``kind`` decides how arguments are recorded:
    hypothesis tactics record the argument's type, term tactics record the
    argument itself (typed as the ``Prop`` sentinel)."""

    entries: dict

    @classmethod
    def default(cls) -> "TacticTable":
        text = resources.files("proofscope").joinpath("data/tactics.json").read_text()
        return cls(_parse_table(json.loads(text)))

    def extended(self, path) -> "TacticTable":
        with open(path, encoding="utf-8") as f:
            extra = _parse_table(json.load(f))
        return TacticTable({**self.entries, **extra})

    def lookup(self, tactic: str, allow_unknown: bool = False) -> tuple[float, str]:
        if tactic in self.entries:
            return self.entries[tactic]
        if allow_unknown:
            return UNKNOWN_TACTIC_CODE, "term"
        raise FeatureError(f"unknown tactic {tactic!r} (use --allow-unknown-tactics "
                           "or extend the tactic table)")


def _parse_table(raw: dict) -> dict:
    out = {}
    for name, spec in raw.items():
        kind = spec.get("kind", "term")
        if kind not in TACTIC_KINDS:
            raise ValueError(f"tactic {name!r}: kind must be one of {TACTIC_KINDS}")
        code = float(spec["code"])
        if code == UNKNOWN_TACTIC_CODE or code == 0:
            raise ValueError(f"tactic {name!r}: code {code} is reserved")
        out[name] = (code, kind)
    return out


@dataclass(frozen=True)
class ProofFeatureRow:
    tactic_codes: tuple
    tactic_count: int
    arg_type_codes: tuple
    arg_codes: tuple
    top_symbol_codes: tuple
    subgoal_count: int

    def as_vector(self) -> list[float]:
        return [*self.tactic_codes, float(self.tactic_count), *self.arg_type_codes,
                *self.arg_codes, *self.top_symbol_codes, float(self.subgoal_count)]


@dataclass(frozen=True)
class ProofFeatureMatrix:
    rows: tuple
    source: str = ""
    G: int = DEFAULT_G
    diagnostics: tuple = field(default=(), compare=False)

    def padded(self) -> np.ndarray:
        out = np.zeros((self.G, ROW_WIDTH), dtype=float)
        for i, row in enumerate(self.rows):
            out[i] = row.as_vector()
        return out

    def flatten(self) -> np.ndarray:
        return self.padded().reshape(-1)


def segment_trace(proof: Sequence[TacticStep]) -> list[list[TacticStep]]:
    """Group steps acting on the same goal; a run longer than 4 steps is split."""
    if not proof:
        raise FeatureError("cannot segment an empty proof")
    segments: list[list[TacticStep]] = []
    prev_goal = object()
    for step in proof:
        if step.goal_before != prev_goal or len(segments[-1]) == TACTIC_SLOTS:
            segments.append([])
        segments[-1].append(step)
        prev_goal = step.goal_before
    return segments


def _immediate_subterms(t):
    if isinstance(t, App):
        return list(app_spine(t)[1])
    if isinstance(t, Arrow):
        return [t.src, t.dst]
    if isinstance(t, Binder):
        return [t.type, t.body]
    return []


def top_symbols(goal, enc: Encoder) -> tuple:
    """Head of the goal's conclusion plus the heads of its first two immediate subterms."""
    ctx, concl = goal_context(goal)
    scope = {name: i for i, (name, _) in enumerate(ctx, start=1)}
    codes = [head_code(concl, scope, enc)]
    codes += [head_code(s, scope, enc) for s in _immediate_subterms(concl)[:SYMBOL_SLOTS - 1]]
    return tuple(codes + [0.0] * (SYMBOL_SLOTS - len(codes)))


def arg_kind(step: TacticStep, tactics: TacticTable, allow_unknown: bool = False) -> str:
    """``none``, ``hypothesis`` or ``proof-term``: how a step uses its argument."""
    if not step.args:
        return "none"
    _, kind = tactics.lookup(step.tactic, allow_unknown)
    return "hypothesis" if kind == "hypothesis" else "proof-term"


def _hypothesis_type_code(arg, goal, corpus: Optional[Corpus], enc: Encoder) -> float:
    ctx, _ = goal_context(goal)
    scope = {name: i for i, (name, _) in enumerate(ctx, start=1)}
    if isinstance(arg, Var):
        for name, ty in reversed(ctx):
            if name == arg.name:
                return term_code(ty, scope, enc)
    if isinstance(arg, Const) and corpus is not None:
        return term_code(corpus.type_of(arg.name), {}, enc)
    if isinstance(arg, Sort):
        return term_code(Sort("Type"), {}, enc)
    return PROP_CODE


def encode_proof(segments, encoder: Encoder, corpus: Optional[Corpus] = None,
                 tactics: Optional[TacticTable] = None, G: int = DEFAULT_G,
                 allow_unknown: bool = False, source: str = "") -> ProofFeatureMatrix:
    tactics = tactics or TacticTable.default()
    if len(segments) > G:
        raise FeatureError(f"proof of {source or 'entry'} has {len(segments)} goal segments; "
                           f"G={G} allows at most {G}")
    rows = []
    diags = []
    for g, seg in enumerate(segments, start=1):
        tac = [0.0] * TACTIC_SLOTS
        arg_types = [0.0] * ARG_SLOTS
        args = [0.0] * ARG_SLOTS
        for i, step in enumerate(seg):
            code, kind = tactics.lookup(step.tactic, allow_unknown)
            tac[i] = code
            if not step.args or kind == "none":
                continue
            if len(step.args) > 1:
                diags.append(f"g{g}: {step.tactic} has {len(step.args)} arguments; "
                             "only the first is recorded")
            arg = step.args[0]
            if kind == "hypothesis":
                arg_types[i] = _hypothesis_type_code(arg, step.goal_before, corpus, encoder)
            else:
                ctx, _ = goal_context(step.goal_before)
                scope = {name: k for k, (name, _) in enumerate(ctx, start=1)}
                arg_types[i] = PROP_CODE
                args[i] = term_code(arg, scope, encoder)
        rows.append(ProofFeatureRow(tuple(tac), len(seg), tuple(arg_types), tuple(args),
                                    top_symbols(seg[0].goal_before, encoder),
                                    seg[-1].subgoals_after))
    return ProofFeatureMatrix(tuple(rows), source, G, tuple(diags))


def entry_proof_matrix(entry: CorpusEntry, corpus: Corpus, encoder: Encoder,
                       tactics: Optional[TacticTable] = None, G: int = DEFAULT_G,
                       allow_unknown: bool = False) -> ProofFeatureMatrix:
    if not entry.proof:
        raise FeatureError(f"{entry.name} has no proof")
    return encode_proof(segment_trace(entry.proof), encoder, corpus, tactics, G,
                        allow_unknown, source=entry.name)


def proof_vectors(corpus: Corpus, encoder: Encoder, tactics: Optional[TacticTable] = None,
                  G: int = DEFAULT_G, allow_unknown: bool = False) -> dict[str, np.ndarray]:
    tactics = tactics or TacticTable.default()
    return {e.name: entry_proof_matrix(e, corpus, encoder, tactics, G, allow_unknown).flatten()
            for e in corpus.entries if e.proof}


def proof_csv(matrix: ProofFeatureMatrix) -> str:
    header = (["goal"] + [f"tactic{i}" for i in range(1, 5)] + ["n"]
              + [f"arg_type{i}" for i in range(1, 5)] + [f"arg{i}" for i in range(1, 5)]
              + [f"symbol{i}" for i in range(1, 4)] + ["goals"])
    lines = [",".join(header)]
    for g, row in enumerate(matrix.rows, start=1):
        lines.append(f"g{g}," + ",".join(format_code(v) for v in row.as_vector()))
    return "\n".join(lines) + "\n"
