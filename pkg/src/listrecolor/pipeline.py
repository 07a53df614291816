"""Recursive reduction drivers producing k-good recoloring sequences."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .catalog import CATALOGS, ConfigMatch, Context, Pattern, declared_caps
from .graph import Graph
from .recolor import (
    Coloring,
    ListAssignment,
    RecolorSequence,
    extend_2thread,
    extend_3thread,
    extend_block,
    first_conflict,
    key_lemma_extend,
    verify,
)
from .structure import class_check_planar6, mad, mad_below

log = logging.getLogger(__name__)

THEOREMS = {"planar6": (6, 48), "mad4": (4, 18)}


class ClassViolation(ValueError):
    pass


class NoConfigurationFound(RuntimeError):
    """The catalog matched nothing on a nonempty graph: a would-be counterexample."""

    def __init__(self, graph: Graph, theorem: str, audit=None):
        super().__init__(f"no reducible configuration in a {len(graph)}-vertex remainder ({theorem})")
        self.graph = graph
        self.theorem = theorem
        self.audit = audit


class RecipeCapExceeded(RuntimeError):
    def __init__(self, match: ConfigMatch, realized: dict[int, int]):
        over = {v: (realized[v], match.caps[v]) for v in match.caps if realized.get(v, 0) > match.caps[v]}
        super().__init__(f"recipe {match.pattern} exceeded caps (realized, cap): {over}")
        self.match = match
        self.realized = realized


def find_configuration(
    g: Graph,
    lists: ListAssignment,
    catalog: Sequence[Pattern],
    k: int,
) -> ConfigMatch | None:
    """First applicable match in catalog order; within a pattern, detector order."""
    ctx = Context(g, lists, k)
    for pat in catalog:
        for roles, steps in pat.detect(ctx):
            caps = declared_caps(g, lists, steps, k)
            if caps is not None:
                return ConfigMatch(pat.id, roles, steps, caps)
    return None


def apply_recipe(
    g: Graph,
    lists: ListAssignment,
    match: ConfigMatch,
    seq: RecolorSequence,
    alpha: Coloring,
    beta: Coloring,
    k: int,
) -> RecolorSequence:
    """Extend ``seq`` (on g minus the match's deleted set) back onto ``g``."""
    present = set(g.vertices) - match.deleted
    for step in match.steps:
        present.update(step.inserts)
        h = g.induced(present)
        if step.kind == "key":
            (v,) = step.path
            seq = key_lemma_extend(h, lists, v, seq, alpha[v], beta[v])
        elif step.kind == "t2":
            seq = extend_2thread(h, lists, step.path, seq, alpha, beta, k)
        elif step.kind == "t3":
            seq = extend_3thread(h, lists, step.path, seq, alpha, beta, k)
        else:
            seq = extend_block(h, lists, step.path, seq, alpha, beta, {v: match.caps[v] for v in step.path})
    counts = seq.counts()
    realized = {v: counts.get(v, 0) for v in match.deleted}
    if any(realized[v] > match.caps[v] for v in match.deleted):
        raise RecipeCapExceeded(match, realized)
    return seq


@dataclass
class RunTrace:
    theorem: str
    k: int
    matches: list[ConfigMatch] = field(default_factory=list)

    def pattern_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for m in self.matches:
            out[m.pattern] = out.get(m.pattern, 0) + 1
        return out


def reduce_and_extend(
    g: Graph,
    lists: ListAssignment,
    alpha: Coloring,
    beta: Coloring,
    k: int,
    catalog: Sequence[Pattern],
    theorem: str = "",
) -> tuple[RecolorSequence, RunTrace]:
    trace = RunTrace(theorem, k)
    stack: list[tuple[Graph, ConfigMatch]] = []
    cur = g
    while cur.vertices:
        m = find_configuration(cur, lists, catalog, k)
        if m is None:
            audit = None
            try:
                from .discharging import audit_for_theorem

                audit = audit_for_theorem(cur, theorem)
            except Exception as exc:  # audit is best-effort context for the failure
                log.warning("audit of remainder failed: %s", exc)
            raise NoConfigurationFound(cur, theorem, audit)
        stack.append((cur, m))
        trace.matches.append(m)
        cur = cur.delete(m.deleted)
    seq = RecolorSequence({}, [], k)
    for gg, m in reversed(stack):
        seq = apply_recipe(gg, lists, m, seq, alpha, beta, k)
    return seq, trace


def _check_inputs(g: Graph, lists: ListAssignment, alpha: Coloring, beta: Coloring, size: int) -> None:
    for v in g.vertices:
        if v not in lists or len(lists[v]) < size:
            raise ClassViolation(f"vertex {v} needs a list of at least {size} colors")
    for name, col in (("alpha", alpha), ("beta", beta)):
        problem = first_conflict(g, lists, col)
        if problem:
            raise ClassViolation(f"{name} is not a proper L-coloring: {problem}")


def reconfigure(
    theorem: str,
    g: Graph,
    lists: ListAssignment,
    alpha: Coloring,
    beta: Coloring,
    k: int | None = None,
) -> tuple[RecolorSequence, RunTrace]:
    size, default_k = THEOREMS[theorem]
    k = default_k if k is None else k
    if theorem == "planar6":
        rep = class_check_planar6(g)
        if not rep.in_class:
            raise ClassViolation("; ".join(rep.lines()[:5]))
    elif not mad_below(g, Fraction(5, 2)):
        raise ClassViolation(f"mad = {mad(g)} is not below 5/2")
    _check_inputs(g, lists, alpha, beta, size)
    seq, trace = reduce_and_extend(g, lists, alpha, beta, k, CATALOGS[theorem], theorem)
    seq.k = k
    return seq, trace


def reconfigure_planar6(g: Graph, lists: ListAssignment, alpha: Coloring, beta: Coloring) -> RecolorSequence:
    return reconfigure("planar6", g, lists, alpha, beta)[0]


def reconfigure_mad4(g: Graph, lists: ListAssignment, alpha: Coloring, beta: Coloring) -> RecolorSequence:
    return reconfigure("mad4", g, lists, alpha, beta)[0]


def check_run(g: Graph, lists: ListAssignment, seq: RecolorSequence, beta: Coloring, k: int):
    return verify(g, lists, seq, beta, k)
