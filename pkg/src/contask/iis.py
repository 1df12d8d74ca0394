"""Iterated immediate snapshot executions and their protocol-complex facets.

A process's state after round t is ``(color, frozenset(states at t-1 of the
processes it saw))``, starting from its input vertex id.  These are exactly
the structural keys of ``iterate_chromatic``, so an execution is located in
``Ch^r(I)`` by a dictionary lookup.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .approx import DecisionMap
from .complex import Complex, Simplex
from .errors import DepthMismatch, ExplosionGuard, MalformedExecution
from .subdivision import Subdivision, iterate_chromatic

RoundSchedule = tuple  # tuple of frozensets of process colors, in order

DEFAULT_CAP = 10 ** 6


def enumerate_round_schedules(P: Iterable[int]) -> list[RoundSchedule]:
    """All ordered set partitions of P: the first block, then the rest."""
    P = tuple(sorted(P))
    if not P:
        return [()]
    out = []
    for k in range(1, len(P) + 1):
        for first in itertools.combinations(P, k):
            rest = tuple(p for p in P if p not in first)
            for tail in enumerate_round_schedules(rest):
                out.append((frozenset(first),) + tail)
    return out


def fubini(n: int) -> int:
    """Number of ordered set partitions of an n-set."""
    return sum(math.comb(n, k) * fubini(n - k) for k in range(1, n + 1)) if n else 1


@dataclass(frozen=True)
class Execution:
    input_facet: Simplex
    rounds: tuple[RoundSchedule, ...]
    states: tuple[dict, ...] = field(default=(), compare=False, repr=False)

    @property
    def depth(self) -> int:
        return len(self.rounds)


def run_execution(I: Complex, input_facet: Iterable[int], rounds: Sequence[RoundSchedule]) -> Execution:
    """Simulate the rounds and record every process's state after each round."""
    facet = tuple(sorted(input_facet))
    if facet not in I.faces:
        raise MalformedExecution(f"{facet} is not a simplex of the input complex")
    procs = {I.color(v): v for v in facet}
    state: dict[int, Hashable] = dict(procs)
    history = [dict(state)]
    norm = []
    for t, sched in enumerate(rounds):
        blocks = [frozenset(b) for b in sched]
        seen: set[int] = set()
        for b in blocks:
            if not b or b & seen:
                raise MalformedExecution(f"round {t + 1}: blocks must be nonempty and disjoint")
            seen |= b
        if seen != set(procs):
            raise MalformedExecution(f"round {t + 1}: blocks do not partition the participants")
        new = {}
        view: set[int] = set()
        for b in blocks:
            view |= b
            snap = frozenset(state[q] for q in view)
            for p in b:
                new[p] = (p, snap)
        state = new
        history.append(dict(state))
        norm.append(tuple(blocks))
    return Execution(facet, tuple(norm), tuple(history))


def execution_to_facet(e: Execution, S: Subdivision) -> Simplex:
    """The simplex of ``S = Ch^r(I)`` reached by the execution."""
    if S.depth != e.depth:
        raise DepthMismatch(f"execution has {e.depth} rounds, subdivision depth {S.depth}")
    final = e.states[-1]
    try:
        return tuple(sorted(S.key_index[final[p]] for p in final))
    except KeyError:
        raise MalformedExecution("execution state is not a vertex of the subdivision") from None


def decide(e: Execution, mu: DecisionMap) -> dict[int, object]:
    """Per-process outputs (color -> output payload) of the decision map."""
    if mu.domain.depth != e.depth:
        raise DepthMismatch(f"decision map depth {mu.domain.depth} != {e.depth} rounds")
    facet = execution_to_facet(e, mu.domain)
    C = mu.domain.complex
    return {C.color(v): mu.codomain.payload(mu.images[v]) for v in facet}


def all_executions(I: Complex, r: int, cap: int = DEFAULT_CAP) -> Iterable[Execution]:
    total = sum(fubini(len(f)) ** r for f in I.facets)
    if total > cap:
        raise ExplosionGuard(f"{total} executions exceed the cap {cap}")
    for f in I.facets:
        scheds = enumerate_round_schedules(I.colors(f))
        for rounds in itertools.product(scheds, repeat=r):
            yield run_execution(I, f, rounds)


@dataclass
class OutcomeTable:
    rounds: int
    rows: list[tuple[Simplex, tuple, dict]]
    per_facet: dict[Simplex, tuple[int, int]]  # (exact agreement, total)

    @property
    def agreement(self) -> int:
        return sum(a for a, _ in self.per_facet.values())

    @property
    def total(self) -> int:
        return sum(t for _, t in self.per_facet.values())

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "per_facet": [{"facet": list(f), "agree": a, "total": t}
                          for f, (a, t) in sorted(self.per_facet.items())],
            "outcomes": [{"facet": list(f),
                          "schedule": [[sorted(c + 1 for c in b) for b in rnd] for rnd in sched],
                          "outputs": {str(p + 1): str(o) for p, o in sorted(out.items())}}
                         for f, sched, out in self.rows],
        }


def enumerate_outcomes(I: Complex, r: int, mu: DecisionMap, cap: int = DEFAULT_CAP) -> OutcomeTable:
    rows = []
    per: dict[Simplex, list[int]] = {}
    for e in all_executions(I, r, cap):
        out = decide(e, mu)
        rows.append((e.input_facet, e.rounds, out))
        c = per.setdefault(e.input_facet, [0, 0])
        c[1] += 1
        if len(set(out.values())) == 1:
            c[0] += 1
    return OutcomeTable(r, rows, {f: tuple(c) for f, c in per.items()})


def schedule_facet_bijection(I: Complex, r: int) -> bool:
    """Executions hit every facet of Ch^r(I) exactly once."""
    S = iterate_chromatic(I, r)
    hits = [execution_to_facet(e, S) for e in all_executions(I, r)]
    return len(hits) == len(set(hits)) and set(hits) == set(S.complex.facets)
