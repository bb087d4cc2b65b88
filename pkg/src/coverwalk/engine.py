"""Single-agent walk engine for local exploration policies.

Four policies: LRV-v / LRV-e move to the neighbor vertex / incident edge
with the oldest last-visit timestamp; LFV-v / LFV-e move to the one with
the smallest visit count. All four counter families (node/edge timestamps
and frequencies) are updated on every step regardless of the active
policy, so one trace can be audited against any policy's counters.

Counting conventions (these matter for the verification suites):

* The initial placement does not increment node_freq[start]; it only sets
  node_last[start] = 0. Frequencies are arrival counts, so after any run
  sum(node_freq) == sum(edge_freq) == t.
* The unvisited sentinel NEVER (= -1) compares strictly older than
  timestamp 0, so unvisited vertices/edges always win LRV argmins.
* A node counts as covered once node_last is set (the start is covered at
  t = 0 even though its frequency is 0).
* The -e policies may immediately re-traverse the arrival edge whenever
  that edge is the argmin; the behavior at such ties is controlled by the
  tie-breaker like any other tie.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from coverwalk.graphs import Graph

NEVER = -1

Incidence = tuple[int, int]  # (destination node, edge id)
StepHook = Callable[["WalkState", int, int], None]


class Policy(Enum):
    LRV_V = "lrv-v"
    LRV_E = "lrv-e"
    LFV_V = "lfv-v"
    LFV_E = "lfv-e"

    @classmethod
    def parse(cls, text: str) -> "Policy":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown policy {text!r}; expected one of "
                             f"{[p.value for p in cls]}") from None


@dataclass
class WalkState:
    """Mutable per-run state. Confined to a single run; never shared."""

    current: int
    t: int
    node_last: list[int]
    node_freq: list[int]
    edge_last: list[int]
    edge_freq: list[int]

    @classmethod
    def initial(cls, g: Graph, start: int) -> "WalkState":
        node_last = [NEVER] * g.n
        node_last[start] = 0
        return cls(
            current=start,
            t=0,
            node_last=node_last,
            node_freq=[0] * g.n,
            edge_last=[NEVER] * g.m,
            edge_freq=[0] * g.m,
        )

    def copy(self) -> "WalkState":
        return WalkState(self.current, self.t, list(self.node_last),
                         list(self.node_freq), list(self.edge_last),
                         list(self.edge_freq))


def candidates(g: Graph, s: WalkState, p: Policy) -> list[Incidence]:
    """Incidences at s.current whose policy score attains the minimum.

    For vertex policies every parallel edge to an argmin neighbor is
    included; ties among them fall to the tie-breaker.
    """
    incs = g.adjacency[s.current]
    if not incs:
        raise ValueError(f"node {s.current} has degree 0")
    if p is Policy.LRV_V:
        table = s.node_last
        best = min(table[nbr] for nbr, _ in incs)
        return [inc for inc in incs if table[inc[0]] == best]
    if p is Policy.LFV_V:
        table = s.node_freq
        best = min(table[nbr] for nbr, _ in incs)
        return [inc for inc in incs if table[inc[0]] == best]
    if p is Policy.LRV_E:
        table = s.edge_last
    else:
        table = s.edge_freq
    best = min(table[eid] for _, eid in incs)
    return [inc for inc in incs if table[inc[1]] == best]


class TieBreakError(RuntimeError):
    """A scripted tie-breaker was exhausted or named a non-argmin incidence."""

    def __init__(self, message: str, step_index: int):
        super().__init__(f"{message} (at step {step_index})")
        self.step_index = step_index


class TieBreaker:
    """Selects one incidence from the argmin candidate set."""

    def describe(self) -> str:
        raise NotImplementedError

    def choose(self, g: Graph, s: WalkState, cands: Sequence[Incidence]) -> Incidence:
        raise NotImplementedError


class LowestIndex(TieBreaker):
    """Pick the candidate with the lowest (destination, edge id)."""

    def describe(self) -> str:
        return "lowest-index"

    def choose(self, g: Graph, s: WalkState, cands: Sequence[Incidence]) -> Incidence:
        return min(cands)


class SeededRandom(TieBreaker):
    """Uniform choice from a dedicated PRNG; deterministic in the seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def describe(self) -> str:
        return f"seeded-random:{self.seed}"

    def choose(self, g: Graph, s: WalkState, cands: Sequence[Incidence]) -> Incidence:
        return cands[self._rng.randrange(len(cands))]


class StaticPriority(TieBreaker):
    """Per-node ordered incidence lists; the highest-ranked argmin member wins.

    ranks maps node -> {edge id -> rank}; every node's map must cover its
    full incidence list (a permutation).
    """

    def __init__(self, ranks: dict[int, dict[int, int]]):
        self.ranks = ranks

    @classmethod
    def from_edge_lists(cls, g: Graph, order: dict[int, list[int]]) -> "StaticPriority":
        ranks: dict[int, dict[int, int]] = {}
        for v in range(g.n):
            incident = sorted(eid for _, eid in g.adjacency[v])
            listed = order.get(v)
            if listed is None:
                listed = [eid for _, eid in g.adjacency[v]]
            if sorted(listed) != incident:
                raise ValueError(f"priority list at node {v} is not a permutation "
                                 f"of its incident edges")
            ranks[v] = {eid: i for i, eid in enumerate(listed)}
        return cls(ranks)

    @classmethod
    def from_neighbor_lists(cls, g: Graph, order: dict[int, list[int]]) -> "StaticPriority":
        """Build from neighbor-id lists (the JSON form; simple graphs only)."""
        edge_order: dict[int, list[int]] = {}
        for v, nbrs in order.items():
            by_nbr: dict[int, int] = {}
            for nbr, eid in g.adjacency[v]:
                if nbr in by_nbr:
                    raise ValueError(f"node {v} has parallel edges; neighbor-list "
                                     f"priorities are ambiguous")
                by_nbr[nbr] = eid
            edge_order[v] = [by_nbr[nbr] for nbr in nbrs]
        return cls.from_edge_lists(g, edge_order)

    def describe(self) -> str:
        return "static-priority"

    def choose(self, g: Graph, s: WalkState, cands: Sequence[Incidence]) -> Incidence:
        rank = self.ranks[s.current]
        return min(cands, key=lambda inc: rank[inc[1]])


class ScriptedChoices(TieBreaker):
    """Replay a witness: a list of edge ids consumed one per step."""

    def __init__(self, edge_ids: Sequence[int]):
        self.edge_ids = list(edge_ids)
        self._pos = 0

    def describe(self) -> str:
        return f"scripted:{len(self.edge_ids)}"

    def reset(self) -> None:
        self._pos = 0

    def choose(self, g: Graph, s: WalkState, cands: Sequence[Incidence]) -> Incidence:
        if self._pos >= len(self.edge_ids):
            raise TieBreakError("scripted tie-breaker exhausted", s.t)
        eid = self.edge_ids[self._pos]
        for inc in cands:
            if inc[1] == eid:
                self._pos += 1
                return inc
        raise TieBreakError(f"scripted choice edge {eid} not in argmin set "
                            f"{sorted(e for _, e in cands)}", s.t)


@dataclass
class Trace:
    """A walk: start node plus the ordered (edge id, destination) moves."""

    start: int
    moves: list[tuple[int, int]]
    policy: Policy
    tiebreaker: str

    def to_json_list(self) -> list[list[int]]:
        return [[eid, dest] for eid, dest in self.moves]


@dataclass
class RunMetrics:
    cover_time: int | None
    covered: bool
    steps: int
    max_freq: int
    unvisited: tuple[int, ...] = ()
    per_node_max_latency: dict[int, int] | None = None
    freq_histogram: dict[int, int] | None = None

    def to_json_dict(self) -> dict:
        return {
            "cover_time": self.cover_time,
            "covered": self.covered,
            "max_freq": self.max_freq,
            "steps": self.steps,
        }


def step(g: Graph, s: WalkState, p: Policy, tb: TieBreaker) -> Incidence:
    """Execute one move in place; returns the chosen (destination, edge id)."""
    cands = candidates(g, s, p)
    if len(cands) == 1:
        dest, eid = cands[0]
    else:
        dest, eid = tb.choose(g, s, cands)
    s.t += 1
    t = s.t
    s.node_freq[dest] += 1
    s.node_last[dest] = t
    s.edge_freq[eid] += 1
    s.edge_last[eid] = t
    s.current = dest
    return (dest, eid)


def run_until_covered(
    g: Graph,
    p: Policy,
    tb: TieBreaker,
    start: int,
    step_cap: int,
    on_step: StepHook | None = None,
) -> tuple[Trace, RunMetrics, WalkState]:
    """Walk until every node has been visited (start counts at t=0) or the cap.

    Returns the trace, metrics (flagged uncovered with the unvisited set if
    the cap was exhausted), and the final state.
    """
    if step_cap < 1:
        raise ValueError("step_cap must be >= 1")
    s = WalkState.initial(g, start)
    moves: list[tuple[int, int]] = []
    remaining = g.n - 1  # every other node starts unvisited
    cover_time: int | None = 0 if remaining == 0 else None
    while remaining > 0 and s.t < step_cap:
        dest, eid = step(g, s, p, tb)
        moves.append((eid, dest))
        if s.node_freq[dest] == 1 and dest != start:
            remaining -= 1
            if remaining == 0:
                cover_time = s.t
        if on_step is not None:
            on_step(s, eid, dest)
    trace = Trace(start=start, moves=moves, policy=p, tiebreaker=tb.describe())
    covered = remaining == 0
    metrics = RunMetrics(
        cover_time=cover_time,
        covered=covered,
        steps=s.t,
        max_freq=max(s.node_freq),
        unvisited=tuple(v for v in range(g.n) if s.node_last[v] == NEVER),
    )
    return trace, metrics, s


def run_steps(
    g: Graph,
    p: Policy,
    tb: TieBreaker,
    start: int,
    total_steps: int,
    on_step: StepHook | None = None,
) -> tuple[Trace, RunMetrics, WalkState]:
    """Walk exactly total_steps moves (0 allowed), tracking cover time."""
    if total_steps < 0:
        raise ValueError("total_steps must be >= 0")
    s = WalkState.initial(g, start)
    moves: list[tuple[int, int]] = []
    remaining = g.n - 1
    cover_time: int | None = 0 if remaining == 0 else None
    for _ in range(total_steps):
        dest, eid = step(g, s, p, tb)
        moves.append((eid, dest))
        if s.node_freq[dest] == 1 and dest != start:
            remaining -= 1
            if remaining == 0:
                cover_time = s.t
        if on_step is not None:
            on_step(s, eid, dest)
    trace = Trace(start=start, moves=moves, policy=p, tiebreaker=tb.describe())
    metrics = RunMetrics(
        cover_time=cover_time,
        covered=remaining == 0,
        steps=s.t,
        max_freq=max(s.node_freq),
        unvisited=tuple(v for v in range(g.n) if s.node_last[v] == NEVER),
    )
    return trace, metrics, s


def scripted_from_trace(trace: Trace) -> ScriptedChoices:
    """Build the witness tie-breaker that replays a trace exactly."""
    return ScriptedChoices([eid for eid, _ in trace.moves])


def replay_trace(g: Graph, trace: Trace, p: Policy | None = None) -> WalkState:
    """Re-execute a trace through step(); every move must be argmin-legal.

    Used to audit traces: the replayed final WalkState must equal the
    original run's. Raises TieBreakError on an illegal move.
    """
    policy = p if p is not None else trace.policy
    tb = scripted_from_trace(trace)
    s = WalkState.initial(g, trace.start)
    for _ in trace.moves:
        step(g, s, policy, tb)
    return s
