"""Exhaustive search over tie-break choices: ground truth on small instances.

worst_case_cover finds the maximum cover time over all tie-resolution
sequences (the adversary's best play) by depth-first branching over the
argmin set at every step. Intended for toy instances (n up to ~12,
step caps up to ~10^4); callers accept exponential cost.

Memoization keys capture exactly the information the future depends on:
frequency vectors for LFV policies, dense timestamp ranks for LRV
policies, plus the visited set where it is not derivable. Entries are
stored only for subtrees that completed without hitting the step cap, so
memoized answers stay exact.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable

from coverwalk.graphs import Graph
from coverwalk.engine import NEVER, Policy, WalkState, candidates


@dataclass
class OracleResult:
    max_cover_time: int
    witness: list[int]  # edge ids, one per step
    nodes_explored: int
    lower_bound_only: bool = False

    def to_json_dict(self) -> dict:
        return {
            "max_cover_time": self.max_cover_time,
            "witness": self.witness,
            "nodes_explored": self.nodes_explored,
            "lower_bound_only": self.lower_bound_only,
        }


def _ranks(stamps: list[int]) -> tuple[int, ...]:
    order = {v: i for i, v in enumerate(sorted(set(stamps) - {NEVER}))}
    return tuple(-1 if v == NEVER else order[v] for v in stamps)


def _state_key(p: Policy, s: WalkState):
    if p is Policy.LFV_V:
        return (s.current, tuple(s.node_freq))
    visited = tuple(1 if v != NEVER else 0 for v in s.node_last)
    if p is Policy.LFV_E:
        return (s.current, tuple(s.edge_freq), visited)
    if p is Policy.LRV_V:
        return (s.current, _ranks(s.node_last))
    return (s.current, _ranks(s.edge_last), visited)


class _Search:
    def __init__(self, g: Graph, p: Policy, step_cap: int):
        self.g = g
        self.p = p
        self.step_cap = step_cap
        self.memo: dict = {}
        self.nodes_explored = 0
        self.truncated = False

    def run(self, s: WalkState, remaining_uncovered: int) -> tuple[int, tuple[int, ...]] | None:
        """Max additional steps to cover from this state, with the move
        suffix achieving it; None if every branch hit the cap."""
        if remaining_uncovered == 0:
            return (0, ())
        if s.t >= self.step_cap:
            self.truncated = True
            return None
        key = _state_key(self.p, s)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes_explored += 1
        best: tuple[int, tuple[int, ...]] | None = None
        complete = True
        for dest, eid in candidates(self.g, s, self.p):
            prev_last = s.node_last[dest]
            prev_elast = s.edge_last[eid]
            prev_cur = s.current
            newly_covered = prev_last == NEVER
            s.t += 1
            s.node_freq[dest] += 1
            s.node_last[dest] = s.t
            s.edge_freq[eid] += 1
            s.edge_last[eid] = s.t
            s.current = dest
            sub = self.run(s, remaining_uncovered - (1 if newly_covered else 0))
            s.current = prev_cur
            s.edge_last[eid] = prev_elast
            s.edge_freq[eid] -= 1
            s.node_last[dest] = prev_last
            s.node_freq[dest] -= 1
            s.t -= 1
            if sub is None:
                complete = False
                continue
            total = sub[0] + 1
            if best is None or total > best[0]:
                best = (total, (eid,) + sub[1])
        if complete and best is not None:
            self.memo[key] = best
        return best


def worst_case_cover(g: Graph, p: Policy, start: int, step_cap: int = 10_000) -> OracleResult:
    """Maximum cover time over all tie-resolution sequences, with a witness.

    If any branch exhausts step_cap before covering, the result is flagged
    lower_bound_only (a tie sequence exists whose cover time exceeds the
    cap, so the reported maximum is only a lower bound).
    """
    if step_cap < 1:
        raise ValueError("step_cap must be >= 1")
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * step_cap + 200))
    try:
        s = WalkState.initial(g, start)
        search = _Search(g, p, step_cap)
        best = search.run(s, g.n - 1)
        if best is None:
            return OracleResult(max_cover_time=step_cap, witness=[],
                                nodes_explored=search.nodes_explored,
                                lower_bound_only=True)
        cover, suffix = best
        return OracleResult(
            max_cover_time=cover,
            witness=list(suffix),
            nodes_explored=search.nodes_explored,
            lower_bound_only=search.truncated,
        )
    finally:
        sys.setrecursionlimit(old_limit)


def reachable_state(
    g: Graph,
    p: Policy,
    start: int,
    predicate: Callable[[WalkState], bool],
    step_cap: int,
    prune: Callable[[WalkState], bool] | None = None,
) -> list[int] | None:
    """Search tie-break choices for any state satisfying predicate.

    Returns a witness (edge ids) reaching such a state, or None if no
    tie sequence of length <= step_cap reaches one. An optional prune
    callback may abandon branches early; with monotone counters a cap
    predicate (freqs already too high) keeps the search sound and small.
    """
    seen: set = set()
    moves: list[int] = []
    sys_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(sys_limit, 2 * step_cap + 200))

    def dfs(s: WalkState) -> bool:
        if predicate(s):
            return True
        if s.t >= step_cap:
            return False
        if prune is not None and prune(s):
            return False
        key = _state_key(p, s)
        if key in seen:
            return False
        seen.add(key)
        for dest, eid in candidates(g, s, p):
            prev_last = s.node_last[dest]
            prev_elast = s.edge_last[eid]
            prev_cur = s.current
            s.t += 1
            s.node_freq[dest] += 1
            s.node_last[dest] = s.t
            s.edge_freq[eid] += 1
            s.edge_last[eid] = s.t
            s.current = dest
            moves.append(eid)
            if dfs(s):
                return True
            moves.pop()
            s.current = prev_cur
            s.edge_last[eid] = prev_elast
            s.edge_freq[eid] -= 1
            s.node_last[dest] = prev_last
            s.node_freq[dest] -= 1
            s.t -= 1
        return False

    try:
        found = dfs(WalkState.initial(g, start))
        return list(moves) if found else None
    finally:
        sys.setrecursionlimit(sys_limit)
