"""Metrics, invariant checkers, the symbolic degree table and growth fits.

Counting conventions: the engine's node_freq counts arrivals only, so
sum(node_freq) == t on every run. The caterpillar schedule checks compare
against *visit counts*, which treat the initial placement as the start
node's first visit: visits(v) = node_freq[v] + 1 iff v is the start.
Both views are exposed so every checker states which one it uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from coverwalk.graphs import Graph, GraphStats, stats
from coverwalk.engine import (
    NEVER,
    Policy,
    RunMetrics,
    Trace,
    WalkState,
    run_until_covered,
)
from coverwalk.generators import GeneratedInstance, caterpillar


def visit_counts(state: WalkState, start: int) -> list[int]:
    """Visit counts: arrival counts plus the start's initial placement."""
    out = list(state.node_freq)
    out[start] += 1
    return out


# --- trace metrics -----------------------------------------------------------


def metrics(trace: Trace, g: Graph, post_window: int = 0) -> RunMetrics:
    """Pure function of (trace, graph, window): cover time, frequencies and
    per-node max latency measured over the trailing post_window moves.

    Latency of a node is the largest gap between consecutive visits inside
    the window, counting the window edges as gap boundaries; a node never
    visited inside the window gets the full window length. If post_window
    exceeds the trace length the latency fields are left unavailable.
    """
    n = g.n
    freq = [0] * n
    visits: list[list[int]] = [[] for _ in range(n)]
    visits[trace.start].append(0)
    covered = 1
    cover_time: int | None = 0 if n == 1 else None
    t = 0
    for eid, dest in trace.moves:
        t += 1
        if freq[dest] == 0 and dest != trace.start:
            covered += 1
            if covered == n:
                cover_time = t
        freq[dest] += 1
        visits[dest].append(t)

    latency: dict[int, int] | None = None
    if 0 < post_window <= t:
        w_start = t - post_window
        latency = {}
        for v in range(n):
            inside = [x for x in visits[v] if x > w_start]
            if not inside:
                latency[v] = post_window
                continue
            gaps = [inside[0] - w_start]
            gaps.extend(b - a for a, b in zip(inside, inside[1:]))
            gaps.append(t - inside[-1])
            latency[v] = max(gaps)

    histogram: dict[int, int] = {}
    for f in freq:
        histogram[f] = histogram.get(f, 0) + 1
    return RunMetrics(
        cover_time=cover_time,
        covered=covered == n,
        steps=t,
        max_freq=max(freq),
        unvisited=tuple(v for v in range(n) if freq[v] == 0 and v != trace.start),
        per_node_max_latency=latency,
        freq_histogram=histogram,
    )


# --- invariant checkers ------------------------------------------------------


def check_frequency_lemma(g: Graph, state: WalkState, start: int) -> tuple[bool, dict]:
    """Neighbor-frequency guarantee at the start node under LFV-v.

    With g0 = freq(start) and d = degree(start): at least (g0 mod d)
    neighbors must have frequency >= floor(g0/d)+1, and every neighbor
    must have frequency >= floor(g0/d). Frequencies are arrival counts.
    """
    g0 = state.node_freq[start]
    d = g.degree(start)
    floor = g0 // d
    need_higher = g0 % d
    nbr_freqs = [state.node_freq[nbr] for nbr, _ in g.adjacency[start]]
    higher = sum(1 for f in nbr_freqs if f >= floor + 1)
    ok = higher >= need_higher and all(f >= floor for f in nbr_freqs)
    detail = {"start_freq": g0, "degree": d, "floor": floor,
              "need_at_least": need_higher, "have_higher": higher,
              "neighbor_freqs": nbr_freqs}
    return ok, detail


def check_delta_d_bound(g: Graph, state: WalkState,
                        gstats: GraphStats | None = None) -> tuple[bool, dict]:
    """While any node is unvisited under LFV-v, max frequency <= delta^d."""
    st = gstats if gstats is not None else stats(g)
    bound = st.max_degree ** st.diameter
    mx = max(state.node_freq)
    any_unvisited = any(v == NEVER for v in state.node_last)
    ok = (not any_unvisited) or mx <= bound
    return ok, {"max_freq": mx, "bound": bound, "delta": st.max_degree,
                "d": st.diameter, "pre_coverage": any_unvisited}


# --- symbolic degree table ---------------------------------------------------


def degree_table(l: int) -> dict[tuple[int, int], int]:
    """Polynomial degree (in the leaf-scale parameter b) of path node i's
    frequency at pass j, for i in [1, l+1] and j in [3, l-2].

    Transcribed piecewise exactly as stated, including the last-node rows;
    the recurrence exits at j = l-2, where the last node attains the
    maximum degree l-2.
    """
    if l < 3 or l % 2 == 0:
        raise ValueError(f"l must be odd and >= 3, got {l}")
    table: dict[tuple[int, int], int] = {}
    for i in range(1, l + 2):
        for j in range(3, l - 1):
            if i == l + 1:
                deg = j if j % 2 == 1 else j - 1
            elif j < l - i:
                deg = 2 if i % 2 == 0 else 3
            elif i % 2 == 0:
                deg = j - l - i if j % 2 == 1 else j - l - i + 1
            else:
                deg = j - l - i + 2 if j % 2 == 1 else j - l - i + 1
            table[(i, j)] = deg
    return table


def phase1_degrees(l: int) -> dict[int, int]:
    """Degrees in b of the first-pass visit counts down the path: the root
    and even nodes are linear in b, odd nodes constant (degree 0)."""
    out = {0: 1}
    for i in range(1, l + 1):
        out[i] = 0 if i % 2 == 1 else 1
    out[l + 1] = 1
    return out


# --- growth fits -------------------------------------------------------------


@dataclass
class GrowthFit:
    slope: float
    intercept: float
    residual: float
    points: list[tuple[float, float]]
    model: str


def fit_growth(points: list[tuple[float, float]], model: str = "power") -> GrowthFit:
    """Least-squares fit of metric growth.

    power: log(metric) ~ slope*log(n) + intercept
    exponential: log(metric) ~ slope*n + intercept
    """
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    if any(y <= 0 for _, y in points):
        raise ValueError("metrics must be positive")
    if model not in ("power", "exponential"):
        raise ValueError(f"unknown model {model!r}")
    xs = np.array([math.log(x) if model == "power" else float(x) for x, _ in points])
    ys = np.array([math.log(y) for _, y in points])
    coeffs, res, *_ = np.polyfit(xs, ys, 1, full=True)
    residual = float(res[0]) if len(res) else 0.0
    return GrowthFit(slope=float(coeffs[0]), intercept=float(coeffs[1]),
                     residual=residual, points=list(points), model=model)


# --- latency bound -----------------------------------------------------------


def check_lfv_e_latency(g: Graph, trace: Trace, window: int,
                        constant: float = 16.0) -> tuple[bool, dict]:
    """Steady-state vertex latency against constant * n * d.

    The bound's constant is configuration, reported alongside the measured
    ratio, never hidden.
    """
    m = metrics(trace, g, post_window=window)
    if m.per_node_max_latency is None:
        return False, {"error": "window exceeds trace length", "window": window,
                       "steps": m.steps}
    st = stats(g)
    worst = max(m.per_node_max_latency.values())
    bound = constant * g.n * st.diameter
    ratio = worst / (g.n * st.diameter)
    return worst <= bound, {"max_latency": worst, "bound": bound,
                            "constant": constant, "n": g.n, "d": st.diameter,
                            "measured_ratio": ratio}


# --- caterpillar pass instrumentation ---------------------------------------


@dataclass
class CaterpillarRun:
    """One caterpillar run with its pass boundaries.

    pass_snapshots[j] holds the path-node arrival counts at the end of
    pass j+1 (a pass ends when the walk's direction along the central
    path reverses); final_freq is the node frequency vector at coverage.
    """

    b: int
    l: int
    cover_time: int | None
    pass_snapshots: list[list[int]] = field(default_factory=list)
    final_freq: list[int] = field(default_factory=list)


def run_caterpillar_passes(inst: GeneratedInstance,
                           step_cap: int = 5_000_000,
                           max_passes: int | None = None) -> CaterpillarRun:
    """Run LFV-v on a caterpillar instance, snapshotting path frequencies at
    every direction reversal of the walk along the central path.

    A pass ends just before the first move of the new direction, so the
    snapshot includes all leaf bouncing at the turning node but not the
    arrival that begins the next pass (that arrival is subtracted back out).
    Stops early once max_passes snapshots are collected or the graph is
    covered, whichever comes first.
    """
    from coverwalk.engine import WalkState as _WS, step as _step

    l = inst.params["l"]
    b = inst.params["b"]
    path_len = l + 2
    g = inst.graph
    tb = inst.tiebreaker()
    snapshots: list[list[int]] = []
    last_path_pos: int | None = None
    direction = 0

    s = _WS.initial(g, inst.start)
    remaining = g.n - 1
    cover_time: int | None = None
    while remaining > 0 and s.t < step_cap:
        if max_passes is not None and len(snapshots) >= max_passes:
            break
        dest, eid = _step(g, s, Policy.LFV_V, tb)
        if s.node_freq[dest] == 1 and dest != inst.start:
            remaining -= 1
            if remaining == 0:
                cover_time = s.t
        if dest < path_len:
            if last_path_pos is not None and dest != last_path_pos:
                new_dir = 1 if dest > last_path_pos else -1
                if direction != 0 and new_dir != direction:
                    snap = s.node_freq[:path_len]
                    snap[dest] -= 1  # undo the boundary-crossing arrival
                    snapshots.append(snap)
                direction = new_dir
            last_path_pos = dest
    return CaterpillarRun(b=b, l=l, cover_time=cover_time,
                          pass_snapshots=snapshots,
                          final_freq=list(s.node_freq))


def fit_caterpillar_degrees(l: int, b_values: list[int], c: int = 11,
                            step_cap: int = 5_000_000,
                            max_passes: int | None = None) -> dict:
    """Fit per-(node, pass) polynomial degrees of caterpillar frequencies.

    Runs the family across b values, snapshots path frequencies at pass
    boundaries, and fits log(freq) vs log(b) for every (path node i,
    pass j) available in all runs. The headline number is the last path
    node's degree at the exit pass j = l-2, expected to be l-2.
    """
    if max_passes is None:
        max_passes = max(3, l - 2)
    runs: dict[int, CaterpillarRun] = {}
    for b in b_values:
        inst = caterpillar(b, c, l)
        runs[b] = run_caterpillar_passes(inst, step_cap=step_cap,
                                         max_passes=max_passes)
    n_passes = min(len(r.pass_snapshots) for r in runs.values())
    per_node_pass: dict[tuple[int, int], float] = {}
    for j in range(1, n_passes + 1):
        for i in range(l + 2):
            pts = [(float(b), float(runs[b].pass_snapshots[j - 1][i]))
                   for b in b_values]
            if any(y <= 0 for _, y in pts):
                continue
            per_node_pass[(i, j)] = fit_growth(pts, model="power").slope
    exit_pass = l - 2
    headline = per_node_pass.get((l + 1, exit_pass))
    return {
        "l": l,
        "expected_degree": l - 2,
        "exit_pass": exit_pass,
        "fitted_slope": headline,
        "per_node_pass_slopes": per_node_pass,
        "degree_table": degree_table(l) if l >= 3 else {},
        "runs": runs,
    }
