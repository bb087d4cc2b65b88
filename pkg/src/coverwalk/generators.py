"""Adversarial instance families, each bundled with a start node and static
priorities that realize the intended traversal schedule.

Every generator returns a GeneratedInstance whose priorities are full
per-node permutations (engine-checkable) and whose graph passes
graph-core validation. Chain families keep max degree 3.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from coverwalk.graphs import Graph, GraphError, build_graph, graph_to_json_dict
from coverwalk.engine import StaticPriority


@dataclass
class GeneratedInstance:
    graph: Graph
    start: int
    priorities: dict[int, list[int]]  # node -> neighbor ids, best first
    family: str
    params: dict
    predicted: dict = field(default_factory=dict)
    planarity_note: str | None = None

    def tiebreaker(self) -> StaticPriority:
        return StaticPriority.from_neighbor_lists(self.graph, self.priorities)

    def to_json_dict(self) -> dict:
        doc = graph_to_json_dict(self.graph, self.start, self.priorities)
        doc["family"] = self.family
        doc["params"] = self.params
        doc["predicted"] = self.predicted
        return doc


class _EdgeBuilder:
    """Accumulates edges and answers neighbor lookups while wiring a family."""

    def __init__(self) -> None:
        self.edges: list[tuple[int, int]] = []

    def add(self, u: int, v: int) -> int:
        self.edges.append((u, v))
        return len(self.edges) - 1


# --- caterpillar -------------------------------------------------------------


def caterpillar(b: int, c: int, l: int) -> GeneratedInstance:
    """Caterpillar tree with a central path of l+2 nodes (l odd).

    Node 0 (the root, also the start) carries b+c+1 leaves; path node i
    (1 <= i <= l) carries b-i+1 leaves; the last path node carries b+1
    leaves. The bundled priorities realize the down-pass / up-pass
    schedule: the root visits all leaves save one before descending, odd
    path nodes pass straight through leaving their leaves untouched, even
    path nodes sweep all leaves before descending, and on the way back up
    an even node revisits exactly one leaf before continuing upward.
    """
    if l < 1 or l % 2 == 0:
        raise ValueError(f"l must be odd and >= 1, got {l}")
    if c < 11:
        raise ValueError(f"c must be > 10, got {c}")
    if b < l + 1:
        raise ValueError(f"b must be >= l+1 so every path node keeps a leaf, got b={b}, l={l}")

    eb = _EdgeBuilder()
    path = list(range(l + 2))
    for i in range(l + 1):
        eb.add(i, i + 1)

    next_id = l + 2

    def grow_leaves(owner: int, count: int) -> list[int]:
        nonlocal next_id
        ids = list(range(next_id, next_id + count))
        next_id += count
        for leaf in ids:
            eb.add(owner, leaf)
        return ids

    root_leaves = grow_leaves(0, b + c + 1)
    inner_leaves = {i: grow_leaves(i, b - i + 1) for i in range(1, l + 1)}
    last_leaves = grow_leaves(l + 1, b + 1)

    n = next_id
    expected = (l + 2) + (b + c + 1) + sum(b - i + 1 for i in range(1, l + 1)) + (b + 1)
    assert n == expected, (n, expected)
    g = build_graph(n, eb.edges)

    priorities: dict[int, list[int]] = {}
    # Root: all leaves save one, then the path, then the held-back leaf.
    priorities[0] = root_leaves[:-1] + [1] + [root_leaves[-1]]
    for i in range(1, l + 1):
        leaves = inner_leaves[i]
        if i % 2 == 1:
            # Odd: the parent outranks the child so upward passes continue
            # (the two tie exactly); on the way down the parent is freshly
            # visited and never in the argmin, so the walk still descends.
            priorities[i] = [i - 1, i + 1] + leaves
        else:
            # Even: sweep all leaves on the way down (the parent slot is
            # skipped while the parent is freshly visited), and on the way
            # up bounce exactly one leaf before the parent outranks the rest.
            priorities[i] = [leaves[0], i - 1] + leaves[1:] + [i + 1]
    priorities[l + 1] = [l] + last_leaves
    for leaf in root_leaves + last_leaves:
        priorities[leaf] = [_owner(g, leaf)]
    for i in range(1, l + 1):
        for leaf in inner_leaves[i]:
            priorities[leaf] = [i]

    phase1 = {str(i): (b + c + 1 if i == 0 else
                       1 if i % 2 == 1 else
                       b - i + 2) for i in range(l + 1)}
    phase1[str(l + 1)] = b + 2
    predicted = {
        "phase1_visits": phase1,
        "pass2_odd": "(b-i+1)*(b-i+3)+2",
        "pass2_even": "b-i+4",
        "final_last_node_degree": l - 2,
    }
    return GeneratedInstance(
        graph=g, start=0, priorities=priorities, family="caterpillar",
        params={"b": b, "c": c, "l": l}, predicted=predicted,
        planarity_note="tree (trivially planar)",
    )


def _owner(g: Graph, leaf: int) -> int:
    (nbr, _), = g.adjacency[leaf]
    return nbr


# --- LRV-v exponential chain -------------------------------------------------
#
# The 9-node component template below was reconstructed empirically: the
# proof behind the exponential bound fixes only the component size (nine
# vertices), the max degree (3), and the defining property that cycle
# times satisfy T_i >= const + 2*T_{i-1}. The wiring and priorities here
# were found by searching candidate gadgets and validating the doubling
# ratio by simulation (and against the exhaustive adversary on short
# chains); see tests/test_acceptance.py.
#
# Local node roles (offsets within a component):
#   0 entry, 1..3 upper path, 4 exit, 5..7 lower path, 8 toggle pendant.
_LRV_GADGET_EDGES: list[tuple[int, int]] = [
    (0, 1), (1, 2), (2, 3), (3, 4),   # upper path entry -> exit
    (0, 5), (5, 6), (6, 7), (7, 4),   # lower path entry -> exit
    (2, 8),                           # toggle pendant off the upper path
]
# Priorities as local neighbor lists (best first).
_LRV_GADGET_PRIORITIES: dict[int, list[int]] = {
    0: [1, 5, -1],      # -1 = left link (previous component exit, or s)
    1: [2, 0],
    2: [8, 3, 1],
    3: [4, 2],
    4: [7, 3, 9],       # 9 = right link (next component entry, or none)
    5: [6, 0],
    6: [7, 5],
    7: [4, 6],
    8: [2],
}


def lrv_v_chain(k: int) -> GeneratedInstance:
    """Chain of k identical 9-node components (max degree 3) plus a start s.

    Bundled priorities make LRV-v reflect a constant fraction of entries
    at every component, doubling per-component cycle times down the chain.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    eb = _EdgeBuilder()
    n = 1 + 9 * k
    s = 0

    def node(comp: int, local: int) -> int:
        return 1 + 9 * comp + local

    for comp in range(k):
        for u, v in _LRV_GADGET_EDGES:
            eb.add(node(comp, u), node(comp, v))
        left = s if comp == 0 else node(comp - 1, 4)
        eb.add(left, node(comp, 0))

    g = build_graph(n, eb.edges)
    priorities: dict[int, list[int]] = {s: [node(0, 0)]}
    for comp in range(k):
        left = s if comp == 0 else node(comp - 1, 4)
        right = node(comp + 1, 0) if comp + 1 < k else None
        for local, order in _LRV_GADGET_PRIORITIES.items():
            resolved: list[int] = []
            for ref in order:
                if ref == -1:
                    resolved.append(left)
                elif ref == 9:
                    if right is not None:
                        resolved.append(right)
                else:
                    resolved.append(node(comp, ref))
            priorities[node(comp, local)] = resolved

    predicted = {"cycle_time_recursion": "T_i >= 22 + 2*T_{i-1}",
                 "cover_time_lower_bound": 22 * (2 ** k - 2)}
    return GeneratedInstance(
        graph=g, start=s, priorities=priorities, family="lrv-v-chain",
        params={"k": k}, predicted=predicted,
        planarity_note="max-degree-3 chain (dual-of-triangulation candidate)",
    )


# --- LRV-e / LFV quadratic chain ---------------------------------------------


def four_cycle_chain(k: int) -> GeneratedInstance:
    """Chain of k six-node components: a 4-cycle plus two bridge nodes.

    Under LRV-e (and under LFV-v/LFV-e) with the bundled priorities, the
    first traversal of each component circles its 4-cycle and reflects
    back to the start; later traversals pass straight through. Reaching
    component i therefore re-traverses all earlier components, giving a
    cover time quadratic in n.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    eb = _EdgeBuilder()
    n = 6 * k

    def node(comp: int, local: int) -> int:
        return 6 * comp + local

    # locals: 0 bridge-in, 1..4 cycle (1-2-3-4-1), 5 bridge-out
    for comp in range(k):
        b1, c1, c2, c3, c4, b2 = (node(comp, i) for i in range(6))
        eb.add(b1, c1)
        eb.add(c1, c2)
        eb.add(c2, c3)
        eb.add(c3, c4)
        eb.add(c4, c1)
        eb.add(c3, b2)
        if comp + 1 < k:
            eb.add(b2, node(comp + 1, 0))

    g = build_graph(n, eb.edges)
    priorities: dict[int, list[int]] = {}
    for comp in range(k):
        b1, c1, c2, c3, c4, b2 = (node(comp, i) for i in range(6))
        left = node(comp - 1, 5) if comp > 0 else None
        right = node(comp + 1, 0) if comp + 1 < k else None
        priorities[b1] = ([left] if left is not None else []) + [c1]
        priorities[c1] = [b1, c2, c4]
        priorities[c2] = [c1, c3]
        priorities[c3] = [c4, b2, c2]
        priorities[c4] = [c1, c3]
        priorities[b2] = [c3] + ([right] if right is not None else [])

    predicted = {"order": "Theta(n^2)",
                 "note": "first traversal of each component reflects; later ones pass"}
    return GeneratedInstance(
        graph=g, start=0, priorities=priorities, family="four-cycle-chain",
        params={"k": k}, predicted=predicted,
        planarity_note="max-degree-3 chain (dual-of-triangulation candidate)",
    )


# --- flower path (barriers) --------------------------------------------------


def flower_path(segments: int, petals_per_barrier: int) -> GeneratedInstance:
    """A path interrupted by flower centers whose pendant petals build barriers.

    The path consists of segments+1 plain runs of two nodes joined at
    `segments` centers; each center carries petals_per_barrier pendant
    vertices. Priorities consume the petals on first arrival, inflating
    the center's count so it blocks right-to-left traffic until the
    right side catches up.
    """
    if segments < 1:
        raise ValueError(f"segments must be >= 1, got {segments}")
    if petals_per_barrier < 0:
        raise ValueError(f"petals_per_barrier must be >= 0, got {petals_per_barrier}")
    eb = _EdgeBuilder()
    path: list[int] = []
    centers: list[int] = []
    nid = 0
    for run in range(segments + 1):
        for _ in range(2):
            if path:
                eb.add(path[-1], nid)
            path.append(nid)
            nid += 1
        if run < segments:
            eb.add(path[-1], nid)
            centers.append(nid)
            path.append(nid)
            nid += 1
    petals: dict[int, list[int]] = {}
    for center in centers:
        petals[center] = list(range(nid, nid + petals_per_barrier))
        for p in petals[center]:
            eb.add(center, p)
        nid += petals_per_barrier

    g = build_graph(nid, eb.edges)
    priorities: dict[int, list[int]] = {}
    for idx, v in enumerate(path):
        left = path[idx - 1] if idx > 0 else None
        right = path[idx + 1] if idx + 1 < len(path) else None
        if v in petals:
            order = petals[v] + ([right] if right is not None else [])
            if left is not None:
                order.append(left)
        else:
            order = ([right] if right is not None else [])
            if left is not None:
                order.append(left)
        priorities[v] = order
    for center, ps in petals.items():
        for p in ps:
            priorities[p] = [center]

    predicted = {"center_visits_after_first_pass": petals_per_barrier + 1}
    return GeneratedInstance(
        graph=g, start=0, priorities=priorities, family="flower-path",
        params={"segments": segments, "petals": petals_per_barrier},
        predicted=predicted,
    )


# --- ratio construction (start frequency k*delta vs neighbors k) -------------


def ratio_config(delta: int, k: int) -> GeneratedInstance:
    """Instance reaching a state where freq(start) = k*delta while delta-1
    neighbors of the start sit at frequency exactly k.

    Structure: start s has neighbors n_1..n_{delta-1} and u. Each n_j heads
    a barrier stub n_j - f_j; the f_j form a chain ending at a hub w that
    rejoins s through the shared node u (so all the paths lead back to s
    via u's single shared edge). Flowers (pendant petals) on the f_j and on
    w are consumed by one opening sweep, walling the interior off; the walk
    then spends its budget bouncing s <-> {n_j, u} in rotation, which pins
    the exact frequency ratio delta at the predicted state.
    """
    if delta < 3:
        raise ValueError(f"delta must be >= 3, got {delta}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    petal_count = k * delta + 1

    eb = _EdgeBuilder()
    s = 0
    ns = list(range(1, delta))                  # n_1 .. n_{delta-1}
    fs = list(range(delta, 2 * delta - 1))      # f_1 .. f_{delta-1}
    w = 2 * delta - 1
    u = 2 * delta
    nid = 2 * delta + 1

    for n_j in ns:
        eb.add(s, n_j)
    eb.add(s, u)
    for n_j, f_j in zip(ns, fs):
        eb.add(n_j, f_j)
    for a, b2 in zip(fs, fs[1:]):
        eb.add(a, b2)
    eb.add(fs[-1], w)
    eb.add(w, u)

    petals: dict[int, list[int]] = {}
    for holder in fs + [w]:
        petals[holder] = list(range(nid, nid + petal_count))
        for p in petals[holder]:
            eb.add(holder, p)
        nid += petal_count

    g = build_graph(nid, eb.edges)

    priorities: dict[int, list[int]] = {}
    priorities[s] = [u] + ns
    priorities[u] = [w, s]
    priorities[w] = petals[w] + [fs[-1], u]
    for j, f_j in enumerate(fs):
        below = ns[j] if j == 0 else fs[j - 1]
        above = w if j == len(fs) - 1 else fs[j + 1]
        if j == 0:
            priorities[f_j] = petals[f_j] + [below, above]
        else:
            priorities[f_j] = petals[f_j] + [fs[j - 1], ns[j], above]
    for n_j, f_j in zip(ns, fs):
        priorities[n_j] = [f_j, s]
    for holder, ps in petals.items():
        for p in ps:
            priorities[p] = [holder]

    predicted = {"freq_start": k * delta, "neighbor_freq": k,
                 "neighbors_at_k": delta - 1,
                 "budget_steps": _ratio_budget(delta, k, petal_count)}
    return GeneratedInstance(
        graph=g, start=s, priorities=priorities, family="ratio-config",
        params={"delta": delta, "k": k}, predicted=predicted,
    )


def _ratio_budget(delta: int, k: int, petal_count: int) -> int:
    # opening sweep + k rounds of bounces, with slack
    sweep = 2 * (delta * (petal_count + 2) + 4)
    rounds = 2 * delta * (k + 2)
    return sweep + rounds


# --- random connected bounded-degree graphs ----------------------------------


def random_bounded_degree(n: int, max_degree: int, seed: int) -> GeneratedInstance:
    """Connected random graph with max degree <= max_degree, deterministic
    in the seed. Spanning tree first, then random augmenting edges."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if max_degree < 2:
        raise ValueError(f"max_degree must be >= 2, got {max_degree}")
    rng = random.Random(seed)
    deg = [0] * n
    edges: list[tuple[int, int]] = []
    present: set[tuple[int, int]] = set()

    def connect(u: int, v: int) -> None:
        edges.append((u, v))
        present.add((min(u, v), max(u, v)))
        deg[u] += 1
        deg[v] += 1

    for v in range(1, n):
        options = [u for u in range(v) if deg[u] < max_degree]
        if not options:
            raise GraphError(f"cannot keep degree <= {max_degree} while connecting node {v}")
        connect(rng.choice(options), v)

    for _ in range(n):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in present or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        connect(u, v)

    g = build_graph(n, edges)
    priorities = {v: [nbr for nbr, _ in sorted(g.adjacency[v])] for v in range(n)}
    return GeneratedInstance(
        graph=g, start=0, priorities=priorities, family="random-bounded-degree",
        params={"n": n, "max_degree": max_degree, "seed": seed},
        predicted={},
    )


FAMILIES = {
    "caterpillar": caterpillar,
    "lrv-v-chain": lrv_v_chain,
    "four-cycle-chain": four_cycle_chain,
    "flower-path": flower_path,
    "ratio-config": ratio_config,
    "random-bounded-degree": random_bounded_degree,
}
