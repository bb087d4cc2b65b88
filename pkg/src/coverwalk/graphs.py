"""Undirected multigraph with stable node/edge identities and structural queries.

Nodes are dense integers in [0, n); edges are dense integers in [0, m) in
input order. Parallel edges are allowed (each keeps its own id), self-loops
are rejected, and every accepted graph must be connected.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised when a graph fails validation (self-loop, disconnected, bad ids)."""


@dataclass(frozen=True)
class GraphStats:
    """Max degree and diameter (edge hops) of a connected graph.

    planarity_note is informational only: generators may set it to record
    that a family is intended as a max-degree-3 dual-of-triangulation
    candidate. It is never computed.
    """

    max_degree: int
    diameter: int
    planarity_note: str | None = None


@dataclass(frozen=True)
class Graph:
    """Immutable undirected multigraph.

    adjacency[v] is a tuple of (neighbor, edge_id) incidences in edge-input
    order. Symmetric by construction: (v, e) sits in u's list iff (u, e)
    sits in v's list.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def incidences(self, v: int) -> tuple[tuple[int, int], ...]:
        return self.adjacency[v]

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.edges[e]


def build_graph(node_count: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Validate and build a Graph from a node count and unordered node pairs.

    Rejects self-loops, out-of-range endpoints, and disconnected results
    (reporting the lowest node id of a component not containing node 0).
    """
    if node_count < 1:
        raise GraphError(f"node_count must be >= 1, got {node_count}")
    edges: list[tuple[int, int]] = []
    adj: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
    for eid, pair in enumerate(edge_list):
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise GraphError(f"self-loop ({u},{v}) at edge index {eid}")
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise GraphError(f"edge ({u},{v}) endpoint out of range [0,{node_count})")
        edges.append((u, v))
        adj[u].append((v, eid))
        adj[v].append((u, eid))

    seen = [False] * node_count
    queue: deque[int] = deque([0])
    seen[0] = True
    while queue:
        cur = queue.popleft()
        for nbr, _ in adj[cur]:
            if not seen[nbr]:
                seen[nbr] = True
                queue.append(nbr)
    if not all(seen):
        lowest = seen.index(False)
        raise GraphError(f"graph is disconnected: node {lowest} unreachable from node 0")

    return Graph(
        n=node_count,
        edges=tuple(edges),
        adjacency=tuple(tuple(lst) for lst in adj),
    )


def _bfs_eccentricity(g: Graph, source: int) -> int:
    dist = [-1] * g.n
    dist[source] = 0
    queue: deque[int] = deque([source])
    ecc = 0
    while queue:
        cur = queue.popleft()
        for nbr, _ in g.adjacency[cur]:
            if dist[nbr] < 0:
                dist[nbr] = dist[cur] + 1
                if dist[nbr] > ecc:
                    ecc = dist[nbr]
                queue.append(nbr)
    return ecc


def stats(g: Graph, planarity_note: str | None = None) -> GraphStats:
    """Max degree and BFS diameter. O(n*m); fine at desk scale."""
    max_degree = max((len(inc) for inc in g.adjacency), default=0)
    diameter = max(_bfs_eccentricity(g, v) for v in range(g.n))
    return GraphStats(max_degree=max_degree, diameter=diameter, planarity_note=planarity_note)


# --- Graph JSON format ------------------------------------------------------
#
# {"n": int, "edges": [[u, v], ...], "start": int,
#  "priorities": {"<node>": [neighbor ids in descending preference]}}
#
# Edges are indexed by list position; "priorities" is optional and only
# well-defined for simple graphs (neighbor ids identify incidences uniquely).
# Extra keys (family, params, predicted) are tolerated and preserved by the
# generators' instance files.


def graph_to_json_dict(g: Graph, start: int | None = None,
                       priorities: dict[int, list[int]] | None = None) -> dict:
    doc: dict = {"n": g.n, "edges": [[u, v] for u, v in g.edges]}
    if start is not None:
        doc["start"] = start
    if priorities is not None:
        doc["priorities"] = {str(v): list(nbrs) for v, nbrs in priorities.items()}
    return doc


def graph_from_json_dict(doc: dict) -> tuple[Graph, int | None, dict[int, list[int]] | None]:
    g = build_graph(int(doc["n"]), doc["edges"])
    start = int(doc["start"]) if "start" in doc else None
    priorities = None
    if "priorities" in doc and doc["priorities"] is not None:
        priorities = {int(v): [int(x) for x in nbrs] for v, nbrs in doc["priorities"].items()}
    return g, start, priorities


def load_graph_json(path: str) -> tuple[Graph, int | None, dict[int, list[int]] | None]:
    with open(path) as fh:
        return graph_from_json_dict(json.load(fh))


def dump_graph_json(path: str, g: Graph, start: int | None = None,
                    priorities: dict[int, list[int]] | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_json_dict(g, start, priorities), fh, sort_keys=True)
        fh.write("\n")
