"""coverwalk: deterministic simulation of local graph-exploration policies.

A walker explores an undirected multigraph one edge at a time, choosing
the next move greedily from local counters: least-recently-visited or
least-frequently-visited, scored on neighbor vertices or incident edges.
The package provides the walk engine, adversarial instance generators,
an exhaustive tie-breaking oracle for small graphs, and analysis tools
(invariant checkers, growth fits, latency measurements).
"""

from coverwalk.graphs import Graph, GraphError, GraphStats, build_graph, stats
from coverwalk.engine import (
    NEVER,
    Policy,
    Trace,
    WalkState,
    LowestIndex,
    ScriptedChoices,
    SeededRandom,
    StaticPriority,
    candidates,
    run_steps,
    run_until_covered,
    step,
)
from coverwalk.generators import (
    GeneratedInstance,
    caterpillar,
    flower_path,
    four_cycle_chain,
    lrv_v_chain,
    random_bounded_degree,
    ratio_config,
)
from coverwalk.oracle import OracleResult, worst_case_cover
from coverwalk import analysis

__all__ = [
    "Graph",
    "GraphError",
    "GraphStats",
    "build_graph",
    "stats",
    "NEVER",
    "Policy",
    "Trace",
    "WalkState",
    "LowestIndex",
    "ScriptedChoices",
    "SeededRandom",
    "StaticPriority",
    "candidates",
    "run_steps",
    "run_until_covered",
    "step",
    "GeneratedInstance",
    "caterpillar",
    "flower_path",
    "four_cycle_chain",
    "lrv_v_chain",
    "random_bounded_degree",
    "ratio_config",
    "OracleResult",
    "worst_case_cover",
    "analysis",
]
