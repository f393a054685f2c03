"""Decompose-and-branch driver for the maximum k-defective clique."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass

from .bounds import make_bound
from .branching import Bound, Incumbent, SearchStats, SearchTimeout, branch
from .graph import Graph, VertexOrder, degeneracy_order, induced_subgraph, neighbors_after, \
    peel, two_hop_after
from .model import Instance, Solution, check_solution

log = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 10800.0


@dataclass
class SolveReport:
    best: Solution | None
    stats: SearchStats
    k: int
    bound: str
    time_limit: float
    n: int
    m: int
    degeneracy: int
    complete: bool = True
    heuristic_size: int = 0

    @property
    def size(self) -> int:
        return self.best.size if self.best else 0

    @property
    def solution(self) -> Solution | None:
        """The answer to the non-trivial problem: ``None`` means "no"."""
        if self.best is None or self.best.size < self.k + 2:
            return None
        return self.best

    @property
    def status(self) -> str:
        return "solved" if self.complete else "OOT"

    def to_json(self) -> dict:
        sol = self.solution
        return {
            "opt": sol.size if sol else "no",
            "nontrivial": sol is not None,
            "vertices": list(self.best.vertices) if self.best else [],
            "k": self.k, "bound": self.bound, "time_limit": self.time_limit,
            "n": self.n, "m": self.m, "degeneracy": self.degeneracy,
            "status": self.status, "heuristic_size": self.heuristic_size,
            "stats": self.stats.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "SolveReport":
        if isinstance(obj, str):
            obj = json.loads(obj)
        verts = tuple(obj["vertices"])
        k = obj["k"]
        best = Solution(verts, len(verts), len(verts) >= k + 2, k) if verts else None
        return cls(best=best, stats=SearchStats(**obj["stats"]), k=k, bound=obj["bound"],
                   time_limit=obj["time_limit"], n=obj["n"], m=obj["m"],
                   degeneracy=obj["degeneracy"], complete=obj["status"] == "solved",
                   heuristic_size=obj["heuristic_size"])


def heuristic_initial(g: Graph, k: int) -> Solution:
    """Peel min-degree vertices until the remainder is a k-defective clique."""
    order, residual = peel(g.adjacency)
    edges = g.m
    size = g.n
    cut = 0
    while size * (size - 1) // 2 - edges > k:
        edges -= residual[cut]
        size -= 1
        cut += 1
    return check_solution(g, order[cut:], k)


def build_subinstances(g: Graph, ord: VertexOrder, i: int, k: int) -> tuple[Instance, Instance]:
    """The pair of subinstances rooted at the ``i``-th vertex of ``ord``.

    The first keeps ``v_i`` in ``P`` and searches its later one- and
    two-hop neighborhood; the second searches ``v_i`` plus its later
    neighbors with ``P`` empty.
    """
    v = ord.order[i]
    hop1 = neighbors_after(g, ord, v)
    hop2 = two_hop_after(g, ord, v)
    return _with_p(g, v, hop1, hop2, k), _without_p(g, v, hop1, k)


def _with_p(g: Graph, v: int, hop1: list[int], hop2: list[int], k: int) -> Instance:
    sub = induced_subgraph(g, sorted([v, *hop1, *hop2]))
    local = {x: j for j, x in enumerate(sub.to_global)}
    return Instance(sub.graph, [local[v]], [local[x] for x in hop1 + hop2], k, sub.to_global)


def _without_p(g: Graph, v: int, hop1: list[int], k: int) -> Instance:
    sub = induced_subgraph(g, sorted([v, *hop1]))
    local = {x: j for j, x in enumerate(sub.to_global)}
    return Instance(sub.graph, [], [local[x] for x in hop1], k, sub.to_global)


def solve(g: Graph, k: int, bound: str | Bound | None = "pcc",
          time_limit: float = DEFAULT_TIME_LIMIT, trace=None) -> SolveReport:
    """Maximum k-defective clique of ``g``.

    ``bound`` is a strategy name, ``None``/"none" for no bounding, or any
    callable ``(inst, lb) -> upper bound``.  A ``time_limit`` of 0 means
    no limit.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    started = time.monotonic()
    deadline = started + time_limit if time_limit else None
    stats = SearchStats()
    if callable(bound):
        strategy, bound_name = bound, getattr(bound, "__name__", "custom")
    else:
        strategy, bound_name = make_bound(bound), bound or "none"

    ord = degeneracy_order(g)
    if k + 2 > g.n:
        return SolveReport(None, stats, k, bound_name, time_limit, g.n, g.m, ord.degeneracy)

    heur = heuristic_initial(g, k)
    incumbent = Incumbent(k, heur)
    log.debug("heuristic size %d, degeneracy %d", heur.size, ord.degeneracy)
    complete = True
    try:
        for i, v in enumerate(ord.order):
            # every vertex of a clique larger than the incumbent lies in its
            # (size - k)-core; core numbers never decrease along the order
            if ord.core[v] < incumbent.size - k:
                continue
            hop1 = neighbors_after(g, ord, v)
            hop2 = two_hop_after(g, ord, v)
            if 1 + len(hop1) + len(hop2) > incumbent.size:
                branch(_with_p(g, v, hop1, hop2, k), incumbent, strategy, stats, deadline, trace)
            if 1 + len(hop1) > incumbent.size:
                branch(_without_p(g, v, hop1, k), incumbent, strategy, stats, deadline, trace)
    except SearchTimeout:
        complete = False
    stats.wall_time = time.monotonic() - started
    return SolveReport(incumbent.best, stats, k, bound_name, time_limit, g.n, g.m,
                       ord.degeneracy, complete, heur.size)

