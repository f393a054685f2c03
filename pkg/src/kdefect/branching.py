"""Enumeration of k-defective sets with clique completion.

Each call of :func:`branch` explores every k-defective set ``D`` with
``P <= D <= P | R`` and completes it with a maximum clique of ``CN(D)``.
Reductions and the exclude branch are tail calls, so they run as a loop;
recursion depth is bounded by the growth of ``P`` (at most ``2k + 1``).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from typing import Callable, Protocol

from .clique import max_clique_mask
from .model import Instance, Solution, iter_bits

Bound = Callable[[Instance, int], int]


class SearchTimeout(Exception):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    bound_prunes: int = 0
    feasibility_prunes: int = 0
    reduction_applications: int = 0
    mc_calls: int = 0
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "bound_prunes": self.bound_prunes,
                "feasibility_prunes": self.feasibility_prunes,
                "reduction_applications": self.reduction_applications,
                "mc_calls": self.mc_calls, "wall_time": self.wall_time}


class Incumbent:
    """Best k-defective clique so far; only ever improves."""

    def __init__(self, k: int, best: Solution | None = None):
        self.k = k
        self.best = best
        self._lock = threading.Lock()

    @property
    def size(self) -> int:
        return self.best.size if self.best else 0

    def offer(self, vertices) -> bool:
        verts = tuple(sorted(vertices))
        if len(verts) <= self.size:
            return False
        with self._lock:
            if len(verts) <= self.size:
                return False
            self.best = Solution(verts, len(verts), len(verts) >= self.k + 2, self.k)
            return True


class Tracer(Protocol):
    def __call__(self, event: str, inst: Instance, **info) -> None: ...


@dataclass
class SearchNode:
    """One invocation of the branching procedure, as seen by a tracer."""

    inst: Instance
    depth: int = 0


def select_branch_vertex(inst: Instance) -> int:
    """Vertex of ``R`` with the most non-neighbors in ``P`` (smallest id on ties)."""
    w = inst.weights
    best, best_w = -1, -1
    for u in iter_bits(inst.rmask):
        if w[u] > best_w:
            best, best_w = u, w[u]
    if best < 0:
        raise ValueError("R is empty")
    return best


def _universal_in(inst: Instance, candidates: int, pr: int) -> int:
    """Smallest vertex of ``candidates`` adjacent to every other vertex of ``pr``, or -1."""
    non = inst.non
    for u in iter_bits(candidates):
        if not non[u] & pr:
            return u
    return -1


def branch(inst: Instance, incumbent: Incumbent, bound: Bound | None,
           stats: SearchStats, deadline: float | None = None,
           trace: Tracer | None = None, depth: int = 0) -> None:
    """Search the subtree rooted at ``inst``; ``inst`` is restored on return."""
    saved_r = inst.rmask
    try:
        while True:
            stats.nodes += 1
            if deadline is not None and time.monotonic() > deadline:
                raise SearchTimeout
            if trace:
                trace("node", inst, depth=depth)
            pr = inst.pmask | inst.rmask

            # (a) P extends to no k-defective set
            if inst.slack < 0 or _universal_in(inst, inst.pmask, pr) >= 0:
                stats.feasibility_prunes += 1
                if trace:
                    trace("infeasible", inst, depth=depth)
                return

            # (b) bound hook
            if bound is not None:
                lb = incumbent.size
                if bound(inst, lb) <= lb:
                    stats.bound_prunes += 1
                    if trace:
                        trace("bound_prune", inst, depth=depth)
                    return

            # (c) P is final: complete with a maximum clique
            if inst.slack == 0 or not inst.rmask:
                if inst.pmask:
                    cand = inst.full
                    for u in iter_bits(inst.pmask):
                        cand &= inst.adj[u]
                else:
                    cand = inst.full
                psize = inst.psize
                stats.mc_calls += 1
                clique = max_clique_mask(inst.adj, cand, max(incumbent.size - psize, 0))
                if trace:
                    trace("leaf", inst, depth=depth, clique=clique, cand=cand)
                if clique or psize:
                    local = inst.pmask
                    for v in clique:
                        local |= 1 << v
                    incumbent.offer(inst.global_ids(local))
                return

            # (d) a vertex of R adjacent to all of P | R is in no k-defective set
            v = _universal_in(inst, inst.rmask, pr)
            if v >= 0:
                stats.reduction_applications += 1
                if trace:
                    trace("reduce", inst, depth=depth, vertex=v)
                inst.rmask &= ~(1 << v)
                continue

            # (e) binary branching, include first
            v = select_branch_vertex(inst)
            if trace:
                trace("branch", inst, depth=depth, vertex=v)
            inst.add(v)
            try:
                branch(inst, incumbent, bound, stats, deadline, trace, depth + 1)
            finally:
                inst.undo_add(v)
            inst.rmask &= ~(1 << v)
            depth += 1
    finally:
        inst.rmask = saved_r
