"""k-defective cliques, k-defective sets and the search Instance."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import Graph


class ValidationError(ValueError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def missing_edges(g: Graph, s: Iterable[int]) -> int:
    s = set(s)
    adj = g.adjacency
    present = sum(1 for u in s for v in adj[u] if v in s) // 2
    return len(s) * (len(s) - 1) // 2 - present


def is_k_defective_clique(g: Graph, s: Iterable[int], k: int) -> bool:
    return missing_edges(g, s) <= k


def is_k_defective_set(g: Graph, s: Iterable[int], k: int) -> bool:
    """k-defective clique in which every member misses some other member."""
    s = set(s)
    if missing_edges(g, s) > k:
        return False
    adj = g.adjacency
    for u in s:
        if sum(1 for v in adj[u] if v in s) == len(s) - 1:
            return False
    return True


@dataclass(frozen=True)
class Solution:
    vertices: tuple[int, ...]
    size: int
    nontrivial: bool
    k: int

    def to_json(self) -> dict:
        return {"size": self.size, "vertices": list(self.vertices),
                "nontrivial": self.nontrivial, "k": self.k}

    @classmethod
    def from_json(cls, obj: dict | str) -> "Solution":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(obj["vertices"]), obj["size"], obj["nontrivial"], obj["k"])


def check_solution(g: Graph, s: Iterable[int], k: int) -> Solution:
    verts = tuple(sorted(set(s)))
    miss = missing_edges(g, verts)
    if miss > k:
        raise ValidationError(
            f"not a {k}-defective clique: {miss} non-adjacent pairs among {len(verts)} vertices")
    return Solution(verts, len(verts), len(verts) >= k + 2, k)


class Instance:
    """Search state ``(G, P, R)`` with slack ``r(P)`` and weights ``w(u)``.

    ``P`` and ``R`` are kept as int bitsets over the local vertex ids of
    ``graph``; ``p``/``r_set`` expose them as frozensets.  ``weights[u]``
    is ``|P| - |N(u) & P|`` for every vertex (members of ``P`` count
    themselves), maintained incrementally by :meth:`add` / :meth:`undo_add`.
    """

    def __init__(self, graph: Graph, p: Iterable[int], r: Iterable[int], k: int,
                 to_global: tuple[int, ...] | None = None):
        self.graph = graph
        self.k = k
        self.to_global = to_global
        self.adj = graph.masks
        self.full = (1 << graph.n) - 1
        # strict non-neighbors: the vertex itself excluded
        self.non = [self.full & ~m & ~(1 << v) for v, m in enumerate(self.adj)]
        self.pmask = bits_of(p)
        self.rmask = bits_of(r)
        if self.pmask & self.rmask:
            raise ValueError("P and R must be disjoint")
        if (self.pmask | self.rmask) & ~self.full:
            raise ValueError("P and R must be subsets of V")
        self.weights, self.slack = self._fresh_weights()

    def _fresh_weights(self) -> tuple[list[int], int]:
        pm = self.pmask
        psize = pm.bit_count()
        weights = [psize - (m & pm).bit_count() for m in self.adj]
        miss = sum((self.non[u] & pm).bit_count() for u in iter_bits(pm)) // 2
        return weights, self.k - miss

    @property
    def p(self) -> frozenset[int]:
        return frozenset(iter_bits(self.pmask))

    @property
    def r_set(self) -> frozenset[int]:
        return frozenset(iter_bits(self.rmask))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def psize(self) -> int:
        return self.pmask.bit_count()

    def add(self, v: int) -> None:
        """Move ``v`` from ``R`` into ``P``."""
        self.slack -= self.weights[v]
        self.pmask |= 1 << v
        self.rmask &= ~(1 << v)
        w = self.weights
        for u in iter_bits(self.non[v] | (1 << v)):
            w[u] += 1

    def undo_add(self, v: int) -> None:
        """Inverse of :meth:`add`."""
        w = self.weights
        for u in iter_bits(self.non[v] | (1 << v)):
            w[u] -= 1
        self.pmask &= ~(1 << v)
        self.rmask |= 1 << v
        self.slack += self.weights[v]

    def copy(self) -> "Instance":
        other = object.__new__(Instance)
        other.__dict__.update(self.__dict__)
        other.weights = list(self.weights)
        return other

    def consistent(self) -> bool:
        return (self.weights, self.slack) == self._fresh_weights()

    def global_ids(self, mask: int) -> list[int]:
        if self.to_global is None:
            return list(iter_bits(mask))
        return [self.to_global[v] for v in iter_bits(mask)]

    def __repr__(self) -> str:
        return (f"Instance(n={self.n}, P={sorted(self.p)}, R={sorted(self.r_set)}, "
                f"k={self.k}, slack={self.slack})")


def slack_after_add(inst: Instance, v: int) -> int:
    """Slack of ``P + v``; does not mutate ``inst``."""
    return inst.slack - inst.weights[v]
