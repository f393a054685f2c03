"""Undirected simple graphs, edge-list ingestion and degeneracy ordering.

Graphs are stored in CSR form (``indptr``/``indices`` numpy arrays) with
each neighbor row sorted ascending.  Python-level views (``adjacency``,
``masks``) are materialised lazily because the search code works on
small induced subgraphs where plain ints beat numpy calls.
"""

from __future__ import annotations

import gzip
import heapq
from array import array
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np


class ParseError(ValueError):
    """Raised for malformed edge-list input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``."""

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        if len(indptr) != n + 1:
            raise ValueError("indptr must have n+1 entries")
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph, dropping self-loops and duplicate edges."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        return cls._from_arrays(n, arr[:, 0], arr[:, 1])

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "Graph":
        edges = [(u, v) for u, row in enumerate(adjacency) for v in row]
        return cls.from_edges(len(adjacency), edges)

    @classmethod
    def _from_arrays(cls, n: int, src: np.ndarray, dst: np.ndarray) -> "Graph":
        keep = src != dst
        src, dst = src[keep], dst[keep]
        both_src = np.concatenate([src, dst])
        both_dst = np.concatenate([dst, src])
        # one sort of the combined key dedups and orders every row at once
        keys = np.unique(both_src * np.int64(max(n, 1)) + both_dst)
        rows = keys // max(n, 1)
        cols = keys % max(n, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols.astype(np.int64))

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = int(np.searchsorted(row, v))
        return i < len(row) and int(row[i]) == v

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Sorted neighbor lists as plain Python ints."""
        flat = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [flat[ptr[v]:ptr[v + 1]] for v in range(self.n)]

    @cached_property
    def masks(self) -> list[int]:
        """Neighborhoods as int bitsets (bit ``u`` set iff ``u`` is adjacent)."""
        out = []
        for row in self.adjacency:
            mask = 0
            for u in row:
                mask |= 1 << u
            out.append(mask)
        return out

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.adjacency):
            for v in row:
                if u < v:
                    yield u, v

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash((self.n, self.indices.tobytes()))


@dataclass(frozen=True)
class VertexOrder:
    order: tuple[int, ...]
    rank: tuple[int, ...]
    degeneracy: int
    # core number of each vertex, a by-product of the peeling
    core: tuple[int, ...] = ()


@dataclass(frozen=True)
class SubgraphMap:
    graph: Graph
    to_global: tuple[int, ...]


def _iter_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        yield lineno, line


def parse_graph(data: bytes | str, format_hint: str | None = None) -> Graph:
    """Parse edge-list text (optionally with a Matrix Market header).

    Labels are arbitrary non-negative integers, compacted to ``0..n-1`` by
    first appearance.  ``format_hint`` may be ``"edgelist"`` or ``"mtx"``;
    by default the Matrix Market header is detected from the first line.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    if format_hint not in (None, "edgelist", "mtx"):
        raise ValueError(f"unknown format hint {format_hint!r}")

    labels = array("q")
    expect_size_line = format_hint == "mtx"
    for lineno, raw in _iter_lines(data):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%%MatrixMarket"):
            expect_size_line = True
            continue
        if line[0] in "%#":
            continue
        if expect_size_line:
            # the "rows cols nnz" line that follows the banner
            expect_size_line = False
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        for tok in tokens[:2]:
            if not (tok.isascii() and tok.isdigit()):
                raise ParseError(f"bad vertex label {tok!r}", lineno)
        labels.append(int(tokens[0]))
        labels.append(int(tokens[1]))

    if not labels:
        raise ParseError("empty graph input")

    raw_ids = np.frombuffer(labels, dtype=np.int64)
    uniq, first = np.unique(raw_ids, return_index=True)
    # relabel by first appearance, not by label value
    by_appearance = np.argsort(first, kind="stable")
    new_id = np.empty(len(uniq), dtype=np.int64)
    new_id[by_appearance] = np.arange(len(uniq), dtype=np.int64)
    compact = new_id[np.searchsorted(uniq, raw_ids)]
    return Graph._from_arrays(len(uniq), compact[0::2], compact[1::2])


def load_graph(path: str | Path, format_hint: str | None = None) -> Graph:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        data = fh.read()
    if format_hint is None and path.name.removesuffix(".gz").endswith(".mtx"):
        format_hint = "mtx"
    return parse_graph(data, format_hint)


def serialize_graph(g: Graph) -> str:
    """Canonical edge list: one ``"u v"`` line per edge, ``u < v``, sorted."""
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def peel(adjacency: Sequence[Sequence[int]] | Mapping[int, Sequence[int]],
         vertices: Iterable[int] | None = None):
    """Min-degree peeling with smallest-id tie-break.

    Returns ``(order, residual)`` where ``residual[i]`` is the degree of
    ``order[i]`` at the moment it was removed.  Buckets hold lazy min-heaps
    so ties always resolve to the smallest id.
    """
    if vertices is None:
        alive = set(range(len(adjacency)))
    else:
        alive = set(vertices)
    deg = {v: sum(1 for u in adjacency[v] if u in alive) for v in alive}
    buckets: dict[int, list[int]] = {}
    for v in sorted(alive):
        buckets.setdefault(deg[v], []).append(v)
    cur = 0
    order: list[int] = []
    residual: list[int] = []
    removed: set[int] = set()
    while len(order) < len(alive):
        heap = buckets.get(cur)
        while not heap:
            cur += 1
            heap = buckets.get(cur)
        v = heapq.heappop(heap)
        if v in removed or deg[v] != cur:
            continue
        removed.add(v)
        order.append(v)
        residual.append(cur)
        for u in adjacency[v]:
            if u in alive and u not in removed:
                d = deg[u] - 1
                deg[u] = d
                heapq.heappush(buckets.setdefault(d, []), u)
        if cur > 0:
            cur -= 1
    return order, residual


def degeneracy_order(g: Graph) -> VertexOrder:
    order, residual = peel(g.adjacency)
    rank = [0] * g.n
    core = [0] * g.n
    running = 0
    for i, (v, d) in enumerate(zip(order, residual)):
        rank[v] = i
        running = max(running, d)
        core[v] = running
    return VertexOrder(tuple(order), tuple(rank), running, tuple(core))


def neighbors_after(g: Graph, ord: VertexOrder, v: int) -> list[int]:
    """``N+(v)``: neighbors ranked after ``v``, ascending by id."""
    rv = ord.rank[v]
    return [u for u in g.adjacency[v] if ord.rank[u] > rv]


def two_hop_after(g: Graph, ord: VertexOrder, v: int) -> list[int]:
    """``N2+(v)``: later-ranked vertices reachable through ``N+(v)``, minus ``N+(v)``."""
    rv = ord.rank[v]
    rank = ord.rank
    adj = g.adjacency
    direct = set(neighbors_after(g, ord, v))
    out: set[int] = set()
    for u in direct:
        for x in adj[u]:
            if rank[x] > rv and x not in direct:
                out.add(x)
    out.discard(v)
    return sorted(out)


def induced_subgraph(g: Graph, s: Iterable[int]) -> SubgraphMap:
    """Induced subgraph ``G[s]``.

    Sequences keep their order as the local numbering; sets are sorted.
    """
    if isinstance(s, (set, frozenset)):
        verts = sorted(s)
    else:
        verts = list(s)
    local = {v: i for i, v in enumerate(verts)}
    if len(local) != len(verts):
        raise ValueError("duplicate vertices in subgraph selection")
    adj = g.adjacency
    rows = []
    for v in verts:
        rows.append(sorted(local[u] for u in adj[v] if u in local))
    ptr = np.zeros(len(verts) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=ptr[1:])
    flat = np.fromiter((x for r in rows for x in r), dtype=np.int64, count=int(ptr[-1]))
    return SubgraphMap(Graph(len(verts), ptr, flat), tuple(verts))


def common_neighbors(g: Graph, s: Iterable[int]) -> list[int]:
    """Vertices adjacent to every member of ``s`` (linear merge over sorted rows)."""
    members = sorted(set(s), key=g.degree)
    if not members:
        raise ValueError("common_neighbors of an empty set is undefined; use V")
    adj = g.adjacency
    out = adj[members[0]]
    for v in members[1:]:
        row = adj[v]
        merged = []
        i = j = 0
        while i < len(out) and j < len(row):
            a, b = out[i], row[j]
            if a == b:
                merged.append(a)
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        out = merged
        if not out:
            break
    return list(out)


def gnp(n: int, p: float, rng) -> Graph:
    """Erdős–Rényi G(n, p) sample drawn from a ``random.Random``."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)
