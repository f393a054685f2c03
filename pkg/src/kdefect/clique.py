"""Maximum clique: bitset branch-and-bound plus a brute-force reference."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, peel
from .model import iter_bits


@dataclass(frozen=True)
class CliqueResult:
    vertices: tuple[int, ...]
    size: int


def _smallest_last(adj: list[int], cand: int) -> list[int]:
    verts = list(iter_bits(cand))
    rows = {v: list(iter_bits(adj[v] & cand)) for v in verts}
    order, _ = peel(rows, verts)
    order.reverse()
    return order


def max_clique_mask(adj: list[int], cand: int, floor: int = 0) -> list[int]:
    """Maximum clique inside the bitset ``cand`` of a graph given as masks.

    Returns ``[]`` when no clique larger than ``floor`` exists.
    """
    if not cand:
        return []
    order = _smallest_last(adj, cand)
    # relabel so that bit i is the i-th vertex of the coloring order
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * len(order)
    for v, i in pos.items():
        m = 0
        for u in iter_bits(adj[v] & cand):
            m |= 1 << pos[u]
        radj[i] = m

    best: list[int] = []
    best_size = floor
    current: list[int] = []

    def expand(p: int) -> None:
        nonlocal best, best_size
        # greedy sequential coloring in bit order
        verts: list[int] = []
        colors: list[int] = []
        uncolored = p
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low & ~radj[v]
                uncolored &= ~low
                verts.append(v)
                colors.append(color)
        for idx in range(len(verts) - 1, -1, -1):
            if len(current) + colors[idx] <= best_size:
                return
            v = verts[idx]
            current.append(v)
            sub = p & radj[v]
            if sub:
                expand(sub)
            elif len(current) > best_size:
                best = list(current)
                best_size = len(current)
            current.pop()
            p &= ~(1 << v)

    expand((1 << len(order)) - 1)
    return sorted(order[i] for i in best)


def max_clique(g: Graph, floor: int = 0) -> CliqueResult:
    """Exact maximum clique whenever it exceeds ``floor``.

    Below the floor an empty result is returned, which callers read as
    "no improvement".
    """
    found = max_clique_mask(g.masks, (1 << g.n) - 1, floor)
    return CliqueResult(tuple(found), len(found))


def brute_force_max_clique(g: Graph, max_n: int = 24) -> CliqueResult:
    if g.n > max_n:
        raise ValueError(f"brute force limited to n <= {max_n}, got {g.n}")
    adj = g.masks
    best: tuple[int, ...] = ()

    def grow(clique: list[int], cand: int) -> None:
        nonlocal best
        if len(clique) > len(best):
            best = tuple(clique)
        for v in iter_bits(cand):
            clique.append(v)
            grow(clique, cand & adj[v] & ~((1 << (v + 1)) - 1))
            clique.pop()

    grow([], (1 << g.n) - 1)
    return CliqueResult(best, len(best))
