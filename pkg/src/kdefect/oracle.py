"""Exhaustive references used to check the solver and every bound.

Nothing here is clever on purpose: each routine enumerates subsets,
pruning only with the hereditary property of k-defective cliques.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .graph import Graph
from .model import Instance, Solution, bits_of, check_solution, is_k_defective_set, iter_bits


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_n: int = 14
    max_elements: int = 16


DEFAULT_LIMITS = OracleLimits()


def _non_masks(g: Graph) -> list[int]:
    full = (1 << g.n) - 1
    return [full & ~m & ~(1 << v) for v, m in enumerate(g.masks)]


def brute_max_kdc(g: Graph, k: int, limits: OracleLimits = DEFAULT_LIMITS) -> Solution:
    """Largest k-defective clique by depth-first subset growth."""
    if g.n > limits.max_n:
        raise OracleLimitError(f"n={g.n} exceeds oracle limit {limits.max_n}")
    non = _non_masks(g)
    best = 0
    best_size = 0

    def grow(s: int, size: int, missing: int, nxt: int) -> None:
        nonlocal best, best_size
        if size > best_size:
            best, best_size = s, size
        for v in range(nxt, g.n):
            extra = (non[v] & s).bit_count()
            if missing + extra <= k:
                grow(s | (1 << v), size + 1, missing + extra, v + 1)

    grow(0, 0, 0, 0)
    return check_solution(g, iter_bits(best), k)


def brute_max_kdc_bitmask(g: Graph, k: int, max_n: int = 16) -> int:
    """Size of the largest k-defective clique by scanning all ``2^n`` subsets."""
    if g.n > max_n:
        raise OracleLimitError(f"n={g.n} exceeds bitmask oracle limit {max_n}")
    edges = [(u, v) for u, v in g.edges()]
    best = 0
    for s in range(1 << g.n):
        size = s.bit_count()
        if size <= best:
            continue
        present = sum(1 for u, v in edges if (s >> u) & 1 and (s >> v) & 1)
        if size * (size - 1) // 2 - present <= k:
            best = size
    return best


def brute_instance_max(inst: Instance, limits: OracleLimits = DEFAULT_LIMITS,
                       require: Iterable[int] = ()) -> int | None:
    """Largest k-defective clique ``Q`` reachable from ``(G, P, R)``.

    ``Q`` must contain ``P`` (and ``require``), and every vertex of ``Q``
    outside ``P | R`` must be adjacent to all other members of ``Q`` (it can
    only enter as part of the clique completion).  ``None`` if no such
    ``Q`` exists.
    """
    if inst.n > limits.max_n:
        raise OracleLimitError(f"n={inst.n} exceeds oracle limit {limits.max_n}")
    non = inst.non
    k = inst.k
    outside = inst.full & ~(inst.pmask | inst.rmask)
    pm = inst.pmask | bits_of(require)
    base_missing = sum((non[u] & pm).bit_count() for u in iter_bits(pm)) // 2
    if base_missing > k:
        return None
    free = [v for v in range(inst.n) if not (pm >> v) & 1]
    best = None

    def ok(q: int) -> bool:
        return all(not non[x] & q for x in iter_bits(q & outside))

    def grow(q: int, missing: int, idx: int) -> None:
        nonlocal best
        size = q.bit_count()
        if best is None or size > best:
            best = size
        for j in range(idx, len(free)):
            v = free[j]
            extra = (non[v] & q).bit_count()
            if missing + extra > k:
                continue
            q2 = q | (1 << v)
            # a non-universal outside vertex stays non-universal in supersets
            if ok(q2):
                grow(q2, missing + extra, j + 1)

    if ok(pm):
        grow(pm, base_missing, 0)
    return best


def brute_opt(inst: Instance, classes: Iterable[Iterable[int]],
              conflicts: Callable[[int, int], bool] | None = None,
              limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Exact optimum of the class-wise packing problem.

    Picks ``S_i`` from each class so that the total of ``C(|S_i|, 2)`` plus
    member weights fits in the slack, optionally with no conflicting pair
    inside any ``S_i``.  Returns ``|P| + sum |S_i|``.
    """
    cls_list = [list(c) for c in classes]
    elems = [(i, v) for i, c in enumerate(cls_list) for v in c if not (inst.pmask >> v) & 1]
    if len(elems) > limits.max_elements:
        raise OracleLimitError(f"{len(elems)} elements exceed oracle limit {limits.max_elements}")
    if inst.slack < 0:
        return inst.psize
    w = inst.weights
    chosen: list[list[int]] = [[] for _ in cls_list]
    best = 0

    def go(idx: int, cost: int, count: int) -> None:
        nonlocal best
        if count + (len(elems) - idx) <= best:
            return
        if idx == len(elems):
            best = max(best, count)
            return
        i, v = elems[idx]
        extra = w[v] + len(chosen[i])
        if cost + extra <= inst.slack and (
                conflicts is None or not any(conflicts(u, v) for u in chosen[i])):
            chosen[i].append(v)
            go(idx + 1, cost + extra, count + 1)
            chosen[i].pop()
        go(idx + 1, cost, count)

    go(0, 0, 0)
    return inst.psize + best


def enumerate_kdef_sets(g: Graph, k: int, p: Iterable[int], r: Iterable[int],
                        limits: OracleLimits = DEFAULT_LIMITS) -> list[frozenset[int]]:
    """All k-defective sets ``D`` with ``p <= D <= p | r``."""
    p = sorted(set(p))
    r = sorted(set(r) - set(p))
    if len(p) + len(r) > limits.max_elements:
        raise OracleLimitError("too many vertices for set enumeration")
    non = _non_masks(g)
    pm = bits_of(p)
    base = sum((non[u] & pm).bit_count() for u in p) // 2
    out: list[frozenset[int]] = []
    if base > k:
        return out

    def grow(d: int, missing: int, idx: int) -> None:
        members = list(iter_bits(d))
        if is_k_defective_set(g, members, k):
            out.append(frozenset(members))
        for j in range(idx, len(r)):
            v = r[j]
            extra = (non[v] & d).bit_count()
            if missing + extra <= k:
                grow(d | (1 << v), missing + extra, j + 1)

    grow(pm, base, 0)
    return out
