"""Upper bounds on the best k-defective clique reachable from an Instance.

Every bound looks at the candidates ``V \\ P`` whose weight fits in the
current slack; anything heavier can never join ``P`` and is ignored.
Partition-based bounds take a shared :class:`Partition` so that the
dominance relations between them can be compared like for like.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from math import isqrt
from typing import Callable, Sequence

from .graph import peel
from .model import Instance, bits_of, iter_bits

BOUND_NAMES = ("packing", "coloring", "sorting", "club", "dp", "pcc")

Conflict = Callable[[int, int], bool]


@dataclass(frozen=True)
class Partition:
    """Disjoint independent sets covering the eligible part of ``V \\ P``."""

    classes: tuple[tuple[int, ...], ...]

    @property
    def chi(self) -> int:
        return len(self.classes)


@dataclass
class DPTables:
    t: list[list[int]] = field(default_factory=list)
    f: list[list[int]] = field(default_factory=list)

    @property
    def value(self) -> int:
        return self.f[-1][-1] if self.f else 0


def eligible(inst: Instance) -> list[int]:
    """Vertices of ``V \\ P`` with ``w(u) <= r(P)``, ascending."""
    w, s = inst.weights, inst.slack
    return [v for v in iter_bits(inst.full & ~inst.pmask) if w[v] <= s]


def clique_cap(k: int) -> int:
    """Largest ``s`` with ``C(s, 2) <= k``."""
    return (1 + isqrt(8 * k + 1)) // 2


def _by_weight(inst: Instance, verts) -> list[int]:
    w = inst.weights
    return sorted(verts, key=lambda v: (w[v], v))


def _prefix_fit(costs: Sequence[int], budget: int) -> int:
    """Length of the longest prefix of sorted ``costs`` summing to ``<= budget``."""
    return bisect_right(list(accumulate(costs)), budget)


def greedy_partition(inst: Instance) -> Partition:
    """Sequential greedy coloring of the eligible candidates.

    Vertices are scanned smallest-last (reverse min-degree peeling of the
    candidate subgraph, ties by id) and dropped into the first class that
    has no neighbor of theirs.
    """
    cand = eligible(inst)
    if not cand:
        return Partition(())
    adj = inst.adj
    cmask = bits_of(cand)
    rows = {v: list(iter_bits(adj[v] & cmask)) for v in cand}
    order, _ = peel(rows, cand)
    order.reverse()
    class_masks: list[int] = []
    classes: list[list[int]] = []
    for v in order:
        nbrs = adj[v]
        for i, cm in enumerate(class_masks):
            if not nbrs & cm:
                class_masks[i] = cm | (1 << v)
                classes[i].append(v)
                break
        else:
            class_masks.append(1 << v)
            classes.append([v])
    return Partition(tuple(tuple(c) for c in classes))


def _eligible_classes(inst: Instance, part: Partition) -> list[list[int]]:
    w, s, pm = inst.weights, inst.slack, inst.pmask
    out = []
    for cls in part.classes:
        keep = [v for v in cls if w[v] <= s and not (pm >> v) & 1]
        if keep:
            out.append(_by_weight(inst, keep))
    return out


def packing_bound(inst: Instance) -> int:
    w = inst.weights
    costs = [w[v] for v in _by_weight(inst, eligible(inst))]
    return inst.psize + _prefix_fit(costs, inst.slack)


def coloring_bound(inst: Instance, part: Partition) -> int:
    cap = clique_cap(inst.k)
    return inst.psize + sum(min(cap, len(c)) for c in _eligible_classes(inst, part))


def sorting_bound(inst: Instance, part: Partition) -> int:
    w = inst.weights
    costs = [w[v] + j for cls in _eligible_classes(inst, part) for j, v in enumerate(cls)]
    costs.sort()
    return inst.psize + _prefix_fit(costs, inst.slack)


def club_bound(inst: Instance) -> int:
    w, adj, s = inst.weights, inst.adj, inst.slack
    buckets: dict[int, list[int]] = {}
    for v in eligible(inst):
        buckets.setdefault(w[v], []).append(v)
    costs = []
    for weight, members in buckets.items():
        class_masks: list[int] = []
        for v in members:
            for i, cm in enumerate(class_masks):
                if not adj[v] & cm:
                    class_masks[i] = cm | (1 << v)
                    break
            else:
                class_masks.append(1 << v)
        chi = len(class_masks)
        costs.extend(weight + j // chi for j in range(len(members)))
    costs.sort()
    return inst.psize + _prefix_fit(costs, s)


def t_row(weights: Sequence[int], budget: int) -> list[int]:
    """``t[r]`` = max ``j`` with ``C(j,2) + sum(weights[:j]) <= r`` for ``r`` in ``0..budget``.

    ``weights`` must be non-decreasing.
    """
    costs = []
    total = 0
    for j, x in enumerate(weights):
        total += x + j
        if total > budget:
            break
        costs.append(total)
    return [bisect_right(costs, r) for r in range(budget + 1)]


def compose(rows: list[list[int]], budget: int) -> DPTables:
    """Knapsack-style composition ``f(i, r) = max_{r'} f(i-1, r') + t(i, r - r')``."""
    tables = DPTables(t=rows)
    if not rows:
        return tables
    prev = list(rows[0])
    tables.f.append(prev)
    for row in rows[1:]:
        cur = [0] * (budget + 1)
        for r in range(budget + 1):
            best = 0
            for rp in range(r + 1):
                val = prev[rp] + row[r - rp]
                if val > best:
                    best = val
            cur[r] = best
        tables.f.append(cur)
        prev = cur
    return tables


def dp_tables(inst: Instance, part: Partition) -> DPTables:
    w = inst.weights
    rows = [t_row([w[v] for v in cls], inst.slack) for cls in _eligible_classes(inst, part)]
    return compose(rows, inst.slack)


def dp_bound(inst: Instance, part: Partition) -> int:
    return inst.psize + dp_tables(inst, part).value


class ConflictOracle:
    """Lazily evaluated, memoised conflict verdicts for one search node.

    Reads the instance state at call time, so it must not outlive the node
    it was built for.
    """

    def __init__(self, inst: Instance, lb: int):
        self.inst = inst
        self.lb = lb
        self.cache: dict[tuple[int, int], bool] = {}
        self._notp = inst.full & ~inst.pmask
        self._rmask = inst.rmask
        self._slack = inst.slack
        self._room = inst.psize + inst.slack

    def rules(self, u: int, v: int) -> list[int]:
        """Numbers (1-5) of every conflict rule that fires for ``{u, v}``."""
        inst = self.inst
        adj, w = inst.adj, inst.weights
        adjacent = bool((adj[u] >> v) & 1)
        in_r_u = bool((inst.rmask >> u) & 1)
        in_r_v = bool((inst.rmask >> v) & 1)
        fired = []
        if not adjacent:
            if (in_r_u and not in_r_v) or (in_r_v and not in_r_u):
                fired.append(1)
            if not in_r_u and not in_r_v:
                fired.append(2)
        if inst.slack - w[u] - w[v] - (0 if adjacent else 1) < 0:
            fired.append(3)
        common = (adj[u] & adj[v] & self._notp).bit_count()
        room = inst.psize + inst.slack - w[u] - w[v]
        if adjacent and common <= self.lb - (room + 2):
            fired.append(4)
        if not adjacent and common <= self.lb - (room + 1):
            fired.append(5)
        return fired

    def _fires(self, u: int, v: int) -> bool:
        # same verdict as bool(rules(u, v)), returning at the first rule hit
        inst = self.inst
        adj, w = inst.adj, inst.weights
        wuv = w[u] + w[v]
        adjacent = (adj[u] >> v) & 1
        if not adjacent:
            # rules 1/2: a non-edge conflicts unless both ends are in R
            if not ((self._rmask >> u) & 1 and (self._rmask >> v) & 1):
                return True
            if wuv + 1 > self._slack:
                return True
            extra = 1
        elif wuv > self._slack:
            return True
        else:
            extra = 2
        common = (adj[u] & adj[v] & self._notp).bit_count()
        return common <= self.lb - (self._room - wuv + extra)

    def __call__(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        hit = self.cache.get(key)
        if hit is None:
            hit = self._fires(u, v)
            self.cache[key] = hit
        return hit


def build_conflicts(inst: Instance, lb: int, pairs=()) -> ConflictOracle:
    oracle = ConflictOracle(inst, lb)
    for u, v in pairs:
        oracle(u, v)
    return oracle


def conflict_layers(inst: Instance, cls: Sequence[int], conflict: Conflict,
                    limit: int | None = None) -> list[list[int]]:
    """Peel a class into mutually conflicting layers ``Y_1, Y_2, ...``.

    With ``limit`` set, peeling stops after that many layers; later layers
    do not depend on how far the peel goes, so the prefix is unchanged.
    """
    remaining = _by_weight(inst, cls)
    layers = []
    while remaining and (limit is None or len(layers) < limit):
        layer: list[int] = []
        rest: list[int] = []
        for v in remaining:
            if not layer or all(conflict(u, v) for u in layer):
                layer.append(v)
            else:
                rest.append(v)
        layers.append(layer)
        remaining = rest
    return layers


def pcc_tables(inst: Instance, lb: int, part: Partition,
               conflicts: Conflict | None = None) -> DPTables:
    if conflicts is None:
        # layering asks about each pair at most once, so skip the memo
        conflicts = ConflictOracle(inst, lb)._fires
    w = inst.weights
    # the j-th layer costs at least j, so layers past this cap never fit
    cap = clique_cap(inst.slack)
    rows = []
    for cls in _eligible_classes(inst, part):
        layers = conflict_layers(inst, cls, conflicts, cap)
        # layer minima are non-decreasing because each layer opens with the
        # lightest vertex left
        rows.append(t_row([min(w[u] for u in y) for y in layers], inst.slack))
    return compose(rows, inst.slack)


def pack_color_conf(inst: Instance, lb: int, part: Partition,
                    conflicts: Conflict | None = None) -> int:
    return inst.psize + pcc_tables(inst, lb, part, conflicts).value


def evaluate(name: str, inst: Instance, lb: int, part: Partition | None = None) -> int:
    """Evaluate a bound by name; builds a greedy partition if one is needed."""
    if inst.slack < 0:
        return inst.psize
    if name == "packing":
        return packing_bound(inst)
    if name == "club":
        return club_bound(inst)
    if part is None:
        part = greedy_partition(inst)
    if name == "coloring":
        return coloring_bound(inst, part)
    if name == "sorting":
        return sorting_bound(inst, part)
    if name == "dp":
        return dp_bound(inst, part)
    if name == "pcc":
        return pack_color_conf(inst, lb, part)
    raise ValueError(f"unknown bound {name!r}; choose from {', '.join(BOUND_NAMES)}")


def make_bound(name: str | None) -> Callable[[Instance, int], int] | None:
    """Strategy callable ``(inst, lb) -> upper bound``; ``None``/"none" disables bounding."""
    if name is None or name == "none":
        return None
    if name not in BOUND_NAMES:
        raise ValueError(f"unknown bound {name!r}; choose from {', '.join(BOUND_NAMES)}")

    def bound(inst: Instance, lb: int) -> int:
        return evaluate(name, inst, lb)

    bound.__name__ = f"{name}_bound"
    return bound
