"""Seeded comparison suites shared by the CLI and the test-suite.

The dominance checks evaluate every partition-based bound on one shared
partition so the relations compare like for like.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bounds import (Partition, club_bound, coloring_bound, dp_bound, greedy_partition,
                     pack_color_conf, packing_bound, sorting_bound)
from .generators import random_graph, random_instance
from .model import Instance
from .oracle import brute_instance_max
from .solver import solve

# (name, holds(values)) for each ordering between bound values
RELATIONS = (
    ("pcc<=dp", lambda b: b["pcc"] <= b["dp"]),
    ("dp==sorting", lambda b: b["dp"] == b["sorting"]),
    ("sorting<=packing", lambda b: b["sorting"] <= b["packing"]),
    ("dp<=coloring", lambda b: b["dp"] <= b["coloring"]),
    ("club<=packing", lambda b: b["club"] <= b["packing"]),
)


def all_bounds(inst: Instance, lb: int, part: Partition | None = None) -> dict[str, int]:
    if part is None:
        part = greedy_partition(inst)
    return {
        "packing": packing_bound(inst),
        "coloring": coloring_bound(inst, part),
        "sorting": sorting_bound(inst, part),
        "club": club_bound(inst),
        "dp": dp_bound(inst, part),
        "pcc": pack_color_conf(inst, lb, part),
    }


def violated(values: dict[str, int]) -> list[str]:
    return [name for name, holds in RELATIONS if not holds(values)]


@dataclass
class DominanceSummary:
    instances: int = 0
    violations: dict[str, int] = field(default_factory=lambda: {n: 0 for n, _ in RELATIONS})
    strict_pcc: int = 0
    paired: int = 0
    pcc_le_dp_nodes: int = 0
    nodes: dict[str, int] = field(default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    @property
    def node_share(self) -> float:
        return self.pcc_le_dp_nodes / self.paired if self.paired else 1.0


def dominance_suite(seed: int = 42, count: int = 1000,
                    node_strategies=("pcc", "dp")) -> DominanceSummary:
    """Check the bound relations on ``count`` random nodes, then pair node counts.

    ``lb`` is drawn just below or at the true optimum of each instance so
    the conflict rules are neither vacuous nor trivially satisfied.
    """
    rng = random.Random(seed)
    out = DominanceSummary(nodes={s: 0 for s in node_strategies})
    for _ in range(count):
        inst = random_instance(rng)
        opt = brute_instance_max(inst)
        lb = max(inst.psize, (opt or inst.psize) - rng.randint(0, 1))
        vals = all_bounds(inst, lb)
        out.instances += 1
        for name in violated(vals):
            out.violations[name] += 1
        if vals["pcc"] < vals["dp"]:
            out.strict_pcc += 1

        g = random_graph(rng)
        k = rng.randint(0, 3)
        counts = {s: solve(g, k, s).stats.nodes for s in node_strategies}
        for s, c in counts.items():
            out.nodes[s] += c
        if "pcc" in counts and "dp" in counts:
            out.paired += 1
            out.pcc_le_dp_nodes += counts["pcc"] <= counts["dp"]
    return out


class InstrumentedBound:
    """Prunes with one bound while recording pcc, dp and packing at every node."""

    def __init__(self, prune_with: str = "pcc"):
        self.prune_with = prune_with
        self.records: list[tuple[int, int, int]] = []

    def __call__(self, inst: Instance, lb: int) -> int:
        if inst.slack < 0:
            return inst.psize
        part = greedy_partition(inst)
        vals = {"pcc": pack_color_conf(inst, lb, part), "dp": dp_bound(inst, part),
                "packing": packing_bound(inst)}
        self.records.append((vals["pcc"], vals["dp"], vals["packing"]))
        return vals[self.prune_with]

    def chain_violations(self) -> int:
        return sum(1 for p, d, q in self.records if not p <= d <= q)
