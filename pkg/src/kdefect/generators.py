"""Seeded random graphs and search instances for the verification suites."""

from __future__ import annotations

import random

from .graph import Graph, gnp
from .model import Instance

DENSITIES = (0.2, 0.35, 0.5, 0.65, 0.8)


def random_graph(rng: random.Random, n_min: int = 4, n_max: int = 14,
                 densities=DENSITIES) -> Graph:
    return gnp(rng.randint(n_min, n_max), rng.choice(densities), rng)


def random_instance(rng: random.Random, g: Graph | None = None, k: int | None = None,
                    n_min: int = 6, n_max: int = 14, max_p: int = 3,
                    r_prob: float = 0.75) -> Instance:
    """A random ``(G, P, R)`` with ``r(P) >= 0``.

    ``R`` takes each vertex outside ``P`` with probability ``r_prob`` so that
    the rest of ``V`` (clique-completion-only vertices) is usually non-empty.
    """
    if g is None:
        g = random_graph(rng, n_min, n_max)
    if k is None:
        k = rng.randint(0, 4)
    verts = list(range(g.n))
    while True:
        p = rng.sample(verts, rng.randint(0, min(max_p, g.n)))
        rest = [v for v in verts if v not in p]
        r = [v for v in rest if rng.random() < r_prob]
        inst = Instance(g, p, r, k)
        if inst.slack >= 0:
            return inst
