import random
from itertools import combinations
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, cycle, empty, graphs
from kdefect.bounds import (BOUND_NAMES, ConflictOracle, Partition, build_conflicts,
                            clique_cap, club_bound, coloring_bound, compose, conflict_layers,
                            dp_bound, dp_tables, eligible, evaluate, greedy_partition,
                            make_bound, pack_color_conf, packing_bound, pcc_tables,
                            sorting_bound, t_row)
from kdefect.generators import random_instance
from kdefect.graph import Graph
from kdefect.model import Instance
from kdefect.oracle import brute_max_kdc, brute_opt


def weighted_instance(p_size: int, k: int, classes: list[list[int]], cross: bool = True):
    """P is a clique of ``p_size``; each class is an independent set whose
    members have the given numbers of non-neighbours in P.  With ``cross``
    every pair of vertices from different classes is adjacent."""
    edges = list(combinations(range(p_size), 2))
    ids = []
    nxt = p_size
    for weights in classes:
        row = []
        for w in weights:
            edges += [(p, nxt) for p in range(w, p_size)]
            row.append(nxt)
            nxt += 1
        ids.append(row)
    if cross:
        for a, b in combinations(ids, 2):
            edges += [(u, v) for u in a for v in b]
    g = Graph.from_edges(nxt, edges)
    inst = Instance(g, range(p_size), range(p_size, nxt), k)
    return inst, Partition(tuple(tuple(c) for c in ids)), ids


# --- partition -------------------------------------------------------------

def test_partition_examples():
    assert greedy_partition(Instance(empty(5), [], range(5), 0)).chi == 1
    assert greedy_partition(Instance(complete(4), [], range(4), 0)).chi == 4
    assert greedy_partition(Instance(cycle(5), [], range(5), 0)).chi == 3


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_partition_covers_eligible_with_independent_classes(rnd):
    inst = random_instance(rnd)
    part = greedy_partition(inst)
    flat = [v for c in part.classes for v in c]
    assert sorted(flat) == eligible(inst)
    for cls in part.classes:
        assert all(not inst.graph.has_edge(u, v) for u, v in combinations(cls, 2))


# --- packing / coloring / sorting -----------------------------------------

def test_packing_examples():
    inst = Instance(empty(5), [], range(5), 3)
    assert packing_bound(inst) == 5
    inst, _, _ = weighted_instance(3, 2, [[0], [1], [2], [3]])
    assert inst.slack == 2
    assert packing_bound(inst) == inst.psize + 2


@pytest.mark.parametrize("k, cap", [(0, 1), (1, 2), (2, 2), (3, 3), (6, 4), (10, 5), (20, 6)])
def test_clique_cap(k, cap):
    assert clique_cap(k) == cap
    assert cap * (cap - 1) // 2 <= k < cap * (cap + 1) // 2


def test_clique_cap_values():
    assert [clique_cap(k) for k in (0, 1, 6)] == [1, 2, 4]


def test_coloring_with_k0_counts_classes():
    inst = Instance(cycle(5), [], range(5), 0)
    part = greedy_partition(inst)
    assert coloring_bound(inst, part) == part.chi


def test_sorting_examples():
    inst, part, _ = weighted_instance(1, 2, [[0, 0, 1]])
    assert sorting_bound(inst, part) == inst.psize + 2
    singles = Partition(tuple((v,) for c in part.classes for v in c))
    assert sorting_bound(inst, singles) == packing_bound(inst)


@pytest.mark.parametrize("k", range(8))
def test_sorting_one_independent_class(k):
    inst = Instance(empty(10), [], range(10), k)
    part = greedy_partition(inst)
    assert part.chi == 1
    assert sorting_bound(inst, part) == clique_cap(k)


# --- club ------------------------------------------------------------------

def club_by_steps(inst: Instance) -> int:
    """Direct transcription: buckets, greedy colouring per bucket, groups of
    size chi_i with w_c = w + group index, then a sorted prefix."""
    w, s = inst.weights, inst.slack
    buckets = {i: [v for v in range(inst.n) if v not in inst.p and w[v] == i]
               for i in range(s + 1)}
    costs = []
    for i, b in buckets.items():
        if not b:
            continue
        colours: list[list[int]] = []
        for v in sorted(b):
            for c in colours:
                if all(not inst.graph.has_edge(v, u) for u in c):
                    c.append(v)
                    break
            else:
                colours.append([v])
        chi = len(colours)
        z = ceil(len(b) / chi)
        groups = [sorted(b)[g * chi:(g + 1) * chi] for g in range(z)]
        for j, grp in enumerate(groups, 1):
            costs += [w[v] + j - 1 for v in grp]
    costs.sort()
    total = used = 0
    for c in costs:
        if total + c > s:
            break
        total += c
        used += 1
    return inst.psize + used


def test_club_matches_step_transcription():
    rng = random.Random(200)
    for _ in range(200):
        inst = random_instance(rng)
        assert club_bound(inst) == club_by_steps(inst)


def test_club_examples():
    # buckets that are cliques keep their plain weights
    inst = Instance(complete(6), [], range(6), 3)
    assert club_bound(inst) == packing_bound(inst)
    # an independent bucket pays a sorting-like penalty
    inst = Instance(empty(6), [], range(6), 3)
    assert club_bound(inst) == clique_cap(3)
    g = Graph.from_edges(2, [])
    assert club_bound(Instance(g, [0], [1], 1)) == 2
    assert club_bound(Instance(g, [0], [1], 0)) == 1


# --- DP --------------------------------------------------------------------

def test_t_row():
    assert t_row([0, 1, 1, 3], 5) == [1, 1, 2, 2, 2, 3]
    assert t_row([], 3) == [0, 0, 0, 0]
    assert t_row([2], 1) == [0, 0]


def test_compose_uses_same_class_row():
    rows = [t_row([0, 1, 1, 3], 5), t_row([0, 1, 2, 3], 5)]
    tabs = compose(rows, 5)
    assert tabs.f[0] == rows[0]
    assert tabs.value == 4


def test_dp_single_class_equals_sorting():
    rng = random.Random(1)
    for _ in range(100):
        inst = random_instance(rng)
        cand = eligible(inst)
        if not cand:
            continue
        part = Partition((tuple(cand),))
        assert dp_bound(inst, part) == sorting_bound(inst, part)


def test_dp_zero_slack_counts_classes_with_free_vertex():
    inst, part, _ = weighted_instance(2, 0, [[0, 1], [1, 1], [0], [0, 0]])
    assert inst.slack == 0
    tabs = dp_tables(inst, part)
    assert tabs.value == 3
    assert dp_bound(inst, part) == inst.psize + 3
    rng = random.Random(4)
    for _ in range(100):
        inst = random_instance(rng, k=0)
        part = greedy_partition(inst)
        expect = sum(any(inst.weights[v] == 0 for v in c) for c in part.classes)
        assert dp_tables(inst, part).value == expect


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_dp_table_invariants(rnd):
    inst = random_instance(rnd)
    part = greedy_partition(inst)
    tabs = dp_tables(inst, part)
    for row, cls in zip(tabs.t, part.classes):
        assert row == sorted(row)
        assert 0 <= min(row, default=0) and max(row, default=0) <= len(cls)
    for i, row in enumerate(tabs.f):
        assert row == sorted(row)
        if i:
            assert all(a >= b for a, b in zip(row, tabs.f[i - 1]))


# --- the two-class worked example -------------------------------------------

def two_class_example():
    inst, part, (pi1, pi2) = weighted_instance(4, 5, [[0, 1, 1, 3], [0, 1, 2, 3]])
    dashed = {frozenset(p) for p in combinations(pi1[:3], 2)}
    return inst, part, (lambda u, v: frozenset((u, v)) in dashed)


def test_two_class_example_dp():
    inst, part, _ = two_class_example()
    assert inst.slack == 5 and inst.psize == 4
    tabs = dp_tables(inst, part)
    assert tabs.t[0][3] == 2
    assert dp_bound(inst, part) == inst.psize + 4


def test_two_class_example_pcc():
    inst, part, dashed = two_class_example()
    tabs = pcc_tables(inst, 0, part, dashed)
    assert tabs.t[0][3] == 1
    assert pack_color_conf(inst, 0, part, dashed) == inst.psize + 3
    assert brute_opt(inst, part.classes, dashed) <= inst.psize + 3


# --- conflicts -------------------------------------------------------------

def test_rule_3_on_missing_pair_with_no_slack():
    inst = Instance(empty(2), [], [0, 1], 0)
    assert 3 in ConflictOracle(inst, 0).rules(0, 1)


def test_rule_1_needs_no_lower_bound():
    inst = Instance(empty(3), [], [0, 1], 5)
    for lb in (0, 1, 2):
        assert 1 in ConflictOracle(inst, lb).rules(0, 2)
        assert ConflictOracle(inst, lb)(2, 0)


def test_adjacent_pair_far_from_lb_is_free():
    inst = Instance(complete(4), [], range(4), 1)
    assert ConflictOracle(inst, 0).rules(0, 1) == []


def test_conflict_cache_is_symmetric():
    rng = random.Random(5)
    inst = random_instance(rng)
    oracle = build_conflicts(inst, 3, [(0, 1), (2, 1)])
    assert set(oracle.cache) <= {(0, 1), (1, 2)}
    for u, v in combinations(range(inst.n), 2):
        assert oracle(u, v) == oracle(v, u)
        assert oracle(u, v) == bool(oracle.rules(u, v))


def test_layers_are_mutually_conflicting():
    rng = random.Random(9)
    for _ in range(100):
        inst = random_instance(rng)
        conf = ConflictOracle(inst, rng.randint(0, inst.n))
        for cls in greedy_partition(inst).classes:
            layers = conflict_layers(inst, cls, conf)
            assert sorted(v for y in layers for v in y) == sorted(cls)
            for y in layers:
                assert all(conf(u, v) for u, v in combinations(y, 2))
            mins = [min(inst.weights[v] for v in y) for y in layers]
            assert mins == sorted(mins)


def test_layer_limit_keeps_prefix_and_bound():
    rng = random.Random(10)
    for _ in range(100):
        inst = random_instance(rng)
        lb = rng.randint(0, inst.n)
        conf = ConflictOracle(inst, lb)
        cap = clique_cap(inst.slack)
        rows = []
        for cls in greedy_partition(inst).classes:
            full = conflict_layers(inst, cls, conf)
            assert conflict_layers(inst, cls, conf, cap) == full[:cap]
            rows.append(t_row([min(inst.weights[v] for v in y) for y in full], inst.slack))
        if inst.slack >= 0:
            full_value = inst.psize + compose(rows, inst.slack).value
            assert pack_color_conf(inst, lb, greedy_partition(inst), conf) == full_value


def test_pcc_without_conflicts_equals_dp():
    rng = random.Random(11)
    for _ in range(200):
        inst = random_instance(rng)
        part = greedy_partition(inst)
        assert pack_color_conf(inst, 0, part, lambda u, v: False) == dp_bound(inst, part)


def test_pcc_bounds_constrained_optimum():
    rng = random.Random(13)
    for _ in range(200):
        inst = random_instance(rng, n_max=12)
        lb = rng.randint(inst.psize, inst.n)
        part = greedy_partition(inst)
        conf = ConflictOracle(inst, lb)
        assert pack_color_conf(inst, lb, part, conf) >= brute_opt(inst, part.classes, conf)


# --- dispatch ---------------------------------------------------------------

def test_make_bound():
    assert make_bound("none") is None and make_bound(None) is None
    with pytest.raises(ValueError):
        make_bound("magic")
    inst = Instance(complete(5), [], range(5), 1)
    for name in BOUND_NAMES:
        assert make_bound(name)(inst, 0) == evaluate(name, inst, 0) == 5


def test_negative_slack_bound_is_p():
    inst = Instance(empty(3), [0, 1, 2], [], 1)
    assert inst.slack < 0
    assert all(evaluate(name, inst, 0) == 3 for name in BOUND_NAMES)


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=1, max_n=9), st.integers(0, 4))
def test_root_bounds_cover_whole_graph(g, k):
    inst = Instance(g, [], range(g.n), k)
    opt = brute_max_kdc(g, k).size
    for name in BOUND_NAMES:
        assert evaluate(name, inst, 0) >= opt


def test_conflict_fast_path_matches_rules():
    rng = random.Random(21)
    for _ in range(200):
        inst = random_instance(rng)
        conf = ConflictOracle(inst, rng.randint(0, inst.n + 2))
        for u, v in combinations([x for x in range(inst.n) if x not in inst.p], 2):
            assert conf(u, v) == bool(conf.rules(u, v))
