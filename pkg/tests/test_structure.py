"""Infinity graph, components, conditions A/B, and typing."""

import itertools

import numpy as np

import qmconvex as q
from helpers import all_zero, golden_yes, random_ab_instance
from reference import condition_a_by_enumeration


def graph_from_edges(n, edges, r=2):
    return q.build_infinity_graph(
        q.QuadraticInstance.from_entries(n, r, {e: q.INF for e in edges})
    )


def test_golden_yes_graph_single_edge():
    g = q.build_infinity_graph(golden_yes())
    assert g.neighbors == ((5,), (), (), (), (1,))
    assert g.has_edge(1, 5) and not g.has_edge(1, 3)


def test_all_finite_graph_is_edgeless():
    g = q.build_infinity_graph(all_zero(6, 3))
    assert all(not nb for nb in g.neighbors)


def test_components_golden_yes():
    d = q.decompose_components(q.build_infinity_graph(golden_yes()))
    assert d.big == ((1, 5),)
    assert d.isolated == (2, 3, 4)
    assert d.m == 1
    assert d.components == ((1, 5), (2,), (3,), (4,))


def test_components_edgeless():
    d = q.decompose_components(q.build_infinity_graph(all_zero(6, 3)))
    assert d.big == () and d.m == 0
    assert d.isolated == tuple(range(1, 7))


def test_components_two_groups():
    d = q.decompose_components(graph_from_edges(6, [(1, 2), (2, 3), (4, 5)]))
    assert d.big == ((1, 2, 3), (4, 5))
    assert d.isolated == (6,)


def test_condition_b_golden_yes_holds():
    g = q.build_infinity_graph(golden_yes())
    ok, witness = q.check_condition_b(g, q.decompose_components(g))
    assert ok and witness is None


def test_condition_b_path_fails_with_witness():
    inst = q.QuadraticInstance.from_entries(5, 2, {(1, 2): q.INF, (2, 3): q.INF})
    g = q.build_infinity_graph(inst)
    ok, witness = q.check_condition_b(g, q.decompose_components(g))
    assert not ok
    assert witness.kind == q.DOMAIN_VIOLATION
    assert witness.indices == (1, 2, 3)
    assert q.verify_witness(inst, witness)


def test_condition_b_clique_plus_isolated_holds():
    edges = list(itertools.combinations(range(1, 5), 2))
    g = graph_from_edges(6, edges)
    ok, witness = q.check_condition_b(g, q.decompose_components(g))
    assert ok and witness is None


def test_condition_b_witness_reverifies_on_random_graphs():
    rng = np.random.default_rng(5)
    found = 0
    for _ in range(80):
        n = int(rng.integers(4, 9))
        edges = [
            (i, j)
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
            if rng.random() < 0.3
        ]
        if not edges:
            continue
        inst = q.QuadraticInstance.from_entries(n, 2, {e: q.INF for e in edges})
        g = q.build_infinity_graph(inst)
        ok, witness = q.check_condition_b(g, q.decompose_components(g))
        if not ok:
            found += 1
            i, j, k = witness.indices
            assert inst.pair(i, j) == q.INF
            assert inst.pair(j, k) == q.INF
            assert np.isfinite(inst.pair(i, k))
    assert found > 10


def test_classify_golden_cases():
    d_e3 = q.decompose_components(q.build_infinity_graph(golden_yes()))
    assert q.classify(d_e3, 3) == q.TYPE_II

    d_finite = q.decompose_components(q.build_infinity_graph(all_zero(8, 4)))
    for r in range(2, 7):
        assert q.classify(d_finite, r) == q.TYPE_I

    d_two = q.decompose_components(graph_from_edges(4, [(1, 2), (3, 4)]))
    assert q.classify(d_two, 2) == q.TYPE_III

    d_one = q.decompose_components(
        graph_from_edges(6, list(itertools.combinations(range(1, 7), 2)))
    )
    assert q.classify(d_one, 2) == q.DOM_EMPTY


def test_condition_a_under_b_golden_cases():
    d_e3 = q.decompose_components(q.build_infinity_graph(golden_yes()))
    assert q.check_condition_a_under_b(d_e3, 3)

    d_one = q.decompose_components(
        graph_from_edges(5, list(itertools.combinations(range(1, 6), 2)))
    )
    assert not q.check_condition_a_under_b(d_one, 2)

    inst = q.QuadraticInstance.from_entries(5, 3, {(1, 2): q.INF, (3, 4): q.INF})
    d = q.decompose_components(q.build_infinity_graph(inst))
    assert q.check_condition_a_under_b(d, 3)
    # confirm by enumeration: every index appears in some feasible point
    assert condition_a_by_enumeration(inst)


def test_condition_a_matches_enumeration_under_b():
    rng = np.random.default_rng(11)
    for _ in range(150):
        n = int(rng.integers(4, 9))
        inst = random_ab_instance(n, rng)
        d = q.decompose_components(q.build_infinity_graph(inst))
        assert q.check_condition_a_under_b(d, inst.r) == condition_a_by_enumeration(inst)


def test_dom_empty_iff_enumeration_empty():
    rng = np.random.default_rng(13)
    checked_empty = 0
    for _ in range(200):
        n = int(rng.integers(4, 9))
        r = int(rng.integers(2, n - 1))
        # clique unions of arbitrary sizes: condition B holds, A may fail
        sizes = []
        left = n
        while left:
            s = int(rng.integers(1, left + 1))
            sizes.append(s)
            left -= s
        entries = {}
        start = 1
        for s in sizes:
            for a, b in itertools.combinations(range(start, start + s), 2):
                entries[(a, b)] = q.INF
            start += s
        inst = q.QuadraticInstance.from_entries(n, r, entries)
        d = q.decompose_components(q.build_infinity_graph(inst))
        empty = q.classify(d, r) == q.DOM_EMPTY
        domain = q.enumerate_domain(inst)
        assert empty == (not domain.supports)
        checked_empty += empty
    assert checked_empty > 5


def test_components_invariant_under_relabel():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(4, 9))
        inst = random_ab_instance(n, rng)
        perm = [int(v) + 1 for v in rng.permutation(n)]
        base = q.decompose_components(q.build_infinity_graph(inst))
        mapped = q.decompose_components(q.build_infinity_graph(q.relabel(inst, perm)))
        expected = sorted(
            tuple(sorted(perm[v - 1] for v in comp)) for comp in base.components
        )
        assert sorted(mapped.components) == expected
