import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subexpr.coxeter import elements_equal, named_system
from subexpr.expressions import (DifferentTargets, Expression, IndexOutOfRange,
                                 NotApplicable, Subexpression, TooLarge,
                                 build_all_graphs, build_graph, descend_step,
                                 double_fold, double_fold_applicable,
                                 gallery_of, is_connected, is_special_pair,
                                 order_compare, special_pairs,
                                 subexpr_from_mask, target)


@pytest.fixture(scope="module")
def ststs(a2):
    return Expression(a2, (0, 1, 0, 1, 0))


@pytest.fixture(scope="module")
def gamma_full(ststs):
    return Subexpression(ststs, [1, 1, 1, 1, 1])


def test_target_of_full(ststs, gamma_full, a2):
    # (st)^3 = e, so ststs = t
    assert elements_equal(target(gamma_full), a2.element_from_word((1,)))


def test_arrow_roots_of_full(gamma_full, a2):
    # gamma^{->i} = prefix * e_{s_i}; for (s,t,s,t,s) all-ones the first
    # three are negative, the last two positive.
    signs = [1 if r > 0 else -1 for r in gamma_full.roots]
    assert signs == [-1, -1, -1, 1, 1]
    e = np.eye(2)
    assert np.allclose(gamma_full.arrow_root(0), -e[0])
    assert np.allclose(gamma_full.arrow_root(3), e[0])


def test_fold_applicability(gamma_full):
    assert double_fold_applicable(gamma_full, 0, 3)
    assert not double_fold_applicable(gamma_full, 0, 1)
    with pytest.raises(IndexOutOfRange):
        double_fold_applicable(gamma_full, 3, 3)
    with pytest.raises(NotApplicable):
        double_fold(gamma_full, 0, 1)


def test_fold_involution_and_target(gamma_full):
    delta = double_fold(gamma_full, 0, 3)
    assert list(delta.bits) == [0, 1, 1, 0, 1]
    assert delta.target_id() == gamma_full.target_id()
    back = double_fold(delta, 0, 3)
    assert back == gamma_full


def test_special_pairs_example(gamma_full):
    assert [(i, j) for i, j, _ in special_pairs(gamma_full)] == [(0, 3), (1, 4)]
    assert is_special_pair(gamma_full, 0, 3)
    assert not is_special_pair(gamma_full, 0, 1)


def test_order_compare_requires_same_target(ststs):
    g1 = Subexpression(ststs, [1, 1, 1, 1, 1])
    g2 = Subexpression(ststs, [0, 0, 0, 0, 0])
    with pytest.raises(DifferentTargets):
        order_compare(g1, g2)


def _class_of(expr, gamma):
    m = len(expr)
    out = []
    for mask in range(1 << m):
        d = subexpr_from_mask(expr, mask)
        if d.target_id() == gamma.target_id():
            out.append(d)
    return out


def test_order_total_on_classes(a2):
    expr = Expression(a2, (0, 1, 0, 1, 0, 1))
    seen = set()
    for mask in range(1 << 6):
        gamma = subexpr_from_mask(expr, mask)
        if gamma.target_id() in seen:
            continue
        seen.add(gamma.target_id())
        cls = _class_of(expr, gamma)
        for d, g in itertools.combinations(cls, 2):
            c = order_compare(d, g)
            assert c in (-1, 1)
            assert order_compare(g, d) == -c
        # transitivity via consistency with a sort
        ranked = sorted(cls, key=lambda v: sum(order_compare(v, u)
                                               for u in cls))
        for u, v in zip(ranked, ranked[1:]):
            assert order_compare(u, v) == -1


def test_descend_terminates_at_unique_minimum(b2):
    expr = Expression(b2, (0, 1, 0, 1, 0, 1))
    by_target = {}
    for mask in range(1 << 6):
        gamma = subexpr_from_mask(expr, mask)
        by_target.setdefault(gamma.target_id(), []).append(gamma)
    for cls in by_target.values():
        minimum = cls[0]
        for g in cls[1:]:
            if order_compare(g, minimum) < 0:
                minimum = g
        for gamma in cls:
            steps = 0
            while True:
                pq = descend_step(gamma)
                if pq is None:
                    break
                nxt = double_fold(gamma, *pq)
                assert order_compare(nxt, gamma) == -1
                gamma = nxt
                steps += 1
                assert steps <= 1 << 6
            assert gamma == minimum


def test_gallery_wall_separation(gamma_full, a2):
    gal = gallery_of(gamma_full)
    assert len(gal.chambers) == 6 and len(gal.walls) == 5
    # consecutive chambers are equal or differ by the reflection in the wall
    for i, wall in enumerate(gal.walls):
        c0, c1 = gal.chambers[i], gal.chambers[i + 1]
        moved = not elements_equal(c0, c1)
        assert moved == bool(gamma_full.bits[i])


def test_build_graph_matches_brute_force(a2):
    expr = Expression(a2, (0, 1, 0, 1))
    g = build_graph(expr, a2.identity())
    masks = {v.mask for v in g.vertices}
    brute = {m for m in range(1 << 4)
             if subexpr_from_mask(expr, m).target_id() == 0}
    assert masks == brute
    # vertices ascend in the order
    for u, v in zip(g.vertices, g.vertices[1:]):
        assert order_compare(u, v) == -1
    # edges are exactly the applicable folds between class members
    for a, b, color in g.edges:
        va, vb = g.vertices[a], g.vertices[b]
        diff = [i for i in range(4) if va.bits[i] != vb.bits[i]]
        assert len(diff) == 2
        assert abs(va.roots[diff[0]]) == abs(va.roots[diff[1]]) == color


def test_empty_expression(a2):
    expr = Expression(a2, ())
    g = build_graph(expr, a2.identity())
    assert g.n_vertices == 1 and g.n_edges == 0
    assert is_connected(g)


def test_build_all_graphs_partition(b2):
    expr = Expression(b2, (0, 1, 0, 1, 0))
    graphs = build_all_graphs(expr)
    assert sum(g.n_vertices for g in graphs) == 1 << 5
    assert all(is_connected(g) for g in graphs)


def test_too_large(a2):
    with pytest.raises(TooLarge):
        build_graph(Expression(a2, (0, 1) * 13), a2.identity())


def test_to_dot_deterministic(g2):
    expr = Expression(g2, (0, 1, 0, 1))
    g1 = build_graph(expr, g2.element_from_word((0, 1)))
    g2_ = build_graph(expr, g2.element_from_word((0, 1)))
    dot = g1.to_dot()
    assert dot == g2_.to_dot()
    assert dot.startswith("graph sub {\n")
    assert 'label="' in dot and dot.endswith("}\n")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, (1 << 6) - 1), st.integers(0, 2024))
def test_random_fold_preserves_target(mask, pick):
    system = named_system("A3")
    expr = Expression(system, (0, 1, 2, 0, 1, 2))
    gamma = subexpr_from_mask(expr, mask)
    pairs = [(i, j) for i in range(6) for j in range(i + 1, 6)
             if double_fold_applicable(gamma, i, j)]
    if not pairs:
        return
    i, j = pairs[pick % len(pairs)]
    delta = double_fold(gamma, i, j)
    assert delta.target_id() == gamma.target_id()
    assert double_fold(delta, i, j) == gamma
