import itertools
import random

import numpy as np
import pytest

from subexpr.coxeter import named_system
from subexpr.cyclespace import (ConditionViolated, DecompositionError, EdgeSet,
                                Gf2Basis, NotEven, certificate,
                                check_certificate, cycle_space_dim, decompose,
                                enumerate_generators, fundamental_cycles,
                                gf2_rank, make_square, make_triangle,
                                min_length_basis, move_edge, scan_generators,
                                verify_span)
from subexpr.expressions import (Expression, build_all_graphs, build_graph,
                                 is_special_pair, order_compare,
                                 subexpr_from_mask)


def _np_gf2_rank(vectors, width):
    """Independent rank oracle: Gaussian elimination on a 0/1 numpy matrix."""
    m = np.array([[(v >> i) & 1 for i in range(width)] for v in vectors],
                 dtype=np.uint8)
    rank = 0
    for col in range(width):
        rows = [r for r in range(rank, len(m)) if m[r, col]]
        if not rows:
            continue
        m[[rank, rows[0]]] = m[[rows[0], rank]]
        for r in range(len(m)):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def test_gf2_basis_unit():
    b = Gf2Basis()
    assert b.add(0b101)
    assert b.add(0b011)
    assert not b.add(0b110)          # dependent
    assert b.rank == 2
    assert b.contains(0b110)
    assert not b.contains(0b001)
    assert b.reduce(0b101) == 0


def test_gf2_rank_matches_numpy_oracle():
    rng = random.Random(5)
    for _ in range(20):
        vecs = [rng.getrandbits(12) for _ in range(rng.randint(1, 10))]
        assert gf2_rank(vecs) == _np_gf2_rank(vecs, 12)


@pytest.fixture(scope="module")
def b2_graphs(b2):
    expr = Expression(b2, (0, 1, 0, 1, 0, 1))
    return build_all_graphs(expr)


@pytest.fixture(scope="module")
def g2_graphs(g2):
    expr = Expression(g2, (0, 1, 0, 1, 0, 1, 0, 1))
    return build_all_graphs(expr)


def test_cycle_space_dim_against_even_subgraph_rank(b2):
    expr = Expression(b2, (0, 1, 0, 1, 0))
    for g in build_all_graphs(expr):
        dim = cycle_space_dim(g)
        fcs = fundamental_cycles(g)
        assert len(fcs) == dim
        assert gf2_rank(fcs) == dim
        # every fundamental cycle is an even edge set
        for fc in fcs:
            assert EdgeSet(g, fc).is_even()
        # brute force: the number of even subgraphs is 2^dim
        if g.n_edges <= 12:
            count = sum(1 for bits in range(1 << g.n_edges)
                        if EdgeSet(g, bits).is_even())
            assert count == 1 << dim


def test_single_vertex_graph_has_trivial_cycle_space(a2):
    g = build_graph(Expression(a2, ()), a2.identity())
    assert cycle_space_dim(g) == 0
    assert decompose(g, 0) == []


def _scan_of_kind(graphs, kind, want=1):
    out = []
    for g in graphs:
        for c in scan_generators(g):
            if c.kind == kind:
                out.append((g, c))
                if len(out) >= want:
                    return out
    return out


def test_triangle_conditions_and_shape(b2_graphs):
    for kind in ("Tr1", "Tr2", "Tr3"):
        found = _scan_of_kind(b2_graphs, kind, want=3)
        assert found, f"no {kind} instance in the sweep"
        for g, c in found:
            assert c.length == 3
            assert bin(c.edges).count("1") == 3
            # the anchor is the greatest vertex of the cycle
            vids = [g.vertex_index[m] for m in c.vertex_masks]
            assert vids[0] == max(vids)


def test_tr2_vertex_ordering(b2_graphs):
    # when gamma^{->j} = gamma^{->k} the three vertices descend strictly:
    # gamma > f_jk gamma > f_ik gamma
    checked = 0
    for g, c in _scan_of_kind(b2_graphs, "Tr2", want=50):
        anchor, second, third = (g.vertices[g.vertex_index[m]]
                                 for m in c.vertex_masks)
        assert order_compare(anchor, second) == 1
        _, j, k = c.indices
        if anchor.roots[j] == anchor.roots[k]:
            assert order_compare(second, third) == 1
            checked += 1
    assert checked > 0


def test_square_shape(b2_graphs, g2_graphs):
    for kind in ("Sq1", "Sq2"):
        found = _scan_of_kind(b2_graphs + g2_graphs, kind, want=3)
        assert found, f"no {kind} instance in the sweep"
        for g, c in found:
            assert c.length == 4
            assert bin(c.edges).count("1") == 4
            # opposite vertices of the square commute: m ^ f1 ^ f2 closes it
            m0, m1, m2, m3 = c.vertex_masks
            assert m2 == m0 ^ (m0 ^ m1) ^ (m0 ^ m3)


def test_make_triangle_rejects_bad_conditions(b2_graphs):
    g, c = _scan_of_kind(b2_graphs, "Tr1")[0]
    gamma = g.vertices[g.vertex_index[c.anchor_mask]]
    with pytest.raises(ConditionViolated):
        make_triangle(g, gamma, "Tr9", *c.indices)
    with pytest.raises(ConditionViolated):
        i, j, k = c.indices
        make_triangle(g, gamma, "Tr1", j, i, k)    # unsorted indices


def test_move_edge_exhaustive_small(b2):
    expr = Expression(b2, (0, 1, 0, 1, 0, 1))
    for g in build_all_graphs(expr):
        for eid, (a, b, _) in enumerate(g.edges):
            v = max(a, b)
            gamma = g.vertices[v]
            diff = g.vertices[a].mask ^ g.vertices[b].mask
            p = (diff & -diff).bit_length() - 1
            q = diff.bit_length() - 1
            if gamma.roots[q] <= 0:
                continue               # v is not the greater endpoint
            (i, j), used = move_edge(g, v, (p, q))
            assert is_special_pair(gamma, i, j)
            if (i, j) == (p, q):
                assert used == []
                continue
            # at v, the used cycles toggle exactly {original, special}
            at_v = 0
            for c in used:
                at_v ^= c.edges & sum(1 << e for e in g.incident[v])
            other = g.vertex_index[gamma.mask ^ (1 << i) ^ (1 << j)]
            special_eid = g.edge_id(v, other)
            assert at_v == (1 << eid) | (1 << special_eid)


def test_decompose_empty_and_not_even(b2_graphs):
    g = max(b2_graphs, key=cycle_space_dim)
    assert decompose(g, 0) == []
    if g.n_edges:
        with pytest.raises(NotEven):
            decompose(g, 1)


def test_decompose_random_even_subgraphs(b2_graphs, g2_graphs):
    rng = random.Random(13)
    for g in b2_graphs + g2_graphs:
        fcs = fundamental_cycles(g)
        if not fcs:
            continue
        for _ in range(min(20, 1 << len(fcs))):
            even = 0
            for fc in fcs:
                if rng.random() < 0.5:
                    even ^= fc
            got = decompose(g, even)
            total = 0
            top = 0
            for c in got:
                total ^= c.edges
                top = max(top, g.vertex_index[c.anchor_mask])
            assert total == even
            if even:
                touched = max(max(a, b) for eid, (a, b, _) in
                              enumerate(g.edges) if even >> eid & 1)
                assert top <= touched


def test_verify_span_and_lengths(b2_graphs, g2_graphs):
    for graphs, n in ((b2_graphs, 4), (g2_graphs, 6)):
        for g in graphs:
            rep = verify_span(g)
            assert rep["ok"], rep
            assert set(rep["lengths"]) <= {3, 4, n + 2}


def test_min_length_basis_is_a_basis(g2_graphs):
    g = max(g2_graphs, key=cycle_space_dim)
    basis = min_length_basis(g)
    assert len(basis) == cycle_space_dim(g)
    assert gf2_rank(c.edges for c in basis) == len(basis)
    lengths = [c.length for c in basis]
    assert lengths == sorted(lengths)


def test_certificate_round_trip(b2_graphs):
    g = max(b2_graphs, key=cycle_space_dim)
    for fc in fundamental_cycles(g)[:5]:
        cycles = decompose(g, fc)
        cert = certificate(g, cycles)
        assert check_certificate(g, cert, fc)
        assert not check_certificate(g, cert, fc ^ 0b11)
        if cert:
            bad = [dict(item) for item in cert]
            bad[0] = dict(bad[0], vertices=list(reversed(bad[0]["vertices"])))
            # reversing a cycle keeps its edge set; drop a vertex instead
            bad[0]["vertices"] = bad[0]["vertices"][:-1]
            assert not check_certificate(g, bad, fc)
