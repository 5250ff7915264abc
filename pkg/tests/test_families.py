from __future__ import annotations

import math

import pytest

from spgraphs import series as S
from spgraphs.families import (
    CountTable, YRing, all_graphs, blocks, blocks_k23, blocks_outerplanar, blocks_sp,
    component_counts, connected, counts, dissections, network_series, pipeline,
    rooted_connected,
)
from spgraphs.series import BivariateSeries as BS, YPolynomial

R = YRing.refined()
ONE = YRing.at(1)


def test_network_first_terms():
    d = network_series(6, R)
    assert d[0] == YPolynomial({1: 1})
    assert d[1] == YPolynomial({2: 1, 3: 1})
    assert d.egf(2) == YPolynomial({3: 2, 4: 7, 5: 5})


def test_network_residual_to_order_30():
    d = network_series(30, ONE)
    x = BS.x(30)
    lhs = S.log((1 + d) / 2)
    rhs = x * d * d / (1 + x * d)
    assert lhs == rhs


def test_sp_blocks():
    b = blocks_sp(6, R)
    assert b.count(2, 1) == 1
    assert b.egf(3) == YPolynomial({3: 1})
    assert b.count(4) == 9


def test_dissections():
    a = dissections(9, R)
    assert a[3] == YPolynomial({3: 1})
    assert a[4] == YPolynomial({4: 1, 5: 2})
    assert [a[n](1) for n in range(3, 8)] == [1, 3, 11, 45, 197]
    assert a[4](1) == 3


def test_implicit_dissections_agree_with_square_root_form():
    p = pipeline("outerplanar", R)
    assert p.series(p.dissections(), 12) == p.series(p.dissections_implicit(), 12)


def test_outerplanar_and_k23_blocks():
    ob = blocks_outerplanar(8, R)
    kb = blocks_k23(8, R)
    assert ob.count(2, 1) == 1
    assert ob.count(4) == 9 and ob.count(5) == 132
    assert kb.count(4, 6) == 1 and kb.count(4) == 10
    for n in range(2, 9):
        for q in range(2 * n):
            if (n, q) != (4, 6):
                assert kb.count(n, q) == ob.count(n, q)


@pytest.mark.parametrize("family", ["sp", "outerplanar", "k23free"])
def test_rooted_and_connected(family):
    f = rooted_connected(family, 7, R)
    assert f[1] == 1
    assert f.count(2) == 2
    c = connected(family, 7, ONE)
    assert c.count(1) == 1 and c.count(2) == 1
    assert c.count(3) == 4


def test_rooted_graphs_invert_their_shape_function():
    # x = F exp(-B'(F)) term by term
    f = rooted_connected("sp", 8, ONE)
    bp = S.derive_x(blocks_sp(9, ONE))
    assert f * S.exp(-S.compose(bp, f)) == BS.x(8)


def test_connected_via_composition_of_blocks():
    n = 6
    f1 = rooted_connected("sp", n + 1, ONE)
    f = f1.truncate(n)
    f_over_x = BS([f1[k + 1] for k in range(n + 1)], n)
    b = blocks_sp(n, ONE)
    c = connected("sp", n, ONE)
    rest = c - f * (1 - S.log(f_over_x))
    assert S.compose(b, f) == rest


def test_connected_four_vertex_counts():
    assert connected("sp", 4, ONE).count(4) == 37       # every connected graph but K4
    assert connected("k23free", 4, ONE).count(4) == 38


def test_all_graphs():
    for family, g4 in (("sp", 63), ("outerplanar", 63), ("k23free", 64)):
        g = all_graphs(family, 4, ONE)
        assert [g.count(n) for n in range(1, 5)] == [1, 2, 8, g4]


def test_two_trees_small():
    t = counts("sp", "biconnected", 12, refined=True)
    for n in range(4, 13):
        assert t.entries[(n, 2 * n - 3)] == math.comb(n, 2) * (2 * n - 3) ** (n - 4)


def test_components_partition_all_graphs():
    comp = component_counts("sp", 9)
    g = counts("sp", "all", 9)
    for n in range(1, 10):
        assert sum(comp.get((n, k), 0) for k in range(1, n + 1)) == g.marginal(n)
    assert comp[(5, 1)] == 622


def test_jet_ring_matches_refined_moments():
    ref = all_graphs("outerplanar", 8, R)
    jet = all_graphs("outerplanar", 8, YRing.jet(2, 1))
    for n in range(1, 9):
        row = {q: ref.count(n, q) for q in range(2 * n)}
        assert jet.count(n, 0) == sum(row.values())
        assert jet.count(n, 1) == sum(q * c for q, c in row.items())
        assert jet.count(n, 2) == sum(q * (q - 1) // 2 * c for q, c in row.items())


def test_count_table_roundtrips():
    t = counts("k23free", "biconnected", 6, refined=True)
    assert CountTable.from_csv(t.to_csv(["note"])) == t
    assert CountTable.from_json(t.to_json({"a": 1})) == t
    m = counts("sp", "all", 5)
    assert CountTable.from_csv(m.to_csv()) == m


def test_blocks_dispatch():
    assert blocks("outerplanar", 5, R) == blocks_outerplanar(5, R)
