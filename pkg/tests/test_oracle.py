from __future__ import annotations

import numpy as np
import pytest

from spgraphs import oracle
from spgraphs.oracle import SmallGraph, has_k23_minor, has_k4_minor

K4 = SmallGraph.complete(4)
K23 = SmallGraph.complete_bipartite(2, 3)
DIAMOND = SmallGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def test_minor_tests_on_named_graphs():
    assert has_k4_minor(K4) and not has_k23_minor(K4)
    assert has_k23_minor(K23) and not has_k4_minor(K23)
    assert not has_k23_minor(DIAMOND) and not has_k4_minor(DIAMOND)
    for n in range(4):
        assert not has_k4_minor(SmallGraph.complete(n))
    # subdivided K4 and the prism both contain K4
    prism = SmallGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
    assert has_k4_minor(prism) and has_k23_minor(prism)
    wheel = SmallGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0)] + [(4, i) for i in range(4)])
    assert has_k4_minor(wheel) and has_k23_minor(wheel)


def test_connectivity():
    assert K4.is_biconnected() and K4.is_connected()
    path = SmallGraph.from_edges(3, [(0, 1), (1, 2)])
    assert path.is_connected() and not path.is_biconnected()
    assert SmallGraph(3, 0).components() == 3
    assert SmallGraph.from_edges(2, [(0, 1)]).is_biconnected()


def test_graph_validation():
    with pytest.raises(ValueError):
        SmallGraph(9, 0)
    with pytest.raises(ValueError):
        SmallGraph(3, 1 << 3)
    with pytest.raises(ValueError):
        SmallGraph.from_edges(3, [(1, 1)])


def test_small_tallies():
    tables = oracle.classify_and_count(5, cross_check=True)
    sp, op, kf = (tables[f] for f in oracle.FAMILIES)
    assert sp.total("all", 4) == 63 and kf.total("all", 4) == 64
    assert sp.total("all", 5) != op.total("all", 5)
    for t in tables.values():
        assert t.total("connected", 3) == 4
    assert sp.components(5) == {1: 622, 2: 225, 3: 55, 4: 10, 5: 1}


def test_refuses_large_n_without_opt_in():
    with pytest.raises(ValueError):
        oracle.classify_and_count(8)


@pytest.mark.skipif(oracle.BACKEND != "compiled", reason="extension not built")
def test_compiled_and_pure_backends_agree():
    pure, fast = oracle.backend("pure"), oracle.backend("compiled")
    for n in range(1, 6):
        fp, cp, _ = pure.classify_range(n)
        fc, cc, _ = fast.classify_range(n)
        assert np.array_equal(np.asarray(fp), np.asarray(fc))
        assert np.array_equal(np.asarray(cp), np.asarray(cc))
    rng = np.random.default_rng(7)
    for m in rng.integers(0, 1 << 21, size=300):
        m = int(m)
        for name in ("components", "biconnected", "k4_reduction", "k4_branch", "k23_branch"):
            assert getattr(pure, name)(7, m) == getattr(fast, name)(7, m), (name, m)


def test_random_k4_cross_check():
    assert oracle.random_cross_check(7, 20000, seed=3) == 20000


def test_full_cross_check_n6():
    res = oracle.sweep(6, cross_check=True)
    assert res.problems == []


def test_oracle_csv_has_component_column():
    text = oracle.classify_and_count(3)[oracle.FamilyKind.SP].to_csv(["x"])
    lines = text.splitlines()
    assert lines[0] == "# x"
    assert lines[1] == "family,level,n,q,k_components,count"
