import pytest

from forestsplit.certify import verify
from forestsplit.engine import run
from forestsplit.graph import MultiGraph, induced_subgraph
from forestsplit.instances import complete, k4, parallel_pair, path_n, petersen
from forestsplit.sparsity import beta


def test_tree_has_empty_bounded_forest():
    out = run(path_n(6), 1, 3)
    assert out.status == "decomposition"
    assert out.forests[1] == [] and out.moves_applied == 0


def test_k4():
    out = run(k4(), 1, 3)
    assert out.status == "decomposition"
    assert verify(k4(), 1, 3, out.forests).ok
    assert out.oversize_forest_index == 1


def test_petersen_with_debug_checks():
    out = run(petersen(), 1, 4, debug_asserts=True)
    assert out.status == "decomposition"
    assert all(t.recheck for t in out.trace)
    assert all(t.after.better_than(t.before) for t in out.trace)


def test_overfull_input():
    out = run(parallel_pair(3), 1, 3)
    assert out.status == "overfull"
    H = induced_subgraph(parallel_pair(3), out.witness_vertices)
    assert H.m > 2 * (H.n - 1)


def test_dense_input():
    G = k4()  # two forests suffice but beta(K4) = 16 - 18 - 1 for (1, 1)
    out = run(G, 1, 1, oracle_threshold=0)
    assert out.status == "dense"
    assert beta(induced_subgraph(G, out.witness_vertices), 1, 1) < 0


def test_overfull_complete_graph():
    assert run(complete(5), 1, 3).status == "overfull"


def test_disconnected_input():
    G = MultiGraph.from_edges([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (3, 6)])
    out = run(G, 1, 1)
    assert out.status == "decomposition" and verify(G, 1, 1, out.forests).ok


def test_json_shape():
    js = run(k4(), 1, 3).to_json()
    assert set(js) == {"status", "forests", "oversize_forest_index", "witness_vertices", "moves_applied"}


@pytest.mark.parametrize("k,d", [(0, 1), (1, 0), (1, 5), (2, 7)])
def test_bad_parameters(k, d):
    with pytest.raises(ValueError):
        run(k4(), k, d)
