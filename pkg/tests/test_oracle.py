import pytest

from forestsplit.certify import verify
from forestsplit.graph import MultiGraph
from forestsplit.instances import complete, cycle_n, k4, parallel_pair, path_n
from forestsplit.oracle import OracleRefusal, brute_force_decompose, exhaustive_density_scan


def test_cycle_with_one_edge_forest():
    v = brute_force_decompose(cycle_n(5), 1, 1)
    assert v.feasible
    assert verify(cycle_n(5), 1, 1, v.forests()).ok


def test_three_parallel_edges_infeasible():
    v = brute_force_decompose(parallel_pair(3), 1, 4)
    assert not v.feasible and v.forests() is None


def test_triangle():
    v = brute_force_decompose(cycle_n(3), 1, 1)
    assert v.feasible
    rep = verify(cycle_n(3), 1, 1, v.forests())
    assert rep.ok and 1 in rep.bounded_classes


def test_k4_needs_three_edges():
    assert not brute_force_decompose(k4(), 1, 2).feasible
    assert brute_force_decompose(k4(), 1, 3).feasible


def test_refuses_large_inputs():
    with pytest.raises(OracleRefusal):
        brute_force_decompose(path_n(12), 1, 1)
    with pytest.raises(OracleRefusal):
        brute_force_decompose(complete(7), 2, 2)
    assert brute_force_decompose(complete(7), 2, 6, max_edges=None).nodes > 0


def test_scan_examples():
    scan = exhaustive_density_scan(k4(), 1, 3)
    assert scan.min_beta == 1
    assert scan.arboricity == 2 and scan.arboricity_set == (0, 1, 2, 3)
    single = exhaustive_density_scan(MultiGraph(1, ()), 1, 3)
    assert single.arboricity is None and single.min_beta == 7
