import pytest

from loghh.cyclic import hc, hc_de_rham
from loghh.errors import NotFiniteDimensional
from loghh.fields import QQ, field
from loghh.hochschild import hh_bar, hh_theta
from loghh.oracle import DenseAlgebra, dense_homology_dims, dense_rank, oracle, oracle_hh
from loghh.problem import fixture_spec

FINITE = ["point", "qxq", "dual_numbers", "kummer2_q", "kummer3_q", "kummer2_f2"]


def test_dense_algebra_staircase():
    A = DenseAlgebra(QQ, 2, [{(2, 0): 1, (0, 1): -1}, {(0, 2): 1}])
    assert A.dim == 4
    x = A.coords({(1, 0): 1})
    x3 = A.mul(x, A.mul(x, x))
    assert x3 == A.coords({(1, 1): 1})
    assert A.mul(x3, x) == [0] * 4


def test_dense_algebra_refuses_infinite():
    with pytest.raises(NotFiniteDimensional):
        DenseAlgebra(QQ, 1, [], max_degree=6)


def test_dense_rank_and_homology():
    F7 = field(7)
    assert dense_rank([[1, 2], [2, 4]], QQ) == 1
    assert dense_rank([[1, 2], [2, 4]], F7) == 1
    assert dense_rank([[1, 3], [2, 6 + 7]], F7) == 1
    # spot 0 of k --id--> k is killed; the top spot has no incoming map and is not reported
    assert dense_homology_dims({1: [[1]]}, [1, 1], QQ) == [0]
    assert dense_homology_dims({1: [[0]]}, [1, 1], QQ) == [1]


@pytest.mark.parametrize("name", FINITE)
def test_oracle_matches_main_path(name):
    s = fixture_spec(name)
    dense = oracle(s, 3)
    assert dense["hh"] == hh_theta(s, 3).dims == hh_bar(s, 3).dims
    assert dense["hc"] == hc(s, 3).dims


def test_oracle_examples():
    assert oracle_hh(fixture_spec("dual_numbers"), 3) == {0: 2, 1: 1, 2: 1, 3: 1}
    assert oracle_hh(fixture_spec("kummer2_q"), 3) == {0: 1, 1: 0, 2: 0, 3: 0}
    s = fixture_spec("qxq")
    assert oracle(s, 3)["hc"] == hc_de_rham(s, 3).dims == {0: 2, 1: 0, 2: 2, 3: 0}


@pytest.mark.parametrize("name", ["logpoint", "polyline"])
def test_oracle_refuses_infinite(name):
    with pytest.raises(NotFiniteDimensional):
        oracle(fixture_spec(name), 2)
