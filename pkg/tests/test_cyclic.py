import pytest

from loghh.cyclic import (
    _shuffle_coefficients, adams, adams_operator, adams_suite, build_cyclic, hc, hc_de_rham, sbi_sequence,
)
from loghh.errors import NotFramed, UnstableTruncation, WrongCharacteristic
from loghh.exactlin import SparseMatrix
from loghh.problem import fixture_spec

HC = {
    "point": [1, 0, 1, 0, 1],
    "qxq": [2, 0, 2, 0, 2],
    "kummer2_q": [1, 0, 1, 0, 1],
    "kummer3_q": [1, 0, 1, 0, 1],
    # regression values, frozen from the dense oracle
    "dual_numbers": [2, 0, 2, 0, 2],
    "kummer2_f2": [1, 1, 2, 2, 3],
}


def test_cyclic_module_of_point():
    cm = build_cyclic(fixture_spec("point"), 3)
    assert [cm.dim(n) for n in range(4)] == [1, 1, 1, 1]
    for n in range(4):
        one = SparseMatrix.identity(1, cm.field)
        assert cm.theta.tau(n) == one
        # the signed operator is (-1)^n tau
        assert cm.t(n) == one.scale(cm.field((-1) ** n))
    assert all(cm.checks.values())


def test_cyclic_module_of_two_points():
    cm = build_cyclic(fixture_spec("qxq"), 3)
    assert [cm.dim(n) for n in range(4)] == [2, 4, 8, 16]
    assert all(cm.checks.values())


def test_kummer_cyclic_order():
    cm = build_cyclic(fixture_spec("kummer2_q"), 2)
    t = cm.t(2)
    assert t @ t @ t == SparseMatrix.identity(cm.dim(2), cm.field)
    assert t @ t != SparseMatrix.identity(cm.dim(2), cm.field)
    assert all(cm.checks.values())


@pytest.mark.parametrize("name", sorted(HC))
def test_hc_values(name):
    r = hc(fixture_spec(name), 4)
    assert [r.dims[m] for m in range(5)] == HC[name]
    assert all(r.checks.values())
    assert r.notes


def test_narrow_truncation_is_detected():
    with pytest.raises(UnstableTruncation):
        hc(fixture_spec("point"), 4, W=2)


@pytest.mark.parametrize("name", ["point", "qxq", "dual_numbers", "kummer2_f2"])
def test_sbi_exact(name):
    r = sbi_sequence(fixture_spec(name), 4)
    assert r.all_exact
    assert all(r.checks.values())
    assert [r.hc[m] for m in range(5)] == HC[name]


def test_sbi_point_and_two_points():
    r = sbi_sequence(fixture_spec("point"), 4)
    assert r.S[2] == r.hc[2] == 1
    q = sbi_sequence(fixture_spec("qxq"), 4)
    assert all(v == 0 for v in q.B.values())
    assert q.S[2] == q.S[4] == 2


def test_de_rham_route_logpoint():
    r = hc_de_rham(fixture_spec("logpoint"), 5, [0])
    assert r.dims == {m: {0: 1} for m in range(6)}
    assert all(r.checks.values())


def test_de_rham_route_line():
    r = hc_de_rham(fixture_spec("polyline"), 2, range(5))
    assert r.dims[0] == {d: 1 for d in range(5)}
    assert r.dims[1] == {d: 0 for d in range(5)}
    assert r.dims[2] == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}


@pytest.mark.parametrize("name", ["qxq", "point", "kummer2_q"])
def test_routes_agree(name):
    s = fixture_spec(name)
    assert hc_de_rham(s, 4).dims == hc(s, 4).dims


def test_de_rham_route_errors():
    with pytest.raises(WrongCharacteristic):
        hc_de_rham(fixture_spec("kummer2_f2"), 2)
    with pytest.raises(NotFramed):
        hc_de_rham(fixture_spec("dual_numbers"), 2)


def test_shuffle_coefficients():
    assert _shuffle_coefficients(1, 3) == {(1, 2, 3): 1}
    assert _shuffle_coefficients(3, 1) == {(1,): 3}
    # words 11, 22 and 12 give the identity, 21 the signed transposition
    assert _shuffle_coefficients(2, 2) == {(1, 2): 3, (2, 1): -1}


def test_adams_on_level_one_is_scalar():
    s = fixture_spec("dual_numbers")
    M = adams_operator(s, 3, 1)
    assert M == SparseMatrix.identity(M.nrows, s.field).scale(s.field(3))


def test_adams_dual_numbers():
    r = adams(fixture_spec("dual_numbers"), 2, 3)
    assert r.matrices[0] == [[1, 0], [0, 1]]
    assert r.matrices[1] == [[2]]
    assert r.eigen_dims[1] == {0: 0, 1: 1}
    assert r.eigen_dims[2] == {0: 0, 1: 1, 2: 0}
    assert r.eigen_dims[3] == {0: 0, 1: 0, 2: 1, 3: 0}
    assert all(r.checks.values())
    assert r.hkr == {1: True, 2: True, 3: True}


@pytest.mark.parametrize("name", ["point", "qxq", "dual_numbers", "kummer2_q", "kummer3_q"])
def test_adams_composition(name):
    results, comp = adams_suite(fixture_spec(name), [2, 3, 6], 3)
    assert comp == {"psi2*psi3=psi6": True}
    for r in results.values():
        assert all(r.checks.values())
        assert all(r.hkr.values())
        for m in range(4):
            assert sum(r.eigen_dims[m].values()) == len(r.matrices[m])


def test_adams_needs_characteristic_zero():
    with pytest.raises(WrongCharacteristic):
        adams(fixture_spec("kummer2_f2"), 2, 1)
