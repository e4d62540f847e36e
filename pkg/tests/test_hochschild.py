import pytest

from loghh.errors import NotFiniteDimensional, NotGenerating
from loghh.hochschild import (
    NormalizedComplex, ThetaComplex, check_symbolic_identities, connes_B, hh_bar, hh_koszul, hh_resolution,
    hh_theta, hkr_map, level_ring, log_diagonal_ring, resolution_of_diagonal,
)
from loghh.logring import omega_hilbert
from loghh.polys import p_sub
from loghh.problem import fixture_spec

FINITE = {
    "point": [1, 0, 0, 0],
    "qxq": [2, 0, 0, 0],
    "dual_numbers": [2, 1, 1, 1],
    "kummer2_q": [1, 0, 0, 0],
    "kummer3_q": [1, 0, 0, 0],
    "kummer2_f2": [1, 1, 1, 1],
}


def test_diagonal_ring_logpoint():
    D = log_diagonal_ring(fixture_spec("logpoint"))
    assert D.ring.names == ("u0__1", "u0__1_inv")
    assert [D.ring.to_str(g) for g in D.level.gb] == ["u0__1*u0__1_inv - 1"]
    assert D.check_invariants()


def test_diagonal_ring_kummer():
    D = log_diagonal_ring(fixture_spec("kummer3_q"))
    assert [D.ring.to_str(g) for g in D.level.gb] == ["u0__1^3 - 1"]
    assert D.level.dim == 3


def test_diagonal_ring_nodal():
    D = log_diagonal_ring(fixture_spec("node"))
    R = D.ring
    assert D.check_invariants()
    # (x (x) 1) u = 1 (x) x and (y (x) 1) u^-1 = 1 (x) y
    assert not D.reduce(p_sub(R.parse("x__0*u0__1").terms, R.parse("x__1").terms))
    assert not D.reduce(p_sub(R.parse("y__0*u0__1_inv").terms, R.parse("y__1").terms))
    assert D.augment(R.parse("u0__1 - 1").terms) == {}


@pytest.mark.parametrize("name", sorted(FINITE))
def test_finite_backends_agree(name):
    s = fixture_spec(name)
    want = FINITE[name]
    assert hh_bar(s, 3).table() == want
    assert hh_theta(s, 3).table() == want
    assert hh_resolution(s, 3).table() == want


def test_bar_refuses_infinite():
    with pytest.raises(NotFiniteDimensional):
        hh_bar(fixture_spec("logpoint"), 2)


def test_logpoint_koszul_and_resolution():
    s = fixture_spec("logpoint")
    k = hh_koszul(s, ["u0__1 - 1"], 3, (0, 0))
    assert k.status == "ok"
    assert [k.total(n) for n in range(4)] == [1, 1, 0, 0]
    r = hh_resolution(s, 3, (0, 0))
    assert [r.total(n) for n in range(4)] == [1, 1, 0, 0]


def test_koszul_requires_generators():
    with pytest.raises(NotGenerating):
        hh_koszul(fixture_spec("logpoint"), ["u0__1^2 - 1"], 2, (0, 0))


def test_nodal_tor_matches_omega():
    s = fixture_spec("node")
    r = hh_resolution(s, 3, (0, 4))
    assert r.dims[0] == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}
    assert r.dims[1] == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}
    assert r.dims[1] == omega_hilbert(s, 1, range(5))
    assert r.dims[2] == r.dims[3] == {d: 0 for d in range(5)}
    k = hh_koszul(s, ["u0__1 - 1"], 3, (0, 4))
    assert k.status == "ok" and k.dims == r.dims


def test_smooth_line_koszul():
    s = fixture_spec("polyline")
    k = hh_koszul(s, ["x__1 - x__0"], 2, (0, 4))
    assert k.status == "ok"
    assert k.dims[1] == {0: 0, 1: 1, 2: 1, 3: 1, 4: 1}
    assert k.dims[2] == {d: 0 for d in range(5)}


def test_chart_refinement_invariance():
    tables = [hh_resolution(fixture_spec(n), 3, (0, 4)).dims for n in ("node", "node_refined", "node_redundant")]
    assert tables[0] == tables[1] == tables[2]


def test_level_dimensions():
    assert [level_ring(fixture_spec("kummer2_q"), n).dim for n in range(4)] == [1, 2, 4, 8]
    assert [level_ring(fixture_spec("dual_numbers"), n).dim for n in range(4)] == [2, 4, 8, 16]


def test_symbolic_identities_nodal():
    assert check_symbolic_identities(fixture_spec("node"), 3)


@pytest.mark.parametrize("name", sorted(FINITE))
def test_matrix_identities(name):
    th = ThetaComplex(fixture_spec(name), 4)
    assert th.check_b_squared()
    assert th.check_matrix_identities()


@pytest.mark.parametrize("name", sorted(FINITE))
def test_connes_identities(name):
    _, _, checks = connes_B(fixture_spec(name), 3)
    assert checks == {"B_squared": True, "bB_plus_Bb": True}


def test_connes_on_dual_numbers_is_hkr_of_d():
    s = fixture_spec("dual_numbers")
    nc, Bs, _ = connes_B(s, 2)
    L0, L1 = level_ring(s, 0), level_ring(s, 1)
    x = L0.coords(s.ring.var("x"))
    Bx = Bs[0].apply(x)
    assert Bx
    dx = nc.project(1, L1.coords(p_sub(L1.ring.var("x__1"), L1.ring.var("x__0"))))
    assert Bx == dx
    H1 = nc.homology(1)
    assert H1.coords(Bx) != [0] * H1.dim


def _shuffle_class(nc, p, a, q, b):
    chain = nc.shuffle(p, nc.lift(p, a), q, nc.lift(q, b))
    return nc.homology(p + q).coords(nc.project(p + q, chain))


def test_shuffle_unit_and_commutativity():
    s = fixture_spec("dual_numbers")
    nc = NormalizedComplex(ThetaComplex(s, 4))
    one = nc.project(0, level_ring(s, 0).coords(s.ring.one()))
    for n in (1, 2):
        for z in nc.homology(n).representatives:
            assert _shuffle_class(nc, 0, one, n, z) == nc.homology(n).coords(z)
    z = nc.homology(1).representatives[0]
    # z*z = -z*z for odd z, so it must be a boundary
    assert not any(_shuffle_class(nc, 1, z, 1, z))


def test_hkr_logpoint_iso():
    h = hkr_map(fixture_spec("logpoint"), 1, (0, 0))
    assert h.well_defined and h.iso


def test_hkr_node_iso_in_box():
    h = hkr_map(fixture_spec("node"), 1, (0, 4))
    assert h.iso
    assert h.omega_dims == h.hh_dims == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}


def test_hkr_kummer_trivial():
    h = hkr_map(fixture_spec("kummer2_q"), 1)
    assert h.iso


def test_hkr_dual_numbers():
    s = fixture_spec("dual_numbers")
    assert hkr_map(s, 1).iso
    # Lambda^2 Omega^1 = 0 while HH_2 is one-dimensional
    h = hkr_map(s, 2)
    assert h.omega_dims == {0: 0} and h.hh_dims == {0: 1}
    assert not h.iso


@pytest.mark.parametrize("name", ["logpoint", "node", "polyline", "dual_numbers", "kummer2_f2"])
def test_diagonal_resolutions_are_exact(name):
    res = resolution_of_diagonal(fixture_spec(name), 3)
    assert res.check_d_squared()
    assert res.check_exactness()
