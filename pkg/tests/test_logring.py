from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from loghh.errors import InvalidSpec, NotFramed, NotGraded
from loghh.fields import QQ, field
from loghh.grobner import FPModule, groebner_basis, hilbert_function
from loghh.logring import (
    LogRingSpec, de_rham_cohomology, detect_framing, differential, exterior_power, log_de_rham,
    log_differentials, omega_hilbert, validate_spec,
)
from loghh.monoids import AffineMonoid
from loghh.polys import PolyRing, p_add, p_mul, p_sub
from loghh.problem import fixture_spec

N0 = AffineMonoid(0, [])
N1 = AffineMonoid(1, [[1]])
N2 = AffineMonoid(2, [[1, 0], [0, 1]])


def kummer(n, p=0):
    return LogRingSpec(field(p), N1, [], [], ["0"], N1, [[n]], [], [], ["0"])


def nodal(relation="x*y"):
    return LogRingSpec(QQ, N1, [], [], ["0"], N2, [[1, 1]], ["x", "y"], [relation], ["x", "y"],
                       grading={"x": 1, "y": 1})


def test_validate_examples():
    assert validate_spec(fixture_spec("logpoint")) == []
    assert validate_spec(kummer(3)) == []
    assert validate_spec(nodal()) == []
    bad = validate_spec(nodal("x*y - 1"))
    assert any("chart square" in v for v in bad)


def test_inhomogeneous_relation_flagged():
    s = LogRingSpec(QQ, N0, [], [], [], N0, [], ["x"], ["x^2 - x"], [], grading={"x": 1})
    assert any("homogeneous" in v for v in validate_spec(s))


def test_invalid_spec_refused():
    with pytest.raises(InvalidSpec):
        log_differentials(nodal("x*y - 1"))


def test_logpoint_omega_free_rank_one():
    s = fixture_spec("logpoint")
    assert omega_hilbert(s, 1, [0]) == {0: 1}
    assert detect_framing(log_differentials(s)).names == ["dlog p1"]


@pytest.mark.parametrize("n", [2, 3])
def test_kummer_log_etale(n):
    assert omega_hilbert(kummer(n), 1, [0]) == {0: 0}


def test_kummer_not_etale_in_bad_characteristic():
    assert omega_hilbert(kummer(2, 2), 1, [0]) == {0: 1}


def test_nodal_omega():
    s = nodal()
    om = log_differentials(s)
    assert om.names == ["dx", "dy", "dlog p1", "dlog p2"]
    assert om.hilbert(range(5)) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}
    x, y = s.ring.var("x"), s.ring.var("y")
    # dx = x dlog e1, dy = y dlog e2, dlog e1 + dlog e2 = 0
    assert om.is_zero({0: s.ring.one(), 2: {m: -c for m, c in x.items()}})
    assert om.is_zero({1: s.ring.one(), 3: {m: -c for m, c in y.items()}})
    assert om.is_zero({2: s.ring.one(), 3: s.ring.one()})
    assert not om.is_zero(om.dlog(0))


def test_log_derivation_identities_on_fixtures():
    for name in ("node", "node_refined", "node_redundant", "logpoint", "polyline"):
        s = fixture_spec(name)
        om = log_differentials(s)
        for j, a in enumerate(s.alpha):
            vec = differential(s, a)
            vec[om.nx + j] = p_sub(vec.get(om.nx + j, {}), a)
            assert om.is_zero(vec)
        for w in s.theta.witnesses:
            vec = {om.nx + j: s.ring.const(c) for j, c in enumerate(w) if c}
            assert om.is_zero(vec)


def test_dlog_additive_on_redundant_chart():
    s = fixture_spec("node_redundant")
    om = log_differentials(s)
    one = s.ring.one()
    # third generator is e1 + e2
    assert om.is_zero({om.nx + 2: one, om.nx: {m: -c for m, c in one.items()},
                       om.nx + 1: {m: -c for m, c in one.items()}})


NODE = nodal()
mono = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=40, deadline=None)
@given(mono, mono, st.integers(1, 5), st.integers(-5, 5))
def test_leibniz(a, b, c1, c2):
    s = NODE
    om = log_differentials(s)
    fa = {a: s.ring.field(c1)}
    fb = {b: s.ring.field(c2)} if c2 else {}
    lhs = differential(s, p_mul(fa, fb))
    rhs = {}
    for f, g in ((fa, fb), (fb, fa)):
        for k, v in differential(s, g).items():
            rhs[k] = p_add(rhs.get(k, {}), p_mul(f, v))
    diff = {k: p_sub(lhs.get(k, {}), rhs.get(k, {})) for k in set(lhs) | set(rhs)}
    assert om.is_zero({k: v for k, v in diff.items() if v})


def test_exterior_power_basics():
    s = nodal()
    M = log_differentials(s).module()
    assert hilbert_function(exterior_power(M, 1), range(5)) == hilbert_function(M, range(5))
    assert hilbert_function(exterior_power(M, 2), range(5)) == {d: 0 for d in range(5)}
    S = PolyRing(QQ, ["x"], weights={"x": 1})
    free1 = FPModule(S, groebner_basis(S, []), 1, [], (0,))
    assert hilbert_function(exterior_power(free1, 2), range(3)) == {0: 0, 1: 0, 2: 0}


S1 = PolyRing(QQ, ["x"], weights={"x": 1})
K1 = groebner_basis(S1, [])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.integers(0, 5))
def test_exterior_power_of_free_module(r, n):
    M = FPModule(S1, K1, r, [], (0,) * r)
    got = hilbert_function(exterior_power(M, n), range(3))
    assert got == {d: comb(r, n) for d in range(3)}


def test_logpoint_de_rham():
    s = fixture_spec("logpoint")
    dr = log_de_rham(s, 1)
    assert not dr.matrix(0, 0).entries
    assert de_rham_cohomology(s, 0, [0]) == {0: 1}
    assert de_rham_cohomology(s, 1, [0]) == {0: 1}


def test_poincare_lemma_on_line():
    s = fixture_spec("polyline")
    assert de_rham_cohomology(s, 0, range(6)) == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0}
    assert de_rham_cohomology(s, 1, range(6)) == {d: 0 for d in range(6)}


def test_nodal_de_rham():
    s = nodal()
    dr = log_de_rham(s, 2)
    assert dr.framing.names == ["dlog p1"]
    assert dr.check_d_squared()
    assert de_rham_cohomology(s, 0, [0]) == {0: 1}


def test_kummer_de_rham_in_odd_characteristic():
    s = kummer(2, 3)
    assert omega_hilbert(s, 1, [0]) == {0: 0}
    assert de_rham_cohomology(s, 0, [0]) == {0: 1}


def test_not_framed_and_not_graded():
    with pytest.raises(NotFramed):
        log_de_rham(fixture_spec("dual_numbers"), 1)
    s = LogRingSpec(QQ, N0, [], [], [], N0, [], ["x"], [], [])
    with pytest.raises(NotGraded):
        de_rham_cohomology(s, 0, [0])
