import pytest
from hypothesis import assume, given, settings, strategies as st

from loghh.errors import NotInjective, SchemaError
from loghh.fields import QQ
from loghh.intlin import IntMatrix, determinant, solve_integer
from loghh.monoids import (
    AffineMonoid, MonoidMap, binomial_vanishes, chart_cokernel, group_completion, monoid_membership, toric_ideal,
)

N1 = AffineMonoid(1, [[1]])
N2 = AffineMonoid(2, [[1, 0], [0, 1]])


def test_group_completion_examples():
    assert group_completion(N1).rows == ((1,),)
    assert group_completion(N2).rows == ((1, 0), (0, 1))
    assert group_completion(AffineMonoid(1, [[2], [3]])).rows == ((1,),)


def test_cokernel_identity_is_trivial():
    G = chart_cokernel(MonoidMap.from_vectors(N1, N1, [[1]]))
    assert G.free_rank == 0 and G.torsion_orders == ()
    assert G.order() == 1


@pytest.mark.parametrize("n", [2, 3, 5])
def test_kummer_cokernel(n):
    G = chart_cokernel(MonoidMap.from_vectors(N1, N1, [[n]]))
    assert G.torsion_orders == (n,)
    assert G.free_rank == 0
    assert G.generator_images == ((1,),)


def test_diagonal_cokernel():
    G = chart_cokernel(MonoidMap.from_vectors(N1, N2, [[1, 1]]))
    assert G.free_rank == 1 and G.torsion_orders == ()
    assert G.generator_images == ((1,), (-1,))


def test_not_injective():
    with pytest.raises(NotInjective):
        chart_cokernel(MonoidMap.from_vectors(N2, N1, [[1], [1]]))


def test_theta_image_outside_target():
    with pytest.raises(SchemaError, match="Q-generator 0"):
        MonoidMap.from_vectors(N1, AffineMonoid(1, [[2]]), [[3]])


def test_membership():
    P = AffineMonoid(1, [[2], [3]])
    assert monoid_membership(P, [1]) is None
    c = monoid_membership(P, [7])
    assert 2 * c[0] + 3 * c[1] == 7


def test_toric_examples():
    _, b = toric_ideal(N2, QQ)
    assert b == []
    ring, b = toric_ideal(AffineMonoid(1, [[2], [3]]), QQ)
    assert [ring.to_str(f) for f in b] == ["x1^3 - x2^2"]
    ring, b = toric_ideal(AffineMonoid(2, [[1, 0], [1, 1], [1, 2]]), QQ)
    assert [ring.to_str(f) for f in b] == ["x2^2 - x1*x3"]


def _quotient_order(cols):
    """Count Z^2 / L by brute force: classes of points in a box covering a fundamental domain."""
    M = IntMatrix.from_columns(cols, 2)
    d = abs(determinant(M))
    reps = []
    for a in range(d):
        for b in range(d):
            if not any(solve_integer(M, (a - x, b - y)) is not None for x, y in reps):
                reps.append((a, b))
    return len(reps)


vec2 = st.tuples(st.integers(0, 4), st.integers(0, 4))


@settings(max_examples=40, deadline=None)
@given(vec2, vec2)
def test_cokernel_order_matches_brute_force(a, b):
    M = IntMatrix.from_columns([a, b], 2)
    assume(determinant(M) != 0)
    G = chart_cokernel(MonoidMap.from_vectors(N2, N2, [a, b]))
    assert G.free_rank == 0
    assert G.order() == abs(determinant(M)) == _quotient_order([a, b])
    for x, y in zip(G.torsion_orders, G.torsion_orders[1:]):
        assert y % x == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(vec2.filter(any), min_size=1, max_size=4, unique=True))
def test_toric_binomials_vanish(gens):
    P = AffineMonoid(2, gens)
    _, binoms = toric_ideal(P, QQ)
    for f in binoms:
        assert binomial_vanishes(P, f)
