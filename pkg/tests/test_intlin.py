import random

from loghh.intlin import (
    IntMatrix, determinant, hermite_normal_form, integer_kernel, smith_normal_form, solve_integer,
)


def test_identity():
    S = smith_normal_form(IntMatrix.identity(3))
    assert S.D == IntMatrix.identity(3)
    assert S.verify(IntMatrix.identity(3))


def test_diag_2_3():
    A = IntMatrix([[2, 0], [0, 3]])
    S = smith_normal_form(A)
    assert S.D == IntMatrix([[1, 0], [0, 6]])
    assert S.verify(A)


def test_semistable_column():
    A = IntMatrix([[1], [1]])
    S = smith_normal_form(A)
    assert S.D == IntMatrix([[1], [0]])
    assert S.verify(A)
    # cokernel Z^2 / (1,1) has one free summand
    assert S.rank == 1


def test_random_smith_identities():
    rng = random.Random(7)
    for _ in range(200):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        A = IntMatrix([[rng.randrange(-9, 10) for _ in range(n)] for _ in range(m)])
        S = smith_normal_form(A)
        assert S.verify(A), A
        # invariant-factor product equals gcd of maximal minors when square & nonsingular
        if m == n and determinant(A):
            prod = 1
            for d in S.invariant_factors:
                prod *= d
            assert prod == abs(determinant(A))


def test_smith_deterministic():
    A = IntMatrix([[4, 6], [6, 9], [2, 3]])
    assert smith_normal_form(A) == smith_normal_form(A)


def test_hnf_gcd():
    H, W = hermite_normal_form(IntMatrix([[2], [3]]))
    assert H.rows[0] == (1,)
    assert H.rows[1] == (0,)
    assert abs(determinant(W)) == 1
    assert W @ IntMatrix([[2], [3]]) == H


def test_solve_and_kernel():
    A = IntMatrix([[2, 3]])
    x = solve_integer(A, (1,))
    assert A.apply(x) == (1,)
    assert solve_integer(IntMatrix([[2, 4]]), (1,)) is None
    ker = integer_kernel(A)
    assert len(ker) == 1
    assert A.apply(ker[0]) == (0,)
    assert abs(ker[0][0]) == 3 and abs(ker[0][1]) == 2
