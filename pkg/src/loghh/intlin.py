"""Integer matrices: Hermite and Smith normal forms, integer solving, lattice kernels."""

from __future__ import annotations

from dataclasses import dataclass


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged integer matrix")
        self.ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m, n):
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def from_columns(cls, cols, nrows):
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return IntMatrix([self.column(j) for j in range(self.ncols)], self.nrows)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                         other.ncols)

    def apply(self, v):
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def tolist(self):
        return [list(r) for r in self.rows]

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"


def determinant(M):
    """Exact determinant by Bareiss fraction-free elimination."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in M.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self):
        out = []
        for i in range(min(self.D.nrows, self.D.ncols)):
            if self.D[i, i]:
                out.append(self.D[i, i])
        return out

    @property
    def rank(self):
        return len(self.invariant_factors)

    def verify(self, A):
        """Check U.A.V = D, unimodularity and the divisibility chain."""
        if self.U @ A @ self.V != self.D:
            return False
        if abs(determinant(self.U)) != 1 or abs(determinant(self.V)) != 1:
            return False
        D = self.D
        for i in range(D.nrows):
            for j in range(D.ncols):
                if i != j and D[i, j]:
                    return False
        d = [D[i, i] for i in range(min(D.nrows, D.ncols))]
        for a, b in zip(d, d[1:]):
            if a == 0 and b != 0:
                return False
            if a and b % a:
                return False
        return all(x >= 0 for x in d)


def smith_normal_form(A):
    """Smith normal form ``U.A.V = D`` with unimodular U, V.

    Pivot rule: the nonzero entry of smallest absolute value in the remaining
    lower-right block, ties broken by row-major position.
    """
    m, n = A.nrows, A.ncols
    a = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(n):
                ra[k] += q * rs[k]
            ua, us = U[dst], U[src]
            for k in range(m):
                ua[k] += q * us[k]

    def add_col(src, dst, q):  # col dst += q * col src
        if q:
            for r in a:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                best = (abs(a[t][t]), t, t)
                for i in range(t + 1, m):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, n):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithForm(IntMatrix(U, m), IntMatrix(a, n), IntMatrix(V, n))


def hermite_normal_form(A):
    """Row-style Hermite normal form ``H = W.A`` (W unimodular).

    H is upper echelon; pivots positive; entries above a pivot reduced into
    ``[0, pivot)``.  Returns ``(H, W)``.
    """
    m, n = A.nrows, A.ncols
    a = [list(r) for r in A.rows]
    W = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[piv] = a[piv], a[r]
            W[r], W[piv] = W[piv], W[r]
            clean = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[r])]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if r < m and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                W[r] = [-x for x in W[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[r])]
            r += 1
    return IntMatrix(a, n), IntMatrix(W, m)


def solve_integer(A, b):
    """An integer solution x of ``A x = b`` or None."""
    S = smith_normal_form(A)
    c = S.U.apply(b)
    y = []
    for i in range(A.ncols):
        d = S.D[i, i] if i < A.nrows else 0
        ci = c[i] if i < len(c) else 0
        if d:
            if ci % d:
                return None
            y.append(ci // d)
        else:
            y.append(0)
    for i in range(A.ncols, A.nrows):
        if c[i]:
            return None
    for i in range(min(A.nrows, A.ncols)):
        if S.D[i, i] == 0 and c[i]:
            return None
    return S.V.apply(y)


def integer_kernel(A):
    """A basis (list of column tuples) of {x in Z^n : A x = 0}."""
    S = smith_normal_form(A)
    r = S.rank
    return [S.V.column(j) for j in range(r, A.ncols)]
