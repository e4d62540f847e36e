"""Sparse exact linear algebra over Q and F_p.

Matrices act on column vectors.  Internally vectors are sparse dicts
``{index: value}`` with no stored zeros.  Over Q the forward elimination is
fraction-free: rows are scaled to integers and combined by cross
multiplication, with the row content divided out after every step.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

from .errors import CompositionNonzero
from .fields import QQ, ScalarField


class SparseMatrix:
    """An immutable sparse matrix over a :class:`ScalarField`."""

    __slots__ = ("nrows", "ncols", "field", "_rows")

    def __init__(self, nrows, ncols, field=QQ, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        clean = {}
        for i, row in (rows or {}).items():
            if not 0 <= i < nrows:
                raise IndexError(f"row {i} out of range")
            r = {}
            for j, v in row.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} out of range")
                v = field(v)
                if v:
                    r[j] = v
            if r:
                clean[i] = r
        self._rows = clean

    @classmethod
    def from_dense(cls, data, field=QQ, ncols=None):
        data = [list(r) for r in data]
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = {i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(data)}
        return cls(nrows, ncols, field, rows)

    @classmethod
    def from_columns(cls, columns, nrows, field=QQ):
        """Build from a list of sparse column vectors (dicts)."""
        rows = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
        return cls(nrows, len(columns), field, rows)

    @classmethod
    def identity(cls, n, field=QQ):
        return cls(n, n, field, {i: {i: 1} for i in range(n)})

    @classmethod
    def zero(cls, nrows, ncols, field=QQ):
        return cls(nrows, ncols, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self):
        return {(i, j, v) for i, r in self._rows.items() for j, v in r.items()}

    def row(self, i):
        return dict(self._rows.get(i, {}))

    def rows(self):
        return {i: dict(r) for i, r in self._rows.items()}

    def columns(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def to_dense(self):
        z = self.field.zero
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self):
        rows = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix(self.ncols, self.nrows, self.field, rows)

    T = property(transpose)

    def apply(self, vec):
        """Matrix times a sparse column vector."""
        out = {}
        for i, r in self._rows.items():
            s = None
            for j, v in r.items():
                w = vec.get(j)
                if w:
                    s = v * w if s is None else s + v * w
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        rows = {}
        for i, r in self._rows.items():
            acc = {}
            for k, v in r.items():
                for j, w in orows.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + v * w
            acc = {j: x for j, x in acc.items() if x}
            if acc:
                rows[i] = acc
        return SparseMatrix(self.nrows, other.ncols, self.field, rows)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            t = rows.setdefault(i, {})
            for j, v in r.items():
                t[j] = t.get(j, 0) + v
        return SparseMatrix(self.nrows, self.ncols, self.field, rows)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field(c)
        return SparseMatrix(self.nrows, self.ncols, self.field,
                            {i: {j: v * c for j, v in r.items()} for i, r in self._rows.items()})

    def is_zero(self):
        return not self._rows

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries)))

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self._rows.values()))}, {self.field!r})"


def block_matrix(blocks, row_sizes, col_sizes, field=QQ):
    """Assemble ``{(bi, bj): SparseMatrix}`` into one matrix."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    rows = {}
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {m.shape}")
        for i, r in m._rows.items():
            t = rows.setdefault(roff[bi] + i, {})
            for j, v in r.items():
                t[coff[bj] + j] = t.get(coff[bj] + j, 0) + v
    return SparseMatrix(roff[-1], coff[-1], field, rows)


# ----------------------------------------------------------------------------
# forward elimination on integer rows

def _int_rows(M):
    """Rows of M as integer dicts (Q: denominators cleared; F_p: residues)."""
    p = M.field.characteristic
    out = []
    for i in range(M.nrows):
        r = M._rows.get(i)
        if not r:
            continue
        if p:
            out.append({j: v.v for j, v in r.items()})
        else:
            den = 1
            for v in r.values():
                den = den * v.denominator // gcd(den, v.denominator)
            out.append(_primitive({j: int(v * den) for j, v in r.items()}))
    return out


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


class _Eliminator:
    """Online row echelon form; pivot of a row is its first nonzero column."""

    def __init__(self, p):
        self.p = p
        self.pivots = {}  # pivot column -> row (dict)

    def reduce(self, row):
        p = self.p
        pivots = self.pivots
        row = dict(row)
        heap = [j for j in row if j in pivots]
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            b = row.get(c)
            if not b:
                continue
            prow = pivots[c]
            if p:
                for j, v in prow.items():
                    nv = (row.get(j, 0) - b * v) % p
                    if nv:
                        if j not in row and j in pivots:
                            heapq.heappush(heap, j)
                        row[j] = nv
                    else:
                        row.pop(j, None)
            else:
                a = prow[c]
                g = gcd(a, b)
                ma, mb = a // g, b // g
                new = {j: ma * v for j, v in row.items()}
                for j, v in prow.items():
                    nv = new.get(j, 0) - mb * v
                    if nv:
                        if j not in new and j in pivots:
                            heapq.heappush(heap, j)
                        new[j] = nv
                    else:
                        new.pop(j, None)
                row = _primitive(new)
        return row

    def add(self, row):
        """Reduce and insert; return the new pivot column or None."""
        row = self.reduce(row)
        if not row:
            return None
        c = min(row)
        if self.p:
            inv = pow(row[c], -1, self.p)
            row = {j: v * inv % self.p for j, v in row.items()}
        elif row[c] < 0:
            row = {j: -v for j, v in row.items()}
        self.pivots[c] = row
        return c

    def rref(self):
        """Back substitution; returns {pivot col: row} with pivots normalized to 1 (as field values)."""
        p = self.p
        cols = sorted(self.pivots, reverse=True)
        done = {}
        for c in cols:
            row = dict(self.pivots[c])
            # eliminate later pivot columns (already reduced) from this row
            for c2 in sorted((j for j in row if j in done and j != c)):
                b = row.get(c2)
                if not b:
                    continue
                if p:
                    for j, v in done[c2].items():
                        nv = (row.get(j, 0) - b * v) % p
                        if nv:
                            row[j] = nv
                        else:
                            row.pop(j, None)
                else:
                    # done rows hold Fractions with pivot 1
                    frac = {j: Fraction(v) for j, v in row.items()}
                    bb = frac[c2]
                    for j, v in done[c2].items():
                        nv = frac.get(j, 0) - bb * v
                        if nv:
                            frac[j] = nv
                        else:
                            frac.pop(j, None)
                    row = frac
            if p:
                done[c] = row
            else:
                a = Fraction(row[c])
                done[c] = {j: Fraction(v) / a for j, v in row.items()}
        return done


def _to_field_vec(vec, field):
    return {j: field(v) for j, v in vec.items()}


class RowReduction:
    """Result of :func:`row_reduce`."""

    def __init__(self, rank, kernel_sparse, image_sparse, pivots, ncols, nrows, field):
        self.rank = rank
        self.kernel_sparse = kernel_sparse
        self.image_sparse = image_sparse
        self.pivots = pivots
        self._ncols = ncols
        self._nrows = nrows
        self.field = field

    @property
    def kernel_basis(self):
        z = self.field.zero
        return [tuple(v.get(j, z) for j in range(self._ncols)) for v in self.kernel_sparse]

    @property
    def image_basis(self):
        z = self.field.zero
        return [tuple(v.get(i, z) for i in range(self._nrows)) for v in self.image_sparse]

    def __iter__(self):
        return iter((self.rank, self.kernel_basis, self.image_basis))


def row_reduce(M):
    """Rank, kernel basis and column-space basis of a sparse matrix.

    Kernel vectors come from the reduced row echelon form: one per free
    column ``j``, equal to ``e_j`` minus the RREF entries in column ``j``
    placed at the pivot columns.  The image basis is the set of original
    pivot columns, in increasing column order.
    """
    field = M.field
    p = field.characteristic
    el = _Eliminator(p)
    for row in _int_rows(M):
        el.add(row)
    rref = el.rref()
    pivots = sorted(rref)
    pivset = set(pivots)
    kernel = []
    for j in range(M.ncols):
        if j in pivset:
            continue
        v = {j: field.one}
        for c, row in rref.items():
            x = row.get(j)
            if x:
                v[c] = field(-x)
        kernel.append(v)
    cols = M.columns()
    image = [cols[c] for c in pivots]
    return RowReduction(len(pivots), kernel, image, pivots, M.ncols, M.nrows, field)


def rank(M):
    el = _Eliminator(M.field.characteristic)
    r = 0
    for row in _int_rows(M):
        if el.add(row) is not None:
            r += 1
    return r


def kernel(M):
    return row_reduce(M).kernel_sparse


# ----------------------------------------------------------------------------
# incremental echelon bases with coordinate tracking (field arithmetic)

class Echelon:
    """An incrementally built echelon basis of a subspace.

    Each inserted vector may carry a tag; :meth:`reduce` returns the residue of
    a vector and its expression as a combination of the tags of the vectors
    that were accepted.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.track = track
        self.rows = {}   # pivot col -> (vec, combo)
        self.tags = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, combo=None):
        vec = {j: v for j, v in vec.items() if v}
        combo = dict(combo or {})
        rows = self.rows
        heap = [j for j in vec if j in rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            b = vec.get(c)
            if not b:
                continue
            prow, pcombo = rows[c]
            for j, v in prow.items():
                nv = vec.get(j, 0) - b * v
                if nv:
                    if j not in vec and j in rows:
                        heapq.heappush(heap, j)
                    vec[j] = nv
                else:
                    vec.pop(j, None)
            if self.track:
                for t, v in pcombo.items():
                    nv = combo.get(t, 0) - b * v
                    if nv:
                        combo[t] = nv
                    else:
                        combo.pop(t, None)
        return vec, combo

    def add(self, vec, tag=None):
        """Insert; returns True iff the vector was independent of the span so far."""
        combo = {tag: self.field.one} if self.track else None
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return False
        c = min(vec)
        inv = self.field.one / vec[c]
        vec = {j: v * inv for j, v in vec.items()}
        if self.track:
            combo = {t: v * inv for t, v in combo.items()}
        self.rows[c] = (vec, combo)
        if tag is not None:
            self.tags.append(tag)
        return True

    def contains(self, vec):
        return not self.reduce(vec)[0]

    def express(self, vec):
        """Coordinates of ``vec`` in the accepted tags, or None if not in the span."""
        if not self.track:
            raise ValueError("echelon built without tracking")
        res, combo = self.reduce(vec, {})
        if res:
            return None
        return {t: -v for t, v in combo.items()}


class Homology:
    """H = ker / im at one spot, with cycle representatives and class coordinates."""

    def __init__(self, field, dim_space, boundaries, cycles):
        self.field = field
        self.dim_space = dim_space
        self._bd = Echelon(field)
        for b in boundaries:
            self._bd.add(b)
        self._reps = Echelon(field, track=True)
        self.representatives = []
        for z in cycles:
            r, _ = self._bd.reduce(z)
            if self._reps.add(r, tag=len(self.representatives)):
                self.representatives.append(z)

    @property
    def dim(self):
        return len(self.representatives)

    def is_boundary(self, vec):
        return self._bd.contains(vec)

    def coords(self, vec):
        """Coordinates of the class of a cycle in the representative basis."""
        r, _ = self._bd.reduce(vec)
        c = self._reps.express(r)
        if c is None:
            raise ValueError("vector is not a cycle of the recorded cycle space")
        return [c.get(i, self.field.zero) for i in range(self.dim)]


def homology_at(f, g):
    """Homology object for ``k^a --f--> k^b --g--> k^c`` at the middle spot."""
    cycles = row_reduce(g).kernel_sparse if g.nrows else [
        {j: f.field.one} for j in range(g.ncols)]
    bnd = f.columns()
    return Homology(f.field, f.nrows, bnd, cycles)


def complex_homology(f, g):
    """Homology of ``k^a --f--> k^b --g--> k^c`` at ``k^b``.

    Returns ``(dim, basis)``; basis vectors are dense tuples lying in ker g and
    independent modulo im f.
    """
    if f.nrows != g.ncols:
        raise ValueError("f and g are not composable")
    if not (g @ f).is_zero():
        raise CompositionNonzero("g . f != 0")
    dim = (g.ncols - rank(g)) - rank(f)
    h = homology_at(f, g)
    assert h.dim == dim
    z = f.field.zero
    basis = [tuple(v.get(i, z) for i in range(f.nrows)) for v in h.representatives]
    return dim, basis


class QuotientSpace:
    """k^n / W for a subspace W, with coordinates on a complement basis.

    The complement basis is the set of coordinate vectors ``e_j`` with ``j``
    not a pivot of W's reduced echelon form, so projections are canonical.
    """

    def __init__(self, field, n, spanning):
        self.field = field
        self.n = n
        self._ech = Echelon(field)
        for w in spanning:
            self._ech.add(w)
        piv = set(self._ech.rows)
        self.basis_indices = [j for j in range(n) if j not in piv]
        self._pos = {j: i for i, j in enumerate(self.basis_indices)}

    @property
    def dim(self):
        return len(self.basis_indices)

    def project(self, vec):
        r, _ = self._ech.reduce(vec)
        return {self._pos[j]: v for j, v in r.items()}

    def lift(self, qvec):
        return {self.basis_indices[i]: v for i, v in qvec.items()}

    def contains(self, vec):
        return self._ech.contains(vec)


def dense_vec(vec, n, field):
    z = field.zero
    return tuple(vec.get(i, z) for i in range(n))


def sparse_vec(seq, field=None):
    return {i: (field(v) if field else v) for i, v in enumerate(seq) if v}
