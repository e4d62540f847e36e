"""Independent brute-force verification path.

Everything here is deliberately dense and unoptimized: list-of-lists
matrices, textbook Gaussian elimination over field elements, finite
dimensional algebras given by multiplication tables, and the Hochschild
and cyclic complexes built directly from tensor indices.  Nothing in this
module calls the Groebner engine or the sparse eliminator.
"""

from __future__ import annotations

from itertools import product

from .errors import NotFiniteDimensional


def dense_rank(rows, field):
    """Rank of a dense matrix (list of rows) by textbook Gaussian elimination."""
    a = [[field(x) for x in r] for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.one / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def dense_homology_dims(diffs, dims, field):
    """Homology dims of a chain complex given dense differentials.

    ``diffs[n]`` is the matrix of ``C_n -> C_{n-1}`` (rows = dim C_{n-1}), for
    n = 1..len(dims)-1; returns dims of H_0 .. H_{len(dims)-2}.
    """
    ranks = {}
    for n, d in diffs.items():
        ranks[n] = dense_rank(d, field) if d and d[0] else 0
    out = []
    for n in range(len(dims) - 1):
        out.append(dims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0))
    return out


class DenseReducer:
    """Reduced row echelon form of a spanning set; reduces vectors modulo its span."""

    def __init__(self, rows, n, field):
        self.field = field
        self.n = n
        piv = {}
        for r in rows:
            v = self._reduce(list(r), piv)
            c = next((j for j, x in enumerate(v) if x), None)
            if c is None:
                continue
            inv = field.one / v[c]
            v = [x * inv for x in v]
            for k, w in piv.items():
                if w[c]:
                    f = w[c]
                    piv[k] = [a - f * b for a, b in zip(w, v)]
            piv[c] = v
        self.pivots = piv
        self.free = [j for j in range(n) if j not in piv]
        self._pos = {j: i for i, j in enumerate(self.free)}

    @staticmethod
    def _reduce(v, piv):
        for c, w in piv.items():
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, w)]
        return v

    def reduce(self, v):
        return self._reduce(list(v), self.pivots)

    def coords(self, v):
        """Coordinates of v modulo the span, on the non-pivot positions."""
        r = self.reduce(v)
        return [r[j] for j in self.free]


# ---------------------------------------------------------------------------
# the algebra A by Macaulay matrices

def _monomials_upto(nvars, D):
    out = []
    for e in product(range(D + 1), repeat=nvars):
        if sum(e) <= D:
            out.append(e)
    # high degree first so that pivots eliminate the largest monomials
    out.sort(key=lambda e: (-sum(e), tuple(-x for x in e)))
    return out


class DenseAlgebra:
    """A finite-dimensional quotient of a polynomial ring by stabilized Macaulay matrices.

    For a truncation degree D the relations are multiplied by every monomial
    keeping total degree <= D and the span is row reduced with higher-degree
    monomials first; the non-pivot monomials form the candidate basis.  D is
    raised until the candidate basis is unchanged from D to D+1 and products
    of two basis monomials stay below D.
    """

    def __init__(self, field, nvars, relations, max_degree=24):
        self.field = field
        self.nvars = nvars
        rdeg = max([max(sum(m) for m in f) for f in relations if f] + [1])
        prev = None
        for D in range(rdeg, max_degree + 1):
            red, monos = self._macaulay(relations, D)
            normal = tuple(monos[j] for j in red.free)
            top = max((sum(m) for m in normal), default=0)
            if normal == prev and 2 * top < D:
                break
            prev = normal
        else:
            raise NotFiniteDimensional("the algebra does not stabilize to a finite basis")
        self.D = D
        self.red = red
        self.monos = monos
        self.index = {m: i for i, m in enumerate(monos)}
        self.basis = list(normal)
        self.dim = len(self.basis)
        one = self.coords({(0,) * nvars: field.one})
        self.one = one
        self.table = [[self._mul_basis(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def _macaulay(self, relations, D):
        monos = _monomials_upto(self.nvars, D)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for f in relations:
            df = max(sum(m) for m in f)
            for m in _monomials_upto(self.nvars, D - df):
                row = [self.field.zero] * len(monos)
                for e, c in f.items():
                    row[index[tuple(a + b for a, b in zip(e, m))]] += self.field(c)
                rows.append(row)
        return DenseReducer(rows, len(monos), self.field), monos

    def coords(self, poly):
        v = [self.field.zero] * len(self.monos)
        for e, c in poly.items():
            if sum(e) > self.D:
                raise NotFiniteDimensional("chart value beyond the truncation degree")
            v[self.index[e]] += self.field(c)
        return self.red.coords(v)

    def _mul_basis(self, i, j):
        e = tuple(a + b for a, b in zip(self.basis[i], self.basis[j]))
        return self.coords({e: self.field.one})

    def mul(self, x, y):
        out = [self.field.zero] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    c = a * b
                    for k, t in enumerate(self.table[i][j]):
                        if t:
                            out[k] += c * t
        return out


def dense_algebra(spec):
    """A as a dense algebra; the base ring must be the ground field."""
    if spec.base_variables:
        raise NotFiniteDimensional("the oracle needs the base ring to be the ground field")
    ring = spec.ring
    rels = list(spec.relations) + ring.partner_relations()
    return DenseAlgebra(spec.field, ring.nvars, rels)


# ---------------------------------------------------------------------------
# levels: A^{(n+1)} (x) k[G]^{(n)} modulo chart twists

class DenseLevel:
    def __init__(self, alg, group, alpha, n):
        self.alg = alg
        self.group = group
        self.elements = group.elements()
        self.gindex = {g: i for i, g in enumerate(self.elements)}
        self.n = n
        F = alg.field
        self.field = F
        dA, dG = alg.dim, len(self.elements)
        self.shape = [dA] * (n + 1) + [dG] * n
        self.size = dA ** (n + 1) * dG ** n
        # twist relations times every basis element
        rels = []
        for a in range(1, n + 1):
            for j, al in enumerate(alpha):
                cls = group.normalize(group.generator_images[j])
                lhs = self.tensor({a - 1: al}, {a: cls})
                rhs = self.tensor({a: al}, {})
                r = [x - y for x, y in zip(lhs, rhs)]
                if any(r):
                    rels.append(r)
        span = []
        for r in rels:
            for idx in range(self.size):
                span.append(self.mul_basis(idx, r))
        self.red = DenseReducer(span, self.size, F)
        self.dim = len(self.red.free)

    def unflatten(self, idx):
        out = []
        for s in reversed(self.shape):
            out.append(idx % s)
            idx //= s
        return tuple(reversed(out))

    def flatten(self, tup):
        idx = 0
        for s, x in zip(self.shape, tup):
            idx = idx * s + x
        return idx

    def tensor(self, factors, units):
        """The pure tensor with the given A-vectors in some copies (1 elsewhere) and group elements at gaps."""
        F = self.field
        n = self.n
        zero_g = self.group.normalize([0] * self.group.ngens)
        gpos = tuple(self.gindex[self.group.normalize(units.get(a, zero_g))] for a in range(1, n + 1))
        vecs = [factors.get(a, self.alg.one) for a in range(n + 1)]
        out = [F.zero] * self.size
        for combo in product(*[[(i, c) for i, c in enumerate(v) if c] for v in vecs]):
            c = F.one
            for _, x in combo:
                c *= x
            out[self.flatten(tuple(i for i, _ in combo) + gpos)] += c
        return out

    def mul_basis(self, idx, vec):
        """basis element idx times a vector."""
        F = self.field
        alg, G = self.alg, self.group
        n = self.n
        e = self.unflatten(idx)
        out = [F.zero] * self.size
        for jdx, c in enumerate(vec):
            if not c:
                continue
            f = self.unflatten(jdx)
            parts = [alg.table[e[a]][f[a]] for a in range(n + 1)]
            gs = tuple(self.gindex[G.add(self.elements[e[n + 1 + a]], self.elements[f[n + 1 + a]])]
                       for a in range(n))
            for combo in product(*[[(i, x) for i, x in enumerate(p) if x] for p in parts]):
                w = c
                for _, x in combo:
                    w *= x
                out[self.flatten(tuple(i for i, _ in combo) + gs)] += w
        return out


class DenseModel:
    """Levels 0..top and the maps induced by point maps, all dense."""

    def __init__(self, spec, top):
        G = spec.G
        if not G.is_finite():
            raise NotFiniteDimensional("the oracle needs a finite group G")
        self.spec = spec
        self.field = spec.field
        self.alg = dense_algebra(spec)
        alpha = [self.alg.coords(a) for a in spec.alpha]
        self.group = G
        self.levels = [DenseLevel(self.alg, G, alpha, n) for n in range(top + 1)]
        self.top = top

    def point_map(self, m, n, phi):
        """Dense matrix (rows = quotient coords of level n) of the map induced by phi."""
        src, tgt = self.levels[m], self.levels[n]
        alg, G, F = self.alg, self.group, self.field
        zero_g = G.normalize([0] * G.ngens)
        cols = []
        for k in src.red.free:
            e = src.unflatten(k)
            # A-factors: copy a goes to copy phi(a)
            factors = {}
            for a in range(m + 1):
                v = [F.one if i == e[a] else F.zero for i in range(alg.dim)]
                c = phi[a]
                factors[c] = alg.mul(factors[c], v) if c in factors else v
            # group elements: the gap a contributes to the gaps between phi(a-1) and phi(a)
            units = {c: list(zero_g) for c in range(1, n + 1)}
            for a in range(1, m + 1):
                g = src.elements[e[m + a]]
                lo, hi = phi[a - 1], phi[a]
                sign = 1 if hi >= lo else -1
                for c in range(min(lo, hi) + 1, max(lo, hi) + 1):
                    units[c] = [x + sign * y for x, y in zip(units[c], g)]
            img = tgt.tensor(factors, {c: G.normalize(u) for c, u in units.items()})
            cols.append(tgt.red.coords(img))
        return [[cols[j][i] for j in range(len(cols))] for i in range(tgt.dim)]

    def face(self, n, i):
        phi = [a if a <= i else a - 1 for a in range(n + 1)] if i < n else list(range(n)) + [0]
        return self.point_map(n, n - 1, phi)

    def rotation(self, n):
        return self.point_map(n, n, [(a + 1) % (n + 1) for a in range(n + 1)])

    def dim(self, n):
        return self.levels[n].dim


def _madd(A, B):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def _mscale(A, c):
    return [[x * c for x in r] for r in A]


def _mmul(A, B):
    ncols = len(B[0]) if B else 0
    out = []
    for r in A:
        acc = [0] * ncols
        for k, x in enumerate(r):
            if x:
                acc = [a + x * y for a, y in zip(acc, B[k])]
        out.append(acc)
    return out


def _meye(n, F):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def _mzero(r, c, F):
    return [[F.zero] * c for _ in range(r)]


def oracle_b(model, n, prime=False):
    F = model.field
    M = _mzero(model.dim(n - 1), model.dim(n), F)
    for i in range(n if prime else n + 1):
        M = _madd(M, _mscale(model.face(n, i), F(-1) ** i))
    return M


def oracle_hh(spec, N):
    """HH_0..HH_N from the dense unnormalized Hochschild complex."""
    model = DenseModel(spec, N + 1)
    dims = [model.dim(n) for n in range(N + 2)]
    diffs = {n: oracle_b(model, n) for n in range(1, N + 2)}
    return dict(enumerate(dense_homology_dims(diffs, dims, spec.field)))


def oracle_hc(spec, m_max):
    """HC_0..HC_{m_max} from the dense cyclic bicomplex with m_max + 2 columns."""
    F = spec.field
    top = m_max + 1
    W = m_max + 2
    model = DenseModel(spec, top)
    b = {n: oracle_b(model, n) for n in range(1, top + 1)}
    bp = {n: oracle_b(model, n, prime=True) for n in range(1, top + 1)}
    t = {}
    for n in range(top + 1):
        t[n] = _mscale(model.rotation(n), F(-1) ** n)
    norm = {}
    for n in range(top + 1):
        acc, P = _mzero(model.dim(n), model.dim(n), F), _meye(model.dim(n), F)
        for _ in range(n + 1):
            acc = _madd(acc, P)
            P = _mmul(t[n], P)
        norm[n] = acc

    def cols(m):
        return [p for p in range(W) if 0 <= m - p <= top]

    def total(m):
        src, tgt = cols(m), cols(m - 1)
        sdims = [model.dim(m - p) for p in src]
        tdims = [model.dim(m - 1 - p) for p in tgt]
        M = _mzero(sum(tdims), sum(sdims), F)
        soff = [sum(sdims[:k]) for k in range(len(src))]
        toff = {p: sum(tdims[:k]) for k, p in enumerate(tgt)}
        for k, p in enumerate(src):
            q = m - p
            blocks = []
            if q >= 1 and p in toff:
                blocks.append((toff[p], b[q] if p % 2 == 0 else _mscale(bp[q], -F.one)))
            if p >= 1 and p - 1 in toff:
                if p % 2 == 1:
                    h = _madd(_meye(model.dim(q), F), _mscale(t[q], -F.one))
                else:
                    h = norm[q]
                blocks.append((toff[p - 1], h))
            for r0, blk in blocks:
                for i, row in enumerate(blk):
                    for j, x in enumerate(row):
                        if x:
                            M[r0 + i][soff[k] + j] += x
        return M

    dims = [sum(model.dim(m - p) for p in cols(m)) for m in range(m_max + 2)]
    diffs = {m: total(m) for m in range(1, m_max + 2)}
    for m in range(2, m_max + 2):
        sq = _mmul(diffs[m - 1], diffs[m])
        if any(any(r) for r in sq):
            raise AssertionError("oracle bicomplex differential does not square to zero")
    return dict(enumerate(dense_homology_dims(diffs, dims, F)))


def oracle(spec, N):
    """Dense HH_0..HH_N and HC_0..HC_N."""
    return {"hh": oracle_hh(spec, N), "hc": oracle_hc(spec, N)}
