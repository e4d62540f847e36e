"""Log diagonal ring, Hochschild homology backends and the cosimplicial levels.

Level ``n`` is the ring of functions on the (n+1)-fold fibre product over
the chart stack: ``A^{(x)(n+1)}`` with a unit for each generator of
``G = P^gp/Q^gp`` at each of the n gaps, subject to the chart twists
``alpha(p)^{(a-1)} * u^{[p]}_a = alpha(p)^{(a)}``.

Any map of points ``phi: {0..m} -> {0..n}`` induces a ring map from level m
to level n: copy a goes to copy ``phi(a)`` and the unit at gap a goes to
``w_{phi(a)} / w_{phi(a-1)}`` where ``w_c = u_1 ... u_c``.  Faces,
degeneracies, the cyclic operator, the extra degeneracy and the symmetric
group action are all of this form.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations, product

from .errors import NotFiniteDimensional, NotGenerating, RelationNotKilled
from .exactlin import Homology, QuotientSpace, SparseMatrix, complex_homology, rank as mat_rank, row_reduce
from .grobner import (
    FPModule, QuotientRing, free_resolution, groebner_basis, lift, vec_to_module,
)
from .parallel import ordered_map
from .logring import SEP, detect_framing, log_differentials, omega_hilbert, _degree_basis
from .polys import PARTNER_SUFFIX, PolyRing, p_add, p_mul, p_scale, p_sub


# ---------------------------------------------------------------------------
# levels

def _copy_name(v, a):
    return f"{v}{SEP}{a}"


def _unit_name(g, a):
    return f"u{g}{SEP}{a}"


class Level:
    """The presented ring of level n."""

    def __init__(self, spec, n):
        self.spec = spec
        self.n = n
        G = spec.G
        self.G = G
        names, inverted, weights = [], [], {}
        w = spec.grading
        for v in spec.base_variables:
            names.append(v)
            if w is not None:
                weights[v] = w.get(v, 0)
        inverted += list(spec.base_inverted)
        for a in range(n + 1):
            for v in spec.total_variables:
                c = _copy_name(v, a)
                names.append(c)
                if w is not None:
                    weights[c] = w.get(v, 0)
            inverted += [_copy_name(v, a) for v in spec.total_inverted]
        for a in range(1, n + 1):
            for g in range(G.ngens):
                c = _unit_name(g, a)
                names.append(c)
                if w is not None:
                    weights[c] = 0
                if G.order_of(g) == 0:
                    inverted.append(c)
        self.ring = PolyRing(spec.field, names, inverted, weights=weights if w is not None else None)
        self.relations = self._relations()

    def copy_images(self, a):
        """Images of A's variables (partners included) in copy a."""
        src = self.spec.ring
        ring = self.ring
        out = []
        for name in src.names:
            if name.endswith(PARTNER_SUFFIX):
                base = name[: -len(PARTNER_SUFFIX)]
                target = base if base in self.spec.base_variables else _copy_name(base, a)
                out.append(ring.var(target + PARTNER_SUFFIX))
            elif name in self.spec.base_variables:
                out.append(ring.var(name))
            else:
                out.append(ring.var(_copy_name(name, a)))
        return out

    def embed(self, f, a):
        return self.spec.ring.substitute(f, self.copy_images(a), self.ring)

    def unit_power(self, g, a, e):
        """``u_g^e`` at gap a as a monomial dict (negative e uses the inverse)."""
        ring = self.ring
        d = self.G.order_of(g)
        name = _unit_name(g, a)
        if d:
            e %= d
            return {tuple(e if i == ring.index[name] else 0 for i in range(ring.nvars)): ring.field.one}
        if e >= 0:
            idx = ring.index[name]
        else:
            idx = ring.index[name + PARTNER_SUFFIX]
            e = -e
        return {tuple(e if i == idx else 0 for i in range(ring.nvars)): ring.field.one}

    def class_monomial(self, cls, a):
        """``u^{[p]}`` at gap a for a class vector in G."""
        t = self.ring.one()
        for g, e in enumerate(cls):
            if e:
                t = p_mul(t, self.unit_power(g, a, e))
        return t

    def _relations(self):
        s = self.spec
        rels = []
        for f in s.base_relations:
            rels.append(self.embed(f, 0))
        for a in range(self.n + 1):
            for f in s.total_relations:
                rels.append(self.embed(f, a))
        for a in range(1, self.n + 1):
            for g in range(self.G.ngens):
                d = self.G.order_of(g)
                if d:
                    rels.append(p_sub(_pure_power(self.ring, _unit_name(g, a), d), self.ring.one()))
            for j, alpha in enumerate(s.alpha):
                lhs = p_mul(self.embed(alpha, a - 1), self.class_monomial(self.G.generator_images[j], a))
                rhs = self.embed(alpha, a)
                r = p_sub(lhs, rhs)
                if r:
                    rels.append(r)
        return rels

    @cached_property
    def gb(self):
        return groebner_basis(self.ring, self.relations, self.spec.budget)

    @cached_property
    def quotient(self):
        return QuotientRing(self.ring, self.gb)

    @cached_property
    def unit_gb(self):
        """GB of the partner and torsion relations only."""
        rels = []
        for g in range(self.G.ngens):
            d = self.G.order_of(g)
            if d:
                for a in range(1, self.n + 1):
                    rels.append(p_sub(_pure_power(self.ring, _unit_name(g, a), d), self.ring.one()))
        return groebner_basis(self.ring, rels, self.spec.budget)

    def reduce(self, f):
        return self.gb.reduce(f)

    def is_finite(self):
        return self.quotient.is_finite()

    @cached_property
    def basis(self):
        if not self.is_finite():
            raise NotFiniteDimensional(f"level {self.n} ring is not finite-dimensional")
        return self.quotient.basis(self.spec.budget)

    @cached_property
    def basis_index(self):
        return {m: i for i, m in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, f):
        r = self.reduce(f)
        idx = self.basis_index
        return {idx[m]: c for m, c in r.items()}


def _pure_power(ring, name, e):
    i = ring.index[name]
    return {tuple(e if k == i else 0 for k in range(ring.nvars)): ring.field.one}


def level_ring(spec, n):
    cache = spec.__dict__.setdefault("_levels", {})
    if n not in cache:
        cache[n] = Level(spec, n)
    return cache[n]


# ---------------------------------------------------------------------------
# ring maps induced by point maps

class PointMap:
    """The ring map level m -> level n induced by ``phi: {0..m} -> {0..n}``."""

    def __init__(self, spec, m, n, phi):
        self.spec = spec
        self.phi = tuple(phi)
        self.src = level_ring(spec, m)
        self.tgt = level_ring(spec, n)
        if len(self.phi) != m + 1 or any(not 0 <= x <= n for x in self.phi):
            raise ValueError("point map out of range")
        self.images = self._images()
        self._matrix = None

    def _unit_image(self, g, a, sign):
        lo, hi = self.phi[a - 1], self.phi[a]
        t = self.tgt.ring.one()
        if hi >= lo:
            for c in range(lo + 1, hi + 1):
                t = p_mul(t, self.tgt.unit_power(g, c, sign))
        else:
            for c in range(hi + 1, lo + 1):
                t = p_mul(t, self.tgt.unit_power(g, c, -sign))
        return t

    def _images(self):
        spec, src, tgt = self.spec, self.src, self.tgt
        out = []
        for name in src.ring.names:
            inv = name.endswith(PARTNER_SUFFIX)
            base = name[: -len(PARTNER_SUFFIX)] if inv else name
            if SEP not in base:
                out.append(tgt.ring.var(name))
                continue
            head, a = base.rsplit(SEP, 1)
            a = int(a)
            if head.startswith("u") and head[1:].isdigit() and head not in spec.total_variables:
                g = int(head[1:])
                out.append(self._unit_image(g, a, -1 if inv else 1))
            else:
                target = _copy_name(head, self.phi[a]) + (PARTNER_SUFFIX if inv else "")
                out.append(tgt.ring.var(target))
        return out

    def raw(self, f):
        return self.src.ring.substitute(f, self.images, self.tgt.ring)

    def __call__(self, f):
        return self.tgt.reduce(self.raw(f))

    def compose_images(self, other):
        """Images of self's source variables under ``other o self``."""
        return [other.raw(f) for f in self.images]

    def matrix(self):
        """Matrix on the monomial bases (finite-dimensional levels)."""
        if self._matrix is None:
            cols = []
            for m in self.src.basis:
                cols.append(self.tgt.coords(self.raw({m: self.spec.field.one})))
            self._matrix = SparseMatrix.from_columns(cols, self.tgt.dim, self.spec.field)
        return self._matrix


def point_map(spec, m, n, phi):
    cache = spec.__dict__.setdefault("_pointmaps", {})
    key = (m, n, tuple(phi))
    if key not in cache:
        cache[key] = PointMap(spec, m, n, phi)
    return cache[key]


def face(spec, n, i):
    """d_i: level n -> level n-1 (i = n glues the last point to the first)."""
    if i < n:
        phi = [a if a <= i else a - 1 for a in range(n + 1)]
    else:
        phi = list(range(n)) + [0]
    return point_map(spec, n, n - 1, phi)


def degeneracy(spec, n, i):
    """s_i: level n -> level n+1, inserting a unit after copy i (0 <= i <= n)."""
    phi = [a if a <= i else a + 1 for a in range(n + 1)]
    return point_map(spec, n, n + 1, phi)


def extra_degeneracy(spec, n):
    """level n -> level n+1, inserting a unit in front."""
    return point_map(spec, n, n + 1, [a + 1 for a in range(n + 1)])


def cyclic_operator(spec, n):
    """Unsigned cyclic rotation: copy a goes to copy a+1 mod n+1."""
    return point_map(spec, n, n, [(a + 1) % (n + 1) for a in range(n + 1)])


def permutation_map(spec, n, sigma):
    """The entry at position i (1..n) goes to position sigma[i-1]; copy 0 is fixed."""
    return point_map(spec, n, n, [0] + list(sigma))


# ---------------------------------------------------------------------------
# the log diagonal ring

class LogDiagonalRing:
    """Level 1 with its coefficient maps, augmentation and diagonal ideal."""

    def __init__(self, spec):
        self.spec = spec
        self.level = level_ring(spec, 1)
        self.ring = self.level.ring
        self.G = spec.G
        A = spec.ring
        R = self.ring
        # augmentation: copies -> x, units -> 1
        eps = []
        for name in R.names:
            inv = name.endswith(PARTNER_SUFFIX)
            base = name[: -len(PARTNER_SUFFIX)] if inv else name
            if SEP not in base:
                eps.append(A.var(name))
                continue
            head, _ = base.rsplit(SEP, 1)
            if head in spec.total_variables:
                eps.append(A.var(head + (PARTNER_SUFFIX if inv else "")))
            else:
                eps.append(A.one())
        self._eps = eps
        gens = []
        for v in spec.total_variables:
            gens.append(p_sub(R.var(_copy_name(v, 1)), R.var(_copy_name(v, 0))))
        for g in range(self.G.ngens):
            gens.append(p_sub(R.var(_unit_name(g, 1)), R.one()))
        self.diagonal_generators = gens

    def left(self, f):
        return self.level.embed(f, 0)

    def right(self, f):
        return self.level.embed(f, 1)

    def augment(self, f):
        return self.spec.A.reduce(self.ring.substitute(f, self._eps, self.spec.ring))

    def reduce(self, f):
        return self.level.reduce(f)

    def check_invariants(self):
        """epsilon o left = epsilon o right = id on generators; I_Delta generators augment to 0."""
        A = self.spec.ring
        ok = True
        for name in A.user_variables:
            x = A.var(name)
            ok &= self.augment(self.left(x)) == self.spec.A.reduce(x)
            ok &= self.augment(self.right(x)) == self.spec.A.reduce(x)
        for g in self.diagonal_generators:
            ok &= not self.augment(g)
        return bool(ok)

    def unit_class(self, j):
        """``u^{[p_j]}`` in R."""
        return self.level.class_monomial(self.G.generator_images[j], 1)


def log_diagonal_ring(spec):
    from .logring import check_valid
    check_valid(spec)
    cache = spec.__dict__
    if "_diag" not in cache:
        cache["_diag"] = LogDiagonalRing(spec)
    return cache["_diag"]


# ---------------------------------------------------------------------------
# results

@dataclass
class HochschildClasses:
    """HH_n per degree: an int (total dimension) or ``{internal degree: dim}``."""

    backend: str
    dims: dict
    status: str = "ok"
    notes: list = dc_field(default_factory=list)
    checks: dict = dc_field(default_factory=dict)

    def total(self, n):
        v = self.dims[n]
        return v if isinstance(v, int) else sum(v.values())

    def table(self):
        return [self.dims[n] for n in sorted(self.dims)]


def _slices(spec, degree_box):
    """Internal degree slices: the box when graded, else the single slice 0 (whole algebra)."""
    if spec.graded:
        lo, hi = degree_box if degree_box is not None else (0, 4)
        return list(range(lo, hi + 1))
    if not spec.A.is_finite():
        raise NotFiniteDimensional("ungraded problem with an infinite-dimensional algebra")
    return [None]


def _pack(spec, per_degree):
    if spec.graded:
        return dict(per_degree)
    return per_degree[None]


# ---------------------------------------------------------------------------
# resolution backend

def resolution_of_diagonal(spec, N):
    """Free resolution of A over R (pruned Schreyer-style kernels), length <= N."""
    D = log_diagonal_ring(spec)
    cache = spec.__dict__.setdefault("_resolutions", {})
    for n, res in cache.items():
        if n >= N or res.complete:
            return res
    M = FPModule(D.ring, D.level.gb, 1, [{0: g} for g in D.diagonal_generators],
                 (0,) if spec.graded else None)
    res = free_resolution(M, N, spec.budget)
    cache[N] = res
    return res


def _free_basis(spec, shifts, rank, d):
    out = []
    A = spec.A
    for j in range(rank):
        if d is None:
            ms = A.basis(spec.budget)
        else:
            ms = A.basis_in_degree(d - shifts[j], spec.budget)
        for m in ms:
            out.append((j, m))
    return out


def _tensored_matrix(spec, D, cols, src_shifts, tgt_shifts, src_rank, tgt_rank, d):
    """Matrix of ``eps(d): A^src -> A^tgt`` on the degree-d slice."""
    src = _free_basis(spec, src_shifts, src_rank, d)
    tgt = _free_basis(spec, tgt_shifts, tgt_rank, d)
    index = {b: k for k, b in enumerate(tgt)}
    A = spec.A
    one = spec.field.one
    eps_cols = [{row: D.augment(f) for row, f in col.items()} for col in cols]
    out = []
    for j, m in src:
        vec = {}
        for row, e in eps_cols[j].items():
            if not e:
                continue
            g = A.reduce(p_mul(e, {m: one}))
            for mm, c in g.items():
                k = index[(row, mm)]
                vec[k] = vec.get(k, 0) + c
        out.append({k: v for k, v in vec.items() if v})
    return SparseMatrix.from_columns(out, len(tgt), spec.field), len(src)


def hh_resolution(spec, N, degree_box=None):
    """Tor^R_n(A, A) for n <= N by resolving A over R and tensoring with A."""
    res = resolution_of_diagonal(spec, N + 1)
    D = log_diagonal_ring(spec)
    slices = _slices(spec, degree_box)
    sh = res.shifts
    ranks = res.ranks
    L = res.length

    def rank_at(n):
        return ranks[n] if n < len(ranks) else 0

    def shifts_at(n):
        if not spec.graded:
            return None
        return sh[n] if n < len(sh) else ()

    def slice_dim(n, d):
        if n + 1 <= L:
            f, _ = _tensored_matrix(spec, D, res.differentials[n], shifts_at(n + 1), shifts_at(n),
                                    rank_at(n + 1), rank_at(n), d)
        else:
            f = SparseMatrix.zero(len(_free_basis(spec, shifts_at(n), rank_at(n), d)), 0, spec.field)
        if 1 <= n <= L:
            g, _ = _tensored_matrix(spec, D, res.differentials[n - 1], shifts_at(n), shifts_at(n - 1),
                                    rank_at(n), rank_at(n - 1), d)
        else:
            g = SparseMatrix.zero(0, f.nrows, spec.field)
        return complex_homology(f, g)[0]

    jobs = [(n, d) for n in range(N + 1) for d in slices]
    values = ordered_map(lambda job: slice_dim(*job), jobs)
    dims = {}
    for (n, d), v in zip(jobs, values):
        dims.setdefault(n, {})[d] = v
    dims = {n: _pack(spec, per) for n, per in dims.items()}
    out = HochschildClasses("resolution", dims)
    out.checks["d_squared"] = res.check_d_squared()
    out.checks["resolution_length"] = res.length
    out.checks["resolution_ranks"] = list(res.ranks)
    return out


# ---------------------------------------------------------------------------
# Koszul backend

def hh_koszul(spec, regular_sequence, N, degree_box=None, cross_check=True):
    """HH_n reported as Lambda^n of A^r; certified only by cross-checking."""
    D = log_diagonal_ring(spec)
    R = D.ring
    seq = [R.parse(s, "regular_sequence").terms if isinstance(s, str) else s for s in regular_sequence]
    gb_seq = groebner_basis(R, D.level.relations + seq, spec.budget)
    gb_diag = groebner_basis(R, D.level.relations + D.diagonal_generators, spec.budget)
    if gb_seq.polys != gb_diag.polys:
        raise NotGenerating("the listed elements do not generate the diagonal ideal")
    r = len(seq)
    shifts = []
    for f in seq:
        red = D.reduce(f)
        shifts.append(R.homogeneous_degree(red) or 0 if spec.graded else 0)
    slices = _slices(spec, degree_box)
    A = spec.A
    dims = {}
    for n in range(N + 1):
        per = {}
        for d in slices:
            total = 0
            for I in combinations(range(r), n):
                if d is None:
                    total += len(A.basis(spec.budget))
                else:
                    total += len(A.basis_in_degree(d - sum(shifts[i] for i in I), spec.budget))
            per[d] = total
        dims[n] = _pack(spec, per)
    out = HochschildClasses("koszul", dims)
    if cross_check:
        other = hh_resolution(spec, N, degree_box)
        agree = other.dims == dims
        out.checks["agrees_with_resolution"] = agree
        if not agree:
            out.status = "unverified"
            out.notes.append("Koszul prediction differs from the resolution backend; sequence may not be regular")
    else:
        out.status = "unverified"
        out.notes.append("regularity not cross-checked")
    return out


# ---------------------------------------------------------------------------
# finite-dimensional algebras from presentations

class FDAlgebra:
    """Multiplication table view of a finite-dimensional quotient ring."""

    def __init__(self, quotient, field, budget=None):
        self.Q = quotient
        self.field = field
        self.basis = quotient.basis(budget)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.one_index = self.index.get(quotient.ring.zero_mono)
        self._mul = {}

    def mul(self, i, j):
        key = (i, j) if i <= j else (j, i)
        hit = self._mul.get(key)
        if hit is None:
            m = tuple(a + b for a, b in zip(self.basis[i], self.basis[j]))
            r = self.Q.reduce({m: self.field.one})
            hit = {self.index[mm]: c for mm, c in r.items()}
            self._mul[key] = hit
        return hit

    def coords(self, f):
        r = self.Q.reduce(f)
        return {self.index[m]: c for m, c in r.items()}


def hh_bar(spec, N):
    """Tor^R_n(A, A), n <= N, from the normalized two-sided bar complex over the field."""
    D = log_diagonal_ring(spec)
    if not D.level.is_finite():
        raise NotFiniteDimensional("the log diagonal ring is not finite-dimensional; use the resolution backend")
    if not spec.A.is_finite():
        raise NotFiniteDimensional("A is not finite-dimensional")
    F = spec.field
    A = FDAlgebra(spec.A, F, spec.budget)
    R = FDAlgebra(D.level.quotient, F, spec.budget)
    rbar = [i for i in range(R.dim) if i != R.one_index]
    rpos = {i: k for k, i in enumerate(rbar)}
    eps = [A.coords(D.augment({R.basis[i]: F.one})) for i in range(R.dim)]

    def a_mul(vec_a, i):
        out = {}
        for j, c in vec_a.items():
            for k, v in A.mul(j, i).items():
                out[k] = out.get(k, 0) + c * v
        return out

    def index_of(a, rs, b, n):
        idx = a
        for r in rs:
            idx = idx * len(rbar) + r
        return idx * A.dim + b

    def size(n):
        return A.dim * A.dim * len(rbar) ** n

    def bar_d(n):
        rows = size(n - 1)
        cols = []
        for a in range(A.dim):
            for rs in product(range(len(rbar)), repeat=n):
                for b in range(A.dim):
                    vec = {}

                    def put(k, c):
                        v = vec.get(k, 0) + c
                        if v:
                            vec[k] = v
                        else:
                            vec.pop(k, None)
                    r_first = rbar[rs[0]]
                    for k, c in eps[r_first].items():
                        for a2, v in A.mul(a, k).items():
                            put(index_of(a2, rs[1:], b, n - 1), c * v)
                    for i in range(n - 1):
                        prod_ = R.mul(rbar[rs[i]], rbar[rs[i + 1]])
                        sign = F(-1) ** (i + 1)
                        for k, c in prod_.items():
                            if k == R.one_index:
                                continue
                            new = rs[:i] + (rpos[k],) + rs[i + 2:]
                            put(index_of(a, new, b, n - 1), sign * c)
                    r_last = rbar[rs[-1]]
                    sign = F(-1) ** n
                    for k, c in eps[r_last].items():
                        for b2, v in A.mul(k, b).items():
                            put(index_of(a, rs[:-1], b2, n - 1), sign * c * v)
                    cols.append(vec)
        return SparseMatrix.from_columns(cols, rows, F)

    ranks = {}
    for n in range(1, N + 2):
        if size(n) > spec.budget.max_dim:
            from .errors import BudgetExceeded
            raise BudgetExceeded(f"bar complex degree {n} has dimension {size(n)} > max_dim")
        M = bar_d(n)
        ranks[n] = mat_rank(M)
    dims = {n: size(n) - ranks.get(n, 0) - ranks.get(n + 1, 0) for n in range(N + 1)}
    out = HochschildClasses("bar", dims)
    return out


# ---------------------------------------------------------------------------
# the Theta complex (finite-dimensional levels)

class ThetaComplex:
    """Levels 0..top with faces, degeneracies and the cyclic operator as matrices."""

    def __init__(self, spec, top):
        self.spec = spec
        self.top = top
        self.field = spec.field
        self.levels = [level_ring(spec, n) for n in range(top + 1)]
        for L in self.levels:
            if not L.is_finite():
                raise NotFiniteDimensional(f"level {L.n} is not finite-dimensional")
        self._cache = {}

    def dim(self, n):
        return self.levels[n].dim

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def face(self, n, i):
        return self._memo(("d", n, i), lambda: face(self.spec, n, i).matrix())

    def degeneracy(self, n, i):
        return self._memo(("s", n, i), lambda: degeneracy(self.spec, n, i).matrix())

    def extra(self, n):
        return self._memo(("s-1", n), lambda: extra_degeneracy(self.spec, n).matrix())

    def tau(self, n):
        return self._memo(("tau", n), lambda: cyclic_operator(self.spec, n).matrix())

    def t(self, n):
        """Signed cyclic operator ``(-1)^n tau``."""
        return self._memo(("t", n), lambda: self.tau(n).scale(self.field(-1) ** n))

    def b(self, n):
        def make():
            if n == 0:
                return SparseMatrix.zero(0, self.dim(0), self.field)
            M = SparseMatrix.zero(self.dim(n - 1), self.dim(n), self.field)
            for i in range(n + 1):
                M = M + self.face(n, i).scale(self.field(-1) ** i)
            return M
        return self._memo(("b", n), make)

    def b_prime(self, n):
        def make():
            if n == 0:
                return SparseMatrix.zero(0, self.dim(0), self.field)
            M = SparseMatrix.zero(self.dim(n - 1), self.dim(n), self.field)
            for i in range(n):
                M = M + self.face(n, i).scale(self.field(-1) ** i)
            return M
        return self._memo(("b'", n), make)

    def norm(self, n):
        def make():
            M = SparseMatrix.zero(self.dim(n), self.dim(n), self.field)
            P = SparseMatrix.identity(self.dim(n), self.field)
            for _ in range(n + 1):
                M = M + P
                P = self.t(n) @ P
            return M
        return self._memo(("N", n), make)

    # -- identities -----------------------------------------------------------
    def check_b_squared(self):
        return all((self.b(n - 1) @ self.b(n)).is_zero() for n in range(2, self.top + 1))

    def check_matrix_identities(self):
        """Simplicial and cyclic identities as matrix equations at every built level."""
        ok = True
        for n in range(1, self.top + 1):
            for j in range(n + 1):
                for i in range(j):
                    if n >= 2:
                        ok &= self.face(n - 1, i) @ self.face(n, j) == self.face(n - 1, j - 1) @ self.face(n, i)
            ok &= _power(self.tau(n), n + 1) == SparseMatrix.identity(self.dim(n), self.field)
            for i in range(1, n + 1):
                ok &= self.face(n, i) @ self.tau(n) == self.tau(n - 1) @ self.face(n, i - 1)
            ok &= self.face(n, 0) @ self.tau(n) == self.face(n, n)
        for n in range(0, self.top):
            for i in range(n + 1):
                for j in range(n + 2):
                    di = self.face(n + 1, j)
                    if j < i:
                        rhs = self.degeneracy(n - 1, i - 1) @ self.face(n, j) if n >= 1 else None
                    elif j in (i, i + 1):
                        rhs = SparseMatrix.identity(self.dim(n), self.field)
                    else:
                        rhs = self.degeneracy(n - 1, i) @ self.face(n, j - 1) if n >= 1 else None
                    if rhs is not None:
                        ok &= di @ self.degeneracy(n, i) == rhs
        return bool(ok)

    def check_symbolic_identities(self, n=None):
        """Simplicial identities as ring-map equalities on generators (no bases needed)."""
        return check_symbolic_identities(self.spec, n or self.top)


def _power(M, k):
    P = SparseMatrix.identity(M.nrows, M.field)
    for _ in range(k):
        P = M @ P
    return P


def _maps_equal(f_images, g_images, level):
    for a, b in zip(f_images, g_images):
        diff = p_sub(a, b)
        if diff and level.unit_gb.reduce(diff) and level.gb.reduce(diff):
            return False
    return True


def check_symbolic_identities(spec, n):
    """d_i d_j = d_{j-1} d_i (i < j) and d_i s_j identities on generators, up to level n."""
    ok = True
    for m in range(2, n + 1):
        for j in range(m + 1):
            for i in range(j):
                lhs = face(spec, m, j).compose_images(face(spec, m - 1, i))
                rhs = face(spec, m, i).compose_images(face(spec, m - 1, j - 1))
                ok &= _maps_equal(lhs, rhs, level_ring(spec, m - 2))
    for m in range(0, n):
        for i in range(m + 1):
            for j in range(m + 2):
                lhs = degeneracy(spec, m, i).compose_images(face(spec, m + 1, j))
                if j in (i, i + 1):
                    rhs = [level_ring(spec, m).ring.var(v) for v in level_ring(spec, m).ring.names]
                elif m == 0:
                    continue
                elif j < i:
                    rhs = face(spec, m, j).compose_images(degeneracy(spec, m - 1, i - 1))
                else:
                    rhs = face(spec, m, j - 1).compose_images(degeneracy(spec, m - 1, i))
                ok &= _maps_equal(lhs, rhs, level_ring(spec, m))
    for m in range(1, n + 1):
        t = cyclic_operator(spec, m)
        imgs = t.images
        for _ in range(m):
            imgs = [t.raw(f) for f in imgs]
        ident = [level_ring(spec, m).ring.var(v) for v in level_ring(spec, m).ring.names]
        ok &= _maps_equal(imgs, ident, level_ring(spec, m))
    return bool(ok)


# ---------------------------------------------------------------------------
# the normalized complex, Connes' operator and products

class NormalizedComplex:
    """C-bar_n = C_n / sum of degeneracy images, with b, B and homology."""

    def __init__(self, theta):
        self.theta = theta
        self.field = theta.field
        self.top = theta.top
        self.quot = []
        for n in range(self.top + 1):
            span = []
            if n >= 1:
                for i in range(n):
                    span.extend(theta.degeneracy(n - 1, i).columns())
            self.quot.append(QuotientSpace(self.field, theta.dim(n), span))
        self._b = {}
        self._hom = {}

    def dim(self, n):
        return self.quot[n].dim

    def lift(self, n, qvec):
        return self.quot[n].lift(qvec)

    def project(self, n, vec):
        return self.quot[n].project(vec)

    def induced(self, n_src, n_tgt, M):
        """Matrix on normalized quotients induced by a map C_{n_src} -> C_{n_tgt}."""
        Qs, Qt = self.quot[n_src], self.quot[n_tgt]
        cols = []
        for j in Qs.basis_indices:
            cols.append(Qt.project(M.apply({j: self.field.one})))
        return SparseMatrix.from_columns(cols, Qt.dim, self.field)

    def b(self, n):
        if n not in self._b:
            if n == 0:
                self._b[n] = SparseMatrix.zero(0, self.dim(0), self.field)
            else:
                self._b[n] = self.induced(n, n - 1, self.theta.b(n))
        return self._b[n]

    def B(self, n):
        """Connes' operator C-bar_n -> C-bar_{n+1}: extra degeneracy after the norm."""
        return self.induced(n, n + 1, self.theta.extra(n) @ self.theta.norm(n))

    def homology(self, n):
        if n not in self._hom:
            if n + 1 > self.top:
                raise ValueError(f"need level {n + 1} to compute HH_{n}")
            f = self.b(n + 1)
            g = self.b(n)
            cycles = row_reduce(g).kernel_sparse if g.nrows else [{j: self.field.one} for j in range(g.ncols)]
            self._hom[n] = Homology(self.field, self.dim(n), f.columns(), cycles)
        return self._hom[n]

    def hh_dims(self, N):
        return {n: self.homology(n).dim for n in range(N + 1)}

    def operator_on_homology(self, n, M):
        """Matrix (rows = output coords) of a chain endomorphism of C_n on HH_n."""
        H = self.homology(n)
        cols = []
        for z in H.representatives:
            img = self.project(n, M.apply(self.lift(n, z)))
            cols.append(H.coords(img))
        return [[cols[j][i] for j in range(len(cols))] for i in range(H.dim)]

    def shuffle(self, p, x, q, y):
        """Shuffle product of chains x in C_p and y in C_q (vectors on level bases)."""
        spec = self.theta.spec
        n = p + q
        L = level_ring(spec, n)
        i1 = point_map(spec, p, n, list(range(p + 1)))
        i2 = point_map(spec, q, n, [0] + [p + a for a in range(1, q + 1)])
        Lp, Lq = level_ring(spec, p), level_ring(spec, q)
        one = self.field.one
        fx = {}
        for j, c in x.items():
            fx = p_add(fx, p_scale(i1.raw({Lp.basis[j]: one}), c))
        fy = {}
        for j, c in y.items():
            fy = p_add(fy, p_scale(i2.raw({Lq.basis[j]: one}), c))
        prod_ = L.reduce(p_mul(fx, fy))
        out = {}
        for word in product(range(2), repeat=n):
            if word.count(0) != p:
                continue
            sigma = _shuffle_from_word(word, (p, q))
            sgn = self.field(_perm_sign(sigma))
            img = L.coords(permutation_map(spec, n, sigma).raw(prod_))
            for k, c in img.items():
                v = out.get(k, 0) + sgn * c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out


def _shuffle_from_word(word, sizes):
    """The permutation sending block elements, in order, to the positions labelled by ``word``.

    Returns sigma as a tuple with ``sigma[i-1]`` the target of position i.
    """
    starts = [0]
    for s in sizes[:-1]:
        starts.append(starts[-1] + s)
    counters = list(starts)
    sigma = [0] * len(word)
    for pos, blk in enumerate(word):
        src = counters[blk]
        counters[blk] += 1
        sigma[src] = pos + 1
    return tuple(sigma)


def _perm_sign(sigma):
    s = 1
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                s = -s
    return s


def theta_complex(spec, n_max):
    return ThetaComplex(spec, n_max)


def hh_theta(spec, N):
    """HH_n, n <= N, as homology of the normalized Theta complex."""
    th = ThetaComplex(spec, N + 1)
    nc = NormalizedComplex(th)
    out = HochschildClasses("theta", nc.hh_dims(N))
    return out


def connes_B(spec, N):
    """Matrices of B on the normalized complex up to level N, with B^2 = 0 and bB + Bb = 0 checked."""
    th = ThetaComplex(spec, N + 2)
    nc = NormalizedComplex(th)
    Bs = {n: nc.B(n) for n in range(N + 1)}
    ok_sq = all((Bs[n + 1] @ Bs[n]).is_zero() for n in range(N))
    ok_anti = True
    for n in range(N + 1):
        lhs = nc.b(n + 1) @ Bs[n]
        if n >= 1:
            lhs = lhs + Bs[n - 1] @ nc.b(n)
        ok_anti &= lhs.is_zero()
    return nc, Bs, {"B_squared": ok_sq, "bB_plus_Bb": bool(ok_anti)}


# ---------------------------------------------------------------------------
# HKR

@dataclass
class HKRResult:
    well_defined: bool
    injective: dict
    surjective: dict
    omega_dims: dict
    hh_dims: dict

    @property
    def iso(self):
        return self.well_defined and all(self.injective.values()) and all(self.surjective.values())


def hkr_images(spec):
    """epsilon_1 on generators: dx -> x^{(1)} - x^{(0)}, dlog p -> u^{[p]} - 1."""
    D = log_diagonal_ring(spec)
    R = D.ring
    out = []
    for v in spec.total_variables:
        out.append(p_sub(R.var(_copy_name(v, 1)), R.var(_copy_name(v, 0))))
    for j in range(spec.P.ngens):
        out.append(p_sub(D.unit_class(j), R.one()))
    return out


def _ideal_square_gb(spec):
    D = log_diagonal_ring(spec)
    gens = D.diagonal_generators
    sq = [p_mul(a, b) for i, a in enumerate(gens) for b in gens[i:]]
    return groebner_basis(D.ring, D.level.relations + sq, spec.budget)


def hkr_map(spec, n=1, degree_box=None):
    """The map Lambda^n Omega^1 -> HH_n: well-definedness plus degreewise verdicts.

    For n = 1 the map into ``I/I^2`` is written down explicitly and its rank
    computed slice by slice.  For n >= 2 the verdict compares dimensions of
    ``Lambda^n Omega^1`` with HH_n from the resolution backend.
    """
    D = log_diagonal_ring(spec)
    R = D.ring
    omega = log_differentials(spec)
    imgs = hkr_images(spec)
    sq = _ideal_square_gb(spec)
    for col, fam in zip(omega.relations, omega.families):
        total = {}
        for pos, f in col.items():
            total = p_add(total, p_mul(D.left(f), imgs[pos]))
        if sq.reduce(total):
            raise RelationNotKilled(f"an Omega^1 relation of family ({fam}) does not map into I^2")
    slices = _slices(spec, degree_box)
    hh = hh_resolution(spec, max(n, 1), degree_box)
    om = omega_hilbert(spec, n, [d for d in slices if d is not None] or [0])
    if not spec.graded:
        om = {None: om[0]}

    def as_map(x):
        return x if spec.graded else {None: x}

    hh_n = as_map(hh.dims[n])
    inj, surj = {}, {}
    if n == 1:
        res = resolution_of_diagonal(spec, 2)
        gens = res.differentials[0] if res.differentials else []  # columns {0: g}
        gpolys = [c.get(0, {}) for c in gens]
        coeff_cols = []
        for f in imgs:
            c = lift(f, gpolys, D.level.gb, R, spec.budget)
            if c is None:
                raise RelationNotKilled("an HKR image is not in the diagonal ideal")
            coeff_cols.append({j: g for j, g in enumerate(c) if g})
        r1 = res.ranks[1] if len(res.ranks) > 1 else 0
        sh1 = res.shifts[1] if spec.graded and len(res.shifts) > 1 else ()
        r2 = res.ranks[2] if len(res.ranks) > 2 else 0
        sh2 = res.shifts[2] if spec.graded and len(res.shifts) > 2 else ()
        for d in slices:
            # I/I^2 in this slice: A^{r1} / eps(d_2)
            tgt = _free_basis(spec, sh1, r1, d)
            index = {b: k for k, b in enumerate(tgt)}
            rels = []
            if r2:
                M, _ = _tensored_matrix(spec, D, res.differentials[1], sh2, sh1, r2, r1, d)
                rels = M.columns()
            Qt = QuotientSpace(spec.field, len(tgt), rels)
            # Omega^1 in this slice: free module on generators modulo relations
            src = _free_basis(spec, omega.shifts, omega.rank, d)
            sidx = {b: k for k, b in enumerate(src)}
            src_rels = []
            one = spec.field.one
            rel_degs = omega.module().relation_shifts() if spec.graded else None
            for jr, col in enumerate(omega.relations):
                if d is None:
                    ms = spec.A.basis(spec.budget)
                else:
                    if rel_degs[jr] is None:
                        continue
                    ms = spec.A.basis_in_degree(d - rel_degs[jr], spec.budget)
                for m in ms:
                    vec = {}
                    for row, f in col.items():
                        g = spec.A.reduce(p_mul(f, {m: one}))
                        for mm, c in g.items():
                            k = sidx[(row, mm)]
                            vec[k] = vec.get(k, 0) + c
                    src_rels.append({k: v for k, v in vec.items() if v})
            Qs = QuotientSpace(spec.field, len(src), src_rels)
            cols = []
            for k in Qs.basis_indices:
                pos, m = src[k]
                vec = {}
                for j, c in coeff_cols[pos].items():
                    g = spec.A.reduce(p_mul(D.augment(c), {m: one}))
                    for mm, v in g.items():
                        kk = index[(j, mm)]
                        vec[kk] = vec.get(kk, 0) + v
                cols.append(Qt.project({kk: v for kk, v in vec.items() if v}))
            rk = mat_rank(SparseMatrix.from_columns(cols, Qt.dim, spec.field)) if cols else 0
            inj[d] = rk == Qs.dim
            surj[d] = rk == Qt.dim
    else:
        for d in slices:
            inj[d] = surj[d] = om[d] == hh_n[d]
    key = (lambda d: d) if spec.graded else (lambda d: 0)
    return HKRResult(True, {key(d): v for d, v in inj.items()}, {key(d): v for d, v in surj.items()},
                     {key(d): v for d, v in om.items()}, {key(d): v for d, v in hh_n.items()})
