"""Buchberger Groebner bases for ideals and submodules of free modules.

Module elements are dicts ``{(position, exponent tuple): coefficient}``; an
ideal is the rank-one case.  Pair handling uses the Gebauer-Moeller update;
the product criterion is only applied in the ideal case.

Kernels of maps between free modules over a quotient ring ``S/K`` are found
by elimination: the graph ``{(phi_j, e_j)}`` together with ``K`` on the target
is taken under an order in which target positions dominate, and the elements
whose leading term lies on the tag side carry the relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import BudgetExceeded, NotFiniteDimensional, NotGraded
from .polys import (
    PolyRing, Poly, m_div, m_divides, m_lcm, m_mul, p_add, p_mul, p_scale, p_sub,
)


@dataclass
class Budget:
    """Explicit resource caps; exceeding any raises :class:`BudgetExceeded`."""

    max_spairs: int = 200_000
    max_terms: int = 50_000
    max_degree: int = 200
    max_dim: int = 20_000
    max_basis: int = 5_000

    def update(self, **kw):
        for k, v in kw.items():
            if not hasattr(self, k):
                raise KeyError(f"unknown budget key {k!r}")
            setattr(self, k, int(v))
        return self

    def as_dict(self):
        return {k: getattr(self, k) for k in ("max_spairs", "max_terms", "max_degree", "max_dim", "max_basis")}


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# module orders

class ModuleOrder:
    """Order on module terms ``(pos, mono)``.

    ``kind='top'`` compares monomials first, ``'pot'`` positions first.  An
    optional ``pos_block`` assigns each position a block number compared
    before anything else (higher block = larger).  Within the position
    comparison, a lower index counts as larger unless ``pos_rank`` says
    otherwise.
    """

    def __init__(self, ring, kind="top", pos_rank=None, pos_block=None):
        if kind not in ("top", "pot"):
            raise ValueError("module order kind must be 'top' or 'pot'")
        self.ring = ring
        self.kind = kind
        self.pos_rank = pos_rank
        self.pos_block = pos_block
        mkey = ring.key
        pr = (lambda p: pos_rank[p]) if pos_rank is not None else (lambda p: -p)
        pb = (lambda p: pos_block[p]) if pos_block is not None else (lambda p: 0)
        if kind == "top":
            self.key = lambda t: (pb(t[0]), mkey(t[1]), pr(t[0]))
        else:
            self.key = lambda t: (pb(t[0]), pr(t[0]), mkey(t[1]))


def to_module(f, pos=0):
    return {(pos, m): c for m, c in f.items()}


def from_module(v, pos=0):
    return {m: c for (p, m), c in v.items() if p == pos}


def vec_to_module(vec):
    """``{pos: polydict}`` to a module element."""
    out = {}
    for pos, f in vec.items():
        for m, c in f.items():
            out[(pos, m)] = c
    return out


def module_to_vec(v):
    out = {}
    for (pos, m), c in v.items():
        out.setdefault(pos, {})[m] = c
    return out


def mt_mul(v, mono, c):
    if not c:
        return {}
    return {(p, m_mul(m, mono)): x * c for (p, m), x in v.items()}


def mp_mul(v, f):
    """Module element times polynomial."""
    out = {}
    for mono, c in f.items():
        out = p_add(out, mt_mul(v, mono, c))
    return out


# ---------------------------------------------------------------------------
# the engine

class _Engine:
    def __init__(self, ring, order, budget, ideal_case):
        self.ring = ring
        self.order = order
        self.key = order.key
        self.field = ring.field
        self.budget = budget or DEFAULT_BUDGET
        self.ideal_case = ideal_case
        self.polys = []
        self.lts = []

    def lt(self, f):
        return max(f, key=self.key)

    def monic(self, f):
        t = self.lt(f)
        c = f[t]
        if c == 1:
            return f
        inv = self.field.one / c
        return {k: v * inv for k, v in f.items()}

    def check_size(self, f):
        if len(f) > self.budget.max_terms:
            raise BudgetExceeded(f"polynomial with {len(f)} terms exceeds max_terms={self.budget.max_terms}")

    def find_divisor(self, t, active):
        pos, mono = t
        lts = self.lts
        for j in active:
            lp, lm = lts[j]
            if lp == pos and m_divides(lm, mono):
                return j
        return None

    def reduce(self, f, active, track=False, full=True):
        """Reduce f by the elements ``active``; returns (remainder, quotients)."""
        f = dict(f)
        rem = {}
        quo = {} if track else None
        key = self.key
        polys, lts = self.polys, self.lts
        while f:
            t = max(f, key=key)
            c = f[t]
            j = self.find_divisor(t, active)
            if j is None:
                if not full:
                    rem.update(f)
                    break
                rem[t] = c
                del f[t]
                continue
            q = m_div(t[1], lts[j][1])
            g = polys[j]
            f = p_sub(f, mt_mul(g, q, c / g[lts[j]]))
            self.check_size(f)
            if track:
                quo[j] = p_add(quo.get(j, {}), {q: c / g[lts[j]]})
        return rem, quo

    def add(self, f):
        f = self.monic(f)
        self.polys.append(f)
        self.lts.append(self.lt(f))
        if len(self.polys) > self.budget.max_basis:
            raise BudgetExceeded(f"Groebner basis grew past max_basis={self.budget.max_basis}")
        return len(self.polys) - 1

    def lcm_term(self, i, j):
        return (self.lts[i][0], m_lcm(self.lts[i][1], self.lts[j][1]))

    def spoly(self, i, j):
        (p, a), (_, b) = self.lts[i], self.lts[j]
        m = m_lcm(a, b)
        return p_sub(mt_mul(self.polys[i], m_div(m, a), self.field.one),
                     mt_mul(self.polys[j], m_div(m, b), self.field.one))

    def coprime(self, i, j):
        a, b = self.lts[i][1], self.lts[j][1]
        return all(x == 0 or y == 0 for x, y in zip(a, b))

    def update(self, G, B, h):
        lts = self.lts
        hp, hm = lts[h]
        C = [g for g in G if lts[g][0] == hp]
        D = []
        while C:
            g = C.pop(0)
            lcm_hg = m_lcm(hm, lts[g][1])
            if self.ideal_case and self.coprime(h, g):
                D.append(g)
                continue
            dominated = False
            for o in C + D:
                if m_divides(m_lcm(hm, lts[o][1]), lcm_hg):
                    dominated = True
                    break
            if not dominated:
                D.append(g)
        E = [g for g in D if not (self.ideal_case and self.coprime(h, g))]
        B_new = []
        for (i, j) in B:
            if lts[i][0] != hp:
                B_new.append((i, j))
                continue
            lij = m_lcm(lts[i][1], lts[j][1])
            if (m_divides(hm, lij) and m_lcm(lts[i][1], hm) != lij and m_lcm(lts[j][1], hm) != lij):
                continue
            B_new.append((i, j))
        B_new.extend((g, h) for g in E)
        G_new = [g for g in G if not (lts[g][0] == hp and m_divides(hm, lts[g][1]))]
        G_new.append(h)
        return G_new, B_new

    def run(self, gens):
        gens = [g for g in gens if g]
        gens.sort(key=self.lt)
        G, B = [], []
        for f in gens:
            r, _ = self.reduce(f, G)
            if r:
                h = self.add(r)
                G, B = self.update(G, B, h)
        count = 0
        key = self.key
        while B:
            best = min(range(len(B)), key=lambda k: (key(self.lcm_term(*B[k])), B[k]))
            i, j = B.pop(best)
            count += 1
            if count > self.budget.max_spairs:
                raise BudgetExceeded(f"S-pair count exceeds max_spairs={self.budget.max_spairs}")
            s = self.spoly(i, j)
            r, _ = self.reduce(s, G)
            if r:
                h = self.add(r)
                G, B = self.update(G, B, h)
        # reduced basis
        G = sorted(G, key=lambda g: key(self.lts[g]))
        out = []
        for g in G:
            others = [o for o in G if o != g]
            t = self.lts[g]
            tail = {k: v for k, v in self.polys[g].items() if k != t}
            r, _ = self.reduce(tail, others)
            r[t] = self.polys[g][t]
            out.append(self.monic(r))
        self.pairs_processed = count
        return out


# ---------------------------------------------------------------------------
# ideals

class GroebnerBasis:
    """A reduced Groebner basis of an ideal, sorted by increasing leading monomial."""

    def __init__(self, ring, polys, pairs=0):
        self.ring = ring
        self.polys = polys
        self.lms = [ring.lm(f) for f in polys]
        self.pairs_processed = pairs
        self._engine = _Engine(ring, ModuleOrder(ring), None, True)
        for f in polys:
            self._engine.polys.append(to_module(f))
            self._engine.lts.append((0, ring.lm(f)))
        self._active = list(range(len(polys)))

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def reduce(self, f):
        if isinstance(f, Poly):
            return Poly(self.ring, self.reduce(f.terms))
        if not f:
            return {}
        r, _ = self._engine.reduce(to_module(f), self._active)
        return from_module(r)

    def contains(self, f):
        if isinstance(f, Poly):
            f = f.terms
        return not self.reduce(f)

    def is_unit_ideal(self):
        return any(not any(m) for m in self.lms)

    def is_standard(self, mono):
        return not any(m_divides(lm, mono) for lm in self.lms)

    def __repr__(self):
        return "[" + ", ".join(self.ring.to_str(f) for f in self.polys) + "]"

    def as_polys(self):
        return [Poly(self.ring, f) for f in self.polys]


def groebner_basis(ring, gens, budget=None):
    """Reduced Groebner basis of the ideal generated by ``gens`` and the partner relations."""
    gens = [g.terms if isinstance(g, Poly) else g for g in gens]
    gens = [dict(g) for g in gens if g] + ring.partner_relations()
    eng = _Engine(ring, ModuleOrder(ring), budget, True)
    out = eng.run([to_module(g) for g in gens])
    return GroebnerBasis(ring, [from_module(v) for v in out], eng.pairs_processed)


def normal_form(f, gb):
    return gb.reduce(f)


class Ideal:
    """An ideal of a :class:`PolyRing` with a cached Groebner basis."""

    def __init__(self, ring, generators, budget=None):
        self.ring = ring
        self.generators = [g.terms if isinstance(g, Poly) else dict(g) for g in generators]
        self.budget = budget
        self._gb = None

    def groebner(self):
        if self._gb is None:
            self._gb = groebner_basis(self.ring, self.generators, self.budget)
        return self._gb

    def contains(self, f):
        return self.groebner().contains(f)

    def is_homogeneous(self):
        return all(self.ring.is_homogeneous(g) for g in self.generators)


def spoly(f, g, ring):
    """S-polynomial of two polynomials (raw dicts)."""
    a, b = ring.lm(f), ring.lm(g)
    m = m_lcm(a, b)
    one = ring.field.one
    return p_sub(p_scale({m_mul(k, m_div(m, a)): v for k, v in f.items()}, one / f[a]),
                 p_scale({m_mul(k, m_div(m, b)): v for k, v in g.items()}, one / g[b]))


def s_pairs_reduce_to_zero(gb):
    """Buchberger criterion: every S-polynomial of the basis reduces to zero."""
    for f, g in combinations(gb.polys, 2):
        if gb.reduce(spoly(f, g, gb.ring)):
            return False
    return True


# ---------------------------------------------------------------------------
# submodules

class ModuleGB:
    """Groebner basis of a submodule of a free module ``S^rank``."""

    def __init__(self, ring, rank, elements, order=None, budget=None):
        self.ring = ring
        self.rank = rank
        self.order = order or ModuleOrder(ring)
        eng = _Engine(ring, self.order, budget, rank == 1)
        self.elements = eng.run([dict(e) for e in elements if e])
        self.pairs_processed = eng.pairs_processed
        self._engine = _Engine(ring, self.order, budget, rank == 1)
        for e in self.elements:
            self._engine.polys.append(e)
            self._engine.lts.append(self._engine.lt(e))
        self._active = list(range(len(self.elements)))

    def lead_terms(self):
        return list(self._engine.lts)

    def reduce(self, v):
        if not v:
            return {}
        return self._engine.reduce(v, self._active)[0]

    def reduce_tracked(self, v):
        return self._engine.reduce(v, self._active, track=True)

    def contains(self, v):
        return not self.reduce(v)


def module_gb(ring, rank, elements, order=None, budget=None, quotient=None):
    """Module GB of ``elements`` plus ``K * e_i`` for each position when a quotient GB is given."""
    elements = [dict(e) for e in elements]
    extra = []
    if quotient is not None:
        for pos in range(rank):
            for k in quotient.polys:
                extra.append(to_module(k, pos))
    return ModuleGB(ring, rank, elements + extra, order, budget)


def syzygies(gb_elements, ring, budget=None):
    """Schreyer syzygies of a Groebner basis (given as raw polynomial dicts).

    Returns a list of vectors ``{index: polydict}`` generating the syzygy module
    of the basis; each one is checked to evaluate to zero.
    """
    polys = [dict(g) for g in gb_elements]
    eng = _Engine(ring, ModuleOrder(ring), budget, True)
    for f in polys:
        eng.polys.append(to_module(f))
        eng.lts.append((0, ring.lm(f)))
    active = list(range(len(polys)))
    out = []
    for i, j in combinations(active, 2):
        a, b = eng.lts[i][1], eng.lts[j][1]
        m = m_lcm(a, b)
        ca = eng.polys[i][eng.lts[i]]
        cb = eng.polys[j][eng.lts[j]]
        one = ring.field.one
        s = p_sub(mt_mul(eng.polys[i], m_div(m, a), one / ca), mt_mul(eng.polys[j], m_div(m, b), one / cb))
        r, quo = eng.reduce(s, active, track=True)
        if r:
            raise ValueError("input is not a Groebner basis")
        vec = {i: {m_div(m, a): one / ca}}
        vec[j] = p_sub(vec.get(j, {}), {m_div(m, b): one / cb})
        for k, q in quo.items():
            vec[k] = p_sub(vec.get(k, {}), q)
        vec = {k: v for k, v in vec.items() if v}
        if vec:
            out.append(vec)
    for vec in out:
        total = {}
        for k, q in vec.items():
            total = p_add(total, p_mul(q, polys[k]))
        if total:
            raise AssertionError("Schreyer syzygy does not evaluate to zero")
    return out


# ---------------------------------------------------------------------------
# quotient rings

class QuotientRing:
    """``S / K`` for a polynomial ring S and a Groebner basis of K."""

    def __init__(self, ring, gb):
        self.ring = ring
        self.gb = gb
        self._finite = None
        self._basis = None
        self._by_degree = {}

    @classmethod
    def from_generators(cls, ring, gens, budget=None):
        return cls(ring, groebner_basis(ring, gens, budget))

    def reduce(self, f):
        return self.gb.reduce(f)

    def is_finite(self):
        """Finite-dimensional iff every variable has a pure power among the leading monomials."""
        if self._finite is None:
            n = self.ring.nvars
            if self.gb.is_unit_ideal():
                self._finite = True
            else:
                have = set()
                for lm in self.gb.lms:
                    nz = [i for i, e in enumerate(lm) if e]
                    if len(nz) == 1:
                        have.add(nz[0])
                self._finite = len(have) == n
        return self._finite

    def basis(self, budget=None):
        """All standard monomials (finite-dimensional case), sorted ascending by the order."""
        if self._basis is None:
            if not self.is_finite():
                raise NotFiniteDimensional("quotient ring is not finite-dimensional")
            limit = (budget or DEFAULT_BUDGET).max_dim
            if self.gb.is_unit_ideal():
                self._basis = []
                return self._basis
            n = self.ring.nvars
            seen = {self.ring.zero_mono}
            frontier = [self.ring.zero_mono]
            while frontier:
                nxt = []
                for m in frontier:
                    for i in range(n):
                        e = list(m)
                        e[i] += 1
                        e = tuple(e)
                        if e not in seen and self.gb.is_standard(e):
                            seen.add(e)
                            nxt.append(e)
                if len(seen) > limit:
                    raise BudgetExceeded(f"quotient dimension exceeds max_dim={limit}")
                frontier = nxt
            self._basis = sorted(seen, key=self.ring.key)
        return self._basis

    def basis_in_degree(self, d, budget=None):
        """Standard monomials of weighted degree d."""
        if d in self._by_degree:
            return self._by_degree[d]
        ring = self.ring
        if self.is_finite():
            out = [m for m in self.basis(budget) if ring.degree(m) == d]
        else:
            w = ring.weights if ring.weights is not None else (1,) * ring.nvars
            if any(x <= 0 for x in w):
                raise NotGraded("degree pieces are infinite: weights must be positive or the ring finite-dimensional")
            out = []
            n = ring.nvars

            def rec(i, rem, cur):
                if i == n:
                    if rem == 0:
                        m = tuple(cur)
                        if self.gb.is_standard(m):
                            out.append(m)
                    return
                e = 0
                while e * w[i] <= rem:
                    cur.append(e)
                    rec(i + 1, rem - e * w[i], cur)
                    cur.pop()
                    e += 1
            if d >= 0:
                rec(0, d, [])
            out.sort(key=ring.key)
        self._by_degree[d] = out
        return out

    def coords(self, f, basis_index):
        """Coordinates of the normal form of f in a monomial basis index ``{mono: i}``."""
        r = self.reduce(f)
        out = {}
        for m, c in r.items():
            out[basis_index[m]] = c
        return out


# ---------------------------------------------------------------------------
# finitely presented modules, kernels and resolutions

@dataclass
class FPModule:
    """``coker(R^m -> R^rank)`` over ``R = ring / quotient``.

    ``relations`` are columns ``{row: polydict}``; ``shifts`` (optional) are
    the degrees of the free generators.
    """

    ring: PolyRing
    quotient: GroebnerBasis
    rank: int
    relations: list
    shifts: tuple | None = None

    def relation_shifts(self):
        return column_degrees(self.ring, self.relations, self.shifts)


def column_degrees(ring, columns, row_shifts):
    """Degree of each homogeneous column given the row shifts; None for zero columns."""
    if row_shifts is None:
        return None
    out = []
    for col in columns:
        deg = None
        for row, f in col.items():
            for m in f:
                d = ring.degree(m) + row_shifts[row]
                if deg is None:
                    deg = d
                elif deg != d:
                    raise NotGraded("presentation column is not homogeneous")
        out.append(deg)
    return out


def reduce_vec(vec, quotient):
    out = {}
    for k, f in vec.items():
        r = quotient.reduce(f)
        if r:
            out[k] = r
    return out


def quotient_kernel(ring, quotient, columns, nrows, budget=None):
    """Generators of ``{a in R^m : sum a_j columns[j] = 0}`` over ``R = ring/quotient``.

    Columns are ``{row: polydict}``.  Returns vectors ``{j: polydict}``
    already reduced modulo the quotient and with zero vectors removed.
    """
    m = len(columns)
    if m == 0:
        return []
    npos = nrows + m
    block = [1] * nrows + [0] * m
    order = ModuleOrder(ring, "top", pos_block=block)
    elems = []
    for j, col in enumerate(columns):
        v = vec_to_module(col)
        v[(nrows + j, ring.zero_mono)] = ring.field.one
        elems.append(v)
    for pos in range(nrows):
        for k in quotient.polys:
            elems.append(to_module(k, pos))
    gb = ModuleGB(ring, npos, elems, order, budget)
    out = []
    for e in gb.elements:
        lt = max(e, key=order.key)
        if lt[0] < nrows:
            continue
        vec = {}
        for (p, mono), c in e.items():
            if p < nrows:
                raise AssertionError("elimination left a target component")
            vec.setdefault(p - nrows, {})[mono] = c
        vec = reduce_vec(vec, quotient)
        if vec:
            out.append(vec)
    return out


def lift(f, gens, quotient, ring, budget=None):
    """Coefficients c with ``f = sum c_j gens[j]`` modulo the quotient, or None."""
    cols = [{0: g} for g in gens]
    m = len(gens)
    order = ModuleOrder(ring, "top", pos_block=[1] + [0] * m)
    elems = []
    for j, col in enumerate(cols):
        v = vec_to_module(col)
        v[(1 + j, ring.zero_mono)] = ring.field.one
        elems.append(v)
    for k in quotient.polys:
        elems.append(to_module(k, 0))
    gb = ModuleGB(ring, 1 + m, elems, order, budget)
    r = gb.reduce(to_module(f, 0))
    if any(p == 0 for (p, _) in r):
        return None
    coeffs = {}
    for (p, mono), c in r.items():
        coeffs.setdefault(p - 1, {})[mono] = -c
    return [quotient.reduce(coeffs.get(j, {})) for j in range(m)]


def submodule_gb(ring, quotient, rank, vectors, budget=None, order=None):
    return module_gb(ring, rank, [vec_to_module(v) for v in vectors], order, budget, quotient)


def prune_generators(ring, quotient, rank, vectors, shifts=None, budget=None):
    """Drop generators lying in the submodule spanned by the others (greedy).

    Candidates are examined from the highest degree (or last) downwards so the
    kept set is deterministic.
    """
    vecs = [v for v in (reduce_vec(v, quotient) for v in vectors) if v]
    # drop exact duplicates up to scalars
    uniq = []
    seen = set()
    for v in vecs:
        t = vec_to_module(v)
        lt = max(t, key=ModuleOrder(ring).key)
        inv = ring.field.one / t[lt]
        sig = frozenset((k, c * inv) for k, c in t.items())
        if sig not in seen:
            seen.add(sig)
            uniq.append(v)
    vecs = uniq
    if shifts is not None:
        degs = column_degrees(ring, vecs, shifts)
        idx = sorted(range(len(vecs)), key=lambda i: (degs[i], i))
    else:
        idx = list(range(len(vecs)))
    keep = list(idx)
    for i in reversed(idx):
        others = [vecs[j] for j in keep if j != i]
        if not others:
            continue
        gb = submodule_gb(ring, quotient, rank, others, budget)
        if gb.contains(vec_to_module(vecs[i])):
            keep.remove(i)
    keep.sort()
    return [vecs[i] for i in keep]


@dataclass
class FreeResolution:
    """Free resolution ``... -> F_2 -> F_1 -> F_0`` over ``ring/quotient``.

    ``differentials[i]`` is the list of columns of ``d_{i+1}: F_{i+1} -> F_i``.
    """

    ring: PolyRing
    quotient: GroebnerBasis
    ranks: list
    differentials: list
    shifts: list = dc_field(default_factory=list)
    complete: bool = False

    @property
    def length(self):
        return len(self.differentials)

    def check_d_squared(self):
        """Every composite ``d_i d_{i+1}`` vanishes modulo the quotient."""
        for i in range(1, len(self.differentials)):
            left, right = self.differentials[i - 1], self.differentials[i]
            for col in right:
                total = {}
                for j, f in col.items():
                    for row, g in left[j].items():
                        total[row] = p_add(total.get(row, {}), p_mul(f, g))
                if reduce_vec(total, self.quotient):
                    return False
        return True

    def check_exactness(self, budget=None):
        """Exactness at F_1 .. F_{length-1}, by an independent kernel computation.

        The kernel of each differential is recomputed under a position-over-term
        order and each generator is tested for membership in the image of the
        next differential.
        """
        ring, K = self.ring, self.quotient
        for i in range(len(self.differentials) - 1):
            cols = self.differentials[i]
            nrows = self.ranks[i]
            ker = _kernel_pot(ring, K, cols, nrows, budget)
            img = submodule_gb(ring, K, self.ranks[i + 1], self.differentials[i + 1], budget)
            for v in ker:
                if not img.contains(vec_to_module(v)):
                    return False
        if self.complete and self.differentials:
            ker = _kernel_pot(ring, K, self.differentials[-1], self.ranks[len(self.differentials) - 1], budget)
            if ker:
                return False
        return True


def _kernel_pot(ring, quotient, columns, nrows, budget=None):
    m = len(columns)
    if m == 0:
        return []
    block = [1] * nrows + [0] * m
    order = ModuleOrder(ring, "pot", pos_block=block)
    elems = []
    for j, col in enumerate(columns):
        v = vec_to_module(col)
        v[(nrows + j, ring.zero_mono)] = ring.field.one
        elems.append(v)
    for pos in range(nrows):
        for k in quotient.polys:
            elems.append(to_module(k, pos))
    gb = ModuleGB(ring, nrows + m, elems, order, budget)
    out = []
    for e in gb.elements:
        lt = max(e, key=order.key)
        if lt[0] < nrows:
            continue
        vec = {}
        for (p, mono), c in e.items():
            vec.setdefault(p - nrows, {})[mono] = c
        vec = reduce_vec(vec, quotient)
        if vec:
            out.append(vec)
    return out


def free_resolution(M, N, budget=None):
    """Resolve ``M`` up to homological degree ``N`` (pruned kernel generators)."""
    ring, K = M.ring, M.quotient
    rels = prune_generators(ring, K, M.rank, M.relations, M.shifts, budget)
    ranks = [M.rank]
    diffs = []
    shifts = [tuple(M.shifts) if M.shifts is not None else None]
    current, nrows = rels, M.rank
    complete = False
    for _ in range(N):
        if not current:
            complete = True
            break
        diffs.append(current)
        ranks.append(len(current))
        degs = column_degrees(ring, current, shifts[-1])
        shifts.append(tuple(degs) if degs is not None else None)
        ker = quotient_kernel(ring, K, current, nrows, budget)
        ker = prune_generators(ring, K, len(current), ker, shifts[-1], budget)
        nrows = len(current)
        current = ker
    else:
        if not current:
            complete = True
    return FreeResolution(ring, K, ranks, diffs, shifts, complete)


def hilbert_function(M, degrees, budget=None):
    """Dimension of each requested graded piece of ``M`` (an :class:`FPModule`)."""
    if M.shifts is None:
        raise NotGraded("module has no grading")
    from .exactlin import SparseMatrix, rank as mat_rank
    Q = QuotientRing(M.ring, M.quotient)
    rel_degs = M.relation_shifts()
    out = {}
    for d in degrees:
        index = {}
        for i in range(M.rank):
            for mono in Q.basis_in_degree(d - M.shifts[i], budget):
                index[(i, mono)] = len(index)
        cols = []
        for j, col in enumerate(M.relations):
            if rel_degs[j] is None:
                continue
            for mono in Q.basis_in_degree(d - rel_degs[j], budget):
                vec = {}
                for row, f in col.items():
                    g = Q.reduce(p_mul(f, {mono: M.ring.field.one}))
                    for mm, c in g.items():
                        k = index[(row, mm)]
                        vec[k] = vec.get(k, 0) + c
                cols.append({k: v for k, v in vec.items() if v})
        r = mat_rank(SparseMatrix.from_columns(cols, len(index), M.ring.field)) if cols else 0
        out[d] = len(index) - r
    return out
