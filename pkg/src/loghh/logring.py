"""Charted log algebras, log differentials, exterior powers and log de Rham complexes."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations

from .errors import InvalidSpec, NotFramed, NotGraded, SchemaError
from .exactlin import SparseMatrix, complex_homology, rank as mat_rank
from .grobner import (
    DEFAULT_BUDGET, FPModule, ModuleOrder, QuotientRing, groebner_basis, hilbert_function, module_gb,
    reduce_vec, to_module, vec_to_module,
)
from .monoids import MonoidMap, chart_cokernel, relation_lattice, toric_ideal
from .polys import PARTNER_SUFFIX, PolyRing, p_add, p_mul, p_scale, p_sub

SEP = "__"


class LogRingSpec:
    """A base chart ``Q -> k_alg`` and a total chart ``P -> A`` with theta: Q -> P.

    ``A`` is presented over the union of base and total variables; base
    variables are constants for differentials and stay shared between the
    tensor factors of the diagonal constructions.
    """

    def __init__(self, field, base_monoid, base_variables, base_relations, base_chart,
                 total_monoid, theta_images, total_variables, total_relations, total_chart,
                 base_inverted=(), total_inverted=(), grading=None, budget=None, name=None):
        self.field = field
        self.name = name
        self.budget = budget or DEFAULT_BUDGET
        self.Q = base_monoid
        self.P = total_monoid
        for v in list(base_variables) + list(total_variables):
            if SEP in v or v.endswith(PARTNER_SUFFIX):
                raise SchemaError(f"variable name {v!r} may not contain {SEP!r} or end in {PARTNER_SUFFIX!r}")
        if set(base_variables) & set(total_variables):
            raise SchemaError("base and total variables overlap")
        self.base_variables = tuple(base_variables)
        self.total_variables = tuple(total_variables)
        self.base_inverted = tuple(base_inverted)
        self.total_inverted = tuple(total_inverted)
        self.grading = dict(grading) if grading is not None else None
        if self.grading is not None:
            for v in self.grading:
                if v not in base_variables and v not in total_variables:
                    raise SchemaError(f"grading names unknown variable {v!r}")
        self.theta = MonoidMap.from_vectors(base_monoid, total_monoid, theta_images)
        self.base_ring = PolyRing(field, base_variables, base_inverted, weights=self._weights(base_variables))
        self.ring = PolyRing(field, list(base_variables) + list(total_variables),
                             list(base_inverted) + list(total_inverted),
                             weights=self._weights(list(base_variables) + list(total_variables)))
        ctx = "base.relations"
        self.base_relations = [self.ring.parse(t, ctx).terms for t in base_relations]
        self.total_relations = [self.ring.parse(t, "total.relations").terms for t in total_relations]
        if len(base_chart) != base_monoid.ngens:
            raise SchemaError(f"base chart has {len(base_chart)} entries for {base_monoid.ngens} generators")
        if len(total_chart) != total_monoid.ngens:
            raise SchemaError(f"total chart has {len(total_chart)} entries for {total_monoid.ngens} generators")
        self.beta = [self.base_ring.parse(t, "base.chart").terms for t in base_chart]
        self.beta_A = [self.ring.parse(t, "base.chart").terms for t in base_chart]
        self.alpha = [self.ring.parse(t, "total.chart").terms for t in total_chart]
        self.raw = dict(base_relations=list(base_relations), base_chart=list(base_chart),
                        total_relations=list(total_relations), total_chart=list(total_chart))

    def _weights(self, names):
        if self.grading is None:
            return None
        return {v: int(self.grading.get(v, 0)) for v in names}

    @property
    def graded(self):
        return self.grading is not None

    @cached_property
    def relations(self):
        return self.base_relations + self.total_relations

    @cached_property
    def A(self):
        return QuotientRing(self.ring, groebner_basis(self.ring, self.relations, self.budget))

    @cached_property
    def G(self):
        return chart_cokernel(self.theta)

    @cached_property
    def total_indices(self):
        return [self.ring.index[v] for v in self.total_variables]

    def reduce(self, f):
        return self.A.reduce(f)


# ---------------------------------------------------------------------------
# validation

def validate_spec(s):
    """List of violated conditions (empty when the charts are consistent)."""
    out = []
    out += s.theta.check_well_defined()
    try:
        s.G
    except Exception as exc:  # NotInjective
        out.append(str(exc))
    A = s.A
    ring = s.ring
    # alpha and beta are monoid maps: the toric relations of P (resp. Q) must hold
    for name, monoid, images, red in (("alpha", s.P, s.alpha, A.reduce),
                                      ("beta", s.Q, s.beta_A, _base_reducer(s))):
        if monoid.ngens == 0:
            continue
        tring, binoms = toric_ideal(monoid, s.field, s.budget)
        for b in binoms:
            val = ring.substitute({m: c for m, c in b.items()}, images, ring)
            if red(val):
                out.append(f"{name} does not respect the monoid relation {tring.to_str(b)}")
    # chart square: alpha(theta(q)) = beta(q) in A
    for i, w in enumerate(s.theta.witnesses):
        img = ring.one()
        for c, a in zip(w, s.alpha):
            for _ in range(c):
                img = p_mul(img, a)
        if A.reduce(p_sub(img, s.beta_A[i])):
            out.append(f"chart square fails for Q-generator {i}: alpha(theta(q)) != beta(q) in A")
    if s.graded:
        for f in s.relations:
            if not ring.is_homogeneous(f):
                out.append(f"relation {ring.to_str(f)} is not homogeneous")
        for j, a in enumerate(s.alpha):
            if len(a) > 1:
                out.append(f"chart image of P-generator {j} is not a monomial")
        for j, b in enumerate(s.beta_A):
            if len(b) > 1:
                out.append(f"base chart image of Q-generator {j} is not a monomial")
    return out


def _base_reducer(s):
    if not s.base_relations:
        return lambda f: f
    gb = groebner_basis(s.ring, s.base_relations, s.budget)
    return gb.reduce


def check_valid(s):
    v = validate_spec(s)
    if v:
        raise InvalidSpec(v)


# ---------------------------------------------------------------------------
# log differentials

class LogDifferentials:
    """Omega^1 as a finitely presented A-module.

    Generators: ``d x`` for each total variable (positions ``0..nx-1``), then
    ``dlog p_j`` for each P-generator.  ``families`` maps each relation column
    to its family letter (a, b, c, d).
    """

    def __init__(self, spec, relations, families):
        self.spec = spec
        self.ring = spec.ring
        self.nx = len(spec.total_variables)
        self.np = spec.P.ngens
        self.rank = self.nx + self.np
        self.relations = relations
        self.families = families
        self.names = [f"d{v}" for v in spec.total_variables] + [f"dlog p{j + 1}" for j in range(self.np)]
        if spec.graded:
            w = spec.ring.weights
            self.shifts = tuple([w[spec.ring.index[v]] for v in spec.total_variables] + [0] * self.np)
        else:
            self.shifts = None
        self._gb = None

    def module(self):
        return FPModule(self.ring, self.spec.A.gb, self.rank, self.relations, self.shifts)

    def gb(self):
        if self._gb is None:
            self._gb = module_gb(self.ring, self.rank, [vec_to_module(r) for r in self.relations],
                                 budget=self.spec.budget, quotient=self.spec.A.gb)
        return self._gb

    def reduce(self, vec):
        """Normal form of an element ``{position: polydict}`` of the free module."""
        r = self.gb().reduce(vec_to_module(vec))
        out = {}
        for (p, m), c in r.items():
            out.setdefault(p, {})[m] = c
        return out

    def is_zero(self, vec):
        return not self.reduce(vec)

    def d(self, f):
        return differential(self.spec, f)

    def dlog(self, j):
        return {self.nx + j: self.ring.one()}

    def hilbert(self, degrees):
        return hilbert_function(self.module(), degrees, self.spec.budget)


def differential(s, f):
    """``d f`` in the free module on ``dx`` (base variables are constants)."""
    ring = s.ring
    out = {}
    for k, v in enumerate(s.total_variables):
        i = ring.index[v]
        g = ring.derivative(f, i)
        if v in s.total_inverted:
            j = ring.partner[i]
            h = ring.derivative(f, j)
            if h:
                # d(v_inv) = -v_inv^2 dv
                e = [0] * ring.nvars
                e[j] = 2
                g = p_sub(g, p_mul(h, {tuple(e): ring.field.one}))
        g = s.A.reduce(g)
        if g:
            out[k] = g
    return out


def log_differentials(s):
    """Omega^1 with the four relation families."""
    check_valid(s)
    ring = s.ring
    nx = len(s.total_variables)
    rels, fams = [], []
    # (a) Leibniz expansion of each relation of A
    for f in s.total_relations + s.base_relations:
        v = differential(s, f)
        if v:
            rels.append(v)
            fams.append("a")
    # (b) d alpha(p) - alpha(p) dlog p
    for j, a in enumerate(s.alpha):
        v = differential(s, a)
        v[nx + j] = p_scale(a, -ring.field.one) if a else {}
        v = {k: g for k, g in v.items() if g}
        if v:
            rels.append(v)
            fams.append("b")
    # (c) dlog theta(q) = 0
    for w in s.theta.witnesses:
        v = {nx + j: ring.const(c) for j, c in enumerate(w) if c}
        if v:
            rels.append(v)
            fams.append("c")
    # (d) lattice relations of P^gp among the dlog symbols
    for rel in relation_lattice(s.P):
        v = {nx + j: ring.const(c) for j, c in enumerate(rel) if c}
        if v:
            rels.append(v)
            fams.append("d")
    return LogDifferentials(s, rels, fams)


# ---------------------------------------------------------------------------
# framing

class Framing:
    """A free basis of Omega^1 drawn from the distinguished generators.

    ``basis`` lists generator positions; ``coords[i]`` expresses generator ``i``
    as ``{basis slot: polydict}``.
    """

    def __init__(self, omega, basis, coords):
        self.omega = omega
        self.basis = basis
        self.coords = coords
        self.names = [omega.names[i] for i in basis]
        if omega.shifts is not None:
            self.shifts = tuple(omega.shifts[i] for i in basis)
        else:
            self.shifts = None

    @property
    def rank(self):
        return len(self.basis)

    def express(self, vec):
        """Coordinates of ``{position: polydict}`` in the framing."""
        A = self.omega.spec.A
        out = {}
        for pos, f in vec.items():
            for slot, g in self.coords[pos].items():
                out[slot] = p_add(out.get(slot, {}), p_mul(f, g))
        return {k: r for k, r in ((k, A.reduce(v)) for k, v in out.items()) if r}


def detect_framing(omega):
    """Find a free basis among the generators or raise :class:`NotFramed`.

    Positions are ordered for elimination with the ``dx`` first, then the
    ``dlog`` symbols from last to first, so lower-indexed dlogs survive.
    """
    s = omega.spec
    ring = s.ring
    n = omega.rank
    pos_rank = [2 * n - i for i in range(omega.nx)] + [j for j in range(omega.np)]
    order = ModuleOrder(ring, "pot", pos_rank=pos_rank)
    gb = module_gb(ring, n, [vec_to_module(r) for r in omega.relations], order, s.budget, s.A.gb)
    eliminated = {}
    leftovers = []
    for e in gb.elements:
        lt = max(e, key=order.key)
        pos, mono = lt
        if not any(mono) and pos not in eliminated:
            eliminated[pos] = e
        else:
            leftovers.append(e)
    for e in leftovers:
        vec = {}
        for (p, m), c in e.items():
            vec.setdefault(p, {})[m] = c
        if reduce_vec(vec, s.A.gb):
            raise NotFramed("Omega^1 is not free on a subset of its generators")
    basis = [i for i in range(n) if i not in eliminated]
    slot = {p: k for k, p in enumerate(basis)}
    coords = {}
    for i in range(n):
        if i in slot:
            coords[i] = {slot[i]: ring.one()}
            continue
        e = eliminated[i]
        c0 = e[(i, ring.zero_mono)]
        vec = {}
        for (p, m), c in e.items():
            if p == i and not any(m):
                continue
            if p not in slot:
                raise NotFramed("elimination did not reduce to the candidate basis")
            vec.setdefault(slot[p], {})[m] = -c / c0
        coords[i] = {k: s.A.reduce(v) for k, v in vec.items() if s.A.reduce(v)}
    return Framing(omega, basis, coords)


# ---------------------------------------------------------------------------
# exterior powers

def _wedge_sign(i, J):
    """Sign and sorted tuple of e_i ^ e_J (J sorted); None if i in J."""
    if i in J:
        return 0, None
    k = sum(1 for j in J if j < i)
    return (-1) ** k, tuple(sorted(J + (i,)))


def exterior_power(M, n):
    """Lambda^n of ``M = coker(F1 -> F0)`` as ``coker(Lambda^{n-1} F0 (x) F1 -> Lambda^n F0)``."""
    ring = M.ring
    if n == 0:
        return FPModule(ring, M.quotient, 1, [], (0,) if M.shifts is not None else None)
    subsets = list(combinations(range(M.rank), n))
    index = {I: k for k, I in enumerate(subsets)}
    shifts = None
    if M.shifts is not None:
        shifts = tuple(sum(M.shifts[i] for i in I) for I in subsets)
    rels = []
    for J in combinations(range(M.rank), n - 1):
        for r in M.relations:
            vec = {}
            for i, f in r.items():
                sgn, I = _wedge_sign(i, J)
                if I is None:
                    continue
                k = index[I]
                vec[k] = p_add(vec.get(k, {}), p_scale(f, ring.field(sgn)))
            vec = {k: v for k, v in vec.items() if v}
            if vec:
                rels.append(vec)
    return FPModule(ring, M.quotient, len(subsets), rels, shifts)


# ---------------------------------------------------------------------------
# log de Rham complex

class DeRhamComplex:
    """The framed log de Rham complex ``Omega^0 -> ... -> Omega^N``."""

    def __init__(self, spec, framing, N):
        self.spec = spec
        self.framing = framing
        self.N = N
        self.ring = spec.ring
        self.rank = framing.rank
        self.subsets = [list(combinations(range(self.rank), n)) for n in range(N + 1)]
        self._dcache = {}

    def shift(self, I):
        if self.framing.shifts is None:
            return 0
        return sum(self.framing.shifts[i] for i in I)

    def d_function(self, f):
        """``d f`` for f in A, in framing coordinates."""
        key = tuple(sorted(f.items()))
        hit = self._dcache.get(key)
        if hit is None:
            hit = self.framing.express(differential(self.spec, f))
            self._dcache[key] = hit
        return hit

    def d_form(self, form):
        """d of a form ``{I: polydict}`` (I sorted tuples of framing slots)."""
        out = {}
        for I, f in form.items():
            for m, c in f.items():
                df = self.d_function({m: c})
                for i, g in df.items():
                    sgn, J = _wedge_sign(i, I)
                    if J is None:
                        continue
                    out[J] = p_add(out.get(J, {}), p_scale(g, self.ring.field(sgn)))
        A = self.spec.A
        return {J: r for J, r in ((J, A.reduce(v)) for J, v in out.items()) if r}

    def check_d_squared(self):
        """d(d v) = 0 for every variable and every dlog generator."""
        A = self.spec.A
        om = self.framing.omega
        checks = []
        for k, v in enumerate(self.spec.total_variables):
            checks.append({(): self.ring.var(v)})
        for j in range(om.np):
            coords = self.framing.coords[om.nx + j]
            checks.append({(i,): g for i, g in coords.items()})
        for form in checks:
            first = self.d_form(form) if () in form else form
            if self.d_form(first):
                return False
        return True

    def basis(self, n, d):
        """Basis of the degree-d part of Omega^n: pairs (I, monomial)."""
        A = self.spec.A
        out = []
        for I in self.subsets[n]:
            for m in _degree_basis(A, d - self.shift(I), self.spec):
                out.append((I, m))
        return out

    def matrix(self, n, d):
        """Matrix of d: Omega^n_d -> Omega^{n+1}_d."""
        src = self.basis(n, d)
        tgt = self.basis(n + 1, d) if n + 1 <= self.N else []
        index = {b: k for k, b in enumerate(tgt)}
        cols = []
        one = self.ring.field.one
        for I, m in src:
            if n + 1 > self.N:
                cols.append({})
                continue
            img = self.d_form({I: {m: one}})
            vec = {}
            for J, f in img.items():
                for mm, c in f.items():
                    vec[index[(J, mm)]] = c
            cols.append(vec)
        return SparseMatrix.from_columns(cols, len(tgt), self.ring.field)

    def cohomology(self, m, d):
        """dim of H^m in internal degree d."""
        f = self.matrix(m - 1, d) if m >= 1 else SparseMatrix.zero(len(self.basis(0, d)), 0, self.ring.field)
        g = self.matrix(m, d)
        return complex_homology(f, g)[0]


def _degree_basis(A, d, spec):
    if spec.graded:
        return A.basis_in_degree(d, spec.budget)
    if d != 0:
        return []
    return A.basis(spec.budget)


def degrees_of(spec, degrees):
    """The degree slices to report: the requested box when graded, else the single slice 0."""
    if spec.graded:
        return list(degrees)
    return [0]


def log_de_rham(s, N):
    omega = log_differentials(s)
    framing = detect_framing(omega)
    return DeRhamComplex(s, framing, N)


def de_rham_cohomology(s, m, degrees):
    """Degreewise dimensions of H^m of the framed log de Rham complex."""
    if not s.graded and not s.A.is_finite():
        raise NotGraded("de Rham cohomology needs a grading or a finite-dimensional algebra")
    dr = log_de_rham(s, m + 1)
    return {d: dr.cohomology(m, d) for d in degrees_of(s, degrees)}


def omega_hilbert(s, n, degrees):
    """Degreewise dimensions of Lambda^n Omega^1."""
    omega = log_differentials(s)
    if not s.graded:
        if not s.A.is_finite():
            raise NotGraded("dimensions need a grading or a finite-dimensional algebra")
        M = exterior_power(_ungraded(omega.module()), n)
        return {0: _total_dim(M, s)}
    M = exterior_power(omega.module(), n)
    return hilbert_function(M, degrees, s.budget)


def _ungraded(M):
    return FPModule(M.ring, M.quotient, M.rank, M.relations, None)


def _total_dim(M, s):
    """Dimension of a module over a finite-dimensional algebra."""
    A = s.A
    basis = A.basis(s.budget)
    index = {}
    for i in range(M.rank):
        for m in basis:
            index[(i, m)] = len(index)
    cols = []
    one = M.ring.field.one
    for col in M.relations:
        for m in basis:
            vec = {}
            for row, f in col.items():
                g = A.reduce(p_mul(f, {m: one}))
                for mm, c in g.items():
                    k = index[(row, mm)]
                    vec[k] = vec.get(k, 0) + c
            cols.append({k: v for k, v in vec.items() if v})
    r = mat_rank(SparseMatrix.from_columns(cols, len(index), M.ring.field)) if cols else 0
    return len(index) - r
