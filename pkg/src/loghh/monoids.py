"""Affine monoids in lattices, chart maps, the cokernel group and toric ideals."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import NotInjective, SchemaError
from .intlin import IntMatrix, hermite_normal_form, integer_kernel, smith_normal_form, solve_integer


@dataclass(frozen=True)
class AffineMonoid:
    """The monoid of N-combinations of finitely many vectors in Z^d."""

    ambient_rank: int
    generators: tuple

    def __init__(self, ambient_rank, generators):
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        for g in gens:
            if len(g) != ambient_rank:
                raise ValueError("generator length differs from the ambient rank")
        object.__setattr__(self, "ambient_rank", int(ambient_rank))
        object.__setattr__(self, "generators", gens)

    @property
    def ngens(self):
        return len(self.generators)

    def matrix(self):
        """d x s matrix whose columns are the generators."""
        return IntMatrix.from_columns(self.generators, self.ambient_rank) if self.generators else \
            IntMatrix.zeros(self.ambient_rank, 0)

    def combination(self, vec):
        """An N-combination of the generators summing to ``vec``, or None."""
        return monoid_membership(self, vec)


def group_completion(P):
    """A basis (rows of an IntMatrix) of the subgroup of Z^d spanned by P."""
    if not P.generators:
        return IntMatrix.zeros(0, P.ambient_rank)
    H, _ = hermite_normal_form(IntMatrix(P.generators, P.ambient_rank))
    rows = [r for r in H.rows if any(r)]
    return IntMatrix(rows, P.ambient_rank)


def in_group(P, vec):
    """Integer coefficients expressing ``vec`` in the generators, or None."""
    if not P.generators:
        return () if not any(vec) else None
    return solve_integer(P.matrix(), tuple(vec))


def monoid_membership(P, vec, bound=None):
    """Bounded search for an N-combination of generators equal to ``vec``.

    When every generator lies in the nonnegative orthant and is nonzero, the
    coordinate sum bounds each coefficient, so the search is exact.
    Otherwise a coefficient bound (default 12) is used.
    """
    vec = tuple(int(x) for x in vec)
    gens = P.generators
    if not any(vec):
        return tuple(0 for _ in gens)
    if not gens:
        return None
    if in_group(P, vec) is None:
        return None
    positive = all(min(g) >= 0 and any(g) for g in gens)
    if positive:
        if min(vec) < 0:
            return None
        total = sum(vec)
        caps = [total // sum(g) for g in gens]
    else:
        caps = [bound or 12] * len(gens)

    def rec(i, rem):
        if i == len(gens):
            return () if not any(rem) else None
        g = gens[i]
        for c in range(caps[i] + 1):
            r = tuple(a - c * b for a, b in zip(rem, g))
            if positive and min(r) < 0:
                break
            sub = rec(i + 1, r)
            if sub is not None:
                return (c,) + sub
        return None

    return rec(0, vec)


@dataclass(frozen=True)
class MonoidMap:
    """theta: Q -> P given on generators, with N-combination witnesses over P."""

    source: AffineMonoid
    target: AffineMonoid
    images: tuple       # lattice vectors in the ambient space of P
    witnesses: tuple    # N-combinations over P's generators

    @classmethod
    def from_vectors(cls, source, target, images):
        images = tuple(tuple(int(x) for x in v) for v in images)
        if len(images) != source.ngens:
            raise SchemaError(f"theta has {len(images)} images for {source.ngens} generators of Q")
        wit = []
        for i, v in enumerate(images):
            if len(v) != target.ambient_rank:
                raise SchemaError(f"theta image of Q-generator {i} has the wrong length")
            c = monoid_membership(target, v)
            if c is None:
                raise SchemaError(f"theta image of Q-generator {i} {list(v)} does not lie in P")
            wit.append(c)
        return cls(source, target, images, tuple(wit))

    def lattice_matrix(self):
        """Matrix (columns) of the induced map Z^{gens Q} -> Z^{gens P} on witnesses."""
        return IntMatrix.from_columns(self.witnesses, self.target.ngens) if self.witnesses else \
            IntMatrix.zeros(self.target.ngens, 0)

    def check_well_defined(self):
        """Relations among Q's generators must map to zero in P^gp."""
        out = []
        if not self.source.generators:
            return out
        for rel in integer_kernel(self.source.matrix()):
            img = [0] * self.target.ambient_rank
            for c, v in zip(rel, self.images):
                for k in range(len(img)):
                    img[k] += c * v[k]
            if any(img):
                out.append(f"theta does not respect the relation {list(rel)} among Q-generators")
        return out


@dataclass(frozen=True)
class FinAbGroup:
    """G = Z/d_1 + ... + Z/d_t + Z^r; ``generator_images`` give the class of each P-generator.

    Coordinates are ordered torsion first, then free; torsion coordinates are
    reduced into ``[0, d_i)``.
    """

    free_rank: int
    torsion_orders: tuple
    generator_images: tuple

    @property
    def ngens(self):
        return len(self.torsion_orders) + self.free_rank

    def order_of(self, i):
        """Order of the i-th generator (0 means infinite)."""
        return self.torsion_orders[i] if i < len(self.torsion_orders) else 0

    def is_finite(self):
        return self.free_rank == 0

    def order(self):
        if self.free_rank:
            return 0
        n = 1
        for d in self.torsion_orders:
            n *= d
        return n

    def normalize(self, coords):
        out = list(coords)
        for i, d in enumerate(self.torsion_orders):
            out[i] %= d
        return tuple(out)

    def elements(self):
        if self.free_rank:
            raise ValueError("infinite group")
        return [tuple(e) for e in product(*[range(d) for d in self.torsion_orders])]

    def add(self, a, b):
        return self.normalize([x + y for x, y in zip(a, b)])

    def neg(self, a):
        return self.normalize([-x for x in a])


def chart_cokernel(theta):
    """G = P^gp / Q^gp with the class of every P-generator.

    P^gp is identified with Z^k through a basis of the group completion; the
    image of Q^gp is the span of the images of Q's generators.
    """
    P, Q = theta.target, theta.source
    basis = group_completion(P)
    k = basis.nrows
    bt = basis.transpose()  # d x k, columns are basis vectors

    def coords(v):
        x = solve_integer(bt, tuple(v))
        if x is None:
            raise AssertionError("vector outside P^gp")
        return x

    q_rank = len(group_completion(Q).rows) if Q.generators else 0
    rel_cols = [coords(v) for v in theta.images]
    rel = IntMatrix.from_columns(rel_cols, k) if rel_cols else IntMatrix.zeros(k, 0)
    S = smith_normal_form(rel) if rel_cols else None
    if rel_cols and S.rank != q_rank:
        raise NotInjective(f"Q^gp -> P^gp has rank {S.rank} < rank Q^gp = {q_rank}")
    U = S.U if S else IntMatrix.identity(k)
    diag = S.invariant_factors if S else []
    # coordinates after U: the first len(diag) are Z/d_i, the rest free
    torsion_idx = [i for i, d in enumerate(diag) if d > 1]
    torsion = tuple(diag[i] for i in torsion_idx)
    free_idx = list(range(len(diag), k))
    gen_classes = []
    for g in P.generators:
        y = U.apply(coords(g))
        gen_classes.append([y[i] % diag[i] for i in torsion_idx] + [y[i] for i in free_idx])
    # sign normalization: the first nonzero class of each free coordinate is positive
    nt = len(torsion)
    for c in range(len(free_idx)):
        for cls in gen_classes:
            v = cls[nt + c]
            if v:
                if v < 0:
                    for cl in gen_classes:
                        cl[nt + c] = -cl[nt + c]
                break
    return FinAbGroup(len(free_idx), torsion, tuple(tuple(c) for c in gen_classes))


def relation_lattice(P):
    """Integer relations among the generators of P (a lattice basis)."""
    if not P.generators:
        return []
    return integer_kernel(P.matrix())


def toric_ideal(P, field, budget=None):
    """Binomials generating the kernel of k[x_1..x_s] -> k[P], x_i -> generator i.

    Lattice-basis binomials are saturated by the product of all variables via
    an auxiliary variable t that is then eliminated with a block order.
    Returns ``(ring, list of raw polynomial dicts)`` in the variables
    ``x1..xs``.
    """
    from .grobner import groebner_basis
    from .polys import PolyRing
    s = P.ngens
    names = [f"x{i + 1}" for i in range(s)]
    ring = PolyRing(field, names)
    lat = relation_lattice(P)
    if not lat:
        return ring, []
    ext = PolyRing(field, ["t"] + names, order="block", blocks=[[0], list(range(1, s + 1))])
    one = field.one
    gens = []
    for rel in lat:
        pos = (0,) + tuple(max(c, 0) for c in rel)
        neg = (0,) + tuple(max(-c, 0) for c in rel)
        gens.append({pos: one, neg: -one})
    gens.append({(1,) + (1,) * s: one, (0,) * (s + 1): -one})
    gb = groebner_basis(ext, gens, budget)
    out = []
    for f in gb.polys:
        if all(m[0] == 0 for m in f):
            g = {m[1:]: c for m, c in f.items()}
            out.append(g)
    out.sort(key=lambda g: ring.key(ring.lm(g)))
    return ring, out


def binomial_vanishes(P, f):
    """Check that a polynomial in x_i vanishes under x_i -> generator_i (Laurent evaluation)."""
    acc = {}
    for m, c in f.items():
        v = [0] * P.ambient_rank
        for e, g in zip(m, P.generators):
            for k in range(P.ambient_rank):
                v[k] += e * g[k]
        acc[tuple(v)] = acc.get(tuple(v), 0) + c
    return all(not c for c in acc.values())
