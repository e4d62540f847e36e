"""Sparse multivariate polynomials, monomial orders and the expression parser.

A polynomial is stored as a dict ``{exponent tuple: coefficient}`` with no
zero coefficients.  :class:`Poly` wraps such a dict together with its ring
for user-facing code; the Groebner engine works on the raw dicts.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .fields import QQ

PARTNER_SUFFIX = "_inv"


# ---------------------------------------------------------------------------
# monomial orders

def degrevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e):
    return e


class MonomialOrder:
    """A monomial order given by a sort key (larger key = larger monomial).

    ``kind`` is one of ``degrevlex``, ``lex`` or ``block``.  A block order
    compares the exponents of the first block by degrevlex, then the next
    block, and so on; variables listed earlier are in earlier blocks.
    """

    def __init__(self, kind="degrevlex", blocks=None):
        if kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and not blocks:
            raise ValueError("block order needs blocks")
        self.kind = kind
        self.blocks = tuple(tuple(b) for b in blocks) if blocks else None

    def key(self, e):
        if self.kind == "degrevlex":
            return degrevlex_key(e)
        if self.kind == "lex":
            return e
        return tuple(degrevlex_key(tuple(e[i] for i in b)) for b in self.blocks)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.blocks) == (other.kind, other.blocks)

    def __hash__(self):
        return hash((self.kind, self.blocks))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})" if self.kind != "block" else f"MonomialOrder(block {self.blocks})"


# ---------------------------------------------------------------------------
# raw dict arithmetic

def p_add(f, g):
    h = dict(f)
    for m, c in g.items():
        v = h.get(m)
        if v is None:
            h[m] = c
        else:
            v = v + c
            if v:
                h[m] = v
            else:
                del h[m]
    return h


def p_sub(f, g):
    h = dict(f)
    for m, c in g.items():
        v = h.get(m)
        if v is None:
            h[m] = -c
        else:
            v = v - c
            if v:
                h[m] = v
            else:
                del h[m]
    return h


def p_scale(f, c):
    if not c:
        return {}
    return {m: v * c for m, v in f.items()}


def m_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def m_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def m_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def m_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def p_mul_term(f, mono, c):
    if not c:
        return {}
    return {m_mul(m, mono): v * c for m, v in f.items()}


def p_mul(f, g):
    if len(f) > len(g):
        f, g = g, f
    h = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = m_mul(m1, m2)
            v = h.get(m)
            v = c1 * c2 if v is None else v + c1 * c2
            if v:
                h[m] = v
            else:
                h.pop(m, None)
    return h


def p_pow(f, n, one):
    result = one
    base = f
    while n:
        if n & 1:
            result = p_mul(result, base)
        n >>= 1
        if n:
            base = p_mul(base, base)
    return result


# ---------------------------------------------------------------------------
# rings

class PolyRing:
    """Polynomial ring over a field with optional inverted variables.

    Each inverted variable ``v`` gets a partner ``v_inv``; the relation
    ``v * v_inv - 1`` is not part of the ring itself but is returned by
    :meth:`partner_relations` and added by every ideal built over the ring.
    Partners are appended after the user variables.
    """

    def __init__(self, field=QQ, variables=(), inverted=(), order="degrevlex", weights=None, blocks=None):
        variables = list(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        for v in inverted:
            if v not in variables:
                raise ValueError(f"inverted variable {v!r} is not a ring variable")
        partners = [v + PARTNER_SUFFIX for v in inverted]
        if set(partners) & set(variables):
            raise ValueError("partner variable name clashes with a ring variable")
        self.field = field
        self.user_variables = tuple(variables)
        self.inverted = tuple(inverted)
        self.names = tuple(variables + partners)
        self.nvars = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.partner = {self.index[v]: self.index[v + PARTNER_SUFFIX] for v in inverted}
        if weights is not None:
            w = [int(weights.get(v, 0)) if isinstance(weights, dict) else int(weights[i])
                 for i, v in enumerate(variables)]
            w += [-w[variables.index(v)] for v in inverted]
            self.weights = tuple(w)
        else:
            self.weights = None
        if isinstance(order, MonomialOrder):
            self.order = order
        else:
            if order == "block" and blocks is not None:
                blocks = [[self.index[v] if isinstance(v, str) else v for v in b] for b in blocks]
            self.order = MonomialOrder(order, blocks)
        self.key = self.order.key
        self.zero_mono = (0,) * self.nvars

    # construction helpers ---------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field and self.names == other.names
                and self.order == other.order and self.weights == other.weights
                and self.inverted == other.inverted)

    def __hash__(self):
        return hash((self.field, self.names, self.order, self.weights))

    def __repr__(self):
        return f"PolyRing({self.field!r}, {list(self.names)})"

    def with_order(self, order, blocks=None):
        w = None
        if self.weights is not None:
            w = dict(zip(self.user_variables, self.weights))
        return PolyRing(self.field, self.user_variables, self.inverted, order, w, blocks)

    def one(self):
        return {self.zero_mono: self.field.one}

    def const(self, c):
        c = self.field(c)
        return {self.zero_mono: c} if c else {}

    def var(self, name):
        i = self.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return {tuple(e): self.field.one}

    def mono(self, exps):
        return {tuple(exps): self.field.one}

    def poly(self, terms):
        return Poly(self, terms)

    def gen(self, name):
        return Poly(self, self.var(name))

    def parse(self, text, context=None):
        return Poly(self, parse_poly(text, self, context))

    def partner_relations(self):
        out = []
        for i, j in self.partner.items():
            e = [0] * self.nvars
            e[i] = 1
            e[j] = 1
            out.append({tuple(e): self.field.one, self.zero_mono: -self.field.one})
        return out

    # gradings ---------------------------------------------------------------
    def degree(self, mono):
        if self.weights is None:
            return sum(mono)
        return sum(w * e for w, e in zip(self.weights, mono))

    def homogeneous_degree(self, f):
        """The weighted degree if f is homogeneous (None for zero), else raise ValueError."""
        degs = {self.degree(m) for m in f}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return next(iter(degs)) if degs else None

    def is_homogeneous(self, f):
        return len({self.degree(m) for m in f}) <= 1

    # leading data -----------------------------------------------------------
    def lm(self, f):
        return max(f, key=self.key)

    def sorted_terms(self, f):
        return sorted(f.items(), key=lambda t: self.key(t[0]), reverse=True)

    def monic(self, f):
        if not f:
            return f
        c = f[self.lm(f)]
        inv = self.field.one / c
        return {m: v * inv for m, v in f.items()}

    # evaluation and substitution ----------------------------------------------
    def substitute(self, f, images, target):
        """Image of ``f`` under the ring map sending variable i to ``images[i]``.

        ``images`` are raw dicts in ``target``; powers are cached per call.
        """
        cache = {}
        out = {}
        one = target.one()
        for m, c in f.items():
            t = one
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = p_pow(images[i], e, one)
                        cache[key] = pw
                    t = p_mul(t, pw)
                    if not t:
                        break
            if t:
                out = p_add(out, p_scale(t, c))
        return out

    def derivative(self, f, i):
        out = {}
        for m, c in f.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                v = c * m[i]
                if v:
                    out[tuple(e)] = out.get(tuple(e), 0) + v
        return {m: v for m, v in out.items() if v}

    def to_str(self, f):
        if not f:
            return "0"
        parts = []
        for m, c in self.sorted_terms(f):
            mon = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e)
            c_str = str(c)
            if mon:
                if c == 1:
                    s = mon
                elif c == -1:
                    s = "-" + mon
                else:
                    s = f"{c_str}*{mon}"
            else:
                s = c_str
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


class Poly:
    """A polynomial bound to its ring, with arithmetic operators."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {m: ring.field(c) for m, c in (terms or {}).items() if c}

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise TypeError("polynomials from different rings")
            return other.terms
        return self.ring.const(other)

    def __add__(self, other):
        return Poly(self.ring, p_add(self.terms, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Poly(self.ring, p_sub(self.terms, self._coerce(other)))

    def __rsub__(self, other):
        return Poly(self.ring, p_sub(self._coerce(other), self.terms))

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        return Poly(self.ring, p_mul(self.terms, self._coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, n):
        return Poly(self.ring, p_pow(self.terms, n, self.ring.one()))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        return self.terms == self.ring.const(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    @property
    def lm(self):
        return self.ring.lm(self.terms)

    @property
    def lc(self):
        return self.terms[self.lm]

    def __repr__(self):
        return self.ring.to_str(self.terms)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# expression parser
#
#   expr   := term (("+" | "-") term)*
#   term   := unary ("*" unary)*
#   unary  := ("+" | "-") unary | power
#   power  := atom ("^" INT)?
#   atom   := INT | IDENT | "(" expr ")"

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text, context):
    toks = []
    pos = 0
    n = len(text)
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and pos >= n:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                _raise(text, m.start(3), f"unexpected character {ch!r}", ("integer", "identifier", "(", "+", "-"), context)
            toks.append((ch, ch, m.start(3)))
        else:
            break
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def _raise(text, offset, msg, expected, context):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    raise ParseError(msg, line, col, tuple(expected), context)


class _Parser:
    def __init__(self, text, ring, context):
        self.text = text
        self.ring = ring
        self.context = context
        self.toks = _tokenize(text, context)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, tok, expected):
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        _raise(self.text, tok[2], f"unexpected {what}", expected, self.context)

    def parse(self):
        f = self.expr()
        t = self.peek()
        if t[0] != "end":
            self.fail(t, ("+", "-", "*", "^", "end of input"))
        return f

    def expr(self):
        f = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            g = self.term()
            f = p_add(f, g) if op == "+" else p_sub(f, g)
        return f

    def term(self):
        f = self.unary()
        while self.peek()[0] == "*":
            self.take()
            f = p_mul(f, self.unary())
        return f

    def unary(self):
        t = self.peek()
        if t[0] == "-":
            self.take()
            return {m: -c for m, c in self.unary().items()}
        if t[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        f = self.atom()
        if self.peek()[0] == "^":
            self.take()
            t = self.take()
            if t[0] != "int":
                self.fail(t, ("integer",))
            f = p_pow(f, int(t[1]), self.ring.one())
        return f

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return self.ring.const(int(t[1]))
        if t[0] == "ident":
            if t[1] not in self.ring.index:
                _raise(self.text, t[2], f"unknown variable {t[1]!r}", sorted(self.ring.index), self.context)
            return self.ring.var(t[1])
        if t[0] == "(":
            f = self.expr()
            c = self.take()
            if c[0] != ")":
                self.fail(c, (")",))
            return f
        self.fail(t, ("integer", "identifier", "("))


def parse_poly(text, ring, context=None):
    """Parse a polynomial string into a raw dict over ``ring``."""
    if not isinstance(text, str):
        raise ParseError("polynomial must be a string", 1, 1, ("string",), context)
    return _Parser(text, ring, context).parse()
