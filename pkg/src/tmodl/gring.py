"""Group rings k[G] and k[t][G] for finite abelian G of order prime to p.

The workhorse is the character decomposition: k[G] splits over a minimal
extension F' of k containing enough roots of unity, characters are indexed
by exponent vectors on the invariant-factor generators (lexicographic
order, so decompositions are reproducible), and equivariant determinants
are computed characterwise and reassembled through the idempotents.
"""

from __future__ import annotations

import math

from . import linalg
from .ffield import FieldElem, descend, lift, make_extension
from .ring import Laurent, Poly, laurent_invert, monic_representative


class AbelianGroup:
    """A finite abelian group as a product of cyclic groups; elements are
    exponent vectors (tuples)."""

    def __init__(self, orders):
        orders = tuple(int(n) for n in orders if int(n) > 1) or ()
        self.orders = orders
        self.order = math.prod(orders) if orders else 1
        self.exponent = math.lcm(*orders) if orders else 1

    def identity(self):
        return (0,) * len(self.orders)

    def elements(self):
        out = [()]
        for n in self.orders:
            out = [e + (i,) for e in out for i in range(n)]
        return [tuple(e) for e in out]

    def add(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a):
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def power(self, a, m):
        return tuple((x * m) % n for x, n in zip(a, self.orders))

    def generators(self):
        gens = []
        for i in range(len(self.orders)):
            e = [0] * len(self.orders)
            e[i] = 1
            gens.append(tuple(e))
        return gens

    def elem_order(self, a):
        return math.lcm(*(n // math.gcd(x, n) for x, n in zip(a, self.orders))) \
            if self.orders else 1

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    def __repr__(self):
        if not self.orders:
            return 'Z/1'
        return ' x '.join('Z/%d' % n for n in self.orders)


class GroupRingElem:
    """Element of R[G]: coefficients (FieldElem, Poly, or Laurent) indexed
    by group exponent vectors; absent keys mean zero."""

    __slots__ = ('group', 'coeffs')

    def __init__(self, group, coeffs):
        self.group = group
        self.coeffs = {g: c for g, c in coeffs.items() if not _is_zero(c)}

    @staticmethod
    def scalar(group, c):
        return GroupRingElem(group, {group.identity(): c})

    @staticmethod
    def of_element(group, g, one):
        return GroupRingElem(group, {g: one})

    def coeff(self, g, zero):
        return self.coeffs.get(g, zero)

    def support(self):
        return sorted(self.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return GroupRingElem(self.group, out)

    def __neg__(self):
        return GroupRingElem(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        add = self.group.add
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                gh = add(g, h)
                prod = c * d
                out[gh] = out[gh] + prod if gh in out else prod
        return GroupRingElem(self.group, out)

    def scale(self, c):
        return GroupRingElem(self.group, {g: v * c if isinstance(v, FieldElem)
                                          else v.scale(c)
                                          for g, v in self.coeffs.items()})

    def map_coeffs(self, fn):
        return GroupRingElem(self.group, {g: fn(c) for g, c in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, GroupRingElem) and self.group == other.group
                and self.coeffs == other.coeffs)

    def __ne__(self, other):
        return not self.__eq__(other)

    def approx_eq(self, other):
        """Coefficientwise Laurent comparison modulo the weaker precision."""
        for g in set(self.coeffs) | set(other.coeffs):
            a = self.coeffs.get(g)
            b = other.coeffs.get(g)
            if a is None:
                a = Laurent.zero(b.field, b.prec)
            if b is None:
                b = Laurent.zero(a.field, a.prec)
            if not a.approx_eq(b):
                return False
        return True

    def inverse_constant(self, field):
        """Inverse of a unit of k[G] (FieldElem coefficients) via the
        regular representation."""
        els = self.group.elements()
        idx = {g: i for i, g in enumerate(els)}
        n = len(els)
        z = field.zero()
        m = [[z] * n for _ in range(n)]
        for g, c in self.coeffs.items():
            for h in els:
                m[idx[self.group.add(g, h)]][idx[h]] = c
        b = [z] * n
        b[idx[self.group.identity()]] = field.one()
        x = linalg.solve(field, m, b)
        if x is None:
            raise ZeroDivisionError('group-ring element is not a unit')
        return GroupRingElem(self.group, {g: x[idx[g]] for g in els})

    def __repr__(self):
        return render_gring(self)


def _is_zero(c):
    return c.is_zero()


def render_gring(u):
    """Rendering "coeff*[exponents] + ..." in sorted support order."""
    if u.is_zero():
        return '0'
    parts = []
    for g in u.support():
        c = u.coeffs[g]
        parts.append('(%r)*[%s]' % (c, ','.join(str(x) for x in g)))
    return ' + '.join(parts)


class CharacterTable:
    """All characters of an abelian group over a minimal splitting extension
    of the coefficient field, with idempotents and Galois-orbit grouping."""

    def __init__(self, group, k):
        p = k.p
        if group.order % p == 0:
            raise ValueError('|G| = %d is divisible by the characteristic %d'
                             % (group.order, p))
        self.group = group
        self.k = k
        m = group.exponent
        s = 1
        while (k.order ** s - 1) % m != 0:
            s += 1
        self.splitting_field = k if s == 1 else make_extension(k, s)
        F = self.splitting_field
        if m == 1:
            self.zeta = F.one()
        else:
            gen = F.multiplicative_generator()
            self.zeta = gen ** ((F.order - 1) // m)
        # character index j: chi_j(g) = zeta^(sum_i (m/n_i) j_i g_i)
        self.indices = group.elements()  # lexicographic by construction
        self._value_cache = {}
        # Galois orbits under chi -> chi^q (q = |k|)
        q = k.order
        seen = set()
        orbits = []
        for j in self.indices:
            if j in seen:
                continue
            orbit = []
            cur = j
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                cur = group.power(cur, q)
            orbits.append(tuple(orbit))
        self.orbits = orbits

    def value(self, j, g):
        """chi_j(g) in the splitting field."""
        key = (j, g)
        v = self._value_cache.get(key)
        if v is None:
            m = self.group.exponent
            e = 0
            for ji, gi, n in zip(j, g, self.group.orders):
                e += (m // n) * ji * gi
            v = self.zeta ** (e % m)
            self._value_cache[key] = v
        return v

    def apply(self, j, u, zero=None):
        """Apply character chi_j to a GroupRingElem coefficientwise.

        Coefficients are lifted to the splitting field.  For a zero element
        the result is `zero` (a splitting-field zero of the right type),
        which must then be supplied.
        """
        F = self.splitting_field
        acc = None
        for g, c in u.coeffs.items():
            chi = self.value(j, g)
            term = _lift_coeff(c, F)
            term = term.scale(chi) if not isinstance(term, FieldElem) else term * chi
            acc = term if acc is None else acc + term
        if acc is None:
            if zero is None:
                raise ValueError('cannot apply a character to the zero element '
                                 'without a zero exemplar')
            return zero
        return acc

    def idempotent(self, j):
        """e_chi = (1/|G|) sum_g chi(g)^-1 g over the splitting field."""
        F = self.splitting_field
        inv_n = F.from_int(self.group.order).inverse()
        coeffs = {}
        for g in self.group.elements():
            coeffs[g] = self.value(j, self.group.neg(g)) * inv_n
        return GroupRingElem(self.group, coeffs)

    def reassemble(self, values, zero_maker=None):
        """Inverse of characterwise decomposition: given per-character values
        v_j over the splitting field (FieldElem/Poly/Laurent), rebuild the
        k[G] element sum_j e_j * v_j, descending coefficients to k."""
        F = self.splitting_field
        inv_n = F.from_int(self.group.order).inverse()
        out = {}
        for g in self.group.elements():
            acc = None
            for j in self.indices:
                chi = self.value(j, self.group.neg(g)) * inv_n
                v = values[j]
                term = v * chi if isinstance(v, FieldElem) else v.scale(chi)
                acc = term if acc is None else acc + term
            out[g] = _descend_coeff(acc, self.k)
        return GroupRingElem(self.group, out)

    def orbit_of(self, j):
        for orbit in self.orbits:
            if j in orbit:
                return orbit
        raise KeyError(j)


def _lift_coeff(c, F):
    if isinstance(c, FieldElem):
        return lift(c, F)
    return c.map_field(F)


def _descend_coeff(c, k):
    if isinstance(c, FieldElem):
        return descend(c, k)
    return c.descend_field(k)


def decompose(group, k):
    """Character table + idempotents realizing k[G] = prod k_i.

    Returns the CharacterTable; idempotents and orbit grouping hang off it.
    """
    return CharacterTable(group, k)


def det_equivariant(table, matrix):
    """Determinant over k[t][G] of a square matrix with GroupRingElem
    entries (Poly coefficients), computed characterwise and reassembled."""
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError('matrix must be square')
    F = table.splitting_field
    pz = Poly.zero(F)
    values = {}
    for j in table.indices:
        m = [[table.apply(j, e, pz) for e in row] for row in matrix]
        values[j] = _poly_det(F, m)
    return table.reassemble(values)


def _poly_det(field, m):
    """Exact determinant of a matrix of Polys by cofactor expansion (desk
    scale: these matrices stay small)."""
    n = len(m)
    if n == 0:
        return Poly.one(field)
    if n == 1:
        return m[0][0]
    acc = Poly.zero(field)
    sign = field.one()
    for c in range(n):
        entry = m[0][c]
        if not entry.is_zero():
            minor = [[m[i][j] for j in range(n) if j != c] for i in range(1, n)]
            acc = acc + entry.scale(sign) * _poly_det(field, minor)
        sign = -sign
    return acc


def validate_representation(group, rho, field):
    """Check rho(g)rho(h) = rho(gh) on all pairs of generators and elements."""
    els = group.elements()
    for g in els:
        if g not in rho:
            raise ValueError('representation missing element %r' % (g,))
    for g in els:
        for h in els:
            lhs = linalg.mat_mul(field, rho[g], rho[h])
            if not linalg.mat_eq(lhs, rho[group.add(g, h)]):
                raise ValueError('rho is not multiplicative at %r,%r' % (g, h))


def rep_of_character(table, j):
    """The 1-dimensional representation attached to character j, over the
    splitting field."""
    F = table.splitting_field
    return {g: [[table.value(j, g)]] for g in table.group.elements()}


def regular_representation(group, field):
    els = group.elements()
    idx = {g: i for i, g in enumerate(els)}
    n = len(els)
    rho = {}
    for g in els:
        m = linalg.zeros(field, n, n)
        for h in els:
            m[idx[group.add(g, h)]][idx[h]] = field.one()
        rho[g] = m
    return rho


def twist_det(u, group, rho, field, validate=True):
    """det over F((1/t)) (or F[t]) of sum_g u_g rho(g) acting on V.

    u: GroupRingElem with Laurent or Poly coefficients over a subfield of
    `field`; rho: dict g -> matrix over `field`.
    """
    if validate:
        validate_representation(group, rho, field)
    dim = len(next(iter(rho.values())))
    entries = None
    for g, c in u.coeffs.items():
        cl = _lift_coeff(c, field)
        block = [[_coeff_scale(cl, rho[g][i][k2]) for k2 in range(dim)]
                 for i in range(dim)]
        if entries is None:
            entries = block
        else:
            entries = [[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(entries, block)]
    if entries is None:
        raise ValueError('twist of the zero element')
    if isinstance(entries[0][0], Poly):
        return _poly_det(field, entries)
    return _laurent_det(field, entries)


def _coeff_scale(c, s):
    return c.scale(s)


def _laurent_det(field, m):
    n = len(m)
    if n == 0:
        prec = 10 ** 9
        return Laurent.one(field, prec)
    if n == 1:
        return m[0][0]
    acc = None
    sign = field.one()
    for c in range(n):
        entry = m[0][c]
        minor = [[m[i][j] for j in range(n) if j != c] for i in range(1, n)]
        term = entry.scale(sign) * _laurent_det(field, minor)
        acc = term if acc is None else acc + term
        sign = -sign
    return acc


def monic_representative_gring(table, u):
    """Characterwise monic normalization of a unit of k((1/t))[G]."""
    values = {}
    for j in table.indices:
        comp = table.apply(j, u)
        if not comp.is_unit():
            raise ValueError('group-ring element is not a unit: character %r '
                             'component vanishes' % (j,))
        values[j] = monic_representative(comp)
    return table.reassemble(values)


def invert_gring_laurent(table, u):
    """Characterwise inverse of a unit of k((1/t))[G]."""
    values = {}
    for j in table.indices:
        comp = table.apply(j, u)
        if not comp.is_unit():
            raise ValueError('group-ring element is not a unit')
        values[j] = laurent_invert(comp)
    return table.reassemble(values)
