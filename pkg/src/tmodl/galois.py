"""Explicit abelian Galois contexts over K = k(t) with O_K = k[t].

Two built-in families:

  * constant-field extensions L = k_m(t), with G = Z/m generated by the
    Frobenius of k_m/k, and
  * Carlitz cyclotomic extensions L = K(lambda_f) for a monic squarefree
    conductor f, with G = (k[t]/f)^x acting by sigma_a(lambda) = C_a(lambda).

A context presents O_L uniformly as k[t][w]/(h_w) with explicit action
tables, so residue algebras B_p = O_L/pO_L, Frobenius cosets, inertia and
decomposition groups all come out of finite linear algebra.  Frobenius
data is computed semantically (matching the q^(deg p)-power map against
the group action), never from theory shortcuts.
"""

from __future__ import annotations

import itertools
import os

from .ffield import (
    Field, FieldElem, frobenius_pow, is_irreducible, lift, make_extension,
    _pdivmod, _pgcd, _pmod, _pmodexp, _pmonic, _ptrim,
)
from .gring import AbelianGroup
from .ring import Poly, parse_poly, render_poly


# -- monic irreducible primes ------------------------------------------

def primes_upto(k, D, cache_path=None):
    """All monic irreducibles of degree <= D over k, ordered by
    (degree, coefficient index descending from the leading term)."""
    if D < 1:
        raise ValueError('D must be >= 1')
    if cache_path is not None and os.path.exists(cache_path):
        got = load_primes_cache(cache_path, k)
        if got is not None and got[0] == D:
            return got[1]
    raws = [e.val for e in k.elements()]
    out = []
    for d in range(1, D + 1):
        found = []
        for tail in itertools.product(raws, repeat=d):
            cand = list(tail) + [k.one_raw()]
            if is_irreducible(k, cand):
                found.append(Poly(k, cand))
        found.sort(key=lambda q: tuple(k.index_raw(c) for c in reversed(q.coeffs)))
        # count check: sum over d'|d of d'*N(d') = q^d
        total = sum(dd * sum(1 for q in out + found if q.degree == dd)
                    for dd in range(1, d + 1) if d % dd == 0)
        if total != k.order ** d:
            raise AssertionError('prime count mismatch at degree %d' % d)
        out.extend(found)
    if cache_path is not None and k.base is None:
        save_primes_cache(cache_path, k, D, out)
    return out


def save_primes_cache(path, k, D, primes):
    with open(path, 'w') as fh:
        fh.write('q=%d D=%d\n' % (k.order, D))
        for q in primes:
            fh.write(render_poly(q) + '\n')


def load_primes_cache(path, k):
    """Returns (D, primes) if the cache matches k, else None."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = dict(part.split('=') for part in lines[0].split())
    if int(head['q']) != k.order:
        return None
    if k.base is not None:
        return None  # cache stores prime-field coefficient text only
    return int(head['D']), [parse_poly(k, ln) for ln in lines[1:]]


# -- polynomials in w over k[t] ----------------------------------------
# a "wpoly" is a list of Poly coefficients, ascending in w

def wp_trim(cs):
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def wp_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return wp_trim(out)


def wp_scale(a, c):
    return wp_trim([x * c for x in a])


def wp_mul(a, b):
    a, b = wp_trim(a), wp_trim(b)
    if not a or not b:
        return []
    field = a[0].field
    out = [Poly.zero(field)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return wp_trim(out)


def wp_divmod(a, b):
    """Quotient and remainder by a divisor monic in w."""
    b = wp_trim(b)
    if not b:
        raise ZeroDivisionError('division by zero in k[t][w]')
    if not b[-1].is_monic() or b[-1].degree != 0:
        raise ValueError('divisor must be monic in w')
    field = b[0].field
    rem = list(wp_trim(a))
    db = len(b) - 1
    q = [Poly.zero(field)] * max(len(rem) - db, 0)
    while len(rem) > db:
        c = rem[-1]
        shift = len(rem) - 1 - db
        q[shift] = c
        for i, bc in enumerate(b):
            rem[shift + i] = rem[shift + i] - c * bc
        rem = wp_trim(rem[:-1])
    return wp_trim(q), wp_trim(rem)


def wp_mod(a, b):
    return wp_divmod(a, b)[1]


def wp_divexact(a, b):
    q, r = wp_divmod(a, b)
    if r:
        raise ValueError('division in k[t][w] is not exact')
    return q


def wp_eval(s, arg, mod):
    """Substitute the wpoly `arg` for w in `s`, reduced mod `mod`."""
    field = mod[0].field if mod else (s[0].field if s else arg[0].field)
    acc = []
    for c in reversed(wp_trim(s)):
        acc = wp_add(wp_mul(acc, arg), [c])
        acc = wp_mod(acc, mod)
    return acc


def wp_eq(a, b):
    return wp_trim(a) == wp_trim(b)


# -- Carlitz module machinery ------------------------------------------

def tau_mul(q, a, b):
    """Product of twisted polynomials (sum a_i tau^i)(sum b_j tau^j);
    coefficients are Polys, tau c = c^q tau."""
    if not a or not b:
        return []
    field = (a or b)[0].field
    out = [Poly.zero(field)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y.qpow(q, i)
    return out


def carlitz_tau(k, a):
    """C_a as a twisted polynomial: list of Poly coefficients c_i with
    C_a(x) = sum c_i x^(q^i)."""
    q = k.order
    ct = [Poly.t(k), Poly.one(k)]
    acc = []
    power = [Poly.one(k)]  # C_t^j, starting at j = 0
    for i in range(a.degree + 1):
        c = a.coeff(i)
        if not c.is_zero():
            term = [x.scale(c) for x in power]
            if len(acc) < len(term):
                acc += [Poly.zero(k)] * (len(term) - len(acc))
            for j, x in enumerate(term):
                acc[j] = acc[j] + x
        power = tau_mul(q, power, ct)
    while acc and acc[-1].is_zero():
        acc.pop()
    return acc


def carlitz_wpoly(k, a):
    """C_a(x) as an honest polynomial in x (sparse in the exponents q^i)."""
    q = k.order
    tau = carlitz_tau(k, a)
    if not tau:
        return []
    out = [Poly.zero(k)] * (q ** (len(tau) - 1) + 1)
    for i, c in enumerate(tau):
        out[q ** i] = c
    return wp_trim(out)


def carlitz_apply(ctx, a, x):
    """C_a evaluated at an O_L element (wpoly), reduced mod h_w."""
    q = ctx.k.order
    tau = carlitz_tau(ctx.k, a)
    acc = []
    power = x
    for i, c in enumerate(tau):
        if i > 0:
            power = wp_qpow(power, q, ctx.h_w)
        acc = wp_add(acc, wp_mod(wp_mul(power, [c]), ctx.h_w))
    return wp_mod(acc, ctx.h_w)


def wp_qpow(x, q, mod):
    """q-th power of a wpoly mod `mod` (coefficients are q-th powered and
    w-exponents multiplied, then reduced)."""
    out = []
    field = mod[0].field
    for i, c in enumerate(wp_trim(x)):
        term = [Poly.zero(field)] * (i * q) + [c.qpow(q)]
        out = wp_add(out, wp_mod(term, mod))
    return out


def _factor_int(n):
    fac = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


def factor_monic(k, f):
    """Monic irreducible factors of a monic f over k, with multiplicity,
    by trial division against the prime list."""
    out = []
    rem = f
    for q in primes_upto(k, max(f.degree, 1)):
        if rem.degree < 1:
            break
        m = 0
        while True:
            quo, r = rem.divmod(q)
            if not r.is_zero():
                break
            rem = quo
            m += 1
        if m:
            out.append((q, m))
    if rem.degree > 0:
        raise AssertionError('trial division left a nontrivial part')
    return out


def carlitz_cyclotomic(k, f):
    """The monic generator phi_f of the ideal of a primitive f-torsion
    point: prod over monic divisors g of f of C_g(x)^mu(f/g), for f
    squarefree.  Degree = |(k[t]/f)^x|."""
    fac = factor_monic(k, f)
    if any(m > 1 for _, m in fac):
        raise ValueError('conductor must be squarefree')
    parts = [q for q, _ in fac]
    r = len(parts)
    num = [Poly.one(k)]
    den = [Poly.one(k)]
    for bits in itertools.product((0, 1), repeat=r):
        g = Poly.one(k)
        for take, q in zip(bits, parts):
            if take:
                g = g * q
        w = carlitz_wpoly(k, g)
        if (r - sum(bits)) % 2 == 0:
            num = wp_mul(num, w)
        else:
            den = wp_mul(den, w)
    phi = wp_divexact(num, den)
    expect = 1
    for q, _ in fac:
        expect *= k.order ** q.degree - 1
    if len(phi) - 1 != expect:
        raise AssertionError('cyclotomic degree mismatch')
    return phi


# -- unit group of k[t]/f ----------------------------------------------

def _unit_pow(k, a, n, f):
    r = Poly.one(k)
    b = a % f
    while n:
        if n & 1:
            r = (r * b) % f
        b = (b * b) % f
        n >>= 1
    return r


def unit_group(k, f):
    """(k[t]/f)^x for monic squarefree f, as an AbelianGroup in invariant-
    factor form with explicit unit generators.

    Returns (group, gens) with gens[i] a Poly generating the i-th cyclic
    factor; exponent vectors map to units via prod gens[i]^(e_i) mod f.
    """
    fac = factor_monic(k, f)
    cyclics = []
    for q, m in fac:
        if m > 1:
            raise ValueError('conductor must be squarefree')
        kq = make_extension(k, q.degree, list(q.coeffs))
        n = kq.order - 1
        if n == 1:
            continue
        g = kq.multiplicative_generator()
        gen_poly = Poly(k, [c.val for c in g.coords(k)])
        # CRT lift: gen at this component, 1 elsewhere
        other = Poly.one(k)
        for q2, _ in fac:
            if q2 != q:
                other = other * q2
        # solve u = gen mod q, u = 1 mod other
        u = _crt_pair(k, gen_poly, q, Poly.one(k), other)
        cyclics.append((n, u))
    # merge to invariant factors via prime-power components
    comps = {}
    for n, g in cyclics:
        for pr, e in _factor_int(n).items():
            pe = pr ** e
            comps.setdefault(pr, []).append((pe, _unit_pow(k, g, n // pe, f)))
    for pr in comps:
        comps[pr].sort(key=lambda x: -x[0])
    depth = max((len(v) for v in comps.values()), default=0)
    orders = []
    gens = []
    for i in range(depth):
        n = 1
        g = Poly.one(k)
        for pr in sorted(comps):
            if i < len(comps[pr]):
                pe, gp = comps[pr][i]
                n *= pe
                g = (g * gp) % f
        orders.append(n)
        gens.append(g)
    # smallest factor first: d_1 | d_2 | ... | d_k
    orders.reverse()
    gens.reverse()
    return AbelianGroup(orders), gens


def _crt_pair(k, a1, m1, a2, m2):
    """u = a1 mod m1, u = a2 mod m2 for coprime moduli."""
    # inverse of m2 mod m1 by extended euclid
    inv = _poly_invmod(k, m2 % m1, m1)
    u = a2 + ((a1 - a2) * inv % m1) * m2
    return u % (m1 * m2)


def _poly_invmod(k, a, m):
    r0, r1 = m, a % m
    s0, s1 = Poly.zero(k), Poly.one(k)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError('element not invertible mod %r' % m)
    return (s0.scale(r0.coeff(0).inverse())) % m


def unit_of(group, gens, k, f, g):
    """The unit mod f attached to an exponent vector."""
    u = Poly.one(k)
    for e, gen in zip(g, gens):
        u = (u * _unit_pow(k, gen, e, f)) % f
    return u


def exponent_of(group, gens, k, f, a):
    """Exponent vector of a unit a mod f (brute force; desk scale)."""
    a = a % f
    for g in group.elements():
        if unit_of(group, gens, k, f, g) == a:
            return g
    raise ValueError('%r is not a unit mod %r' % (a, f))


# -- Galois contexts ---------------------------------------------------

class GaloisContext:
    """O_L = k[t][w]/(h_w) with an explicit abelian G-action on w.

    `action` maps each group element to the wpoly sigma_g(w); the action
    tables are validated to compose correctly at construction.
    """

    def __init__(self, k, group, family, param, h_w, action):
        self.k = k
        self.group = group
        self.family = family
        self.param = param
        self.h_w = wp_trim(h_w) or [Poly.zero(k), Poly.one(k)]
        self.action = {g: wp_mod(wp_trim(v), self.h_w)
                       for g, v in action.items()}
        self.degree = len(self.h_w) - 1
        self._validate()

    def _validate(self):
        els = self.group.elements()
        for g in els:
            if g not in self.action:
                raise ValueError('missing action entry for %r' % (g,))
            # h_w(sigma(w)) = 0: the action is well defined on O_L
            if wp_trim(wp_eval(self.h_w, self.action[g], self.h_w)):
                raise ValueError('action of %r does not preserve O_L' % (g,))
        w = [Poly.zero(self.k), Poly.one(self.k)]
        if not wp_eq(self.action[self.group.identity()], wp_mod(w, self.h_w)):
            raise ValueError('identity must act trivially')
        for g in els:
            for h in els:
                lhs = wp_eval(self.action[h], self.action[g], self.h_w)
                if not wp_eq(lhs, self.action[self.group.add(g, h)]):
                    raise ValueError('action tables do not compose at %r,%r'
                                     % (g, h))

    def sigma(self, g, x):
        """Apply sigma_g to an O_L element given as a wpoly."""
        return wp_eval(x, self.action[g], self.h_w)

    def __repr__(self):
        return 'GaloisContext(%s, %r, G=%r)' % (self.family, self.param,
                                                self.group)


def build_constant_context(k, m):
    """L = k_m(t): G = Z/m generated by the Frobenius y -> y^q of k_m/k."""
    if m < 1:
        raise ValueError('m must be >= 1')
    if m == 1:
        G = AbelianGroup([])
        h = [Poly.zero(k), Poly.one(k)]
        return GaloisContext(k, G, 'constant', 1, h, {(): [Poly.zero(k),
                                                           Poly.one(k)]})
    km = make_extension(k, m)
    h = [Poly(k, [c]) for c in km.modulus]
    G = AbelianGroup([m])
    gen = km.gen()
    action = {}
    for j in range(m):
        img = frobenius_pow(gen, j, base=k)
        action[(j,)] = wp_trim([Poly(k, [c.val]) for c in img.coords(k)])
    return GaloisContext(k, G, 'constant', m, h, action)


def build_cyclotomic_context(k, f):
    """L = K(lambda_f) for monic squarefree f: G = (k[t]/f)^x with
    sigma_a(lambda) = C_a(lambda)."""
    if not f.is_monic() or f.degree < 1:
        raise ValueError('conductor must be monic of positive degree')
    phi = carlitz_cyclotomic(k, f)
    G, gens = unit_group(k, f)
    if G.order % k.p == 0:
        raise ValueError('|G| divisible by the characteristic')  # unreachable
    w = [Poly.zero(k), Poly.one(k)]
    action = {}
    for g in G.elements():
        a = unit_of(G, gens, k, f, g)
        img = wp_mod(carlitz_wpoly(k, a), phi)
        action[g] = wp_eval(img, w, phi)
    ctx = GaloisContext(k, G, 'cyclotomic', f, phi, action)
    ctx.unit_gens = gens
    return ctx


# -- residue algebras and prime data -----------------------------------

class ResidueAlgebra:
    """B_p = kappa_p[w]/(hbar): elements are fixed-length tuples of
    kappa_p FieldElems (coefficients of powers of w)."""

    def __init__(self, kappa, hbar, ground):
        self.kappa = kappa
        self.ground = ground  # k, for the k-linear structure
        self.h = tuple(c.val if isinstance(c, FieldElem) else c for c in hbar)
        self.dim = len(self.h) - 1
        self.k_dim = self.dim * _ext_degree(kappa, ground)

    def _pad(self, raws):
        raws = list(raws)[:self.dim]
        raws += [self.kappa.zero_raw()] * (self.dim - len(raws))
        return tuple(raws)

    def zero(self):
        return self._pad([])

    def one(self):
        return self._pad([self.kappa.one_raw()])

    def w(self):
        return self._pad([self.kappa.zero_raw(), self.kappa.one_raw()])

    def from_kappa(self, c):
        return self._pad([c.val])

    def from_wpoly_at(self, wpoly, zbar):
        """Evaluate Poly coefficients at zbar in kappa."""
        return self._pad([c.evaluate(zbar).val for c in wpoly])

    def add(self, x, y):
        a = self.kappa.add_raw
        return tuple(a(u, v) for u, v in zip(x, y))

    def neg(self, x):
        return tuple(self.kappa.neg_raw(u) for u in x)

    def scale(self, x, c):
        m = self.kappa.mul_raw
        return tuple(m(u, c.val) for u in x)

    def mul(self, x, y):
        if self.dim == 0:
            return ()
        from .ffield import _pmulmod
        return self._pad(_pmulmod(self.kappa, list(x), list(y), list(self.h)))

    def power(self, x, n):
        r = self.one()
        b = x
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def is_zero(self, x):
        z = self.kappa.zero_raw()
        return all(c == z for c in x)

    def elements_basis(self):
        """k-basis of B_p: b_j * w^i in a fixed order."""
        out = []
        for i in range(self.dim):
            for bj in _kappa_basis(self.kappa, self.ground):
                v = [self.kappa.zero_raw()] * self.dim
                v[i] = bj
                out.append(tuple(v))
        return out

    def to_k(self, x):
        """Coordinates over the ground field k, matching elements_basis."""
        out = []
        for c in x:
            out.extend(FieldElem(self.kappa, c).coords(self.ground))
        return out

    def from_k(self, coords):
        kdim = _ext_degree(self.kappa, self.ground)
        raws = []
        for i in range(self.dim):
            chunk = coords[i * kdim:(i + 1) * kdim]
            raws.append(_kappa_from_coords(self.kappa, self.ground, chunk))
        return tuple(raws)

    def linear_matrix(self, fn):
        """k-matrix (columns = images of basis vectors) of a k-linear map."""
        cols = [self.to_k(fn(b)) for b in self.elements_basis()]
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(len(cols[0]))]


def _ext_degree(kappa, ground):
    d = 1
    f = kappa
    while f is not ground:
        if f.base is None:
            raise ValueError('%r is not an extension of %r' % (kappa, ground))
        d *= f.degree
        f = f.base
    return d


def _kappa_basis(kappa, ground):
    """Raw values of the power-basis of kappa over ground."""
    if kappa is ground:
        return [kappa.one_raw()]
    if kappa.base is not ground:
        raise ValueError('only one-step extensions supported here')
    out = []
    for i in range(kappa.degree):
        v = [kappa.base.zero_raw()] * kappa.degree
        v[i] = kappa.base.one_raw()
        out.append(tuple(v))
    return out


def _kappa_from_coords(kappa, ground, chunk):
    if kappa is ground:
        return chunk[0].val
    return tuple(c.val for c in chunk)


class PrimeData:
    """Everything local at a prime p: the residue algebra with its G-action
    and q-power map, the chosen prime P above p, and the groups G_P, I_P
    and the coset frob_P."""

    def __init__(self, ctx, p, choice=0):
        k = ctx.k
        if not p.is_monic() or not is_irreducible(k, list(p.coeffs)):
            raise ValueError('%r is not monic irreducible' % p)
        self.ctx = ctx
        self.p = p
        self.d = p.degree
        kappa = make_extension(k, self.d, list(p.coeffs))
        self.kappa = kappa
        self.zbar = kappa.gen()
        hbar = [c.evaluate(self.zbar).val for c in ctx.h_w]
        self.B = ResidueAlgebra(kappa, hbar, k)
        self.g_images = {g: self.B.from_wpoly_at(ctx.action[g], self.zbar)
                         for g in ctx.group.elements()}
        self._factor(choice)
        self._groups()

    # -- G-action and q-power map on B_p -------------------------------

    def g_act(self, g, x):
        """sigma_g on B_p: kappa-linear substitution w -> sigma_g(w)."""
        B = self.B
        img = self.g_images[g]
        acc = B.zero()
        power = B.one()
        for c in x:
            acc = B.add(acc, B.scale(power, FieldElem(B.kappa, c)))
            power = B.mul(power, img)
        return acc

    def qpow(self, x, s=1):
        return self.B.power(x, self.ctx.k.order ** s)

    # -- primes above p ------------------------------------------------

    def _factor(self, choice):
        kappa = self.kappa
        h = _pmonic(kappa, list(self.B.h))
        irr = _distinct_irreducible_factors(kappa, h)
        irr.sort(key=lambda fac: tuple(kappa.index_raw(c)
                                       for c in reversed(fac)))
        mults = []
        for fac in irr:
            m = 0
            rem = h
            while True:
                quo, r = _pdivmod(kappa, rem, fac)
                if r:
                    break
                rem = quo
                m += 1
            mults.append(m)
        degs = {len(fac) - 1 for fac in irr}
        if len(degs) != 1 or len(set(mults)) != 1:
            raise AssertionError('factors above p are not conjugate')
        self.factors = irr
        self.e = mults[0]
        self.f_res = degs.pop()
        self.r = len(irr)
        if self.e * self.f_res * self.r != max(self.ctx.degree, 1):
            raise AssertionError('e*f*r does not match [L:K]')
        self.choice = choice
        self.pi = irr[choice % len(irr)]
        self.kappa_P = make_extension(kappa, self.f_res, list(self.pi))
        self.wbar = self.kappa_P.gen()

    def reduce_mod_P(self, x):
        """Image of a B_p element in kappa_P."""
        acc = self.kappa_P.zero()
        power = self.kappa_P.one()
        for c in x:
            acc = acc + power * lift(FieldElem(self.kappa, c), self.kappa_P)
            power = power * self.wbar
        return acc

    def _groups(self):
        G = self.ctx.group
        pi_poly = Poly(self.kappa, list(self.pi))
        Q = self.kappa.order
        wq = self.wbar ** Q
        self.G_P = []
        self.I_P = []
        self.frob_P = []
        for g in G.elements():
            img = self.reduce_mod_P(self.g_images[g])
            if not pi_poly.evaluate(img).is_zero():
                continue
            self.G_P.append(g)
            if img == self.wbar:
                self.I_P.append(g)
            if img == wq:
                self.frob_P.append(g)
        if len(self.G_P) != self.e * self.f_res:
            raise AssertionError('|G_P| != e*f')
        if len(self.I_P) != self.e or len(self.frob_P) != self.e:
            raise AssertionError('inertia/Frobenius size mismatch')
        # frob_P must be a single coset of I_P in G_P
        g0 = self.frob_P[0]
        coset = {self.ctx.group.add(i, g0) for i in self.I_P}
        if coset != set(self.frob_P):
            raise AssertionError('frob_P is not a coset of I_P')

    # -- checks used by the test-suite ---------------------------------

    def frobenius_congruence_ok(self):
        """sum over frob_P of sigma(x) = e * x^|kappa_p| in B_p, for every
        basis element x."""
        B = self.B
        e_scalar = B.from_kappa(self.kappa.from_int(self.e))
        for x in B.elements_basis():
            s = B.zero()
            for g in self.frob_P:
                s = B.add(s, self.g_act(g, x))
            rhs = B.mul(e_scalar, self.qpow(x, self.d))
            if s != rhs:
                return False
        return True

    def find_normal_basis(self, tries=200):
        """Generators exhibiting B_p as a free k[G]-module, or None.

        For each generator x, the orbit {sigma(x)} must extend the running
        k-span by exactly |G| dimensions.
        """
        import random
        from . import linalg
        rng = random.Random(5)
        G = self.ctx.group.elements()
        k = self.ctx.k
        B = self.B
        total = B.dim * _ext_degree(self.kappa, k)
        if total % len(G) != 0:
            return None
        rank_needed = total // len(G)
        rows = []
        gens = []
        raws = [e.val for e in self.kappa.elements()]
        for _ in range(tries):
            if len(gens) == rank_needed:
                return gens
            x = tuple(rng.choice(raws) for _ in range(B.dim))
            cand = rows + [B.to_k(self.g_act(g, x)) for g in G]
            if linalg.rank(k, cand) == len(rows) + len(G):
                rows = cand
                gens.append(x)
        return gens if len(gens) == rank_needed else None


def _distinct_irreducible_factors(field, h):
    """Distinct monic irreducible factors of monic h (raw coefficient
    lists), multiplicity-blind."""
    h = _ptrim(field, h)
    if len(h) - 1 <= 0:
        return []
    d = _pderiv(field, h)
    if not d:
        # h(w) = u(w^p): take the p-th root and recurse
        p = field.p
        root = []
        for i in range(0, len(h), p):
            root.append(field.pow_raw(h[i], field.order // p))
        return _distinct_irreducible_factors(field, root)
    g = _pgcd(field, h, d)
    if len(g) - 1 > 0:
        part = _pdivmod(field, h, g)[0]
        out = _distinct_irreducible_factors(field, g)
        for fac in _distinct_irreducible_factors(field, part):
            if fac not in out:
                out.append(fac)
        return out
    return _factor_squarefree(field, h)


def _pderiv(field, h):
    out = []
    for i in range(1, len(h)):
        c = h[i]
        acc = field.zero_raw()
        for _ in range(i % field.p):
            acc = field.add_raw(acc, c)
        out.append(acc)
    return _ptrim(field, out)


def _factor_squarefree(field, h):
    """Factor a squarefree monic raw polynomial: distinct-degree split,
    then exhaustive trial division inside each block."""
    out = []
    rem = h
    Q = field.order
    d = 1
    x = [field.zero_raw(), field.one_raw()]
    while len(rem) - 1 >= 2 * d:
        xq = _pmodexp(field, x, Q ** d, rem)
        diff = _psub(field, xq, x)
        g = _pgcd(field, diff, rem)
        if len(g) - 1 > 0:
            out.extend(_split_equal_degree(field, g, d))
            rem = _pdivmod(field, rem, g)[0]
        d += 1
    if len(rem) - 1 > 0:
        out.append(rem)
    return out


def _psub(field, a, b):
    n = max(len(a), len(b))
    z = field.zero_raw()
    a = list(a) + [z] * (n - len(a))
    b = list(b) + [z] * (n - len(b))
    return _ptrim(field, [field.sub_raw(x, y) for x, y in zip(a, b)])


def _split_equal_degree(field, g, d):
    """All irreducible factors of g, each of degree exactly d, by trial
    division over monic candidates (desk scale)."""
    out = []
    rem = g
    raws = [e.val for e in field.elements()]
    if len(rem) - 1 == d:
        return [rem]
    for tail in itertools.product(raws, repeat=d):
        if len(rem) - 1 == d:
            break
        cand = list(tail) + [field.one_raw()]
        quo, r = _pdivmod(field, rem, cand)
        if not r:
            out.append(cand)
            rem = quo
    if len(rem) - 1 == d:
        out.append(rem)
    elif len(rem) - 1 != 0:
        raise AssertionError('equal-degree split failed')
    return out


def prime_data(ctx, p, choice=0):
    return PrimeData(ctx, p, choice)


# -- context descriptor files ------------------------------------------

def save_context(path, ctx):
    k = ctx.k
    with open(path, 'w') as fh:
        if k.base is None:
            fh.write('field: p=%d\n' % k.p)
        else:
            mod = ','.join(str(c) for c in k.modulus)
            fh.write('field: p=%d degree=%d modulus=%s\n'
                     % (k.p, k.degree, mod))
        fh.write('family: %s\n' % ctx.family)
        if ctx.family == 'constant':
            fh.write('param: %d\n' % ctx.param)
        else:
            fh.write('param: %s\n' % render_poly(ctx.param))
        for g in ctx.group.elements():
            body = ';'.join(render_poly(c) for c in ctx.action[g])
            fh.write('action: %s : %s\n'
                     % (','.join(str(e) for e in g), body))


def load_context(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    spec = {}
    actions = []
    for ln in lines:
        key, _, val = ln.partition(':')
        if key.strip() == 'action':
            actions.append(val.strip())
        else:
            spec[key.strip()] = val.strip()
    fparts = dict(part.split('=') for part in spec['field'].split())
    k = Field.prime(int(fparts['p']))
    if 'degree' in fparts:
        mods = [int(c) for c in fparts['modulus'].split(',')]
        k = make_extension(k, int(fparts['degree']),
                           [k.from_int(c) for c in mods])
    family = spec['family']
    if family == 'constant':
        ctx = build_constant_context(k, int(spec['param']))
    elif family == 'cyclotomic':
        ctx = build_cyclotomic_context(k, parse_poly(k, spec['param']))
    else:
        raise ValueError('unknown family %r' % family)
    for entry in actions:
        gtxt, _, body = entry.partition(':')
        g = tuple(int(e) for e in gtxt.strip().split(',') if e != '')
        want = [parse_poly(k, part) for part in body.strip().split(';')]
        if not wp_eq(ctx.action[g], want):
            raise ValueError('descriptor action table disagrees at %r' % (g,))
    return ctx
