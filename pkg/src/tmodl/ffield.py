"""Exact arithmetic in finite fields and their extension towers.

A field is either a prime field F_p or an extension of a previously built
field by an irreducible monic modulus.  Elements are coefficient vectors
over the ground field in the power basis of the modulus; for a prime field
the raw value is a plain int in [0, p).

Fields are interned and immutable, so they are safe to share freely.
"""

from __future__ import annotations

import itertools


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


_FIELD_CACHE = {}

# Fields at or below this order get multiplication lookup tables.
_TABLE_LIMIT = 4096


class Field:
    """A finite field, given as a tower over its prime field.

    Raw element values: int for a prime field, tuple of base raw values
    (ascending power basis, fixed length = degree) for an extension.
    """

    def __init__(self, p, base=None, modulus=None):
        self.p = p
        self.base = base
        self.modulus = modulus  # tuple of base raw values, monic, len = degree+1
        if base is None:
            self.degree = 1
            self.order = p
        else:
            self.degree = len(modulus) - 1
            self.order = base.order ** self.degree
        self._inv_cache = {}
        self._mul_table = None
        self._gen = None

    # -- construction -------------------------------------------------

    @staticmethod
    def prime(p):
        key = ('prime', p)
        f = _FIELD_CACHE.get(key)
        if f is None:
            if not _is_prime(p):
                raise ValueError('%d is not prime' % p)
            f = Field(p)
            _FIELD_CACHE[key] = f
        return f

    def __repr__(self):
        return 'F_%d' % self.order

    def __hash__(self):
        return id(self)

    # -- raw arithmetic ------------------------------------------------

    def zero_raw(self):
        if self.base is None:
            return 0
        return (self.base.zero_raw(),) * self.degree

    def one_raw(self):
        if self.base is None:
            return 1
        return (self.base.one_raw(),) + (self.base.zero_raw(),) * (self.degree - 1)

    def add_raw(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        ba = self.base.add_raw
        return tuple(ba(x, y) for x, y in zip(a, b))

    def neg_raw(self, a):
        if self.base is None:
            return (-a) % self.p
        bn = self.base.neg_raw
        return tuple(bn(x) for x in a)

    def sub_raw(self, a, b):
        return self.add_raw(a, self.neg_raw(b))

    def mul_raw(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        if self.order <= _TABLE_LIMIT:
            tab = self._mul_table
            if tab is None:
                tab = self._mul_table = {}
            key = (a, b)
            r = tab.get(key)
            if r is None:
                r = self._mul_raw_slow(a, b)
                tab[key] = r
                tab[(b, a)] = r
            return r
        return self._mul_raw_slow(a, b)

    def _mul_raw_slow(self, a, b):
        base = self.base
        d = self.degree
        zero = base.zero_raw()
        prod = [zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == base.zero_raw():
                continue
            for j, y in enumerate(b):
                prod[i + j] = base.add_raw(prod[i + j], base.mul_raw(x, y))
        # reduce by monic modulus: x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        mod = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c == zero:
                continue
            prod[i] = zero
            for j in range(d):
                prod[i - d + j] = base.add_raw(
                    prod[i - d + j], base.neg_raw(base.mul_raw(c, mod[j])))
        return tuple(prod[:d])

    def pow_raw(self, a, n):
        if n < 0:
            return self.pow_raw(self.inv_raw(a), -n)
        r = self.one_raw()
        b = a
        while n:
            if n & 1:
                r = self.mul_raw(r, b)
            b = self.mul_raw(b, b)
            n >>= 1
        return r

    def inv_raw(self, a):
        if a == self.zero_raw():
            raise ZeroDivisionError('inverse of zero in %r' % self)
        r = self._inv_cache.get(a)
        if r is None:
            r = self.pow_raw(a, self.order - 2)
            self._inv_cache[a] = r
        return r

    # -- elements ------------------------------------------------------

    def zero(self):
        return FieldElem(self, self.zero_raw())

    def one(self):
        return FieldElem(self, self.one_raw())

    def elem(self, raw):
        return FieldElem(self, raw)

    def from_int(self, n):
        """n times the identity (prime-field image of an integer)."""
        r = self.zero_raw()
        one = self.one_raw()
        for _ in range(n % self.p):
            r = self.add_raw(r, one)
        return FieldElem(self, r)

    def elements(self):
        """All elements, in a fixed deterministic order."""
        if self.base is None:
            for v in range(self.p):
                yield FieldElem(self, v)
        else:
            base_raws = [e.val for e in self.base.elements()]
            for combo in itertools.product(base_raws, repeat=self.degree):
                yield FieldElem(self, combo)

    def gen(self):
        """The power-basis generator x of an extension (or 1 for a prime field)."""
        if self.base is None:
            return self.one()
        raw = [self.base.zero_raw()] * self.degree
        if self.degree == 1:
            # degenerate degree-1 extension: x is the root of a linear modulus
            return FieldElem(self, (self.base.neg_raw(self.modulus[0]),))
        raw[1] = self.base.one_raw()
        return FieldElem(self, tuple(raw))

    def multiplicative_generator(self):
        if self._gen is not None:
            return self._gen
        n = self.order - 1
        fac = _factorize(n)
        for e in self.elements():
            if e.is_zero():
                continue
            if all(e ** (n // f) != self.one() for f in fac):
                self._gen = e
                return e
        raise RuntimeError('no generator found')  # pragma: no cover

    def index_raw(self, a):
        """Canonical integer encoding of a raw value (base-p digits)."""
        if self.base is None:
            return a
        n = 0
        for c in reversed(a):
            n = n * self.base.order + self.base.index_raw(c)
        return n


def _factorize(n):
    fac = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac.add(d)
            n //= d
        d += 1
    if n > 1:
        fac.add(n)
    return fac


class FieldElem:
    """An element of a Field; immutable, with operator arithmetic."""

    __slots__ = ('field', 'val')

    def __init__(self, field, val):
        self.field = field
        self.val = val

    def __eq__(self, other):
        return (isinstance(other, FieldElem) and other.field is self.field
                and other.val == self.val)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((id(self.field), self.val))

    def __add__(self, other):
        return FieldElem(self.field, self.field.add_raw(self.val, other.val))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub_raw(self.val, other.val))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_raw(self.val))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul_raw(self.val, other.val))

    def __pow__(self, n):
        return FieldElem(self.field, self.field.pow_raw(self.val, n))

    def inverse(self):
        return FieldElem(self.field, self.field.inv_raw(self.val))

    def __truediv__(self, other):
        return self * other.inverse()

    def is_zero(self):
        return self.val == self.field.zero_raw()

    def coords(self, ground=None):
        """Coefficient vector over `ground` (default: the prime field).

        Coordinates are returned as FieldElems of `ground`, lowest power
        first, following the tower basis.
        """
        f = self.field
        if ground is None:
            ground = _prime_of(f)
        if f is ground:
            return [self]
        if f.base is None:
            raise ValueError('%r is not an extension of %r' % (f, ground))
        out = []
        for c in self.val:
            out.extend(FieldElem(f.base, c).coords(ground))
        return out

    def __repr__(self):
        return render_elem(self)


def _prime_of(f):
    while f.base is not None:
        f = f.base
    return f


# -- polynomial helpers on raw coefficient lists (used for moduli) ------

def _ptrim(field, cs):
    cs = list(cs)
    z = field.zero_raw()
    while cs and cs[-1] == z:
        cs.pop()
    return cs


def _pmulmod(field, a, b, mod):
    """a*b mod `mod` over `field`; all raw coefficient lists, mod monic."""
    z = field.zero_raw()
    prod = [z] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == z:
            continue
        for j, y in enumerate(b):
            prod[i + j] = field.add_raw(prod[i + j], field.mul_raw(x, y))
    return _pmod(field, prod, mod)


def _pmod(field, a, mod):
    z = field.zero_raw()
    a = list(a)
    d = len(mod) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c == z:
            continue
        a[i] = z
        for j in range(d):
            a[i - d + j] = field.add_raw(a[i - d + j],
                                         field.neg_raw(field.mul_raw(c, mod[j])))
    return _ptrim(field, a[:d])


def _pgcd(field, a, b):
    a = _ptrim(field, a)
    b = _ptrim(field, b)
    while b:
        a = _pmod(field, a, _pmonic(field, b))
        a, b = b, a
    return _pmonic(field, a)


def _pmonic(field, a):
    a = _ptrim(field, a)
    if not a:
        return a
    inv = field.inv_raw(a[-1])
    return [field.mul_raw(c, inv) for c in a]


def _pmodexp(field, base_poly, e, mod):
    r = [field.one_raw()]
    b = _pmod(field, base_poly, mod)
    while e:
        if e & 1:
            r = _pmulmod(field, r, b, mod)
        b = _pmulmod(field, b, b, mod)
        e >>= 1
    return r


def is_irreducible(field, coeffs):
    """Rabin test for a monic polynomial over `field` (raw coefficients)."""
    coeffs = _ptrim(field, list(coeffs))
    d = len(coeffs) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    q = field.order
    x = [field.zero_raw(), field.one_raw()]
    # x^(q^d) == x mod f
    xq = _pmodexp(field, x, q ** d, coeffs)
    lhs = _ptrim(field, [field.sub_raw(a, b) for a, b in
                         itertools.zip_longest(xq, x, fillvalue=field.zero_raw())])
    if lhs:
        return False
    for r in _factorize(d):
        xr = _pmodexp(field, x, q ** (d // r), coeffs)
        diff = [field.sub_raw(a, b) for a, b in
                itertools.zip_longest(xr, x, fillvalue=field.zero_raw())]
        g = _pgcd(field, diff, coeffs)
        if len(g) - 1 != 0:
            return False
    return True


def find_factor(field, coeffs):
    """A nontrivial monic factor of a reducible monic polynomial (raw)."""
    coeffs = _ptrim(field, list(coeffs))
    d = len(coeffs) - 1
    base_raws = [e.val for e in field.elements()]
    for deg in range(1, d // 2 + 1):
        for tail in itertools.product(base_raws, repeat=deg):
            cand = list(tail) + [field.one_raw()]
            q, r = _pdivmod(field, coeffs, cand)
            if not r:
                return cand
    # no factor of degree <= d/2: poly was irreducible
    return None


def _pdivmod(field, a, b):
    a = _ptrim(field, a)
    b = _ptrim(field, b)
    z = field.zero_raw()
    inv = field.inv_raw(b[-1])
    q = [z] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b) and _ptrim(field, rem):
        rem = _ptrim(field, rem)
        if len(rem) < len(b):
            break
        c = field.mul_raw(rem[-1], inv)
        shift = len(rem) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            rem[shift + i] = field.sub_raw(rem[shift + i], field.mul_raw(c, bc))
        rem = rem[:-1]
    return q, _ptrim(field, rem)


def make_extension(base, degree, modulus=None):
    """Build the degree-`degree` extension of `base`.

    With no modulus, the lexicographically smallest monic irreducible of the
    requested degree is chosen (coefficients ordered by base-field element
    index, constant term varying fastest), so construction is deterministic.
    `modulus` may be a list of base FieldElems or raw values, ascending,
    length degree+1, monic.
    """
    if degree < 1:
        raise ValueError('degree must be >= 1')
    if degree == 1 and modulus is None:
        return base
    if modulus is not None:
        raw = [c.val if isinstance(c, FieldElem) else c for c in modulus]
        if len(raw) != degree + 1:
            raise ValueError('modulus degree mismatch')
        if raw[-1] != base.one_raw():
            raise ValueError('modulus must be monic')
        if not is_irreducible(base, raw):
            fac = find_factor(base, raw)
            raise ReducibleModulusError(base, raw, fac)
        key = ('ext', id(base), tuple(raw))
        f = _FIELD_CACHE.get(key)
        if f is None:
            f = Field(base.p, base, tuple(raw))
            _FIELD_CACHE[key] = f
        return f
    # deterministic scan
    base_raws = [e.val for e in base.elements()]
    for tail in itertools.product(base_raws, repeat=degree):
        cand = list(tail) + [base.one_raw()]
        if is_irreducible(base, cand):
            return make_extension(base, degree, cand)
    raise RuntimeError('no irreducible polynomial found')  # pragma: no cover


class ReducibleModulusError(ValueError):
    """Raised when a user-supplied modulus factors; carries a witness factor."""

    def __init__(self, field, modulus, factor):
        self.modulus = modulus
        self.factor = factor
        ValueError.__init__(
            self, 'modulus %s is reducible over %r (factor: %s)'
            % (modulus, field, factor))


def frobenius_pow(a, n, base=None):
    """a^(q^n) where q is the order of the designated base field.

    The base defaults to the field the element's field was built over (the
    element's own field for a prime field).
    """
    if n < 0:
        raise ValueError('n must be >= 0')
    if base is None:
        base = a.field.base or a.field
    return a ** (base.order ** n)


def trace_to_base(a):
    """Trace to the ground field: sum of a^(q^i) over the tower degree."""
    f = a.field
    if f.base is None:
        return a
    q = f.base.order
    s = a
    acc = a
    for _ in range(f.degree - 1):
        acc = acc ** q
        s = s + acc
    return descend(s, f.base)


def norm_to_base(a):
    """Norm to the ground field: product of the conjugates a^(q^i)."""
    f = a.field
    if f.base is None:
        return a
    q = f.base.order
    s = a
    acc = a
    for _ in range(f.degree - 1):
        acc = acc ** q
        s = s * acc
    return descend(s, f.base)


def lift(a, ext):
    """Embed an element of a lower tower level into the extension `ext`."""
    if a.field is ext:
        return a
    if ext.base is None:
        raise ValueError('%r does not contain %r' % (ext, a.field))
    b = lift(a, ext.base)
    raw = (b.val,) + (ext.base.zero_raw(),) * (ext.degree - 1)
    return FieldElem(ext, raw)


def descend(a, sub):
    """Inverse of lift: fails if the element is not in the subfield."""
    f = a.field
    if f is sub:
        return a
    if f.base is None:
        raise ValueError('%r is not above %r' % (f, sub))
    z = f.base.zero_raw()
    if any(c != z for c in a.val[1:]):
        raise ValueError('element %r does not lie in %r' % (a, sub))
    return descend(FieldElem(f.base, a.val[0]), sub)


# -- textual form ------------------------------------------------------

def render_elem(a):
    """Coefficient-vector rendering over the prime field, e.g. "[1,0,1]"."""
    coords = a.coords()
    return '[' + ','.join(str(c.val) for c in coords) + ']'


def parse_elem(field, text):
    """Parse the "[c0,c1,...]" form produced by render_elem."""
    text = text.strip()
    if not (text.startswith('[') and text.endswith(']')):
        raise ValueError('expected [c0,c1,...], got %r' % text)
    parts = [s for s in text[1:-1].split(',') if s.strip() != '']
    ints = [int(s) for s in parts]
    dim = _tower_dim(field)
    if len(ints) > dim:
        raise ValueError('too many coordinates for %r' % field)
    ints += [0] * (dim - len(ints))
    return _from_coords(field, ints)


def _tower_dim(field):
    d = 1
    while field.base is not None:
        d *= field.degree
        field = field.base
    return d


def _from_coords(field, ints):
    if field.base is None:
        return FieldElem(field, ints[0] % field.p)
    sub = _tower_dim(field.base)
    raws = []
    for i in range(field.degree):
        raws.append(_from_coords(field.base, ints[i * sub:(i + 1) * sub]).val)
    return FieldElem(field, tuple(raws))
