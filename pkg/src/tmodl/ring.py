"""Polynomials in t, truncated Laurent series in 1/t, and rational functions.

Laurent values always carry an explicit precision: the series is known
modulo O(t^-prec).  There is deliberately no exact-equality operation on
Laurent values; use approx_eq, which compares modulo the weaker of the two
precisions.
"""

from __future__ import annotations

from .ffield import FieldElem, lift, descend


class Poly:
    """Polynomial over a Field, coefficients ascending in t, canonical form."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs):
        # coeffs: iterable of FieldElem or raw values
        raw = [c.val if isinstance(c, FieldElem) else c for c in coeffs]
        z = field.zero_raw()
        while raw and raw[-1] == z:
            raw.pop()
        self.field = field
        self.coeffs = tuple(raw)

    @staticmethod
    def zero(field):
        return Poly(field, [])

    @staticmethod
    def one(field):
        return Poly(field, [field.one_raw()])

    @staticmethod
    def t(field, power=1):
        return Poly(field, [field.zero_raw()] * power + [field.one_raw()])

    @staticmethod
    def const(c):
        return Poly(c.field, [c.val])

    @staticmethod
    def from_ints(field, ints):
        return Poly(field, [field.from_int(n).val for n in ints])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return FieldElem(self.field, self.coeffs[i])
        return self.field.zero()

    def leading(self):
        if not self.coeffs:
            raise ValueError('zero polynomial has no leading coefficient')
        return FieldElem(self.field, self.coeffs[-1])

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one_raw()

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.field is self.field
                and other.coeffs == self.coeffs)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __add__(self, other):
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add_raw(out[i], c)
        return Poly(f, out)

    def __neg__(self):
        f = self.field
        return Poly(f, [f.neg_raw(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(f, [])
        z = f.zero_raw()
        out = [z] * (len(a) + len(b) - 1)
        add, mul = f.add_raw, f.mul_raw
        for i, x in enumerate(a):
            if x == z:
                continue
            for j, y in enumerate(b):
                out[i + j] = add(out[i + j], mul(x, y))
        return Poly(f, out)

    def scale(self, c):
        f = self.field
        return Poly(f, [f.mul_raw(x, c.val) for x in self.coeffs])

    def __pow__(self, n):
        r = Poly.one(self.field)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def shift(self, n):
        """Multiply by t^n (n >= 0)."""
        if not self.coeffs:
            return self
        return Poly(self.field, (self.field.zero_raw(),) * n + self.coeffs)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError('polynomial division by zero')
        f = self.field
        inv = f.inv_raw(other.coeffs[-1])
        rem = list(self.coeffs)
        db = other.degree
        z = f.zero_raw()
        q = [z] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == z:
                continue
            c = f.mul_raw(c, inv)
            q[i - db] = c
            for j, bc in enumerate(other.coeffs):
                rem[i - db + j] = f.sub_raw(rem[i - db + j], f.mul_raw(c, bc))
        return Poly(f, q), Poly(f, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def divexact(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError('division is not exact')
        return q

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def evaluate(self, x):
        """Horner evaluation at a FieldElem of any field containing self.field."""
        acc = x.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + lift(FieldElem(self.field, c), x.field)
        return acc

    def map_field(self, target):
        """View the polynomial over an extension field."""
        return Poly(target, [lift(FieldElem(self.field, c), target).val
                             for c in self.coeffs])

    def descend_field(self, sub):
        return Poly(sub, [descend(FieldElem(self.field, c), sub).val
                          for c in self.coeffs])

    def qpow(self, q, s=1):
        """The q^s-th power: coefficients to the q^s, exponents times q^s."""
        e = q ** s
        f = self.field
        z = f.zero_raw()
        out = [z] * (e * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * e] = f.pow_raw(c, e)
        return Poly(f, out)

    def derivative(self):
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = FieldElem(f, self.coeffs[i])
            out.append((f.from_int(i) * c).val)
        return Poly(f, out)

    def __repr__(self):
        return render_poly(self)


def render_poly(p, var='t'):
    """Render as e.g. "t^2+t+1"; coefficient vectors for extension fields."""
    if p.is_zero():
        return '0'
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if c.is_zero():
            continue
        f = p.field
        if f.base is None:
            cs = '' if c.val == 1 or i == 0 and False else str(c.val)
            if c.val == 1 and i > 0:
                cs = ''
        else:
            cs = repr(c)
        if i == 0:
            term = cs if cs else ('1' if f.base is None else repr(c))
            if f.base is None and c.val == 1:
                term = '1'
        elif i == 1:
            term = (cs + '*' if cs else '') + var
        else:
            term = (cs + '*' if cs else '') + '%s^%d' % (var, i)
        parts.append(term)
    return '+'.join(parts)


def parse_poly(field, text, var='t'):
    """Parse the render_poly form (prime-field integer coefficients only)."""
    text = text.replace(' ', '')
    if text == '0':
        return Poly.zero(field)
    coeffs = {}
    for term in text.split('+'):
        if not term:
            continue
        if var in term:
            head, _, tail = term.partition(var)
            c = int(head.rstrip('*')) if head.rstrip('*') else 1
            e = int(tail[1:]) if tail.startswith('^') else 1
        else:
            c, e = int(term), 0
        coeffs[e] = coeffs.get(e, 0) + c
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return Poly.from_ints(field, out)


class Laurent:
    """Truncated Laurent series in 1/t: sum of c_i t^i for i <= top.

    coeffs[j] is the coefficient of t^(top-j); the value is known modulo
    O(t^-prec).  Stored coefficients never extend below exponent -(prec-1).
    """

    __slots__ = ('field', 'top', 'coeffs', 'prec')

    def __init__(self, field, top, coeffs, prec):
        raw = [c.val if isinstance(c, FieldElem) else c for c in coeffs]
        z = field.zero_raw()
        # drop leading zeros
        while raw and raw[0] == z:
            raw.pop(0)
            top -= 1
        # truncate below precision
        floor = -(prec - 1)
        keep = top - floor + 1
        raw = raw[:max(keep, 0)]
        while raw and raw[-1] == z:
            raw.pop()
        self.field = field
        self.top = top if raw else None
        self.coeffs = tuple(raw)
        self.prec = prec

    @staticmethod
    def zero(field, prec):
        return Laurent(field, 0, [], prec)

    @staticmethod
    def one(field, prec):
        return Laurent(field, 0, [field.one_raw()], prec)

    @staticmethod
    def from_poly(p, prec):
        return Laurent(p.field, p.degree, list(reversed(p.coeffs)), prec)

    @staticmethod
    def term(field, c, e, prec):
        return Laurent(field, e, [c], prec)

    def is_zero(self):
        """Zero to the stated precision."""
        return not self.coeffs

    def coeff(self, e):
        if self.top is None:
            return self.field.zero()
        j = self.top - e
        if 0 <= j < len(self.coeffs):
            return FieldElem(self.field, self.coeffs[j])
        return self.field.zero()

    def exponents(self):
        if self.top is None:
            return []
        z = self.field.zero_raw()
        return [self.top - j for j, c in enumerate(self.coeffs) if c != z]

    def is_unit(self):
        return bool(self.coeffs) and self.top is not None and self.top > -self.prec

    def leading(self):
        if not self.is_unit():
            raise NonUnitError('leading coefficient of a non-unit Laurent value')
        return FieldElem(self.field, self.coeffs[0])

    def __add__(self, other):
        prec = min(self.prec, other.prec)
        f = self.field
        tops = [x.top for x in (self, other) if x.top is not None]
        if not tops:
            return Laurent.zero(f, prec)
        top = max(tops)
        floor = -(prec - 1)
        out = []
        for e in range(top, floor - 1, -1):
            out.append((self.coeff(e) + other.coeff(e)).val)
        return Laurent(f, top, out, prec)

    def __neg__(self):
        f = self.field
        return Laurent(f, self.top if self.top is not None else 0,
                       [f.neg_raw(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        t1 = self.top if self.top is not None else -self.prec
        t2 = other.top if other.top is not None else -other.prec
        prec = min(self.prec - t2, other.prec - t1)
        if not self.coeffs or not other.coeffs:
            return Laurent.zero(f, prec)
        z = f.zero_raw()
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        add, mul = f.add_raw, f.mul_raw
        for i, x in enumerate(self.coeffs):
            if x == z:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = add(out[i + j], mul(x, y))
        return Laurent(f, t1 + t2, out, prec)

    def scale(self, c):
        f = self.field
        return Laurent(f, self.top if self.top is not None else 0,
                       [f.mul_raw(x, c.val) for x in self.coeffs], self.prec)

    def shift(self, n):
        """Multiply by t^n; absolute precision moves by -n."""
        if self.top is None:
            return Laurent(self.field, 0, [], self.prec - n)
        return Laurent(self.field, self.top + n, self.coeffs, self.prec - n)

    def truncate(self, prec):
        return Laurent(self.field, self.top if self.top is not None else 0,
                       self.coeffs, min(self.prec, prec))

    def qpow(self, q, s=1):
        """Exact q^s-th power (char p), with the improved precision it carries."""
        e = q ** s
        f = self.field
        if self.top is None:
            return Laurent(f, 0, [], self.prec * e)
        z = f.zero_raw()
        out = [z] * ((len(self.coeffs) - 1) * e + 1)
        for j, c in enumerate(self.coeffs):
            out[j * e] = f.pow_raw(c, e)
        return Laurent(f, self.top * e, out, self.prec * e)

    def map_field(self, target):
        return Laurent(target, self.top if self.top is not None else 0,
                       [lift(FieldElem(self.field, c), target).val
                        for c in self.coeffs], self.prec)

    def descend_field(self, sub):
        return Laurent(sub, self.top if self.top is not None else 0,
                       [descend(FieldElem(self.field, c), sub).val
                        for c in self.coeffs], self.prec)

    def approx_eq(self, other):
        """Equality modulo O(t^-min(prec))."""
        prec = min(self.prec, other.prec)
        d = self - other
        return d.is_zero() or (d.top is not None and d.top <= -prec)

    def first_difference(self, other):
        """Largest exponent where the two values differ, or None."""
        prec = min(self.prec, other.prec)
        d = self - other
        if d.is_zero() or d.top <= -prec:
            return None
        return d.top

    def __repr__(self):
        return render_laurent(self)


class NonUnitError(ValueError):
    pass


def laurent_invert(u):
    """Multiplicative inverse of a unit, to the precision u carries."""
    if not u.is_unit():
        raise NonUnitError('cannot invert a non-unit Laurent value')
    f = u.field
    n = u.prec + u.top  # number of known coefficients past the leading one
    lead = FieldElem(f, u.coeffs[0])
    ilead = lead.inverse()
    # series inversion of (1 + v) where u = lead*t^top*(1+v)
    z = f.zero_raw()
    v = [f.mul_raw(c, ilead.val) for c in u.coeffs[1:]]
    out = [f.one_raw()] + [z] * (n - 1)
    for i in range(1, n):
        acc = z
        for j in range(1, min(i, len(v)) + 1):
            acc = f.add_raw(acc, f.mul_raw(v[j - 1], out[i - j]))
        out[i] = f.neg_raw(acc)
    out = [f.mul_raw(c, ilead.val) for c in out]
    # absolute precision of the inverse: relative precision is preserved,
    # so the inverse of a unit of top degree v is known mod O(t^-(prec+2v))
    return Laurent(f, -u.top, out, u.prec + 2 * u.top)


def monic_representative(u):
    """Scale a unit so its leading coefficient is 1; idempotent."""
    if not u.is_unit():
        raise NonUnitError('monic representative of a non-unit')
    return u.scale(u.leading().inverse())


def expand_rational(num, den, prec):
    """Laurent expansion of num/den at t = infinity, known mod O(t^-prec)."""
    if den.is_zero():
        raise ZeroDivisionError('rational expansion with zero denominator')
    if num.is_zero():
        return Laurent.zero(num.field, prec)
    top = num.degree - den.degree
    # enough working precision that the quotient is known mod t^-prec
    work = prec + max(top, 0) + den.degree + 1
    ln = Laurent.from_poly(num, work)
    ld = Laurent.from_poly(den, work + num.degree + 1)
    return (ln * laurent_invert(ld)).truncate(prec)


def render_laurent(u, var='t'):
    if u.top is None:
        return 'O(%s^%d)' % (var, -u.prec)
    parts = []
    f = u.field
    for j, c in enumerate(u.coeffs):
        if c == f.zero_raw():
            continue
        e = u.top - j
        if f.base is None:
            cs = str(c)
            pre = '' if c == 1 and e != 0 else cs
        else:
            pre = repr(FieldElem(f, c))
        if e == 0:
            term = pre if pre else '1'
            if f.base is None and c == 1:
                term = '1'
        else:
            core = var if e == 1 else '%s^%d' % (var, e)
            term = (pre + '*' if pre else '') + core
        parts.append(term)
    body = ' + '.join(parts) if parts else '0'
    return '%s + O(%s^%d)' % (body, var, -u.prec)


def parse_laurent(field, text, var='t'):
    """Parse the render_laurent form over a prime field."""
    text = text.replace(' ', '')
    prec = None
    terms = {}
    for piece in text.split('+'):
        if not piece:
            continue
        if piece.startswith('O('):
            inner = piece[2:-1]
            _, _, e = inner.partition('^')
            prec = -int(e)
            continue
        if var in piece:
            head, _, tail = piece.partition(var)
            c = int(head.rstrip('*')) if head.rstrip('*') else 1
            e = int(tail[1:]) if tail.startswith('^') else 1
        else:
            c, e = int(piece), 0
        terms[e] = terms.get(e, 0) + c
    if prec is None:
        raise ValueError('Laurent text must carry an O(t^-N) tail')
    if not terms:
        return Laurent.zero(field, prec)
    top = max(terms)
    coeffs = [field.from_int(terms.get(top - j, 0)).val
              for j in range(top + prec)]
    return Laurent(field, top, coeffs, prec)


class RatFn:
    """Exact rational function in t over a field, gcd-reduced, monic denominator."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den):
        if den.is_zero():
            raise ZeroDivisionError('rational function with zero denominator')
        if num.is_zero():
            den = Poly.one(num.field)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divexact(g)
                den = den.divexact(g)
            lead = den.leading()
            if not den.is_monic():
                inv = lead.inverse()
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @staticmethod
    def of(p):
        return RatFn(p, Poly.one(p.field))

    @staticmethod
    def zero(field):
        return RatFn(Poly.zero(field), Poly.one(field))

    @staticmethod
    def one(field):
        return RatFn(Poly.one(field), Poly.one(field))

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        return (isinstance(other, RatFn) and self.num == other.num
                and self.den == other.den)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RatFn(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __neg__(self):
        return RatFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFn(self.num * other.num, self.den * other.den)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError('inverse of zero rational function')
        return RatFn(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def qpow(self, q, s=1):
        return RatFn(self.num.qpow(q, s), self.den.qpow(q, s))

    def valuation_at_infinity(self):
        """deg den - deg num; +infinity for 0 is represented as None."""
        if self.is_zero():
            return None
        return self.den.degree - self.num.degree

    def expand(self, prec):
        return expand_rational(self.num, self.den, prec)

    def __repr__(self):
        if self.den == Poly.one(self.field):
            return repr(self.num)
        return '(%r)/(%r)' % (self.num, self.den)


class FiniteTModule:
    """A finite-dimensional F-space with a t-action matrix (and optional
    commuting group action), i.e. a finite F[t]-module."""

    def __init__(self, field, t_action, g_actions=None):
        self.field = field
        self.t_action = t_action  # list of rows of FieldElem
        self.dim = len(t_action)
        self.g_actions = g_actions or {}
        for g, m in self.g_actions.items():
            if not _commutes(field, t_action, m):
                raise ValueError('group action %r does not commute with t' % (g,))


def _commutes(field, a, b):
    from . import linalg
    return linalg.mat_eq(linalg.mat_mul(field, a, b), linalg.mat_mul(field, b, a))


def charpoly_finite_module(m):
    """The characteristic polynomial det(t*I - T) of the t-action; monic of
    degree equal to the module's dimension over the base field."""
    from . import linalg
    return linalg.charpoly(m.field, m.t_action)
