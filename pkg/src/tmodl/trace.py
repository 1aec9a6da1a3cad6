"""Anderson trace formula verifier on the affine line.

A Frobenius family is a finite set of operators tau_n on M = A[t]^m, each
A-linear and q^n-semilinear over k[t] (tau_n(f v) = f^(q^n) tau_n(v)).
Dual to them are adjoint Cartier operators C_n on row vectors of
differentials g dt.  The trace formula states that the product over all
closed points of the line of the reciprocal characteristic series of the
tau family on the residue fibre equals the characteristic series of the
C_n family on a finite-dimensional nucleus.  Both sides are evaluated
here by brute force, with no shared intermediate, as truncated power
series in a formal variable u.
"""

from .galois import primes_upto
from .lvalue import Verdict
from .ring import Poly, render_poly, parse_poly


class USeries:
    """Truncated power series in u over a field, known mod u^(order+1)."""

    __slots__ = ('field', 'coeffs', 'order')

    def __init__(self, field, coeffs, order):
        raw = [c.val if hasattr(c, 'val') else c for c in coeffs]
        raw = raw[:order + 1]
        raw += [field.zero_raw()] * (order + 1 - len(raw))
        self.field = field
        self.coeffs = raw
        self.order = order

    @staticmethod
    def zero(field, order):
        return USeries(field, [], order)

    @staticmethod
    def one(field, order):
        return USeries(field, [field.one_raw()], order)

    def coeff(self, i):
        from .ffield import FieldElem
        return FieldElem(self.field, self.coeffs[i])

    def is_zero(self):
        z = self.field.zero_raw()
        return all(c == z for c in self.coeffs)

    def __add__(self, other):
        f = self.field
        n = min(self.order, other.order)
        return USeries(f, [f.add_raw(a, b) for a, b in
                           zip(self.coeffs, other.coeffs)], n)

    def __sub__(self, other):
        f = self.field
        n = min(self.order, other.order)
        return USeries(f, [f.add_raw(a, f.neg_raw(b)) for a, b in
                           zip(self.coeffs, other.coeffs)], n)

    def __mul__(self, other):
        f = self.field
        n = min(self.order, other.order)
        out = [f.zero_raw()] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if a == f.zero_raw():
                continue
            for j in range(n + 1 - i):
                out[i + j] = f.add_raw(out[i + j],
                                       f.mul_raw(a, other.coeffs[j]))
        return USeries(f, out, n)

    def scale(self, c):
        f = self.field
        raw = c.val if hasattr(c, 'val') else c
        return USeries(f, [f.mul_raw(raw, x) for x in self.coeffs],
                       self.order)

    def inverse(self):
        f = self.field
        if self.coeffs[0] == f.zero_raw():
            raise ZeroDivisionError('series with zero constant term')
        inv0 = f.inv_raw(self.coeffs[0])
        out = [inv0] + [f.zero_raw()] * self.order
        for i in range(1, self.order + 1):
            acc = f.zero_raw()
            for j in range(1, i + 1):
                acc = f.add_raw(acc, f.mul_raw(self.coeffs[j], out[i - j]))
            out[i] = f.neg_raw(f.mul_raw(acc, inv0))
        return USeries(f, out, self.order)

    def to_poly(self):
        return Poly(self.field, self.coeffs)

    def __eq__(self, other):
        n = min(self.order, other.order)
        return (isinstance(other, USeries) and self.field == other.field
                and self.coeffs[:n + 1] == other.coeffs[:n + 1])

    def __repr__(self):
        return 'USeries(%s, order=%d)' % (render_poly(self.to_poly(), 'u'),
                                          self.order)


def useries_det(field, mat, order):
    """Determinant of a matrix of USeries entries congruent to an
    invertible constant matrix mod u, by Gaussian elimination."""
    n = len(mat)
    if n == 0:
        return USeries.one(field, order)
    work = [list(row) for row in mat]
    det = USeries.one(field, order)
    z = field.zero_raw()
    for c in range(n):
        piv = None
        for i in range(c, n):
            if work[i][c].coeffs[0] != z:
                piv = i
                break
        if piv is None:
            return USeries.zero(field, order)
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            det = det.scale(field.neg_raw(field.one_raw()))
        det = det * work[c][c]
        inv = work[c][c].inverse()
        work[c] = [x * inv for x in work[c]]
        for i in range(c + 1, n):
            if not work[i][c].is_zero():
                fct = work[i][c]
                work[i] = [a - fct * b for a, b in zip(work[i], work[c])]
    return det


# -- Cartier operators ---------------------------------------------------

def frobenius_twist(f, qn):
    """f(t) -> f(t)^(q^n) for f with coefficients fixed by the q-power
    map on the base: exponents scale by q^n."""
    if f.is_zero():
        return f
    out = [f.field.zero_raw()] * (f.degree * qn + 1)
    for i, c in enumerate(f.coeffs):
        out[i * qn] = c
    return Poly(f.field, out)


def cartier(f, q, n=1):
    """The q^n-Cartier operator on differentials: t^i dt maps to
    t^((i+1)/q^n - 1) dt when q^n divides i + 1, else to 0."""
    if n < 1:
        raise ValueError('Cartier level must be >= 1')
    qn = q ** n
    if f.is_zero():
        return f
    out = []
    j = 0
    while (j + 1) * qn - 1 <= f.degree:
        out.append(f.coeff((j + 1) * qn - 1))
        j += 1
    return Poly(f.field, out)


# -- Frobenius families --------------------------------------------------

class TauSheafLine:
    """A finite family of Frobenius operators on M = A[t]^m over the
    affine line, with optional group labels for the equivariant case.

    base: the field k = F_q whose Frobenius twists the k[t]-argument;
    field: the coefficient field A (k itself, or a splitting field);
    taus: dict n -> m x m matrix over A[t];
    gelts: optional dict n -> group element, with `group` set.
    """

    def __init__(self, base, field, m, taus, gelts=None, group=None):
        self.base = base
        self.field = field
        self.q = base.order
        self.m = m
        for n, mat in taus.items():
            if not isinstance(n, int) or n < 1:
                raise ValueError('operator levels must be integers >= 1')
            if len(mat) != m or any(len(row) != m for row in mat):
                raise ValueError('tau_%d is not %d x %d' % (n, m, m))
        self.taus = {n: mat for n, mat in sorted(taus.items())
                     if any(not e.is_zero() for row in mat for e in row)}
        self.gelts = gelts or {}
        self.group = group

    def max_level(self):
        return max(self.taus, default=0)

    def apply(self, n, v):
        """tau_n on a column vector of polynomials over A."""
        T = self.taus[n]
        qn = self.q ** n
        tw = [frobenius_twist(x, qn) for x in v]
        return [sum((T[i][j] * tw[j] for j in range(self.m)),
                    Poly.zero(self.field)) for i in range(self.m)]


def adjoint_apply(sheaf, n, row):
    """The adjoint Cartier operator C_n on a row vector of differentials:
    (C_n g)(e_j) = C^n(<g, tau_n e_j>)."""
    T = sheaf.taus[n]
    out = []
    for j in range(sheaf.m):
        h = sum((row[i] * T[i][j] for i in range(sheaf.m)),
                Poly.zero(sheaf.field))
        out.append(cartier(h, sheaf.q, n))
    return out


def check_duality(sheaf, maxdeg=3):
    """<C_n g, v> = C^n(<g, tau_n v>) on monomial rows and columns."""
    m = sheaf.m
    F = sheaf.field
    for n in sheaf.taus:
        for gi in range(m):
            for gl in range(maxdeg):
                row = [Poly.t(F, gl) if i == gi else Poly.zero(F)
                       for i in range(m)]
                crow = adjoint_apply(sheaf, n, row)
                for vj in range(m):
                    for vl in range(maxdeg):
                        v = [Poly.t(F, vl) if j == vj else Poly.zero(F)
                             for j in range(m)]
                        tv = sheaf.apply(n, v)
                        rhs = cartier(
                            sum((row[i] * tv[i] for i in range(m)),
                                Poly.zero(F)), sheaf.q, n)
                        lhs = sum((crow[j] * v[j] for j in range(m)),
                                  Poly.zero(F))
                        if lhs != rhs:
                            return False
    return True


# -- nuclei --------------------------------------------------------------

class Nucleus:
    """The degree-bounded space of rows of differentials, closed under
    every adjoint operator of the family."""

    def __init__(self, sheaf, bound):
        self.sheaf = sheaf
        self.bound = bound
        self.dim = sheaf.m * (bound + 1)

    def basis(self):
        F = self.sheaf.field
        out = []
        for j in range(self.sheaf.m):
            for l in range(self.bound + 1):
                out.append([Poly.t(F, l) if i == j else Poly.zero(F)
                            for i in range(self.sheaf.m)])
        return out


def _closed_under_adjoints(sheaf, bound):
    for n in sheaf.taus:
        for row in Nucleus(sheaf, bound).basis():
            out = adjoint_apply(sheaf, n, row)
            if any(g.degree > bound for g in out):
                return False
    return True


def find_nucleus(sheaf):
    """Smallest degree bound whose row space is stable under every C_n
    and above which every C_n strictly lowers degree (so enlarging the
    space only adds a nilpotent block).  Closure is verified exhaustively
    on the basis."""
    bound = 0
    for n, T in sheaf.taus.items():
        md = max((e.degree for row in T for e in row if not e.is_zero()),
                 default=0)
        # C_n drops t^e below e once e >= (md + 1) / (q^n - 1)
        need = -(-(md + 1) // (sheaf.q ** n - 1)) - 1
        bound = max(bound, need)
    cap = bound + 2
    while not _closed_under_adjoints(sheaf, bound):
        bound += 1
        if bound > cap:
            raise AssertionError('no nucleus below the degree cap')
    return Nucleus(sheaf, bound)


def _nucleus_series_matrix(sheaf, bound, order):
    """1 - sum_n u^n C_n on the degree-bounded row space."""
    F = sheaf.field
    m = sheaf.m
    dim = m * (bound + 1)
    idx = lambda j, l: j * (bound + 1) + l
    mat = [[USeries.one(F, order) if i == jj else USeries.zero(F, order)
            for jj in range(dim)] for i in range(dim)]
    for n in sheaf.taus:
        for j in range(m):
            for l in range(bound + 1):
                row = [Poly.t(F, l) if i == j else Poly.zero(F)
                       for i in range(m)]
                out = adjoint_apply(sheaf, n, row)
                for i in range(m):
                    if out[i].degree > bound:
                        raise AssertionError('nucleus is not closed')
                    for ll in range(out[i].degree + 1):
                        c = out[i].coeff(ll)
                        if not c.is_zero():
                            term = USeries(F, [F.zero_raw()] * n + [c.val],
                                           order)
                            cur = mat[idx(i, ll)][idx(j, l)]
                            mat[idx(i, ll)][idx(j, l)] = cur - term
    return mat


def nucleus_determinant(sheaf, order, bound=None):
    if bound is None:
        bound = find_nucleus(sheaf).bound
    return useries_det(sheaf.field, _nucleus_series_matrix(
        sheaf, bound, order), order)


# -- the two sides -------------------------------------------------------

def local_factor(sheaf, I, order):
    """det(1 - sum_n u^n tau_n on M/IM)^-1, with the factor asserted to
    lie in 1 + u^d A[[u^d]] for d = deg I."""
    F = sheaf.field
    m = sheaf.m
    d = I.degree
    I_A = I.map_field(F) if F is not sheaf.base else I
    dim = m * d
    # powers of t mod I, up to the largest twisted exponent needed
    idx = lambda j, l: j * d + l
    mat = [[USeries.one(F, order) if i == jj else USeries.zero(F, order)
            for jj in range(dim)] for i in range(dim)]
    for n, T in sheaf.taus.items():
        qn = sheaf.q ** n
        for j in range(m):
            for l in range(d):
                tpow = Poly.t(F, l * qn).divmod(I_A)[1]
                for i in range(m):
                    red = (T[i][j] * tpow).divmod(I_A)[1]
                    for ll in range(red.degree + 1):
                        c = red.coeff(ll)
                        if not c.is_zero():
                            term = USeries(F, [F.zero_raw()] * n + [c.val],
                                           order)
                            cur = mat[idx(i, ll)][idx(j, l)]
                            mat[idx(i, ll)][idx(j, l)] = cur - term
    factor = useries_det(F, mat, order).inverse()
    if factor.coeffs[0] != F.one_raw():
        raise AssertionError('local factor does not start at 1')
    for e in range(1, order + 1):
        if e % d != 0 and factor.coeffs[e] != F.zero_raw():
            raise AssertionError('local factor at %s has a u^%d term '
                                 'outside u^%d steps'
                                 % (render_poly(I), e, d))
    return factor


def euler_side(sheaf, N):
    """Product over monic irreducibles of degree <= N, mod u^(N+1)."""
    out = USeries.one(sheaf.field, N)
    for I in sorted(primes_upto(sheaf.base, N),
                    key=lambda p: (p.degree, render_poly(p))):
        out = out * local_factor(sheaf, I, N)
    return out


def verify_trace_formula(sheaf, N):
    """Both sides of the trace formula mod u^(N+1), plus the nucleus
    determinant invariance under enlargement."""
    if N < 1:
        raise ValueError('precision must be >= 1')
    lhs = euler_side(sheaf, N)
    nuc = find_nucleus(sheaf)
    rhs = nucleus_determinant(sheaf, N, nuc.bound)
    for extra in (1, 2):
        again = nucleus_determinant(sheaf, N, nuc.bound + extra)
        if again != rhs:
            return Verdict(Verdict.FAIL,
                           'nucleus determinant changed under enlargement',
                           data={'bound': nuc.bound + extra})
    data = {'lhs': render_poly(lhs.to_poly(), 'u'),
            'rhs': render_poly(rhs.to_poly(), 'u'),
            '_lhs_series': lhs, '_rhs_series': rhs,
            'nucleus_bound': nuc.bound,
            'nucleus_dim': nuc.dim}
    if lhs == rhs:
        return Verdict(Verdict.PASS, 'trace formula mod u^%d' % (N + 1),
                       data=data)
    first = next(i for i in range(N + 1) if lhs.coeffs[i] != rhs.coeffs[i])
    return Verdict(Verdict.FAIL, 'trace formula mod u^%d' % (N + 1),
                   first_difference=first, data=data)


# -- equivariant reduction ----------------------------------------------

def character_twist(sheaf, table, j):
    """The character-j component: tau_n picks up the scalar chi(g_n)."""
    F = table.splitting_field
    taus = {}
    for n, T in sheaf.taus.items():
        g = sheaf.gelts.get(n, table.group.identity())
        chi = table.value(j, g)
        taus[n] = [[e.map_field(F).scale(chi) for e in row] for row in T]
    return TauSheafLine(sheaf.base, F, sheaf.m, taus)


def verify_trace_formula_equivariant(sheaf, table, N):
    """Characterwise verification plus reassembly of both sides into the
    group ring."""
    lhs_vals = {}
    rhs_vals = {}
    for j in table.indices:
        comp = character_twist(sheaf, table, j)
        v = verify_trace_formula(comp, N)
        if not v.ok:
            v.detail = 'character %r: %s' % (j, v.detail)
            return v
        lhs_vals[j] = v.data['_lhs_series'].to_poly()
        rhs_vals[j] = v.data['_rhs_series'].to_poly()
    lhs_g = table.reassemble(lhs_vals)
    rhs_g = table.reassemble(rhs_vals)
    data = {'lhs': lhs_g, 'rhs': rhs_g}
    if lhs_g == rhs_g:
        return Verdict(Verdict.PASS,
                       'equivariant trace formula mod u^%d' % (N + 1),
                       data=data)
    return Verdict(Verdict.FAIL, 'character components reassemble '
                   'inconsistently', data=data)


# -- instance descriptors -----------------------------------------------

def render_instance(sheaf):
    lines = ['trace instance',
             'p: %d' % sheaf.base.p,
             'm: %d' % sheaf.m]
    if sheaf.group is not None:
        lines.append('group: %s' % ','.join(str(o)
                                            for o in sheaf.group.orders))
    for n, T in sorted(sheaf.taus.items()):
        body = '; '.join(', '.join(render_poly(e) for e in row)
                         for row in T)
        if sheaf.gelts.get(n):
            g = sheaf.gelts[n]
            lines.append('tau %d @ %s: %s'
                         % (n, ','.join(str(x) for x in g), body))
        else:
            lines.append('tau %d: %s' % (n, body))
    return '\n'.join(lines) + '\n'


def parse_instance(text):
    from .ffield import Field
    from .gring import AbelianGroup
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != 'trace instance':
        raise ValueError('not a trace instance descriptor')
    taus = {}
    gelts = {}
    group = None
    base = None
    m = None
    for ln in lines[1:]:
        key, _, rest = ln.partition(':')
        key = key.strip()
        rest = rest.strip()
        if key == 'p':
            base = Field.prime(int(rest))
        elif key == 'm':
            m = int(rest)
        elif key == 'group':
            group = AbelianGroup(tuple(int(x) for x in rest.split(',')))
        elif key.startswith('tau'):
            head = key.split()
            n = int(head[1])
            if '@' in head:
                g = tuple(int(x) for x in head[head.index('@') + 1].split(','))
                gelts[n] = g
            if base is None or m is None:
                raise ValueError('p and m must precede tau lines')
            rows = []
            for chunk in rest.split(';'):
                rows.append([parse_poly(base, e.strip())
                             for e in chunk.split(',')])
            taus[n] = rows
        else:
            raise ValueError('unknown descriptor line %r' % ln)
    if base is None or m is None:
        raise ValueError('descriptor missing p or m')
    return TauSheafLine(base, base, m, taus, gelts=gelts, group=group)
