"""The infinity-adic analytic side: exp/log series, lattices, class modules.

exp_E is the unique q-expansion exp_E X = sum_s e_s X^(q^s) with e_0 = I
satisfying exp_E(A_0 X) = sum_s A_s (exp_E X)^(q^s).  Its coefficients are
kept as exact rational functions in t, so the only truncation happens at
evaluation time, where every Laurent value carries its own precision.

Lie(E)(L_infty) is modelled as flat coordinate vectors of Laurent values
over the fixed O_L-basis 1, w, ..., w^(deg-1) of each of the n components;
t acts through A_0 (the twisted k[t]-structure), G through the coordinate
matrices of sigma_g.  Lattices are degree-greedy k[t]-bases of such
vectors; stabilization under box enlargement is certified before anything
is returned, and a failed certification raises an inconclusive error
rather than returning a guess.
"""

from __future__ import annotations

import math

from . import linalg
from .ffield import FieldElem, lift
from .galois import wp_mod, wp_mul, wp_qpow, wp_trim
from .gring import _laurent_det
from .ring import (
    Laurent, Poly, RatFn, laurent_invert, monic_representative,
    render_laurent,
)
from .tmodule import _image_basis, _lift_matrix, _quotient_data, \
    _quotient_matrix, _restrict


class PrecisionDeficitError(ValueError):
    """A requested precision cannot be met by the given series/inputs."""


class InconclusiveError(RuntimeError):
    """A stabilization search did not converge; no verdict, never a wrong
    answer."""


# -- rational-function matrices ----------------------------------------

def _rmat_of(mats):
    return [[RatFn.of(c) for c in row] for row in mats]


def _rmat_identity(field, n):
    return [[RatFn.one(field) if i == j else RatFn.zero(field)
             for j in range(n)] for i in range(n)]


def _rmat_mul(a, b):
    n = len(a)
    m = len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for l in range(len(b)):
                if a[i][l].is_zero() or b[l][j].is_zero():
                    continue
                term = a[i][l] * b[l][j]
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else RatFn.zero(a[0][0].field))
        out.append(row)
    return out


def _rmat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _rmat_qpow(a, q, s):
    return [[x.qpow(q, s) for x in row] for row in a]


def _rmat_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


def _ratfn_solve(field, rows, rhs):
    """Solve a square linear system with RatFn entries by elimination."""
    n = len(rows)
    aug = [list(r) + [c] for r, c in zip(rows, rhs)]
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not aug[i][c].is_zero():
                pr = i
                break
        if pr is None:
            raise AssertionError('singular Sylvester system')
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


# -- exp and log series -------------------------------------------------

class ExpSeries:
    """Truncated q-expansion sum_s c_s X^(q^s) with exact n x n RatFn
    coefficient matrices; kind is 'exp' or 'log'."""

    def __init__(self, E, coeffs, S, kind='exp'):
        self.E = E
        self.coeffs = coeffs
        self.S = S
        self.kind = kind
        ident = _rmat_identity(E.k, E.n)
        if coeffs[0] != ident:
            raise ValueError('leading coefficient must be the identity')

    def residual(self, i):
        """Functional-equation defect at order i (must vanish for 'exp')."""
        if self.kind != 'exp':
            raise ValueError('residual is defined for exp series only')
        E = self.E
        q = E.k.order
        lhs = _rmat_mul(self.coeffs[i],
                        _rmat_of([[c.qpow(q, i) for c in row]
                                  for row in E.mats[0]]))
        for s in range(0, min(i, E.r) + 1):
            term = _rmat_mul(_rmat_of(E.mats[s]),
                             _rmat_qpow(self.coeffs[i - s], q, s))
            lhs = [[x - y for x, y in zip(ra, rb)]
                   for ra, rb in zip(lhs, term)]
        return lhs


def _next_exp_coeff(E, coeffs):
    """Solve the order-i twisted Sylvester relation
    e_i A_0^[q^i] - A_0 e_i = sum_{s>=1} A_s e_{i-s}^(q^s)."""
    i = len(coeffs)
    k = E.k
    q = k.order
    n = E.n
    a0 = _rmat_of(E.mats[0])
    b = _rmat_of([[c.qpow(q, i) for c in row] for row in E.mats[0]])
    c = [[RatFn.zero(k) for _ in range(n)] for _ in range(n)]
    for s in range(1, min(i, E.r) + 1):
        c = _rmat_add(c, _rmat_mul(_rmat_of(E.mats[s]),
                                   _rmat_qpow(coeffs[i - s], q, s)))
    # vectorize: unknown x_{ab}; equation (a,c'):
    #   sum_b x_{ab} B[b][c'] - sum_b A0[a][b] x_{bc'} = C[a][c']
    rows = []
    rhs = []
    for a in range(n):
        for cc in range(n):
            row = [RatFn.zero(k) for _ in range(n * n)]
            for bb in range(n):
                row[a * n + bb] = row[a * n + bb] + b[bb][cc]
                row[bb * n + cc] = row[bb * n + cc] - a0[a][bb]
            rows.append(row)
            rhs.append(c[a][cc])
    sol = _ratfn_solve(k, rows, rhs)
    return [[sol[a * n + bb] for bb in range(n)] for a in range(n)]


def exp_coeffs(E, S):
    if S < 0:
        raise ValueError('S must be >= 0')
    coeffs = [_rmat_identity(E.k, E.n)]
    while len(coeffs) <= S:
        coeffs.append(_next_exp_coeff(E, coeffs))
    return ExpSeries(E, coeffs, S, 'exp')


def log_coeffs(E, S):
    """Series inverse of exp_E: l_m = -sum_{i<m} l_i e_{m-i}^(q^i)."""
    es = exp_coeffs(E, S)
    q = E.k.order
    ls = [_rmat_identity(E.k, E.n)]
    for m in range(1, S + 1):
        acc = None
        for i in range(m):
            term = _rmat_mul(ls[i], _rmat_qpow(es.coeffs[m - i], q, i))
            acc = term if acc is None else _rmat_add(acc, term)
        ls.append([[-x for x in row] for row in acc])
    return ExpSeries(E, ls, S, 'log')


def compose_series(a, b):
    """Coefficients of a(b(X)): c_m = sum_{i+j=m} a_i b_j^(q^i)."""
    E = a.E
    q = E.k.order
    S = min(a.S, b.S)
    out = []
    for m in range(S + 1):
        acc = None
        for i in range(m + 1):
            term = _rmat_mul(a.coeffs[i], _rmat_qpow(b.coeffs[m - i], q, i))
            acc = term if acc is None else _rmat_add(acc, term)
        out.append(acc)
    return out


# -- coordinates on Lie(E)(L_infty) -------------------------------------

def ambient_rank(E, ctx):
    return E.n * ctx.degree


def _poly_mul_laurent(c, u):
    if c.is_zero() or u.top is None:
        d = max(c.degree, 0)
        return Laurent.zero(u.field, u.prec - d)
    return Laurent.from_poly(c, u.prec + c.degree + 1) * u


def _qpow_table(ctx, s):
    """wpolys of (w^l)^(q^s) mod h_w, cached on the context."""
    cache = getattr(ctx, '_an_qpow', None)
    if cache is None:
        cache = ctx._an_qpow = []
    if not cache:
        k = ctx.k
        base = []
        for l in range(ctx.degree):
            base.append(wp_mod([Poly.zero(k)] * l + [Poly.one(k)], ctx.h_w))
        cache.append(base)
    q = ctx.k.order
    while len(cache) <= s:
        cache.append([wp_qpow(wp, q, ctx.h_w) for wp in cache[-1]])
    return cache[s]


def vector_qpow(ctx, x, s, n):
    """q^s-power of a flat coordinate vector of n L_infty components."""
    if s == 0:
        return list(x)
    q = ctx.k.order
    degl = ctx.degree
    field = x[0].field
    tab = _qpow_table(ctx, s)
    big = 10 ** 9
    out = []
    for i in range(n):
        comps = [None] * degl
        for l in range(degl):
            uq = x[i * degl + l].qpow(q, s)
            for jj, c in enumerate(tab[l]):
                if c.is_zero():
                    continue
                cc = c if field is ctx.k else c.map_field(field)
                term = _poly_mul_laurent(cc, uq)
                comps[jj] = term if comps[jj] is None else comps[jj] + term
        out.extend(c if c is not None else Laurent.zero(field, big)
                   for c in comps)
    return out


def group_vector_matrices(ctx):
    """Poly coordinate matrices of sigma_g on the w-power basis."""
    cache = getattr(ctx, '_an_gmats', None)
    if cache is not None:
        return cache
    k = ctx.k
    degl = ctx.degree
    out = {}
    for g in ctx.group.elements():
        img = ctx.action[g]
        mat = [[Poly.zero(k) for _ in range(degl)] for _ in range(degl)]
        power = [Poly.one(k)]
        for l in range(degl):
            for jj, c in enumerate(power):
                mat[jj][l] = c
            power = wp_mod(wp_mul(power, img), ctx.h_w)
        out[g] = mat
    ctx._an_gmats = out
    return out


def _block_poly_apply(mat, ctx, v, n):
    """Apply an n x n k[t]-matrix to a flat vector, per-component (the
    entries commute with the w-basis)."""
    degl = ctx.degree
    field = v[0].field
    out = []
    for i in range(n):
        for l in range(degl):
            acc = None
            for j in range(n):
                c = mat[i][j]
                if c.is_zero():
                    continue
                cc = c if field is ctx.k else c.map_field(field)
                term = _poly_mul_laurent(cc, v[j * degl + l])
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None
                       else Laurent.zero(field, v[i * degl + l].prec))
    return out


def g_act_vector(ctx, g, x, n):
    """sigma_g on a flat coordinate vector (diagonal across components)."""
    degl = ctx.degree
    field = x[0].field
    gm = group_vector_matrices(ctx)[g]
    out = []
    for i in range(n):
        for jj in range(degl):
            acc = None
            for l in range(degl):
                c = gm[jj][l]
                if c.is_zero():
                    continue
                cc = c if field is ctx.k else c.map_field(field)
                term = _poly_mul_laurent(cc, x[i * degl + l])
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None
                       else Laurent.zero(field, x[i * degl + jj].prec))
    return out


def twisted_t(E, ctx, v):
    """The k[t]-structure of Lie(E): t acts through A_0."""
    return _block_poly_apply(E.mats[0], ctx, v, E.n)


def act_infty(E, ctx, x):
    """E(t) on a flat coordinate vector of E(L_infty)."""
    total = None
    for s, mat in enumerate(E.mats):
        xq = vector_qpow(ctx, x, s, E.n)
        term = _block_poly_apply(mat, ctx, xq, E.n)
        total = term if total is None else [a + b
                                            for a, b in zip(total, term)]
    return total


def _min_valuation(rmat):
    v = None
    for row in rmat:
        for x in row:
            xv = x.valuation_at_infinity()
            if xv is None:
                continue
            if v is None or xv < v:
                v = xv
    return v


def eval_exp(es, ctx, x, prec):
    """sum_s e_s x^(q^s) to the requested precision.

    The needed truncation order is computed from coefficient valuations;
    if it exceeds the series order, a precision-deficit error names the
    required S.
    """
    E = es.E
    q = E.k.order
    m = ambient_rank(E, ctx)
    if len(x) != m:
        raise ValueError('vector length must be n * [L:K]')
    field = x[0].field
    tops = [u.top for u in x if u.top is not None]
    if not tops:
        return [Laurent.zero(field, prec) for _ in range(m)]
    xtop = max(tops)
    coeffs = list(es.coeffs)
    s_req = 0
    quiet = 0
    s = 0
    cap = es.S + 16
    while quiet < 2:
        if s >= len(coeffs):
            if s > cap:
                raise PrecisionDeficitError(
                    'tail of exp does not certify below t^-%d by S = %d'
                    % (prec, cap))
            coeffs.append(_next_exp_coeff(E, coeffs))
        v = _min_valuation(coeffs[s])
        # coordinate mixing through the w-power table can raise tops beyond
        # q^s * xtop by the degree of its polynomial coefficients
        mix = 0 if s == 0 else max(
            (c.degree for wp in _qpow_table(ctx, s) for c in wp
             if not c.is_zero()), default=0)
        bound = None if v is None else q ** s * xtop + mix - v
        if bound is not None and bound > -prec:
            s_req = s
            quiet = 0
        else:
            quiet += 1
        s += 1
    if s_req > es.S:
        raise PrecisionDeficitError(
            'evaluating exp to precision %d requires S >= %d (have S = %d)'
            % (prec, s_req, es.S))
    total = None
    for s in range(s_req + 1):
        mat = coeffs[s]
        if _rmat_is_zero(mat):
            continue
        xq = vector_qpow(ctx, x, s, E.n)
        xq_top = max([u.top for u in xq if u.top is not None], default=0)
        degl = ctx.degree
        term = []
        for i in range(E.n):
            comps = [None] * degl
            for j in range(E.n):
                r = mat[i][j]
                if r.is_zero():
                    continue
                rl = r.expand(prec + max(xq_top, 0) + 1)
                if field is not E.k:
                    rl = rl.map_field(field)
                for l in range(degl):
                    t = rl * xq[j * degl + l]
                    comps[l] = t if comps[l] is None else comps[l] + t
            term.extend(c if c is not None
                        else Laurent.zero(field, 10 ** 9) for c in comps)
        total = term if total is None else [a + b
                                            for a, b in zip(total, term)]
    out = [u.truncate(prec) for u in total]
    if any(u.prec < prec for u in out):
        raise PrecisionDeficitError(
            'input precision too low to evaluate exp mod t^-%d' % prec)
    return out


# -- lattices -----------------------------------------------------------

class LatticeBasis:
    """Degree-greedy k[t]-basis (twisted t-action) of a lattice, as flat
    Laurent coordinate columns with a shared precision."""

    def __init__(self, E, ctx, field, vectors, prec):
        self.E = E
        self.ctx = ctx
        self.field = field
        self.vectors = vectors
        self.prec = prec
        self.ambient = ambient_rank(E, ctx)
        self.rank = len(vectors)

    def contains(self, v):
        """Membership to the basis precision, by twisted reduction."""
        basis = _basis_dict(self.vectors, self.prec)
        tmul = lambda u: twisted_t(self.E, self.ctx, u)
        _, zero = _reduce_vector(list(v), basis, tmul, self.prec)
        return zero

    def dump(self):
        degl = self.ctx.degree
        lines = ['ambient=%d rank=%d prec=%d'
                 % (self.ambient, self.rank, self.prec)]
        labels = ['x%d*w^%d' % (i, l)
                  for i in range(self.E.n) for l in range(degl)]
        lines.append('basis: ' + ' '.join(labels))
        for idx, v in enumerate(self.vectors):
            body = '; '.join(render_laurent(u) for u in v)
            lines.append('col %d: %s' % (idx, body))
        return '\n'.join(lines) + '\n'


def lie_lattice(E, ctx, prec):
    """Lie(E)(O_L): the integral coordinate vectors themselves."""
    m = ambient_rank(E, ctx)
    k = E.k
    vecs = []
    for c in range(m):
        v = [Laurent.zero(k, prec) for _ in range(m)]
        v[c] = Laurent.one(k, prec)
        vecs.append(v)
    return LatticeBasis(E, ctx, k, vecs, prec)


def hyperderivative(u, j):
    """j-th hyperderivative of a Laurent value: t^e -> C(e, j) t^(e-j)."""
    if j == 0:
        return u
    f = u.field
    if u.top is None:
        return Laurent.zero(f, u.prec + j)
    fact = math.factorial(j)
    out = []
    for idx, c in enumerate(u.coeffs):
        e = u.top - idx
        num = 1
        for i in range(j):
            num *= e - i
        out.append(f.mul_raw(c, f.from_int(num // fact).val))
    return Laurent(f, u.top - j, out, u.prec + j)


def _nilpotent_apply(E, ctx, v):
    """N = A_0 - t as an operator on flat coordinates."""
    tw = twisted_t(E, ctx, v)
    return [a - b.shift(1) for a, b in zip(tw, v)]


def twisted_coordinates(E, ctx, v):
    """Coordinates of v for the A_0-twisted k((1/t))-structure.

    Solves v = sum_j N^j D_j(c) with D_j the j-th hyperderivative; the
    scalar action through A_0 = t + N on the ambient module corresponds
    to the plain scalar action on these coordinates, so determinant
    indices of lattices must be taken here, not on raw coordinates.
    """
    n = E.n
    if n == 1:
        return list(v)

    def correction(c):
        total = None
        for j in range(1, n):
            w = [hyperderivative(u, j) for u in c]
            for _ in range(j):
                w = _nilpotent_apply(E, ctx, w)
            total = w if total is None else [a + b
                                             for a, b in zip(total, w)]
        return total

    c = list(v)
    for _ in range(len(v) + 1):
        nxt = [a - b for a, b in zip(v, correction(c))]
        done = all(x.approx_eq(y) for x, y in zip(nxt, c))
        c = nxt
        if done:
            return c
    raise InconclusiveError('twisted coordinate conversion did not converge')


def _vec_leading(v, floor):
    best = None
    for idx, u in enumerate(v):
        if u.top is None or u.top <= -floor:
            continue
        if best is None or u.top > best[0]:
            best = (u.top, idx)
    return best


def _reduce_vector(v, basis, tmul, floor):
    """Reduce v against a pivot-indexed basis; True if it reached zero
    (to the floor precision)."""
    while True:
        lead = _vec_leading(v, floor)
        if lead is None:
            return v, True
        d, pos = lead
        entry = basis.get(pos)
        if entry is None or entry[0] > d:
            return v, False
        bd, bv = entry
        sh = bv
        for _ in range(d - bd):
            sh = tmul(sh)
        shl = _vec_leading(sh, floor)
        if shl != (d, pos):
            return v, False
        c = v[pos].coeff(d) * sh[pos].coeff(d).inverse()
        v = [a - b.scale(c) for a, b in zip(v, sh)]


def _extract_basis(vecs, tmul, floor):
    """Degree-greedy k[t]-basis: distinct pivot coordinates, minimal pivot
    degrees, every input vector reducing to zero against the result."""
    basis = {}
    queue = list(vecs)

    def sort_key(v):
        lead = _vec_leading(v, floor)
        return (-1, -1) if lead is None else lead

    queue.sort(key=sort_key)
    while queue:
        v = queue.pop(0)
        v, zero = _reduce_vector(v, basis, tmul, floor)
        if zero:
            continue
        d, pos = _vec_leading(v, floor)
        inv = v[pos].coeff(d).inverse()
        v = [u.scale(inv) for u in v]
        cur = basis.get(pos)
        if cur is None or cur[0] > d:
            basis[pos] = (d, v)
            if cur is not None:
                queue.append(cur[1])
        else:
            raise InconclusiveError('basis extraction stalled at a pivot '
                                    'the twisted shift cannot reach')
    return basis


def _basis_dict(vectors, floor):
    out = {}
    for v in vectors:
        lead = _vec_leading(v, floor)
        if lead is None:
            continue
        out[lead[1]] = (lead[0], v)
    return out


def _basis_vectors(basis):
    return [basis[pos][1] for pos in sorted(basis)]


def _spans_agree(b1, b2, tmul, floor):
    for basis, other in ((b1, b2), (b2, b1)):
        for pos in sorted(other):
            _, zero = _reduce_vector(list(other[pos][1]), basis, tmul, floor)
            if not zero:
                return False
    return True


def _lattice_pass(E, ctx, es, D, N):
    """Kernel of the tail-vanishing conditions on the coordinate box
    [-N+1, D], followed by basis extraction."""
    k = E.k
    m = ambient_rank(E, ctx)
    degrees = list(range(D, -N, -1))
    unknowns = [(c, e) for c in range(m) for e in degrees]
    inprec = N + D + 2
    rows = [[] for _ in range(m * (N - 1))]
    for (c, e) in unknowns:
        mono = [Laurent.zero(k, inprec) for _ in range(m)]
        mono[c] = Laurent.term(k, k.one_raw(), e, inprec)
        y = eval_exp(es, ctx, mono, N)
        r = 0
        for cout in range(m):
            for eout in range(-1, -N, -1):
                rows[r].append(y[cout].coeff(eout))
                r += 1
    kern = linalg.kernel_basis(k, rows) if rows else [
        [k.one() if i == j else k.zero() for j in range(len(unknowns))]
        for i in range(len(unknowns))]
    vecs = []
    for kv in kern:
        v = []
        for c in range(m):
            coeffs = [kv[unknowns.index((c, e))].val for e in degrees]
            v.append(Laurent(k, D, coeffs, N))
        vecs.append(v)
    tmul = lambda u: twisted_t(E, ctx, u)
    return _extract_basis(vecs, tmul, N)


def unit_lattice(E, ctx, es, D, N):
    """exp_E^{-1}(E(O_L)) as a certified LatticeBasis.

    Runs the box search at (D, N), (D+1, N+2), (D+2, N+4) and requires two
    consecutive runs to span the same k[t]-module to the common precision.
    """
    m = ambient_rank(E, ctx)
    tmul = lambda u: twisted_t(E, ctx, u)
    prev = None
    prev_n = None
    for step in range(3):
        d, nn = D + step, N + 2 * step
        cur = _lattice_pass(E, ctx, es, d, nn)
        if prev is not None and len(prev) == m and len(cur) == m \
                and _spans_agree(prev, cur, tmul, prev_n):
            return LatticeBasis(E, ctx, E.k, _basis_vectors(prev), prev_n)
        prev, prev_n = cur, nn
    raise InconclusiveError('unit lattice did not stabilize after two '
                            'enlargements of the search box')


def lattice_index(l1, l2):
    """[L1 : L2]: monic representative of det(B1^-1 B2) over k((1/t)),
    with both bases written in twisted coordinates."""
    if l1.ambient != l2.ambient:
        raise ValueError('lattices live in different ambient modules')
    m = l1.ambient
    if l1.rank != m or l2.rank != m:
        raise ValueError('index requires two full-rank lattices')
    F = l1.field
    c1 = [twisted_coordinates(l1.E, l1.ctx, v) for v in l1.vectors]
    c2 = [twisted_coordinates(l2.E, l2.ctx, v) for v in l2.vectors]
    d1 = _laurent_det(F, [[c1[j][i] for j in range(m)] for i in range(m)])
    d2 = _laurent_det(F, [[c2[j][i] for j in range(m)] for i in range(m)])
    if not d1.is_unit() or not d2.is_unit():
        raise ValueError('lattice basis is degenerate at this precision')
    return monic_representative(d2 * laurent_invert(d1))


def _laurent_solve(F, a, b):
    """Solve A X = B for square A with Laurent entries (unit pivots)."""
    s = len(a)
    w = len(b[0])
    aug = [list(a[i]) + list(b[i]) for i in range(s)]
    for c in range(s):
        pr = None
        best = None
        for i in range(c, s):
            t = aug[i][c].top
            if aug[i][c].is_unit() and (best is None or t > best):
                pr, best = i, t
        if pr is None:
            raise ValueError('transition system is singular at precision')
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = laurent_invert(aug[c][c])
        aug[c] = [x * inv for x in aug[c]]
        for i in range(s):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [[aug[i][s + j] for j in range(w)] for i in range(s)]


def lattice_index_equivariant(table, l1, l2):
    """[L1 : L2] in k((1/t))[G], characterwise over the splitting field.

    Each character component is an F'[t]-lattice spanned by the projected
    basis vectors; its index is the monic determinant of the transition
    between the two component bases, and the components reassemble to a
    group-ring Laurent unit.
    """
    E, ctx = l1.E, l1.ctx
    F = table.splitting_field
    G = ctx.group
    inv_n = F.from_int(G.order).inverse()
    floor = min(l1.prec, l2.prec)
    # after conversion to twisted coordinates the module structure is the
    # plain one, so basis extraction shifts by a bare t
    tmul = lambda u: [x.shift(1) for x in u]

    def project(j, v):
        vf = [u.map_field(F) for u in v]
        acc = None
        for g in G.elements():
            chi = table.value(j, G.neg(g)) * inv_n
            gv = [u.scale(chi) for u in g_act_vector(ctx, g, vf, E.n)]
            acc = gv if acc is None else [a + b for a, b in zip(acc, gv)]
        return twisted_coordinates(E, ctx, acc)

    values = {}
    for j in table.indices:
        p1 = [project(j, v) for v in l1.vectors]
        p2 = [project(j, v) for v in l2.vectors]
        jfloor = min([floor] + [u.prec for vec in p1 + p2 for u in vec])
        c1 = _extract_basis(p1, tmul, jfloor)
        c2 = _extract_basis(p2, tmul, jfloor)
        if len(c1) != len(c2):
            raise ValueError('character components have different ranks')
        s = len(c1)
        if s == 0:
            values[j] = Laurent.one(F, floor)
            continue
        pos_list = sorted(c1)
        v1 = _basis_vectors(c1)
        v2 = _basis_vectors(c2)
        b1 = [[v1[jj][pos] for jj in range(s)] for pos in pos_list]
        b2 = [[v2[jj][pos] for jj in range(s)] for pos in pos_list]
        trans = _laurent_solve(F, b1, b2)
        det = _laurent_det(F, trans)
        if not det.is_unit():
            raise ValueError('degenerate character-component transition')
        values[j] = monic_representative(det)
    return table.reassemble(values)


# -- class modules ------------------------------------------------------

class ClassModule:
    """H at precision: a finite k-space with the induced t-action (and
    G-action when the context is nontrivial)."""

    def __init__(self, field, t_action, g_actions=None):
        self.field = field
        self.dim = len(t_action)
        self.t_action = t_action
        self.g_actions = g_actions or {}
        self.size = linalg.charpoly(field, t_action)

    def dump(self):
        lines = ['dim=%d' % self.dim]
        for row in self.t_action:
            lines.append(' '.join(repr(c) for c in row))
        return '\n'.join(lines) + '\n'


def _tail_coords(m, N):
    return [(c, e) for c in range(m) for e in range(-1, -N, -1)]


def _tail_vector(y, tails):
    return [y[c].coeff(e) for (c, e) in tails]


def _class_pass(E, ctx, es, N):
    k = E.k
    m = ambient_rank(E, ctx)
    tails = _tail_coords(m, N)
    dim_t = len(tails)
    inprec = N + 10  # headroom for the polynomial coordinate matrices

    def monomial(c, e, prec):
        v = [Laurent.zero(k, prec) for _ in range(m)]
        v[c] = Laurent.term(k, k.one_raw(), e, prec)
        return v

    # image of exp on a growing truncated domain, until the rank is stable
    rows = []
    prev = -1
    stable = 0
    d = 0
    first = list(range(-N + 1, 1))
    while stable < 2:
        batch = first if d == 0 else [d]
        for e in batch:
            for c in range(m):
                y = eval_exp(es, ctx, monomial(c, e, N + abs(e) + 2), N)
                rows.append(_tail_vector(y, tails))
        rk = linalg.rank(k, rows) if rows else 0
        if rk == prev:
            stable += 1
        else:
            stable = 0
        prev = rk
        d += 1
        if d > N + 8:
            raise InconclusiveError('image of exp did not stabilize')
    rel_basis, comp_idx = _quotient_data(k, rows, dim_t)

    def induced(fn):
        cols = []
        for (c, e) in tails:
            y = fn(monomial(c, e, inprec))
            if any(u.prec < N for u in y):
                raise PrecisionDeficitError('induced action lost precision')
            col = _tail_vector([u.truncate(N) for u in y], tails)
            cols.append(col)
        full = [[cols[j][i] for j in range(dim_t)] for i in range(dim_t)]
        return _quotient_matrix(k, full, rel_basis, comp_idx)

    tq = induced(lambda x: act_infty(E, ctx, x))
    gq = None
    if ctx.group.order > 1:
        gq = {g: induced(lambda x, g=g: g_act_vector(ctx, g, x, E.n))
              for g in ctx.group.elements()}
    return ClassModule(k, tq, gq)


def class_module(E, ctx, es, N):
    """H(E, G) at precision N: tails mod t^-N over the stabilized image of
    exp, with the induced t- and G-actions; certified against N + 2."""
    first = _class_pass(E, ctx, es, N)
    second = _class_pass(E, ctx, es, N + 2)
    if first.size != second.size:
        raise InconclusiveError('class module did not stabilize between '
                                'precisions %d and %d' % (N, N + 2))
    return first


def class_size_equivariant(cm, table):
    """|H|_{k[t][G]}: characterwise charpoly of t on the chi-isotypic
    pieces, reassembled into the group ring."""
    F = table.splitting_field
    G = table.group
    if cm.dim == 0:
        from .gring import GroupRingElem
        return GroupRingElem.scalar(G, Poly.one(table.k))
    t_f = _lift_matrix(cm.t_action, F)
    g_f = {g: _lift_matrix(m, F) for g, m in cm.g_actions.items()}
    inv_n = F.from_int(G.order).inverse()
    values = {}
    for j in table.indices:
        proj = linalg.zeros(F, cm.dim, cm.dim)
        for g in G.elements():
            chi = table.value(j, G.neg(g)) * inv_n
            gm = g_f[g]
            for a in range(cm.dim):
                row = proj[a]
                for bcol in range(cm.dim):
                    row[bcol] = row[bcol] + chi * gm[a][bcol]
        basis = _image_basis(F, proj)
        values[j] = linalg.charpoly(F, _restrict(F, t_f, basis))
    return table.reassemble(values)
