"""Abelian t-modules over k[t] and their local L-factors.

A t-module is a matrix polynomial E(t) = sum A_s tau^s acting on n-tuples;
on a residue algebra B_p everything becomes finite k-linear algebra, so
local factors are honest characteristic polynomials:

  * equivariantly, characterwise over the splitting field of k[G], giving
    group-ring elements of k[t][G], and
  * twisted by a representation rho, over F[t] via the Hom or tensor
    functor applied to B_p^n as a k[G]-module.
"""

from __future__ import annotations

from . import linalg
from .ffield import lift
from .gring import (
    GroupRingElem, decompose, validate_representation, _laurent_det,
)
from .ring import Laurent, Poly, expand_rational, render_laurent, render_poly


class UnsupportedContextError(ValueError):
    """A local factor was requested in a setting the theory does not cover
    (wild ramification or |G| divisible by the characteristic)."""


class TModule:
    """E(t) = A_0 + A_1 tau + ... + A_r tau^r with n x n matrices over k[t],
    subject to (A_0 - t I)^n = 0."""

    def __init__(self, k, mats):
        if not mats:
            raise ValueError('need at least A_0')
        self.k = k
        self.mats = [[[c for c in row] for row in m] for m in mats]
        self.n = len(mats[0])
        self.r = len(mats) - 1
        for m in mats:
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise ValueError('all A_s must be n x n')
        # r = 0 is allowed (exp is then the identity); otherwise the top
        # coefficient must be honest
        if self.r >= 1 and all(c.is_zero() for row in mats[-1] for c in row):
            raise ValueError('A_r must be nonzero')
        nil = [[mats[0][i][j] - (Poly.t(k) if i == j else Poly.zero(k))
                for j in range(self.n)] for i in range(self.n)]
        power = [[Poly.one(k) if i == j else Poly.zero(k)
                  for j in range(self.n)] for i in range(self.n)]
        for _ in range(self.n):
            power = _pmatmul(power, nil)
        if any(not c.is_zero() for row in power for c in row):
            raise ValueError('(A_0 - t*I)^n != 0: not an abelian t-module')


def _pmatmul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for l in range(n):
                term = a[i][l] * b[l][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def make_carlitz_power(k, n):
    """C^tensor-n: A_0 = t I + N (superdiagonal), A_1 = e_{n,1}; realizes
    C(t)(x_1..x_n) = (t x_1 + x_2, ..., t x_n + x_1^q)."""
    if n < 1:
        raise ValueError('n must be >= 1')
    a0 = [[Poly.t(k) if i == j else
           (Poly.one(k) if j == i + 1 else Poly.zero(k))
           for j in range(n)] for i in range(n)]
    a1 = [[Poly.one(k) if (i, j) == (n - 1, 0) else Poly.zero(k)
           for j in range(n)] for i in range(n)]
    return TModule(k, [a0, a1])


# -- module action on residue algebras ---------------------------------

def _eval_mats(E, pd):
    zbar = pd.zbar
    return [[[c.evaluate(zbar) for c in row] for row in m] for m in E.mats]


def act_t(E, pd, x):
    """E(t) applied to a vector of B_p elements."""
    B = pd.B
    a_eval = _eval_mats(E, pd)
    xq = [list(x)]
    for s in range(1, E.r + 1):
        xq.append([pd.qpow(v) for v in xq[-1]])
    out = []
    for i in range(E.n):
        acc = B.zero()
        for s, m in enumerate(a_eval):
            for j in range(E.n):
                c = m[i][j]
                if not c.is_zero():
                    acc = B.add(acc, B.scale(xq[s][j], c))
        out.append(acc)
    return out


def act(E, pd, a, x):
    """E(a) for a in k[t], via E(a) = sum a_i E(t)^i (operator powers)."""
    if len(x) != E.n:
        raise ValueError('vector length must equal the dimension')
    B = pd.B
    acc = [B.zero()] * E.n
    for i in range(a.degree, -1, -1):
        acc = act_t(E, pd, acc)
        c = a.coeff(i)
        if not c.is_zero():
            scaled = [B.scale(v, lift(c, pd.kappa)) for v in x]
            acc = [B.add(u, v) for u, v in zip(acc, scaled)]
    return acc


def _vec_basis(E, pd):
    """k-basis of B_p^n as vectors of B elements."""
    B = pd.B
    out = []
    for comp in range(E.n):
        for b in B.elements_basis():
            v = [B.zero()] * E.n
            v[comp] = b
            out.append(v)
    return out


def _vec_to_k(E, pd, v):
    out = []
    for comp in v:
        out.extend(pd.B.to_k(comp))
    return out


def module_matrices(E, pd):
    """(lie, mod): k-linear matrices of A_0(zbar) and of E(t) on B_p^n."""
    basis = _vec_basis(E, pd)
    B = pd.B
    a_eval = _eval_mats(E, pd)

    def apply_gen(v, top):
        xq = [list(v)]
        for s in range(1, top + 1):
            xq.append([pd.qpow(u) for u in xq[-1]])
        out = []
        for i in range(E.n):
            acc = B.zero()
            for s in range(top + 1):
                for j in range(E.n):
                    c = a_eval[s][i][j]
                    if not c.is_zero():
                        acc = B.add(acc, B.scale(xq[s][j], c))
            out.append(acc)
        return out

    lie_cols = [_vec_to_k(E, pd, apply_gen(v, 0)) for v in basis]
    mod_cols = [_vec_to_k(E, pd, apply_gen(v, E.r)) for v in basis]
    size = len(basis)
    lie = [[lie_cols[j][i] for j in range(size)] for i in range(size)]
    mod = [[mod_cols[j][i] for j in range(size)] for i in range(size)]
    return lie, mod


def group_matrices(E, pd):
    """k-linear matrices of the (diagonal) G-action on B_p^n."""
    basis = _vec_basis(E, pd)
    out = {}
    for g in pd.ctx.group.elements():
        cols = [_vec_to_k(E, pd, [pd.g_act(g, comp) for comp in v])
                for v in basis]
        size = len(basis)
        out[g] = [[cols[j][i] for j in range(size)] for i in range(size)]
    return out


# -- restriction to subspaces ------------------------------------------

def _image_basis(field, proj):
    """Basis of the column space, as a list of vectors."""
    cols = list(zip(*proj))
    m, pivots = linalg.rref(field, [list(c) for c in cols])
    return [list(m[i]) for i in range(len(pivots))]


def _restrict(field, mat, basis):
    """Matrix of `mat` on the span of `basis` (must be invariant)."""
    if not basis:
        return []
    cmat = [[basis[j][i] for j in range(len(basis))]
            for i in range(len(basis[0]))]
    out_cols = []
    for v in basis:
        img = linalg.mat_vec(field, mat, v)
        x = linalg.solve(field, cmat, img)
        if x is None:
            raise AssertionError('subspace is not invariant')
        out_cols.append(x)
    s = len(basis)
    return [[out_cols[j][i] for j in range(s)] for i in range(s)]


def _lift_matrix(mat, F):
    return linalg.map_entries(mat, lambda c: lift(c, F))


# -- local factors ------------------------------------------------------

class LocalFactor:
    """Local data at p: characteristic polynomials of t on the Lie side and
    on the module side, and their ratio expanded at infinity."""

    def __init__(self, p, lie_char, mod_char, ratio):
        self.p = p
        self.lie_char = lie_char
        self.mod_char = mod_char
        self.ratio = ratio

    def serialize(self):
        def show(v):
            if isinstance(v, GroupRingElem):
                return {','.join(str(e) for e in g): show(c)
                        for g, c in sorted(v.coeffs.items())}
            if isinstance(v, Laurent):
                return render_laurent(v)
            return render_poly(v)
        return {'prime': render_poly(self.p),
                'lie_char': show(self.lie_char),
                'mod_char': show(self.mod_char),
                'ratio': show(self.ratio)}


def _guard_tame(pd):
    k = pd.ctx.k
    if pd.ctx.group.order % k.p == 0:
        raise UnsupportedContextError('|G| divisible by the characteristic')
    if pd.e % k.p == 0:
        raise UnsupportedContextError('wild prime %s' % render_poly(pd.p))


def local_factor_equivariant(E, pd, prec):
    """Characterwise equivariant local factor over k[t][G]."""
    _guard_tame(pd)
    ctx = pd.ctx
    table = decompose(ctx.group, ctx.k)
    F = table.splitting_field
    lie_k, mod_k = module_matrices(E, pd)
    gmats = group_matrices(E, pd)
    lie_F = _lift_matrix(lie_k, F)
    mod_F = _lift_matrix(mod_k, F)
    g_F = {g: _lift_matrix(m, F) for g, m in gmats.items()}
    inv_n = F.from_int(ctx.group.order).inverse()
    size = len(lie_F)
    lie_vals = {}
    mod_vals = {}
    ratio_vals = {}
    for j in table.indices:
        proj = linalg.zeros(F, size, size)
        for g in ctx.group.elements():
            chi = table.value(j, ctx.group.neg(g)) * inv_n
            m = g_F[g]
            for a in range(size):
                row = proj[a]
                mrow = m[a]
                for b in range(size):
                    row[b] = row[b] + chi * mrow[b]
        basis = _image_basis(F, proj)
        lie_vals[j] = linalg.charpoly(F, _restrict(F, lie_F, basis))
        mod_vals[j] = linalg.charpoly(F, _restrict(F, mod_F, basis))
        r = expand_rational(lie_vals[j], mod_vals[j], prec)
        diff = r - Laurent.one(F, prec)
        if not diff.is_zero() and diff.top > -pd.d:
            raise AssertionError('local factor not 1 + O(t^-d) at %s'
                                 % render_poly(pd.p))
        ratio_vals[j] = r
    return LocalFactor(pd.p,
                       table.reassemble(lie_vals),
                       table.reassemble(mod_vals),
                       table.reassemble(ratio_vals))


def _kron(field, a, b):
    if not a or not b:
        return []
    out = []
    for arow in a:
        for brow in b:
            row = []
            for x in arow:
                for y in brow:
                    row.append(x * y)
            out.append(row)
    return out


def _dual_rep(field, rho, group):
    """rho^*(g) = transpose of rho(g^{-1})."""
    out = {}
    for g, m in rho.items():
        mi = rho[group.neg(g)]
        out[g] = [list(col) for col in zip(*mi)]
    return out


def _quotient_data(field, rel_rows, dim):
    """Given spanning relation vectors (rows) in an ambient space of the
    stated dimension, return (rel_basis, comp_idx): a basis of the relation
    space and indices of coordinate vectors completing it to a basis."""
    m, pivots = linalg.rref(field, rel_rows) if rel_rows else ([], [])
    rel_basis = [m[i] for i in range(len(pivots))]
    comp_idx = [c for c in range(dim) if c not in pivots]
    return rel_basis, comp_idx


def _quotient_matrix(field, mat, rel_basis, comp_idx):
    """Induced matrix on ambient/relations w.r.t. the coordinate vectors
    indexed by comp_idx."""
    dim = len(mat)
    full = [list(r) for r in rel_basis]
    for c in comp_idx:
        v = [field.zero()] * dim
        v[c] = field.one()
        full.append(v)
    fmat = [[full[j][i] for j in range(len(full))] for i in range(dim)]
    out_cols = []
    for c in comp_idx:
        img = [mat[i][c] for i in range(dim)]
        x = linalg.solve(field, fmat, img)
        if x is None:
            raise AssertionError('quotient coordinates failed')
        out_cols.append(x[len(rel_basis):])
    s = len(comp_idx)
    return [[out_cols[j][i] for j in range(s)] for i in range(s)]


def local_factor_rep(E, pd, rho, F, variant, prec):
    """Local factor over F[t] twisted by a representation rho on V.

    variant 'hom' uses Hom_{k[G]}(V, -): invariants of V^* (x) B_p^n,
    computed as the kernel of the equivariance constraints.  variant
    'tensor' uses V^* (x)_{k[G]} -: the honest quotient by the relations
    g.w - w.  Both commute with t, so characteristic polynomials restrict.
    """
    _guard_tame(pd)
    ctx = pd.ctx
    validate_representation(ctx.group, rho, F)
    lie_k, mod_k = module_matrices(E, pd)
    gmats = group_matrices(E, pd)
    m = len(next(iter(rho.values())))
    size = len(lie_k)
    ident_m = linalg.identity(F, m)
    lie_W = _kron(F, ident_m, _lift_matrix(lie_k, F))
    mod_W = _kron(F, ident_m, _lift_matrix(mod_k, F))
    dual = _dual_rep(F, rho, ctx.group)
    w_act = {g: _kron(F, dual[g], _lift_matrix(gmats[g], F))
             for g in ctx.group.elements()}
    wdim = m * size
    gens = ctx.group.generators() or []
    if variant == 'hom':
        rows = []
        for g in gens:
            wg = w_act[g]
            for i in range(wdim):
                row = list(wg[i])
                row[i] = row[i] - F.one()
                rows.append(row)
        basis = linalg.kernel_basis(F, rows) if rows else \
            [[F.one() if i == j else F.zero() for j in range(wdim)]
             for i in range(wdim)]
        lie_char = linalg.charpoly(F, _restrict(F, lie_W, basis))
        mod_char = linalg.charpoly(F, _restrict(F, mod_W, basis))
    elif variant == 'tensor':
        rel_rows = []
        for g in gens:
            wg = w_act[g]
            for c in range(wdim):
                col = [wg[i][c] for i in range(wdim)]
                col[c] = col[c] - F.one()
                rel_rows.append(col)
        rel_basis, comp_idx = _quotient_data(F, rel_rows, wdim)
        lie_char = linalg.charpoly(
            F, _quotient_matrix(F, lie_W, rel_basis, comp_idx))
        mod_char = linalg.charpoly(
            F, _quotient_matrix(F, mod_W, rel_basis, comp_idx))
    else:
        raise ValueError('variant must be hom or tensor')
    ratio = expand_rational(lie_char, mod_char, prec)
    diff = ratio - Laurent.one(F, prec)
    if not diff.is_zero() and diff.top > -pd.d:
        raise AssertionError('twisted local factor not 1 + O(t^-d) at %s'
                             % render_poly(pd.p))
    return LocalFactor(pd.p, lie_char, mod_char, ratio)


# -- Frobenius determinant forms (independent oracle) -------------------

def frobenius_restriction(pd, rho, F, variant):
    """The matrix of rho(Frob_P) on V_{I_P} (variant 'hom') or V^{I_P}
    (variant 'tensor'), from group data only."""
    m = len(next(iter(rho.values())))
    sigma0 = pd.frob_P[0]
    frob_mat = rho[sigma0]
    if variant == 'tensor':
        # V^{I}: intersection of kernels of rho(g) - 1, g in I_P
        rows = []
        for g in pd.I_P:
            for i in range(m):
                row = list(rho[g][i])
                row[i] = row[i] - F.one()
                rows.append(row)
        basis = linalg.kernel_basis(F, rows) if rows else \
            [[F.one() if i == j else F.zero() for j in range(m)]
             for i in range(m)]
        return _restrict(F, frob_mat, basis)
    if variant == 'hom':
        # V_{I}: quotient by the span of (rho(g) - 1)v
        rel_rows = []
        for g in pd.I_P:
            for c in range(m):
                col = [rho[g][i][c] for i in range(m)]
                col[c] = col[c] - F.one()
                rel_rows.append(col)
        rel_basis, comp_idx = _quotient_data(F, rel_rows, m)
        return _quotient_matrix(F, frob_mat, rel_basis, comp_idx)
    raise ValueError('variant must be hom or tensor')


def frobenius_det_form(pd, rho, F, n, variant, prec):
    """det(1 - rho(Frob_P) / p(t)^n) on V_{I_P} (variant 'hom') or V^{I_P}
    (variant 'tensor'), from group data only."""
    mat = frobenius_restriction(pd, rho, F, variant)
    s = len(mat)
    if s == 0:
        return Laurent.one(F, prec)
    inv_pn = expand_rational(Poly.one(F), pd.p.map_field(F) ** n,
                             prec + n * pd.d * s + 1)
    entries = []
    for i in range(s):
        row = []
        for j in range(s):
            one = Laurent.one(F, inv_pn.prec) if i == j else \
                Laurent.zero(F, inv_pn.prec)
            row.append(one - inv_pn.scale(mat[i][j]))
        entries.append(row)
    return _laurent_det(F, entries).truncate(prec)


# -- closed forms from the residue-field theory -------------------------

def expected_lie_char(pd, n):
    """The scalar p(t)^n inside k[t][G]."""
    return GroupRingElem.scalar(pd.ctx.group, pd.p ** n)


def expected_mod_char(pd, n):
    """p(t)^n - (1/e) sum over frob_P, as a group-ring element."""
    k = pd.ctx.k
    inv_e = k.from_int(pd.e).inverse()
    coeffs = {pd.ctx.group.identity(): pd.p ** n}
    for g in pd.frob_P:
        c = Poly.const(-inv_e)
        prev = coeffs.get(g)
        coeffs[g] = c if prev is None else prev + c
    return GroupRingElem(pd.ctx.group, coeffs)
