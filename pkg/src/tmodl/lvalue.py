"""Euler products and class-number-formula verdicts.

Four flavours of L-value are computed here, all as truncated Laurent
expansions at t = infinity:

  * the equivariant value L(E, G) in k((1/t))[G], a product of the
    group-ring local factors of `tmodule`;
  * rho-twisted values L(E, rho) over a splitting field, in the Hom and
    tensor normalizations;
  * the Artin-style value L(n, rho) built from Frobenius determinants
    alone, never touching the t-module.

The independent oracle `zeta_monic_sum_oracle` re-derives the trivial
case by brute-force summation over monic polynomials, and
`verify_class_formula` compares an Euler product against the product of
a lattice index and a class-module size computed on the analytic side.
Verdicts are three-valued: a heuristic search that fails to certify
reports `inconclusive`, never a silent pass or fail.
"""

import itertools

from . import linalg
from .analytic import (
    InconclusiveError, PrecisionDeficitError, class_module,
    class_size_equivariant, exp_coeffs, lattice_index_equivariant,
    lie_lattice, unit_lattice,
)
from .galois import factor_monic, prime_data, primes_upto
from .gring import (
    GroupRingElem, decompose, rep_of_character, regular_representation,
    twist_det,
)
from .ring import (
    Laurent, Poly, expand_rational, laurent_invert, render_laurent,
    render_poly,
)
from .tmodule import (
    _guard_tame, frobenius_restriction, local_factor_equivariant,
    local_factor_rep, make_carlitz_power,
)

VARIANTS = ('equivariant', 'hom', 'tensor', 'frobenius')


def _show(v):
    if isinstance(v, GroupRingElem):
        return {','.join(str(x) for x in g): _show(c)
                for g, c in sorted(v.coeffs.items())}
    if isinstance(v, Laurent):
        return render_laurent(v)
    return render_poly(v)


class EulerProduct:
    """A truncated Euler product with its per-prime provenance ledger."""

    def __init__(self, tag, ctx, variant, prec, degree_bound, value, ledger,
                 E=None):
        self.tag = tag
        self.ctx = ctx
        self.variant = variant
        self.prec = prec
        self.degree_bound = degree_bound
        self.value = value
        self.ledger = ledger
        self.E = E

    def serialize(self):
        return {'tag': self.tag,
                'variant': self.variant,
                'prec': self.prec,
                'degree_bound': self.degree_bound,
                'value': _show(self.value),
                'ledger': list(self.ledger)}


def _sorted_primes(k, bound):
    return sorted(primes_upto(k, bound),
                  key=lambda p: (p.degree, render_poly(p)))


def _check_unit_factor(factor, d, p):
    one = Laurent.one(factor.field, factor.prec)
    diff = factor - one
    if not diff.is_zero() and diff.top > -d:
        raise AssertionError('local factor not 1 + O(t^-d) at %s'
                             % render_poly(p))


def frobenius_factor_exact(pd, rho, F, n, variant='tensor'):
    """det(1 - rho(Frob_P)/p^n) on V^{I_P} (or V_{I_P}) as an exact
    rational function: returns (num, den) with the value num/den."""
    mat = frobenius_restriction(pd, rho, F, variant)
    s = len(mat)
    if s == 0:
        return Poly.one(F), Poly.one(F)
    pn = pd.p.map_field(F) ** n
    # det(1 - M/p^n) = ch_M(p^n) / p^{ns} with ch_M(x) = det(x - M)
    ch = linalg.charpoly(F, mat)
    num = Poly.zero(F)
    power = Poly.one(F)
    for i in range(ch.degree + 1):
        num = num + power.scale(ch.coeff(i))
        power = power * pn
    return num, pn ** s


def euler_product(E, ctx, variant, N, rho=None, field=None, n=None,
                  degree_bound=None):
    """Product over monic irreducibles of degree <= degree_bound (default
    N) of the requested local factor, truncated mod t^-N.

    Variants: 'equivariant' (value in k((1/t))[G], no rho), 'hom' and
    'tensor' (rho-twisted values over `field`), and 'frobenius' (the
    Artin value L(n, rho) from Galois data alone; E is ignored).
    """
    if variant not in VARIANTS:
        raise ValueError('unknown variant %r' % (variant,))
    if N < 1:
        raise ValueError('precision must be at least 1')
    D = N if degree_bound is None else degree_bound
    k = ctx.k
    ledger = []
    if variant == 'equivariant':
        value = GroupRingElem.scalar(ctx.group, Laurent.one(k, N))
        tag = 'L(E,G)'
    else:
        if rho is None or field is None:
            raise ValueError('variant %r needs rho and its field' % variant)
        if variant == 'frobenius' and n is None:
            raise ValueError('frobenius variant needs the tensor power n')
        value = Laurent.one(field, N)
        tag = 'L(%s,rho)' % ('n=%d' % n if variant == 'frobenius' else 'E')
    for p in _sorted_primes(k, D):
        pd = prime_data(ctx, p)
        if variant == 'equivariant':
            lf = local_factor_equivariant(E, pd, N)
            value = value * lf.ratio
            ledger.append(lf.serialize())
        elif variant in ('hom', 'tensor'):
            lf = local_factor_rep(E, pd, rho, field, variant, N)
            value = value * lf.ratio
            ledger.append(lf.serialize())
        else:
            _guard_tame(pd)
            num, den = frobenius_factor_exact(pd, rho, field, n, 'tensor')
            factor = expand_rational(den, num, N)
            _check_unit_factor(factor, pd.d, p)
            value = value * factor
            ledger.append({'prime': render_poly(p),
                           'num': render_poly(num),
                           'den': render_poly(den),
                           'factor': render_laurent(factor)})
    if variant == 'equivariant':
        value = value.map_coeffs(lambda u: u.truncate(N))
    else:
        value = value.truncate(N)
    return EulerProduct(tag, ctx, variant, N, D, value, ledger, E=E)


def zeta_monic_sum_oracle(k, n, N):
    """Dirichlet-series oracle: sum of 1/a(t)^n over monic a of degree
    < N, truncated mod t^-N.  Independent of the Euler-product code."""
    if N < 1:
        raise ValueError('precision must be at least 1')
    total = Laurent.zero(k, N)
    raws = [e.val for e in k.elements()]
    for d in range(N):
        for tail in itertools.product(raws, repeat=d):
            a = Poly(k, list(tail) + [k.one_raw()])
            total = total + expand_rational(Poly.one(k), a ** n, N)
    return total


# -- verdicts -----------------------------------------------------------

class Verdict:
    PASS = 'pass'
    FAIL = 'fail'
    INCONCLUSIVE = 'inconclusive'

    def __init__(self, status, detail='', first_difference=None, data=None):
        self.status = status
        self.detail = detail
        self.first_difference = first_difference
        self.data = data or {}

    @property
    def ok(self):
        return self.status == self.PASS

    def serialize(self):
        out = {'status': self.status, 'detail': self.detail}
        if self.first_difference is not None:
            out['first_difference'] = self.first_difference
        for key, v in sorted(self.data.items()):
            if isinstance(v, (Laurent, GroupRingElem, Poly)):
                out[key] = _show(v)
            elif isinstance(v, (str, int, bool)):
                out[key] = v
        return out

    def __repr__(self):
        return 'Verdict(%s%s)' % (self.status,
                                  ', %s' % self.detail if self.detail else '')


def _compare_laurents(lhs, rhs, N, detail, data):
    if lhs.prec < N or rhs.prec < N:
        return Verdict(Verdict.INCONCLUSIVE,
                       '%s: precision fell short of %d' % (detail, N),
                       data=data)
    a, b = lhs.truncate(N), rhs.truncate(N)
    if a.approx_eq(b):
        return Verdict(Verdict.PASS, detail, data=data)
    return Verdict(Verdict.FAIL, detail,
                   first_difference=a.first_difference(b), data=data)


def _compare_gring(lhs, rhs, N, detail, data):
    group = lhs.group
    zero = None
    for u in list(lhs.coeffs.values()) + list(rhs.coeffs.values()):
        zero = Laurent.zero(u.field, u.prec)
        if u.prec < N:
            return Verdict(Verdict.INCONCLUSIVE,
                           '%s: precision fell short of %d' % (detail, N),
                           data=data)
    first = None
    for g in group.elements():
        a = lhs.coeff(g, zero).truncate(N)
        b = rhs.coeff(g, zero).truncate(N)
        if not a.approx_eq(b):
            d = a.first_difference(b)
            if first is None or d > first:
                first = d
    if first is None:
        return Verdict(Verdict.PASS, detail, data=data)
    return Verdict(Verdict.FAIL, detail, first_difference=first, data=data)


def specialize_and_compare(Lg, rho, field):
    """The rho-twist of the equivariant value against the directly
    computed Hom-variant value."""
    if Lg.variant != 'equivariant':
        raise ValueError('specialization needs an equivariant product')
    twisted = twist_det(Lg.value, Lg.ctx.group, rho, field)
    direct = euler_product(Lg.E, Lg.ctx, 'hom', Lg.prec, rho=rho, field=field)
    return _compare_laurents(twisted, direct.value, Lg.prec,
                             'twist of L(E,G) vs direct L(E,rho)',
                             {'twisted': twisted, 'direct': direct.value})


# -- Artin comparisons --------------------------------------------------

def _ramified_primes(ctx, bound):
    k = ctx.k
    cand = {render_poly(p): p for p in primes_upto(k, bound)}
    if ctx.family == 'cyclotomic':
        for p, _ in factor_monic(k, ctx.param):
            cand[render_poly(p)] = p
    out = []
    for key in sorted(cand, key=lambda s: (cand[s].degree, s)):
        p = cand[key]
        if prime_data(ctx, p).e > 1:
            out.append(p)
    return out


def artin_compare(n, ctx, rho, field, N):
    """Verdict bundle for the Artin-style identities at tensor weight n.

    Computes L(n, rho) from Frobenius data, the tensor-product and
    Hom-product values of C^(x)n, checks the per-prime determinant
    identities exactly, the global equalities mod t^-N, and exhibits the
    ratio L(n,rho)/L(C^(x)n,rho) as an exact rational function built
    from the ramified-prime factor discrepancies.
    """
    E = make_carlitz_power(ctx.k, n)
    L_def = euler_product(None, ctx, 'frobenius', N, rho=rho, field=field,
                          n=n)
    L_tensor = euler_product(E, ctx, 'tensor', N, rho=rho, field=field)
    L_hom = euler_product(E, ctx, 'hom', N, rho=rho, field=field)

    per_prime = []
    for p in _sorted_primes(ctx.k, N):
        pd = prime_data(ctx, p)
        entry = {'prime': render_poly(p)}
        ok = True
        for variant in ('hom', 'tensor'):
            lf = local_factor_rep(E, pd, rho, field, variant, 1)
            num, den = frobenius_factor_exact(pd, rho, field, n, variant)
            # exact identity in F(t): mod_char/lie_char = num/den
            good = lf.mod_char * den == num * lf.lie_char
            entry[variant] = 'exact' if good else 'mismatch'
            ok = ok and good
        per_prime.append(Verdict(Verdict.PASS if ok else Verdict.FAIL,
                                 'local determinant identity at %s'
                                 % entry['prime'],
                                 data=entry))

    tensor_vs_def = _compare_laurents(
        L_tensor.value, L_def.value, N, 'tensor product vs L(n,rho)',
        {'tensor': L_tensor.value, 'frobenius': L_def.value})
    hom_vs_def = _compare_laurents(
        L_hom.value, L_def.value, N, 'Hom product vs L(n,rho) (tame)',
        {'hom': L_hom.value, 'frobenius': L_def.value})

    # rationality witness: the ratio of the two products collapses to the
    # finitely many ramified-prime discrepancies
    wnum, wden = Poly.one(field), Poly.one(field)
    for p in _ramified_primes(ctx, N):
        pd = prime_data(ctx, p)
        tn, td = frobenius_factor_exact(pd, rho, field, n, 'tensor')
        hn, hd = frobenius_factor_exact(pd, rho, field, n, 'hom')
        # factor ratio (td/tn) / (hd/hn)
        wnum = wnum * td * hn
        wden = wden * tn * hd
    ratio = L_def.value * laurent_invert(L_hom.value)
    witness_val = expand_rational(wnum, wden, N)
    witness = _compare_laurents(
        ratio, witness_val, min(N, ratio.prec),
        'L(n,rho)/L(C^(x)n,rho) vs ramified-prime rational witness',
        {'ratio': ratio, 'witness': witness_val,
         'witness_num': wnum, 'witness_den': wden})

    return {'frobenius': L_def, 'tensor': L_tensor, 'hom': L_hom,
            'per_prime': per_prime, 'tensor_vs_def': tensor_vs_def,
            'hom_vs_def': hom_vs_def, 'witness': witness}


def regular_factorization(n, ctx, N):
    """L(n, regular rep) = product over characters of L(n, chi)."""
    table = decompose(ctx.group, ctx.k)
    F = table.splitting_field
    reg = euler_product(None, ctx, 'frobenius', N,
                        rho=regular_representation(ctx.group, F), field=F,
                        n=n)
    prod = Laurent.one(F, N)
    for j in table.indices:
        Lj = euler_product(None, ctx, 'frobenius', N,
                           rho=rep_of_character(table, j), field=F, n=n)
        prod = prod * Lj.value
    return _compare_laurents(reg.value, prod, N,
                             'L(n,reg) vs product over characters',
                             {'regular': reg.value, 'product': prod})


# -- the class number formula -------------------------------------------

def verify_class_formula(E, ctx, variant, N, rho=None, field=None, S=None,
                         box_d=2, box_n=None, cm_n=4):
    """Compare the Euler product against lattice index times class size.

    LHS: the requested Euler product mod t^-N.  RHS: the equivariant
    index [Lie(O_L) : exp^{-1}(E(O_L))] times |H|, both computed on the
    analytic side; for 'hom'/'tensor' the RHS is specialized through
    rho.  The verdict is pass / fail / inconclusive; stabilization
    failures in the lattice or class-module searches, and precision
    deficits that survive retries, report inconclusive.
    """
    if variant not in ('equivariant', 'hom', 'tensor'):
        raise ValueError('unsupported class-formula variant %r' % (variant,))
    # larger Lie dimension costs precision in dets and transitions
    box = N + 2 * E.n + 2 if box_n is None else box_n
    order = max(4, N - 2) if S is None else S
    table = decompose(ctx.group, ctx.k)
    try:
        lhs_ep = euler_product(E, ctx, variant, N, rho=rho, field=field)
    except InconclusiveError as e:
        return Verdict(Verdict.INCONCLUSIVE, str(e))
    for attempt in range(4):
        try:
            es = exp_coeffs(E, order)
            lat = unit_lattice(E, ctx, es, box_d, box)
            lie = lie_lattice(E, ctx, lat.prec + 2 * box_d)
            idx = lattice_index_equivariant(table, lie, lat)
            cm = class_module(E, ctx, es, cm_n)
            hsize = class_size_equivariant(cm, table)
            break
        except PrecisionDeficitError as e:
            if attempt == 3:
                return Verdict(Verdict.INCONCLUSIVE, str(e))
            order += 2
        except InconclusiveError as e:
            return Verdict(Verdict.INCONCLUSIVE, str(e))
    floor = min(u.prec for u in idx.coeffs.values())
    rhs = idx * hsize.map_coeffs(lambda c: Laurent.from_poly(c, floor))
    data = {'lhs': lhs_ep.value, 'index': idx, 'class_size': hsize,
            'rhs': rhs}
    if variant == 'equivariant':
        v = _compare_gring(lhs_ep.value, rhs, N,
                           'L(E,G) vs index times class size', data)
    else:
        rhs_t = twist_det(rhs, ctx.group, rho, field)
        data['rhs'] = rhs_t
        v = _compare_laurents(lhs_ep.value, rhs_t, N,
                              'L(E,rho) vs specialized index times class '
                              'size', data)
    v.data['ledger'] = lhs_ep.ledger
    v.data['class_dim'] = cm.dim
    return v
