import pytest

from tmodl.ffield import Field, FieldElem, make_extension
from tmodl.galois import (
    build_constant_context, build_cyclotomic_context, carlitz_cyclotomic,
    carlitz_tau, carlitz_wpoly, exponent_of, factor_monic, load_context,
    prime_data, primes_upto, save_context, unit_group, unit_of, wp_divexact,
    wp_divmod, wp_eq, wp_mod, wp_mul,
)
from tmodl.ring import Poly, parse_poly

F2 = Field.prime(2)
F3 = Field.prime(3)


# -- primes ------------------------------------------------------------

def test_primes_f2_degree1():
    got = primes_upto(F2, 1)
    assert got == [parse_poly(F2, 't'), parse_poly(F2, 't+1')]


def test_primes_f2_degree3_count():
    got = [q for q in primes_upto(F2, 3) if q.degree == 3]
    assert got == [parse_poly(F2, 't^3+t+1'), parse_poly(F2, 't^3+t^2+1')]


def test_primes_f3_degree2_count():
    got = [q for q in primes_upto(F3, 2) if q.degree == 2]
    assert len(got) == 3


def test_primes_cache_roundtrip(tmp_path):
    path = str(tmp_path / 'primes.txt')
    first = primes_upto(F2, 3, cache_path=path)
    again = primes_upto(F2, 3, cache_path=path)
    assert first == again
    # different D recomputes without error
    assert primes_upto(F2, 2, cache_path=path) == first[:3]


# -- w-polynomials and Carlitz machinery --------------------------------

def test_wp_divmod_roundtrip():
    a = [parse_poly(F2, 't'), Poly.one(F2), parse_poly(F2, 't+1'), Poly.one(F2)]
    b = [parse_poly(F2, 't^2'), Poly.one(F2)]
    q, r = wp_divmod(a, b)
    back = wp_mul(q, b)
    for i, c in enumerate(r):
        back[i] = back[i] + c
    assert wp_eq(back, a)
    assert wp_eq(wp_divexact(wp_mul(a, b), b), a)


def test_carlitz_tau_t_and_t2():
    assert carlitz_tau(F2, Poly.t(F2)) == [Poly.t(F2), Poly.one(F2)]
    # C_{t^2} = (t + tau)^2 = t^2 + (t + t^q) tau + tau^2
    got = carlitz_tau(F2, parse_poly(F2, 't^2'))
    assert got == [parse_poly(F2, 't^2'), parse_poly(F2, 't^2+t'), Poly.one(F2)]


def test_carlitz_additive():
    a = parse_poly(F3, 't^2+t')
    b = parse_poly(F3, '2*t+1')
    ca, cb = carlitz_tau(F3, a), carlitz_tau(F3, b)
    cab = carlitz_tau(F3, a + b)
    n = max(len(ca), len(cb))
    ca += [Poly.zero(F3)] * (n - len(ca))
    cb += [Poly.zero(F3)] * (n - len(cb))
    assert cab == [x + y for x, y in zip(ca, cb)]


def test_cyclotomic_polynomial_f3_t():
    # C_t(x) = t x + x^3 over F_3; phi_t = C_t(x)/x = t + x^2
    phi = carlitz_cyclotomic(F3, Poly.t(F3))
    assert wp_eq(phi, [Poly.t(F3), Poly.zero(F3), Poly.one(F3)])


def test_cyclotomic_polynomial_degree_is_unit_count():
    f = parse_poly(F2, 't^2+t')  # t(t+1): |(A/f)^x| = 1*1 = 1
    assert len(carlitz_cyclotomic(F2, f)) - 1 == 1
    f = parse_poly(F2, 't^3+t^2+t')  # t(t^2+t+1): 1*3 = 3
    assert len(carlitz_cyclotomic(F2, f)) - 1 == 3


def test_cyclotomic_rejects_nonsquarefree():
    with pytest.raises(ValueError):
        carlitz_cyclotomic(F2, parse_poly(F2, 't^2'))


# -- unit groups -------------------------------------------------------

def test_unit_group_irreducible_conductor():
    G, gens = unit_group(F2, parse_poly(F2, 't^2+t+1'))
    assert G.orders == (3,)
    f = parse_poly(F2, 't^2+t+1')
    g = gens[0]
    seen = {unit_of(G, gens, F2, f, e) for e in G.elements()}
    assert len(seen) == 3
    assert exponent_of(G, gens, F2, f, g) == (1,)


def test_unit_group_invariant_factors():
    # t(t+1) over F_3: (F_3)^x x (F_3)^x = Z/2 x Z/2
    G, gens = unit_group(F3, parse_poly(F3, 't^2+t'))
    assert G.orders == (2, 2)
    # t^2+1 irreducible over F_3: cyclic of order 8
    G, gens = unit_group(F3, parse_poly(F3, 't^2+1'))
    assert G.orders == (8,)


def test_factor_monic():
    f = parse_poly(F2, 't^4+t^2')  # t^2 (t+1)^2
    fac = factor_monic(F2, f)
    assert fac == [(parse_poly(F2, 't'), 2), (parse_poly(F2, 't+1'), 2)]


# -- constant contexts -------------------------------------------------

def test_constant_context_basics():
    ctx = build_constant_context(F2, 3)
    assert ctx.group.orders == (3,)
    assert ctx.degree == 3
    # action of the generator is the q-power map on w
    from tmodl.galois import wp_qpow
    w = [Poly.zero(F2), Poly.one(F2)]
    assert wp_eq(ctx.action[(1,)], wp_qpow(w, 2, ctx.h_w))


def test_constant_context_trivial():
    ctx = build_constant_context(F2, 1)
    assert ctx.group.order == 1
    pd = prime_data(ctx, parse_poly(F2, 't'))
    assert pd.e == 1 and pd.f_res == 1 and pd.r == 1


def test_constant_context_frobenius_at_linear_prime():
    ctx = build_constant_context(F2, 3)
    pd = prime_data(ctx, Poly.t(F2))
    # B_p = F_8: one prime, residue degree 3, unramified
    assert (pd.e, pd.f_res, pd.r) == (1, 3, 1)
    assert pd.frob_P == [(1,)]
    assert pd.I_P == [(0,)]


def test_constant_context_split_prime():
    ctx = build_constant_context(F2, 3)
    pd = prime_data(ctx, parse_poly(F2, 't^3+t+1'))
    # d = 3 = 0 mod 3: p splits completely, Frobenius trivial
    assert (pd.e, pd.f_res, pd.r) == (1, 1, 3)
    assert pd.frob_P == [(0,)]


def test_constant_context_inert_vs_split_f3():
    ctx = build_constant_context(F3, 2)
    pd = prime_data(ctx, Poly.t(F3))
    assert (pd.e, pd.f_res, pd.r) == (1, 2, 1)
    pd = prime_data(ctx, parse_poly(F3, 't^2+1'))
    assert (pd.e, pd.f_res, pd.r) == (1, 1, 2)


# -- cyclotomic contexts -----------------------------------------------

def test_cyclotomic_context_f2():
    f = parse_poly(F2, 't^2+t+1')
    ctx = build_cyclotomic_context(F2, f)
    assert ctx.group.order == 3
    assert ctx.degree == 3
    # frob at p = t is the class of t mod f (semantic oracle match)
    pd = prime_data(ctx, Poly.t(F2))
    assert (pd.e, pd.f_res, pd.r) == (1, 3, 1)
    want = exponent_of(ctx.group, ctx.unit_gens, F2, f, Poly.t(F2))
    assert pd.frob_P == [want]


def test_cyclotomic_context_frob_at_t_plus_1():
    f = parse_poly(F2, 't^2+t+1')
    ctx = build_cyclotomic_context(F2, f)
    pd = prime_data(ctx, parse_poly(F2, 't+1'))
    want = exponent_of(ctx.group, ctx.unit_gens, F2, f, parse_poly(F2, 't+1'))
    assert pd.frob_P == [want]


def test_cyclotomic_context_ramified_at_conductor():
    f = parse_poly(F2, 't^2+t+1')
    ctx = build_cyclotomic_context(F2, f)
    pd = prime_data(ctx, f)
    assert pd.e == 3 and pd.f_res == 1 and pd.r == 1
    assert sorted(pd.I_P) == sorted(ctx.group.elements())
    assert sorted(pd.frob_P) == sorted(ctx.group.elements())
    # Lemma: e divides |kappa_p^x| (tameness)
    assert (F2.order ** pd.d - 1) % pd.e == 0


def test_cyclotomic_context_f3_t():
    ctx = build_cyclotomic_context(F3, Poly.t(F3))
    assert ctx.group.orders == (2,)
    pd = prime_data(ctx, Poly.t(F3))
    assert pd.e == 2 and pd.r == 1 and pd.f_res == 1
    assert (3 - 1) % pd.e == 0
    pd = prime_data(ctx, parse_poly(F3, 't+1'))
    assert pd.e == 1
    want = exponent_of(ctx.group, ctx.unit_gens, F3, Poly.t(F3),
                       parse_poly(F3, 't+1'))
    assert pd.frob_P == [want]


# -- prime data invariants ---------------------------------------------

def all_contexts():
    return [
        build_constant_context(F2, 3),
        build_constant_context(F3, 2),
        build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1')),
        build_cyclotomic_context(F3, Poly.t(F3)),
    ]


@pytest.mark.parametrize('ctx_idx', range(4))
def test_frobenius_congruence_all_primes(ctx_idx):
    ctx = all_contexts()[ctx_idx]
    D = 3 if ctx.k.order == 2 else 2
    for p in primes_upto(ctx.k, D):
        pd = prime_data(ctx, p)
        assert pd.frobenius_congruence_ok()


@pytest.mark.parametrize('ctx_idx', range(4))
def test_qpow_is_algebra_endomorphism_commuting_with_G(ctx_idx):
    ctx = all_contexts()[ctx_idx]
    for p in primes_upto(ctx.k, 2):
        pd = prime_data(ctx, p)
        B = pd.B
        basis = B.elements_basis()
        for x in basis:
            for y in basis:
                assert pd.qpow(B.mul(x, y)) == B.mul(pd.qpow(x), pd.qpow(y))
                assert pd.qpow(B.add(x, y)) == B.add(pd.qpow(x), pd.qpow(y))
            for g in ctx.group.elements():
                assert pd.g_act(g, pd.qpow(x)) == pd.qpow(pd.g_act(g, x))


def test_normal_basis_unramified():
    ctx = build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))
    for p in (Poly.t(F2), parse_poly(F2, 't+1'), parse_poly(F2, 't^2+t+1')):
        pd = prime_data(ctx, p)
        gens = pd.find_normal_basis()
        if pd.e == 1:
            assert gens is not None


def test_choice_of_prime_above_p():
    ctx = build_constant_context(F2, 3)
    p = parse_poly(F2, 't^3+t+1')  # splits completely: r = 3
    data = [prime_data(ctx, p, choice=i) for i in range(3)]
    assert len({tuple(d.pi) for d in data}) == 3
    for d in data:
        assert (d.e, d.f_res, d.r) == (1, 1, 3)
        assert d.frob_P == [(0,)]


# -- descriptor files --------------------------------------------------

def test_context_descriptor_roundtrip(tmp_path):
    for ctx in (build_constant_context(F2, 3),
                build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))):
        path = str(tmp_path / ('ctx_%s.txt' % ctx.family))
        save_context(path, ctx)
        back = load_context(path)
        assert back.family == ctx.family
        assert back.group.orders == ctx.group.orders
        assert back.h_w == ctx.h_w
        assert back.action == ctx.action


def test_context_descriptor_action_mismatch(tmp_path):
    ctx = build_constant_context(F2, 3)
    path = str(tmp_path / 'ctx.txt')
    save_context(path, ctx)
    with open(path) as fh:
        text = fh.read()
    # corrupt one action line
    bad = text.replace('action: 1 :', 'action: 1 : t^9+', 1)
    with open(path, 'w') as fh:
        fh.write(bad)
    with pytest.raises(ValueError):
        load_context(path)
