import pytest

from tmodl.ffield import Field
from tmodl.galois import (
    build_constant_context, build_cyclotomic_context, prime_data, primes_upto,
)
from tmodl.gring import decompose, rep_of_character
from tmodl.ring import Laurent, Poly, expand_rational, parse_poly
from tmodl.tmodule import (
    LocalFactor, TModule, UnsupportedContextError, act, expected_lie_char,
    expected_mod_char, frobenius_det_form, local_factor_equivariant,
    local_factor_rep, make_carlitz_power,
)

F2 = Field.prime(2)
F3 = Field.prime(3)


# -- construction ------------------------------------------------------

def test_make_carlitz_power_small():
    c1 = make_carlitz_power(F2, 1)
    assert c1.mats[0] == [[Poly.t(F2)]]
    assert c1.mats[1] == [[Poly.one(F2)]]
    c2 = make_carlitz_power(F2, 2)
    assert c2.mats[0] == [[Poly.t(F2), Poly.one(F2)],
                         [Poly.zero(F2), Poly.t(F2)]]
    assert c2.mats[1] == [[Poly.zero(F2), Poly.zero(F2)],
                         [Poly.one(F2), Poly.zero(F2)]]


def test_tmodule_validation():
    # A_0 without the nilpotency property is rejected
    with pytest.raises(ValueError):
        TModule(F2, [[[Poly.one(F2)]], [[Poly.one(F2)]]])
    # zero top coefficient rejected
    with pytest.raises(ValueError):
        TModule(F2, [[[Poly.t(F2)]], [[Poly.zero(F2)]]])


def test_nilpotency_is_sharp():
    for n in (2, 3):
        E = make_carlitz_power(F3, n)
        nil = [[E.mats[0][i][j] - (Poly.t(F3) if i == j else Poly.zero(F3))
                for j in range(n)] for i in range(n)]
        power = nil
        for _ in range(n - 2):
            power = [[sum((power[i][l] * nil[l][j] for l in range(n)),
                          Poly.zero(F3)) for j in range(n)] for i in range(n)]
        assert any(not c.is_zero() for row in power for c in row)


# -- module action -----------------------------------------------------

def test_act_identity_and_carlitz_example():
    ctx = build_constant_context(F2, 1)
    pd = prime_data(ctx, Poly.t(F2))
    E = make_carlitz_power(F2, 1)
    one = [pd.B.one()]
    assert act(E, pd, Poly.one(F2), one) == one
    # C(t)(1) = zbar*1 + 1^2 = 0 + 1 = 1 in F_2[t]/(t)
    assert act(E, pd, Poly.t(F2), one) == one


def test_act_is_ring_action():
    ctx = build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))
    pd = prime_data(ctx, parse_poly(F2, 't+1'))
    E = make_carlitz_power(F2, 2)
    import random
    rng = random.Random(3)
    raws = [e.val for e in pd.kappa.elements()]
    for _ in range(5):
        x = [tuple(rng.choice(raws) for _ in range(pd.B.dim))
             for _ in range(E.n)]
        a = Poly.from_ints(F2, [rng.randrange(2) for _ in range(3)])
        b = Poly.from_ints(F2, [rng.randrange(2) for _ in range(3)])
        lhs = act(E, pd, a * b, x)
        rhs = act(E, pd, a, act(E, pd, b, x))
        assert lhs == rhs
        s = act(E, pd, a + b, x)
        t1 = act(E, pd, a, x)
        t2 = act(E, pd, b, x)
        assert s == [pd.B.add(u, v) for u, v in zip(t1, t2)]


# -- equivariant local factors -----------------------------------------

def test_local_factor_trivial_group_carlitz():
    ctx = build_constant_context(F2, 1)
    p = parse_poly(F2, 't^2+t+1')
    pd = prime_data(ctx, p)
    E = make_carlitz_power(F2, 1)
    lf = local_factor_equivariant(E, pd, 8)
    ident = ctx.group.identity()
    assert lf.lie_char.coeffs[ident] == p
    assert lf.mod_char.coeffs[ident] == p - Poly.one(F2)
    want = expand_rational(p, p - Poly.one(F2), 8)
    assert lf.ratio.coeffs[ident].approx_eq(want)


def contexts_for_factors():
    return [
        build_constant_context(F2, 3),
        build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1')),
        build_cyclotomic_context(F3, Poly.t(F3)),
    ]


@pytest.mark.parametrize('ctx_idx', range(3))
@pytest.mark.parametrize('n', [1, 2])
def test_closed_forms_all_primes(ctx_idx, n):
    # Lie side is the scalar p^n; module side is p^n - (1/e) sum frob_P
    ctx = contexts_for_factors()[ctx_idx]
    E = make_carlitz_power(ctx.k, n)
    for p in primes_upto(ctx.k, 2):
        pd = prime_data(ctx, p)
        lf = local_factor_equivariant(E, pd, 6)
        assert lf.lie_char == expected_lie_char(pd, n)
        assert lf.mod_char == expected_mod_char(pd, n)


def test_closed_form_degree3_prime():
    ctx = build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))
    E = make_carlitz_power(F2, 3)
    pd = prime_data(ctx, parse_poly(F2, 't^3+t+1'))
    lf = local_factor_equivariant(E, pd, 6)
    assert lf.lie_char == expected_lie_char(pd, 3)
    assert lf.mod_char == expected_mod_char(pd, 3)


def test_choice_independence():
    ctx = build_constant_context(F2, 3)
    p = parse_poly(F2, 't^3+t+1')  # splits completely
    E = make_carlitz_power(F2, 1)
    factors = [local_factor_equivariant(E, prime_data(ctx, p, choice=i), 6)
               for i in range(3)]
    for lf in factors[1:]:
        assert lf.lie_char == factors[0].lie_char
        assert lf.mod_char == factors[0].mod_char


def test_unsupported_when_char_divides_group():
    ctx = build_constant_context(F2, 2)  # |G| = 2 = p
    pd = prime_data(ctx, Poly.t(F2))
    E = make_carlitz_power(F2, 1)
    with pytest.raises(UnsupportedContextError):
        local_factor_equivariant(E, pd, 6)


# -- representation-twisted local factors -------------------------------

def test_rep_trivial_reduces_to_plain_factor():
    ctx = build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))
    table = decompose(ctx.group, F2)
    F = table.splitting_field
    triv = rep_of_character(table, table.group.identity())
    E = make_carlitz_power(F2, 1)
    pd = prime_data(ctx, Poly.t(F2))
    lf = local_factor_rep(E, pd, triv, F, 'hom', 6)
    # trivial character component: charpoly of t on (B^n)^G
    eq = local_factor_equivariant(E, pd, 6)
    comp = table.apply(table.group.identity(), eq.mod_char,
                       Poly.zero(F))
    assert lf.mod_char == comp


@pytest.mark.parametrize('variant', ['hom', 'tensor'])
def test_rep_matches_character_component(variant):
    # applying chi to the equivariant determinant gives the chi-twisted one
    ctx = build_cyclotomic_context(F3, Poly.t(F3))
    table = decompose(ctx.group, F3)
    F = table.splitting_field
    E = make_carlitz_power(F3, 1)
    for p in (Poly.t(F3), parse_poly(F3, 't+1'), parse_poly(F3, 't+2')):
        pd = prime_data(ctx, p)
        eq = local_factor_equivariant(E, pd, 6)
        for j in table.indices:
            rho = rep_of_character(table, j)
            lf = local_factor_rep(E, pd, rho, F, variant, 6)
            comp = table.apply(j, eq.mod_char, Poly.zero(F))
            if variant == 'hom':
                assert lf.mod_char == comp
                assert lf.lie_char == table.apply(j, eq.lie_char, Poly.zero(F))


def test_hom_and_tensor_agree_unramified():
    ctx = build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))
    table = decompose(ctx.group, F2)
    F = table.splitting_field
    E = make_carlitz_power(F2, 2)
    pd = prime_data(ctx, parse_poly(F2, 't+1'))
    for j in table.indices:
        rho = rep_of_character(table, j)
        a = local_factor_rep(E, pd, rho, F, 'hom', 6)
        b = local_factor_rep(E, pd, rho, F, 'tensor', 6)
        assert a.lie_char == b.lie_char
        assert a.mod_char == b.mod_char


def test_ramified_nontrivial_character_gives_unit_factor():
    # chi nontrivial on inertia: V^{I_P} = 0, so the tensor factor is 1
    ctx = build_cyclotomic_context(F3, Poly.t(F3))
    table = decompose(ctx.group, F3)
    F = table.splitting_field
    E = make_carlitz_power(F3, 1)
    pd = prime_data(ctx, Poly.t(F3))  # totally ramified, I_P = G
    j = (1,)  # the nontrivial character of Z/2
    rho = rep_of_character(table, j)
    lf = local_factor_rep(E, pd, rho, F, 'tensor', 6)
    assert lf.lie_char == lf.mod_char
    assert lf.ratio.approx_eq(Laurent.one(F, 6))


@pytest.mark.parametrize('variant', ['hom', 'tensor'])
@pytest.mark.parametrize('n', [1, 2])
def test_frobenius_determinant_identities(variant, n):
    # Lemma: |C(B)| / |Lie(B)| twisted by rho equals
    # det(1 - rho(Frob_P)/p^n) on V_{I_P} (hom) or V^{I_P} (tensor)
    for ctx in (build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1')),
                build_cyclotomic_context(F3, Poly.t(F3))):
        table = decompose(ctx.group, ctx.k)
        F = table.splitting_field
        E = make_carlitz_power(ctx.k, n)
        for p in primes_upto(ctx.k, 2):
            pd = prime_data(ctx, p)
            for j in table.indices:
                rho = rep_of_character(table, j)
                lf = local_factor_rep(E, pd, rho, F, variant, 8)
                lhs = expand_rational(lf.mod_char, lf.lie_char, 8)
                rhs = frobenius_det_form(pd, rho, F, n, variant, 8)
                assert lhs.approx_eq(rhs)


def test_serialize_local_factor():
    ctx = build_cyclotomic_context(F2, parse_poly(F2, 't^2+t+1'))
    E = make_carlitz_power(F2, 1)
    pd = prime_data(ctx, Poly.t(F2))
    lf = local_factor_equivariant(E, pd, 6)
    d = lf.serialize()
    assert d['prime'] == 't'
    assert set(d) == {'prime', 'lie_char', 'mod_char', 'ratio'}
    assert isinstance(d['lie_char'], dict)
