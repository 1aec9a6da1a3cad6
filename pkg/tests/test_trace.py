import random

import pytest

from tmodl.ffield import Field
from tmodl.gring import AbelianGroup, decompose
from tmodl.lvalue import Verdict
from tmodl.ring import Poly, parse_poly
from tmodl.trace import (
    TauSheafLine, USeries, adjoint_apply, cartier, character_twist,
    check_duality, find_nucleus, frobenius_twist, local_factor,
    nucleus_determinant, parse_instance, render_instance, useries_det,
    verify_trace_formula, verify_trace_formula_equivariant,
)

F2 = Field.prime(2)
F3 = Field.prime(3)


def sheaf(field, m, taus, **kw):
    return TauSheafLine(field, field, m, taus, **kw)


def rand_poly(rng, field, maxdeg):
    return Poly(field, [field.from_int(rng.randrange(field.p)).val
                        for _ in range(maxdeg + 1)])


def rand_sheaf(rng, field, m, levels, maxdeg, group=None):
    taus = {}
    gelts = {}
    for n in levels:
        taus[n] = [[rand_poly(rng, field, maxdeg) for _ in range(m)]
                   for _ in range(m)]
        if group is not None:
            gelts[n] = tuple(rng.randrange(o) for o in group.orders)
    return TauSheafLine(field, field, m, taus, gelts=gelts, group=group)


# -- series helper ------------------------------------------------------

def test_useries_arithmetic():
    a = USeries(F3, [F3.from_int(1).val, F3.from_int(2).val,
                     F3.from_int(1).val], 5)
    assert (a * a.inverse()) == USeries.one(F3, 5)
    assert (a + USeries.zero(F3, 5)) == a
    assert (a - a).is_zero()


def test_useries_det_triangular():
    one = USeries.one(F2, 4)
    u = USeries(F2, [F2.zero_raw(), F2.one_raw()], 4)
    mat = [[one + u, u], [USeries.zero(F2, 4), one]]
    assert useries_det(F2, mat, 4) == one + u


def test_useries_det_swap_consistency():
    one = USeries.one(F3, 3)
    u = USeries(F3, [F3.zero_raw(), F3.one_raw()], 3)
    mat = [[u, one], [one, u]]
    # det = u^2 - 1
    expect = u * u - one
    assert useries_det(F3, mat, 3) == expect


# -- Cartier operators --------------------------------------------------

def test_cartier_monomials():
    # q = 2: t^i dt -> t^((i+1)/2 - 1) dt when 2 | i+1
    assert cartier(Poly.t(F2, 3), 2) == Poly.t(F2, 1)
    assert cartier(Poly.t(F2, 2), 2).is_zero()
    assert cartier(Poly.one(F2), 2).is_zero()
    assert cartier(Poly.t(F2, 1), 2) == Poly.one(F2)
    # level 2: q^2 = 4
    assert cartier(Poly.t(F2, 3), 2, 2) == Poly.one(F2)
    assert cartier(Poly.t(F2, 7), 2, 2) == Poly.t(F2, 1)
    assert cartier(Poly.t(F2, 5), 2, 2).is_zero()


def test_cartier_semilinearity():
    rng = random.Random(7)
    for q, field, n in [(2, F2, 1), (2, F2, 2), (3, F3, 1)]:
        for _ in range(10):
            f = rand_poly(rng, field, 3)
            g = rand_poly(rng, field, 4)
            assert cartier(f ** (q ** n) * g, q, n) == f * cartier(g, q, n)


def test_frobenius_twist_is_power_map():
    f = parse_poly(F2, 't+1')
    assert frobenius_twist(f, 2) == f * f
    g = parse_poly(F3, 't^2+2*t+1')
    assert frobenius_twist(g, 3) == g * g * g


# -- families and adjoints ----------------------------------------------

def test_tau_semilinearity_spot_check():
    rng = random.Random(11)
    sh = rand_sheaf(rng, F2, 2, [1, 2], 2)
    f = parse_poly(F2, 't^2+t')
    for n in sh.taus:
        v = [rand_poly(rng, F2, 2), rand_poly(rng, F2, 2)]
        fv = [f * x for x in v]
        lhs = sh.apply(n, fv)
        rhs = [f ** (2 ** n) * x for x in sh.apply(n, v)]
        assert lhs == rhs


def test_adjoint_duality():
    rng = random.Random(3)
    for seed in range(5):
        sh = rand_sheaf(random.Random(seed), F2, 2, [1, 2], 2)
        assert check_duality(sh)
    assert check_duality(rand_sheaf(rng, F3, 2, [1], 2))


def test_adjoint_of_plain_q_power_is_cartier():
    sh = sheaf(F2, 1, {1: [[Poly.one(F2)]]})
    g = parse_poly(F2, 't^3+t^2+1')
    assert adjoint_apply(sh, 1, [g]) == [cartier(g, 2)]


def test_zero_tau_has_zero_adjoint():
    sh = sheaf(F2, 2, {1: [[Poly.one(F2), Poly.zero(F2)],
                           [Poly.zero(F2), Poly.one(F2)]],
                       2: [[Poly.zero(F2)] * 2, [Poly.zero(F2)] * 2]})
    assert 2 not in sh.taus  # zero operators are dropped
    g = [parse_poly(F2, 't^2'), parse_poly(F2, 't')]
    out = adjoint_apply(sh, 1, g)
    assert out == [cartier(g[0], 2), cartier(g[1], 2)]


# -- nuclei -------------------------------------------------------------

def test_nucleus_q_power_demo_is_span_dt():
    sh = sheaf(F2, 1, {1: [[Poly.one(F2)]]})
    nuc = find_nucleus(sh)
    assert nuc.bound == 0
    assert nuc.dim == 1


def test_nucleus_closure_and_det_stability():
    rng = random.Random(19)
    sh = rand_sheaf(rng, F2, 2, [1], 2)
    nuc = find_nucleus(sh)
    base = nucleus_determinant(sh, 5, nuc.bound)
    for extra in (1, 2, 3):
        assert nucleus_determinant(sh, 5, nuc.bound + extra) == base


# -- the trace formula --------------------------------------------------

def test_local_factor_q_power_demo():
    sh = sheaf(F2, 1, {1: [[Poly.one(F2)]]})
    for I in [parse_poly(F2, 't'), parse_poly(F2, 't^2+t+1'),
              parse_poly(F2, 't^3+t+1')]:
        d = I.degree
        # (1 - u^d)^-1 = 1 + u^d + u^2d + ...
        f = F2
        expect = USeries(f, [f.one_raw() if i % d == 0 else f.zero_raw()
                             for i in range(7)], 6)
        assert local_factor(sh, I, 6) == expect


def test_trace_formula_q_power_demo():
    sh = sheaf(F2, 1, {1: [[Poly.one(F2)]]})
    v = verify_trace_formula(sh, 6)
    assert v.ok, v.detail
    # zeta of the affine line reduces to 1 mod 2
    assert v.data['lhs'] == '1'
    assert v.data['rhs'] == '1'
    assert v.data['nucleus_bound'] == 0


def test_trace_formula_nilpotent_family():
    sh = sheaf(F2, 2, {1: [[Poly.zero(F2), Poly.one(F2)],
                           [Poly.zero(F2), Poly.zero(F2)]]})
    v = verify_trace_formula(sh, 5)
    assert v.ok, v.detail
    assert v.data['lhs'] == '1'
    assert v.data['rhs'] == '1'


def test_trace_formula_empty_family():
    sh = sheaf(F2, 1, {})
    v = verify_trace_formula(sh, 4)
    assert v.ok
    assert v.data['lhs'] == '1'


@pytest.mark.parametrize('seed', range(8))
def test_trace_formula_random_instances(seed):
    rng = random.Random(100 + seed)
    m = rng.choice([1, 2])
    levels = [1] if rng.random() < 0.5 else [1, 2]
    sh = rand_sheaf(rng, F2, m, levels, rng.choice([1, 2]))
    v = verify_trace_formula(sh, 5)
    assert v.ok, (seed, v.detail, v.data)


def test_trace_formula_random_f3():
    sh = rand_sheaf(random.Random(5), F3, 2, [1], 2)
    v = verify_trace_formula(sh, 4)
    assert v.ok, v.detail


def test_trace_formula_fail_reports_first_difference(monkeypatch):
    import tmodl.trace as tr
    sh = sheaf(F2, 1, {1: [[parse_poly(F2, 't+1')]]})
    real = tr.euler_side

    def skewed(s, N):
        out = real(s, N)
        out.coeffs[2] = s.field.add_raw(out.coeffs[2], s.field.one_raw())
        return out
    monkeypatch.setattr(tr, 'euler_side', skewed)
    v = tr.verify_trace_formula(sh, 5)
    assert v.status == Verdict.FAIL
    assert v.first_difference == 2


# -- equivariant reduction ----------------------------------------------

def test_character_twist_trivial_group_is_identity():
    sh = sheaf(F2, 1, {1: [[parse_poly(F2, 't')]]})
    table = decompose(AbelianGroup(()), F2)
    tw = character_twist(sh, table, table.group.identity())
    assert tw.taus[1][0][0] == sh.taus[1][0][0]


def test_equivariant_trace_formula_z3():
    group = AbelianGroup((3,))
    table = decompose(group, F2)
    for seed in range(4):
        rng = random.Random(200 + seed)
        sh = rand_sheaf(rng, F2, 2, [1, 2], 2, group=group)
        v = verify_trace_formula_equivariant(sh, table, 5)
        assert v.ok, (seed, v.detail)


def test_equivariant_reassembly_matches_plain_when_labels_trivial():
    group = AbelianGroup((3,))
    table = decompose(group, F2)
    sh = TauSheafLine(F2, F2, 1, {1: [[parse_poly(F2, 't+1')]]},
                      gelts={1: group.identity()}, group=group)
    v = verify_trace_formula_equivariant(sh, table, 5)
    assert v.ok
    plain = verify_trace_formula(sheaf(F2, 1, {1: [[parse_poly(F2, 't+1')]]}),
                                 5)
    ident = group.identity()
    lhs_g = v.data['lhs']
    got = lhs_g.coeffs.get(ident, Poly.zero(F2))
    assert got == parse_poly(F2, plain.data['lhs'].replace('u', 't'))
    for g, c in lhs_g.coeffs.items():
        if g != ident:
            assert c.is_zero()


# -- descriptors --------------------------------------------------------

def test_instance_descriptor_roundtrip():
    group = AbelianGroup((3,))
    sh = TauSheafLine(F2, F2, 2,
                      {1: [[parse_poly(F2, 't+1'), Poly.zero(F2)],
                           [Poly.one(F2), Poly.t(F2)]],
                       2: [[Poly.t(F2, 2), Poly.one(F2)],
                           [Poly.zero(F2), Poly.one(F2)]]},
                      gelts={1: (1,), 2: (0,)}, group=group)
    text = render_instance(sh)
    back = parse_instance(text)
    assert back.m == sh.m
    assert back.q == sh.q
    assert back.taus == sh.taus
    assert back.gelts.get(1) == (1,)
    assert back.group.orders == (3,)
    assert render_instance(back) == text


def test_instance_descriptor_rejects_garbage():
    with pytest.raises(ValueError):
        parse_instance('not a descriptor')
    with pytest.raises(ValueError):
        parse_instance('trace instance\ntau 1: 1')  # p, m missing


def test_bad_family_shapes_rejected():
    with pytest.raises(ValueError):
        sheaf(F2, 2, {1: [[Poly.one(F2)]]})
    with pytest.raises(ValueError):
        sheaf(F2, 1, {0: [[Poly.one(F2)]]})
