"""Equivariant L-values in the group ring, and their specializations.

For a Galois extension with group G the L-value is a single element of
the group ring k[G][[1/t]].  Applying a character chi to it recovers the
chi-twisted L-value, and taking a determinant against a representation
recovers the Artin-style value.  Here L = F_8(t) over K = F_2(t), so
G = Z/3 and there are three characters.
"""

from tmodl.ffield import Field
from tmodl.galois import build_constant_context
from tmodl.gring import decompose, rep_of_character, twist_det
from tmodl.lvalue import euler_product, specialize_and_compare
from tmodl.ring import render_laurent
from tmodl.tmodule import make_carlitz_power

k = Field.prime(2)
ctx = build_constant_context(k, 3)
E = make_carlitz_power(k, 1)

Lg = euler_product(E, ctx, 'equivariant', 6)
print('L(E, G) as a group ring element, G = Z/3:')
for g, c in sorted(Lg.value.coeffs.items()):
    print('  coefficient of g = %s: %s' % (g, render_laurent(c)))
print()

table = decompose(ctx.group, k)
F = table.splitting_field
print('characters take values in %r' % F)
print()

for j in table.indices:
    rho = rep_of_character(table, j)
    twisted = twist_det(Lg.value, ctx.group, rho, F)
    direct = euler_product(E, ctx, 'hom', 6, rho=rho, field=F)
    verdict = specialize_and_compare(Lg, rho, F)
    print('character %s:' % (j,))
    print('  twist_det of L(E,G):  %s' % render_laurent(twisted))
    print('  direct Euler product: %s' % render_laurent(direct.value))
    print('  verdict: %s' % verdict.status)
    print()
