"""Artin L-values four ways in a cyclotomic context.

The conductor is f = t^2 + t + 1 over F_2, giving a tame Z/3 extension
with one ramified prime (f itself).  For each character the script
compares: the defining Frobenius Euler product, the tensor-side product,
the Hom-side product, and the exact per-prime determinant identities at
every prime including the ramified one.  The ratio of the defining and
Hom products is also certified to be an explicit rational function.
"""

from tmodl.ffield import Field
from tmodl.galois import build_cyclotomic_context
from tmodl.gring import decompose, rep_of_character
from tmodl.lvalue import artin_compare, regular_factorization
from tmodl.ring import parse_poly, render_laurent, render_poly

k = Field.prime(2)
f = parse_poly(k, 't^2+t+1')
ctx = build_cyclotomic_context(k, f)
table = decompose(ctx.group, k)
F = table.splitting_field

print('cyclotomic context, conductor %s, G of order %d'
      % (render_poly(f), ctx.group.order))
print()

for j in table.indices:
    rho = rep_of_character(table, j)
    b = artin_compare(1, ctx, rho, F, 6)
    print('character %s:' % (j,))
    print('  L by definition: %s' % render_laurent(b['frobenius'].value))
    print('  tensor product agrees: %s' % b['tensor_vs_def'].status)
    print('  Hom product agrees:    %s' % b['hom_vs_def'].status)
    print('  rationality witness:   %s' % b['witness'].status)
    bad = [p for p in b['per_prime'] if not p.ok]
    print('  per-prime determinant identities: %d checked, %d failed'
          % (len(b['per_prime']), len(bad)))
    print()

# the regular representation factors the full zeta value into the
# product of all character L-values
v = regular_factorization(1, ctx, 5)
print('regular representation factorization: %s' % v.status)
