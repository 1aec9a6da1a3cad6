"""The trace formula on the affine line, both sides by brute force.

A family of Frobenius operators tau_n on M = k[t]^m has an L-series:
the product over all monic irreducibles I of the reciprocal
characteristic series of the family acting on M/IM.  The formula says
this equals the characteristic series of the adjoint Cartier operators
on a small finite-dimensional nucleus of differentials.  Neither side
knows about the other: the left side enumerates primes, the right side
is a single determinant.
"""

import random

from tmodl.ffield import Field
from tmodl.gring import AbelianGroup, decompose
from tmodl.ring import Poly, parse_poly
from tmodl.trace import (
    TauSheafLine, cartier, find_nucleus, render_instance,
    verify_trace_formula, verify_trace_formula_equivariant,
)

k = Field.prime(2)

# the Cartier operator halves exponents of differentials: t^i dt
# survives only when 2 | i + 1
g = parse_poly(k, 't^5+t^3+t^2+1')
print('C(%s dt) = %s dt' % (g, cartier(g, 2)))
print()

# demo instance: tau_1 is the plain q-power map on k[t]
demo = TauSheafLine(k, k, 1, {1: [[Poly.one(k)]]})
nuc = find_nucleus(demo)
print('q-power demo: nucleus degree bound %d, dimension %d'
      % (nuc.bound, nuc.dim))
v = verify_trace_formula(demo, 6)
print('verdict: %s' % v.status)
print('  LHS (product over primes, deg <= 6): %s' % v.data['lhs'])
print('  RHS (nucleus determinant):           %s' % v.data['rhs'])
print()

# a random two-by-two family with operators at levels 1 and 2
rng = random.Random(41)


def rand_poly(maxdeg):
    return Poly(k, [k.from_int(rng.randrange(2)).val
                    for _ in range(maxdeg + 1)])


sh = TauSheafLine(k, k, 2, {n: [[rand_poly(2) for _ in range(2)]
                                for _ in range(2)] for n in (1, 2)})
nuc = find_nucleus(sh)
v = verify_trace_formula(sh, 5)
print('random m = 2 family: nucleus dimension %d, verdict %s'
      % (nuc.dim, v.status))
print('  both sides: %s' % v.data['lhs'])
print()

# equivariant version: operators carry Z/3 labels and the formula is
# checked character by character, then reassembled in the group ring
group = AbelianGroup((3,))
table = decompose(group, k)
sh = TauSheafLine(k, k, 1, {1: [[parse_poly(k, 't+1')]]},
                  gelts={1: (1,)}, group=group)
print('equivariant instance descriptor:')
print(render_instance(sh))
v = verify_trace_formula_equivariant(sh, table, 5)
print('equivariant verdict: %s' % v.status)
