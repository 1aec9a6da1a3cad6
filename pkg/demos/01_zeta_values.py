"""Special zeta values as Euler products over F_q[t].

The value zeta_A(n) = sum over monic a of 1/a(t)^n lives in the field of
Laurent series in 1/t.  It can be computed two independent ways: by
brute-force summation over monic polynomials, or as an Euler product of
local factors coming from the Carlitz module.  This script does both and
shows they agree coefficient by coefficient.
"""

from tmodl.ffield import Field
from tmodl.galois import build_constant_context
from tmodl.lvalue import euler_product, zeta_monic_sum_oracle
from tmodl.ring import render_laurent
from tmodl.tmodule import make_carlitz_power

N = 8

for q, n in [(2, 1), (2, 2), (3, 1)]:
    k = Field.prime(q)
    ctx = build_constant_context(k, 1)
    E = make_carlitz_power(k, n)

    ep = euler_product(E, ctx, 'equivariant', N)
    product = ep.value.coeffs[ctx.group.identity()]
    oracle = zeta_monic_sum_oracle(k, n, N)

    print('zeta over F_%d at n = %d, mod t^-%d' % (q, n, N))
    print('  Euler product: %s' % render_laurent(product))
    print('  monic sums:    %s' % render_laurent(oracle))
    print('  agree: %s' % product.approx_eq(oracle))
    print('  primes used: %d (degree <= %d)' % (len(ep.ledger), N))
    print()

# one local factor, unpacked: at p the factor is det-ratio lie/mod,
# and it always starts 1 + O(t^-deg p)
k = Field.prime(2)
ctx = build_constant_context(k, 1)
E = make_carlitz_power(k, 1)
ep = euler_product(E, ctx, 'equivariant', N)
entry = ep.ledger[2]
print('sample local factor at p = %s' % entry['prime'])
for key in ('lie_char', 'mod_char', 'ratio'):
    print('  %s: %s' % (key, entry[key]))
