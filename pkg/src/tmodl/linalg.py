"""Dense exact linear algebra over a Field.

Matrices are lists of rows of FieldElem.  Everything here is elementary
Gaussian elimination at desk scale; charpoly uses the Hessenberg method so
it works over any field without division by integers.
"""

from __future__ import annotations

from .ffield import FieldElem
from .ring import Poly


def mat(field, rows_of_ints):
    return [[field.from_int(v) for v in row] for row in rows_of_ints]


def identity(field, n):
    z, o = field.zero(), field.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zeros(field, n, m):
    z = field.zero()
    return [[z for _ in range(m)] for _ in range(n)]


def mat_eq(a, b):
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def mat_add(field, a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(field, a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(field, a, c):
    return [[x * c for x in row] for row in a]


def mat_mul(field, a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    z = field.zero()
    bt = list(zip(*b))
    out = []
    for row in a:
        orow = []
        for col in bt:
            acc = z
            for x, y in zip(row, col):
                if not x.is_zero():
                    acc = acc + x * y
            orow.append(acc)
        out.append(orow)
    return out


def mat_vec(field, a, v):
    z = field.zero()
    out = []
    for row in a:
        acc = z
        for x, y in zip(row, v):
            if not x.is_zero():
                acc = acc + x * y
        out.append(acc)
    return out


def mat_pow(field, a, n):
    r = identity(field, len(a))
    b = a
    while n:
        if n & 1:
            r = mat_mul(field, r, b)
        b = mat_mul(field, b, b)
        n >>= 1
    return r


def map_entries(a, fn):
    return [[fn(x) for x in row] for row in a]


def rref(field, a):
    """Row-reduce in place (on a copy); returns (matrix, pivot columns)."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if not m[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(field, a):
    return len(rref(field, a)[1])


def kernel_basis(field, a):
    """Basis of the right kernel, as column vectors (lists)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m, pivots = rref(field, a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    z, o = field.zero(), field.one()
    for fc in free:
        v = [z] * cols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def solve(field, a, b):
    """One solution x of A x = b, or None if inconsistent."""
    rows = len(a)
    aug = [a[i][:] + [b[i]] for i in range(rows)]
    cols = len(a[0]) if rows else 0
    m, pivots = rref(field, aug)
    z = field.zero()
    for r in range(len(pivots)):
        if pivots[r] == cols:
            return None  # pivot in the constant column
    # also rows beyond pivots must be zero
    x = [z] * cols
    for r, pc in enumerate(pivots):
        if pc < cols:
            x[pc] = m[r][cols]
    # verify (guards inconsistent systems whose pivot landed early)
    for s, t in zip(mat_vec(field, a, x), b):
        if not (s - t).is_zero():
            return None
    return x


def inverse(field, a):
    n = len(a)
    aug = [a[i][:] + identity(field, n)[i] for i in range(n)]
    m, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ValueError('matrix is singular')
    return [row[n:] for row in m]


def det(field, a):
    n = len(a)
    m = [row[:] for row in a]
    acc = field.one()
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not m[i][c].is_zero():
                pr = i
                break
        if pr is None:
            return field.zero()
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            acc = -acc
        acc = acc * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return acc


def charpoly(field, a):
    """det(t*I - A) as a monic Poly, via the Hessenberg reduction."""
    n = len(a)
    if n == 0:
        return Poly.one(field)
    h = [row[:] for row in a]
    # reduce to upper Hessenberg form by similarity transforms
    for c in range(n - 2):
        pr = None
        for i in range(c + 1, n):
            if not h[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        if pr != c + 1:
            h[c + 1], h[pr] = h[pr], h[c + 1]
            for row in h:
                row[c + 1], row[pr] = row[pr], row[c + 1]
        inv = h[c + 1][c].inverse()
        for i in range(c + 2, n):
            if not h[i][c].is_zero():
                f = h[i][c] * inv
                h[i] = [x - f * y for x, y in zip(h[i], h[c + 1])]
                # matching column operation: col[c+1] += f * col[i]
                for row in h:
                    row[c + 1] = row[c + 1] + f * row[i]
    # charpoly of Hessenberg matrix by the standard recurrence
    polys = [Poly.one(field)]
    t = Poly.t(field)
    for i in range(n):
        p = (t - Poly.const(h[i][i])) * polys[i]
        prod = Poly.one(field)
        for j in range(i - 1, -1, -1):
            prod = prod * Poly.const(h[j + 1][j])
            p = p - Poly.const(h[j][i]) * prod * polys[j]
        polys.append(p)
    return polys[n]
