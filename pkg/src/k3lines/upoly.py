"""Dense univariate polynomials over a FieldCtx.

A polynomial is a list of ints, constant term first, with no trailing zeros
(the zero polynomial is []).
"""
import random

import numpy as np

from . import gf3
from .errors import DivisionByZero, ExtensionExceeded, ZeroPolynomial


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p):
    return len(p) - 1


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = F.add(out[i], x)
    return trim(out)


def neg(F, a):
    return [F.NEG[x] for x in a]


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, c, a):
    if c == 0:
        return []
    mul = F.mul
    return [mul(c, x) for x in a]


def mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    fm, fa = F.mul, F.add
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = fa(out[i + j], fm(x, y))
    return trim(out)


def monic(F, a):
    if not a:
        return []
    return scale(F, F.inv(a[-1]), a)


def divmod_(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    ilc = F.inv(b[-1])
    if len(a) <= db:
        return [], trim(a)
    qt = [0] * (len(a) - db)
    fm, fs = F.mul, F.sub
    for d in range(len(a) - 1, db - 1, -1):
        c = a[d]
        if c:
            c = fm(c, ilc)
            qt[d - db] = c
            for i in range(db + 1):
                if b[i]:
                    a[d - db + i] = fs(a[d - db + i], fm(c, b[i]))
    return trim(qt), trim(a[:db])


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def exact_div(F, a, b):
    q, r = divmod_(F, a, b)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def gcd(F, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def gcd_many(F, polys):
    g = []
    for p in polys:
        g = gcd(F, g, p)
        if len(g) == 1:
            break
    return g


def deriv(F, a):
    return trim([F.scale(i, a[i]) for i in range(1, len(a))])


def evaluate(F, a, x):
    acc = 0
    fm, fa = F.mul, F.add
    for c in reversed(a):
        acc = fa(fm(acc, x), c)
    return acc


def veval(F, a, xs):
    """Horner evaluation of one polynomial at an array of points."""
    xs = np.asarray(xs)
    acc = np.zeros(xs.shape, dtype=np.int64)
    for c in reversed(a):
        acc = F.vadd(F.vmul(acc, xs), c)
    return acc


def embed(src, dst, a):
    if src.k == dst.k:
        return list(a)
    t = gf3.embedding_table(src.k, dst.k)
    return [t[x] for x in a]


def pullback(big, small, a):
    return [gf3.pullback(big, small, x) for x in a]


def powmod(F, a, e, m):
    result = [1]
    base = mod(F, a, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = mod(F, mul(F, base, base), m)
    return result


def frob_poly(F, a, r=1):
    return [F.frob(x, r) for x in a]


def from_roots(F, roots):
    out = [1]
    for r in roots:
        out = mul(F, out, [F.NEG[r], 1])
    return out


# resultants ---------------------------------------------------------------

def resultant(F, p, q, m=None, n=None):
    """Sylvester resultant of p, q read with formal degrees m, n."""
    p, q = trim(p), trim(q)
    m = deg(p) if m is None else m
    n = deg(q) if n is None else n
    if m < 0 or n < 0:
        return 0
    acc = 1
    sign_flip = False
    while True:
        if m == 0:
            c = p[0] if p else 0
            return _finish(F, acc, F.pow(c, n), sign_flip)
        if n == 0:
            c = q[0] if q else 0
            return _finish(F, acc, F.pow(c, m), sign_flip)
        dp, dq = deg(p), deg(q)
        if dp < m:
            if dq < n:
                return 0
            # expand along the first column
            f = F.mul(q[n], 1) if n % 2 == 0 else F.NEG[q[n]]
            acc = F.mul(acc, F.pow(f, m - max(dp, 0))) if dp >= 0 else 0
            if dp < 0:
                return 0
            m = dp
            continue
        if dq < n:
            if dq < 0:
                return 0
            acc = F.mul(acc, F.pow(p[m], n - dq))
            n = dq
            continue
        # both leading coefficients nonzero
        if m < n:
            p, q, m, n = q, p, n, m
            if (m * n) % 2:
                sign_flip = not sign_flip
        # Res_{m,n}(p,q) = (-1)^{mn} q_n^{m-dr} Res_{n,dr}(q,r)
        r = mod(F, p, q)
        if (m * n) % 2:
            sign_flip = not sign_flip
        if not r:
            return 0
        dr = deg(r)
        acc = F.mul(acc, F.pow(q[n], m - dr))
        p, q, m, n = q, r, n, dr


def _finish(F, acc, val, flip):
    v = F.mul(acc, val)
    return F.NEG[v] if flip else v


# interpolation ------------------------------------------------------------

def interpolate(F, xs, ys):
    """Newton interpolation; returns coefficients of degree < len(xs)."""
    n = len(xs)
    c = list(ys)
    fs, fd = F.sub, F.div
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            c[i] = fd(fs(c[i], c[i - 1]), fs(xs[i], xs[i - j]))
    out = [0] * n
    fm, fa = F.mul, F.add
    for j in range(n - 1, -1, -1):
        # out = out * (x - xs[j]) + c[j]
        nx = F.NEG[xs[j]]
        new = [0] * n
        for i in range(n - 1):
            if out[i]:
                new[i + 1] = fa(new[i + 1], out[i])
                new[i] = fa(new[i], fm(out[i], nx))
        new[0] = fa(new[0], c[j])
        out = new
    return trim(out)


def vinterpolate(F, xs, ys):
    """Newton interpolation along axis 0 of ys (shape (n, ...))."""
    xs = np.asarray(xs, dtype=np.int64)
    c = np.array(ys, dtype=np.int64, copy=True)
    n = len(xs)
    extra = (1,) * (c.ndim - 1)
    for j in range(1, n):
        den = F.vinv(F.vsub(xs[j:], xs[:-j])).reshape((-1,) + extra)
        c[j:] = F.vmul(F.vsub(c[j:], c[j - 1:-1]), den)
    out = np.zeros_like(c)
    for j in range(n - 1, -1, -1):
        nx = F.NEG[int(xs[j])]
        shifted = np.zeros_like(out)
        shifted[1:] = out[:-1]
        out = F.vadd(shifted, F.vmul(out, nx))
        out[0] = F.vadd(out[0], c[j])
    return out


# square-free parts and factoring -----------------------------------------

def cube_root_poly(F, a):
    """For a(x) = h(x^3) return the polynomial whose cube is a."""
    if any(a[i] for i in range(len(a)) if i % 3):
        raise ValueError("not a polynomial in x^3")
    return [F.frob_inv(a[i]) for i in range(0, len(a), 3)]


def radical(F, a):
    """Product of the distinct monic irreducible factors of a."""
    a = trim(a)
    if not a:
        raise ZeroPolynomial("radical of the zero polynomial")
    if len(a) == 1:
        return [1]
    d = deriv(F, a)
    if not d:
        return radical(F, cube_root_poly(F, a))
    g = gcd(F, a, d)
    w = monic(F, exact_div(F, a, g))
    while True:
        y = gcd(F, g, w)
        if len(y) == 1:
            break
        g = exact_div(F, g, y)
    if len(g) > 1:
        rest = radical(F, cube_root_poly(F, monic(F, g)))
        w = mul(F, w, rest)
    return monic(F, w)


def squarefree_decomposition(F, a):
    """List of (squarefree factor, multiplicity) with product a/lc(a)."""
    a = monic(F, trim(a))
    if not a:
        raise ZeroPolynomial("factoring the zero polynomial")
    out = {}

    def rec(f, mult):
        if len(f) == 1:
            return
        d = deriv(F, f)
        if not d:
            rec(cube_root_poly(F, f), mult * 3)
            return
        c = gcd(F, f, d)
        w = exact_div(F, f, c)
        i = 1
        while len(w) > 1:
            y = gcd(F, w, c)
            z = exact_div(F, w, y)
            if len(z) > 1:
                out[i * mult] = mul(F, out.get(i * mult, [1]), monic(F, z))
            i += 1
            w = y
            c = exact_div(F, c, y)
        if len(c) > 1:
            rec(cube_root_poly(F, monic(F, c)), mult * 3)

    rec(a, 1)
    return sorted(((monic(F, f), m) for m, f in out.items()), key=lambda t: t[1])


def _xpow_q(F, m, times):
    # x^(q^times) mod m by repeated Frobenius on coefficients
    r = mod(F, [0, 1], m)
    for _ in range(times * F.k):
        cubed = [0] * (3 * len(r))
        for i, c in enumerate(r):
            cubed[3 * i] = F.FROB[c]
        r = mod(F, trim(cubed), m)
    return r


def distinct_degree(F, f):
    out = []
    f = monic(F, f)
    h = [0, 1]
    d = 0
    while deg(f) >= 2 * (d + 1):
        d += 1
        # h <- h^q mod f
        cubed = h
        for _ in range(F.k):
            tmp = [0] * (3 * len(cubed))
            for i, c in enumerate(cubed):
                tmp[3 * i] = F.FROB[c]
            cubed = mod(F, trim(tmp), f)
        h = cubed
        g = gcd(F, f, sub(F, h, [0, 1]))
        if len(g) > 1:
            out.append((g, d))
            f = exact_div(F, f, g)
            h = mod(F, h, f)
    if len(f) > 1:
        out.append((f, deg(f)))
    return out


def equal_degree(F, f, d, rng):
    f = monic(F, f)
    n = deg(f)
    if n == d:
        return [f]
    e = (F.q ** d - 1) // 2
    while True:
        a = trim([rng.randrange(F.q) for _ in range(n)])
        if deg(a) < 1:
            continue
        b = sub(F, powmod(F, a, e, f), [1])
        g = gcd(F, f, b)
        if 0 < deg(g) < n:
            return (equal_degree(F, g, d, rng)
                    + equal_degree(F, exact_div(F, f, g), d, rng))


def factor(F, a, seed=0):
    """Complete factorisation: (lc, [(monic irreducible, multiplicity), ...])."""
    a = trim(a)
    if not a:
        raise ZeroPolynomial("factoring the zero polynomial")
    lc = a[-1]
    rng = random.Random(seed)
    res = []
    for sq, m in squarefree_decomposition(F, a):
        for g, d in distinct_degree(F, sq):
            for irr in equal_degree(F, g, d, rng):
                res.append((irr, m))
    res.sort(key=lambda t: (deg(t[0]), t[0][::-1], t[1]))
    return lc, res


# roots in extension fields ------------------------------------------------

def _field_chain(F, max_k):
    return [gf3.make_field(m) for m in range(F.k, max_k + 1, F.k)]


def roots(F, a, max_k=8, strict=True):
    """Distinct roots of a in extensions GF(3^m) with F.k | m <= max_k.

    Returns [(E, r)] where E is the smallest such field containing r. When
    strict and some irreducible factor has no root within the bound, raises
    ExtensionExceeded carrying the residual factor.
    """
    a = trim(a)
    if not a:
        raise ZeroPolynomial("roots of the zero polynomial")
    rad = radical(F, a)
    need = deg(rad)
    found = []
    groups = []
    if need <= 0:
        return [] if strict else ([], [1])
    for E in _field_chain(F, max_k):
        subs = [m for m in range(F.k, E.k, F.k) if E.k % m == 0]
        pe = embed(F, E, rad)
        xs = np.arange(E.q, dtype=np.int64)
        vals = veval(E, pe, xs)
        mask = vals == 0
        for m in subs:
            mask &= E.vfrob(xs, m) != xs
        new = xs[mask].tolist()
        if new:
            found.extend((E, r) for r in new)
            groups.append((E, new))
        if len(found) >= need:
            break
    if len(found) < need:
        prod = [1]
        for E, rs in groups:
            part = pullback(E, F, from_roots(E, rs))
            prod = mul(F, prod, part)
        residual = exact_div(F, rad, prod)
        if strict:
            raise ExtensionExceeded(
                "factor of degree %d has no roots in GF(3^m), m <= %d"
                % (deg(residual), max_k), residual=residual)
        return found, residual
    return found if strict else (found, [1])


def multiplicity(F, a, r):
    """Order of vanishing of a at r (a and r over the same field)."""
    a = trim(a)
    if not a:
        raise ZeroPolynomial("multiplicity in the zero polynomial")
    m = 0
    lin = [F.NEG[r], 1]
    while True:
        q, rem = divmod_(F, a, lin)
        if rem:
            return m
        m += 1
        a = q


def minpoly(E, r, F):
    """Minimal polynomial over F of r in E, returned over F."""
    conj = [r]
    x = E.frob(r, F.k)
    while x != r:
        conj.append(x)
        x = E.frob(x, F.k)
    return pullback(E, F, from_roots(E, conj))
