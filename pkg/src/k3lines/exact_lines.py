"""Exact enumeration of all lines on a quartic surface.

Every line meets the plane H = {x0 = 0} in a point P of the curve X n H.
In the chart x1 = 1 write P = (0, 1, xi, eta) and let F(xi, eta) = f(P).
For a line through P the binary forms Q2, Q3, Q4 (Taylor terms of f along
tangent directions) share a root, so their pairwise resultants vanish at P.
Resultants in eta against F then give univariate polynomials N(xi) whose
common roots contain the xi-coordinate of every such point. Everything is
computed by evaluation on a grid in a large extension, then interpolated.
"""
import itertools
import random
from math import comb

import numpy as np

from . import gf3
from . import upoly as U
from .errors import ExtensionExceeded, PositiveDimensional
from .proj import Line, ProjMap, ProjPoint, mat_inv, mat_vec
from .surface import QuarticSurface, contains_line, lines_through_point

NX = 305  # > deg N <= 4 * 76
NY = 77   # > deg_y R34 <= 76
PAIRS = ((2, 3), (2, 4), (3, 4))


def _eval_field(K):
    for m in range(K.k, gf3.MAX_K + 1, K.k):
        if 3 ** m >= NX:
            return gf3.make_field(m)
    raise ExtensionExceeded("no evaluation field of size >= %d over %r" % (NX, K))


def _vdet(E, M, n):
    """Division-free determinant; M[r][c] is an array or None (zero)."""
    dp = {0: None}
    one = None
    for r in range(n):
        nxt = {}
        for mask, val in dp.items():
            for c in range(n):
                bit = 1 << c
                ent = M[r][c]
                if mask & bit or ent is None:
                    continue
                term = ent if val is None else E.vmul(val, ent)
                if bin(mask >> (c + 1)).count("1") % 2:
                    term = E.vneg(term)
                nm = mask | bit
                nxt[nm] = term if nm not in nxt else E.vadd(nxt[nm], term)
        dp = nxt
    full = (1 << n) - 1
    return dp.get(full)


def _sylvester(p, q, m, n):
    """Sylvester matrix of coefficient lists (index = power), entries arrays/None."""
    N = m + n
    M = [[None] * N for _ in range(N)]
    for i in range(n):
        for j in range(m + 1):
            M[i][i + j] = p[m - j]
    for i in range(m):
        for j in range(n + 1):
            M[n + i][i + j] = q[n - j]
    return M


def _binary_mul(E, a, b):
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x is None:
            continue
        for j, y in enumerate(b):
            if y is None:
                continue
            t = E.vmul(x, y)
            out[i + j] = t if out[i + j] is None else E.vadd(out[i + j], t)
    return out


def _hasse_coeffs(fE, xi, eta):
    """c_beta(P) at P = (0, 1, xi, eta) for beta with beta1 = 0, 1 <= |beta| <= 4."""
    E = fE.ctx
    pw_x = [np.ones_like(xi)]
    pw_y = [np.ones_like(eta)]
    for _ in range(4):
        pw_x.append(E.vmul(pw_x[-1], xi))
        pw_y.append(E.vmul(pw_y[-1], eta))
    out = {}
    for beta in itertools.product(range(5), repeat=3):
        b0, b2, b3 = beta
        if not 1 <= sum(beta) <= 4:
            continue
        acc = None
        for alpha, a in fE.terms.items():
            a0, a1, a2, a3 = alpha
            if a0 != b0 or a2 < b2 or a3 < b3:
                continue
            c = (comb(a2, b2) * comb(a3, b3)) % 3
            if not c:
                continue
            coef = E.scale(c, a)
            t = E.vmul(E.vmul(pw_x[a2 - b2], pw_y[a3 - b3]), coef)
            acc = t if acc is None else E.vadd(acc, t)
        if acc is not None:
            out[(b0, b2, b3)] = acc
    return out


def _resultant_grid(fE, xi, eta):
    """Values of the 9 resultants (3 bases x 3 pairs) on the grid."""
    E = fE.ctx
    c = _hasse_coeffs(fE, xi, eta)
    zero = np.zeros_like(xi)
    f0 = c.get((1, 0, 0), zero)
    f2 = c.get((0, 1, 0), zero)
    f3 = c.get((0, 0, 1), zero)
    nf0, nf2 = E.vneg(f0), E.vneg(f2)
    # tangent vectors in coordinates (x0, x2, x3)
    va = (f2, nf0, None)
    vb = (f3, None, nf0)
    vc = (None, f3, nf2)
    out = []
    for u, w in ((va, vb), (va, vc), (vb, vc)):
        # powers of the binary linear forms lambda*u_i + mu*w_i (index = power of lambda)
        lp = []
        for i in range(3):
            pows = [[np.ones_like(xi)]]
            for e in range(1, 5):
                pows.append(_binary_mul(E, pows[-1], [w[i], u[i]]))
            lp.append(pows)
        Q = {}
        for j in (2, 3, 4):
            acc = [None] * (j + 1)
            for beta, cb in c.items():
                if sum(beta) != j:
                    continue
                form = [cb]
                for i in range(3):
                    if beta[i]:
                        form = _binary_mul(E, form, lp[i][beta[i]])
                for t, x in enumerate(form):
                    if x is not None:
                        acc[t] = x if acc[t] is None else E.vadd(acc[t], x)
            Q[j] = acc
        for i, j in PAIRS:
            d = _vdet(E, _sylvester(Q[i], Q[j], i, j), i + j)
            out.append(zero if d is None else d)
    return out


def _n_polys(fE, K):
    """The univariate eliminants N(xi), pulled back to K."""
    E = fE.ctx
    xs = np.arange(NX, dtype=np.int64)
    ys = np.arange(NY, dtype=np.int64)
    XI, ETA = np.meshgrid(xs, ys, indexing="ij")
    vals = _resultant_grid(fE, XI, ETA)  # 9 arrays of shape (NX, NY)
    stack = np.stack(vals)  # (9, NX, NY)
    R = U.vinterpolate(E, ys, np.moveaxis(stack, 2, 0))  # (NY, 9, NX)
    # F(xi, y) = f(0, 1, xi, y), monic after scaling
    Fc = [np.zeros(NX, dtype=np.int64) for _ in range(5)]
    for (a0, a1, a2, a3), a in fE.terms.items():
        if a0:
            continue
        Fc[a3] = E.vadd(Fc[a3], E.vmul(E.vpow(xs, a2), a))
    lc = int(Fc[4][0])
    inv = E.inv(lc)
    Fm = [E.vmul(x, inv) for x in Fc[:4]]
    # reduce modulo F in y
    R = [R[d] for d in range(NY)]
    for d in range(NY - 1, 3, -1):
        top = R[d]
        if not np.any(top):
            continue
        for i in range(4):
            R[d - 4 + i] = E.vsub(R[d - 4 + i], E.vmul(top, Fm[i]))
    r = R[:4]
    # multiplication matrix by r in E[y]/F
    cols = [r]
    for _ in range(3):
        c0, c1, c2, c3 = cols[-1]
        cols.append([E.vneg(E.vmul(c3, Fm[0])),
                     E.vsub(c0, E.vmul(c3, Fm[1])),
                     E.vsub(c1, E.vmul(c3, Fm[2])),
                     E.vsub(c2, E.vmul(c3, Fm[3]))])
    M = [[cols[j][i] for j in range(4)] for i in range(4)]
    N = _vdet(E, M, 4)  # (9, NX)
    coeffs = U.vinterpolate(E, xs, N.T)  # (NX, 9)
    out = []
    for j in range(coeffs.shape[1]):
        col = U.trim(coeffs[:, j].tolist())
        out.append(U.pullback(E, K, col))
    return out


def _random_map(K, rng):
    while True:
        M = [tuple(rng.randrange(K.q) for _ in range(4)) for _ in range(4)]
        try:
            mat_inv(K, M)
            return M
        except Exception:
            continue


def _roots(F, p, max_k, residuals):
    found, res = U.roots(F, p, max_k, strict=False)
    if U.deg(res) > 0:
        residuals.append((F, res))
    return found


def _fiber_eliminant(fN, E1, xi, fy):
    """gcd of f(0, 1, xi, y) with the resultants specialised at xi."""
    G = _eval_field(E1)
    ys = np.arange(NY, dtype=np.int64)
    x = np.full(NY, gf3.embed(E1, G, xi), dtype=np.int64)
    vals = _resultant_grid(fN.embed(G), x, ys)
    out = fy
    for v in vals:
        if not np.any(v):
            continue
        c = U.trim(U.vinterpolate(G, ys, v).tolist())
        out = U.gcd(E1, out, U.pullback(G, E1, c))
        if U.deg(out) <= 0:
            break
    return out


class _PlaneHasLine(Exception):
    pass


def _candidate_points(fN, K, D, max_k, residuals):
    """Points of the curve f = x0 = 0 whose xi-coordinate is a root of D."""
    pts = []
    for E1, xi in _roots(K, D, max_k, residuals):
        fy = [0] * 5
        f1 = fN.embed(E1)
        for (a0, a1, a2, a3), a in f1.terms.items():
            if a0:
                continue
            fy[a3] = E1.add(fy[a3], E1.mul(a, E1.pow(xi, a2)))
        fy = U.trim(fy)
        if not fy:
            raise _PlaneHasLine()
        fy = _fiber_eliminant(fN, E1, xi, fy)
        if U.deg(fy) <= 0:
            continue
        for E2, eta in _roots(E1, fy, max_k, residuals):
            pts.append(ProjPoint(E2, (0, 1, gf3.embed(E1, E2, xi), eta)))
    # points with x0 = x1 = 0
    fy = [0] * 5
    for (a0, a1, a2, a3), a in fN.terms.items():
        if a0 == 0 and a1 == 0:
            fy[a3] = K.add(fy[a3], a)
    fy = U.trim(fy)
    if not fy:
        raise _PlaneHasLine()
    for E2, eta in _roots(K, fy, max_k, residuals):
        pts.append(ProjPoint(E2, (0, 0, 1, eta)))
    return pts


class LineSet(list):
    """Sorted lines plus a completeness record.

    complete is False when some eliminant factor has no roots in the
    allowed extensions; the list is then a certified lower bound and
    residuals holds those factors as (field, coefficients).
    """

    def __init__(self, lines, residuals=()):
        super().__init__(lines)
        self.residuals = list(residuals)
        self.complete = not self.residuals


def lines_exact(X, max_k=8, seed=0, tries=8, strict=False):
    """All lines on X defined over GF(3^m) with m <= max_k.

    With strict=True a root outside the bound raises ExtensionExceeded;
    otherwise the result is flagged incomplete.
    """
    rng = random.Random(seed)
    # after `tries` rational attempts move to extensions: over a small
    # field every rational plane may contain a line
    base = X.ctx
    plan = [base] * tries + [gf3.make_field(g * base.k) for g in (2, 2, 2, 4, 4, 4)
                             if g * base.k <= max_k]
    for attempt, K in enumerate(plan):
        E = _eval_field(K)
        M = ([tuple(int(i == j) for j in range(4)) for i in range(4)]
             if attempt == 0 else _random_map(K, rng))
        fN = X.over(K).linear_substitute(M)
        if fN.coeff((0, 0, 0, 4)) == 0:
            continue
        Ns = [n for n in _n_polys(fN.embed(E), K) if n]
        if not Ns:
            continue  # the plane x0 = 0 contains a line; move it
        D = U.gcd_many(K, Ns)
        XN = QuarticSurface(fN)
        residuals = []
        try:
            pts = _candidate_points(fN, K, D, max_k, residuals)
        except _PlaneHasLine:
            continue
        found = set()
        for P in pts:
            for l in lines_through_point(XN, P, max_k, residuals=residuals):
                found.add(l)
        if strict and residuals:
            F, r = residuals[0]
            raise ExtensionExceeded(
                "factor of degree %d over %r has no roots within GF(3^%d)"
                % (U.deg(r), F, max_k), residual=r)
        # points y of XN correspond to points M y of X
        back = ProjMap(K, M, mat_inv(K, M))
        out = set()
        for l in found:
            Ef = gf3.compositum(K, l.ctx)
            a, b = l.lift(Ef)
            Ml = back.lift(Ef)
            out.add(Line(Ef, [mat_vec(Ef, Ml.T, a), mat_vec(Ef, Ml.T, b)]))
        for l in out:
            if not contains_line(X, l):
                raise AssertionError("exact search produced a line off the surface")
        return LineSet(sorted(out), residuals)
    raise PositiveDimensional("no admissible coordinate change found")
