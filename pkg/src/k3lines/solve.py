"""Zero-dimensional polynomial systems, linear factors of ternary forms and
the splitting classifier for plane cubics."""
import itertools
from math import comb, lcm

import numpy as np

from . import gf3
from . import upoly as U
from .errors import ExtensionExceeded, PositiveDimensional, ZeroPolynomial
from .poly import MultiPoly, bf_from_poly, bf_roots, resultant_in

MAX_PAIRS = 8


def _min_solution(E, vals, base_k):
    d = base_k
    for v in vals:
        d = lcm(d, E.min_degree(v))
    if d == E.k:
        return E, tuple(vals)
    S = gf3.make_field(d)
    return S, tuple(gf3.pullback(E, S, v) for v in vals)


def _pairs(polys):
    idx = sorted(range(len(polys)), key=lambda i: polys[i].degree())
    out = []
    for a, b in itertools.combinations(idx, 2):
        out.append((polys[a], polys[b]))
    out.sort(key=lambda t: t[0].degree() * t[1].degree())
    return out[:MAX_PAIRS]


def _roots(F, g, max_k, residuals):
    if residuals is None:
        return U.roots(F, g, max_k)
    found, res = U.roots(F, g, max_k, strict=False)
    if U.deg(res) > 0:
        residuals.append((F, res))
    return found


def _solve(polys, unknowns, F, max_k, residuals=None):
    polys = [p for p in polys if not p.is_zero()]
    for p in polys:
        c = p.constant_value()
        if c is not None and c != 0:
            return []
    if not unknowns:
        return [(F, ())]
    v = unknowns[-1]
    with_v = [p for p in polys if p.uses(v)]
    without = [p.drop_vars([v]) for p in polys if not p.uses(v)]
    if len(unknowns) == 1:
        dense = [p.to_dense(v) for p in with_v]
        if not dense:
            raise PositiveDimensional("no equation constrains %s" % v)
        g = U.gcd_many(F, dense)
        if U.deg(g) <= 0:
            return []
        return [(E, (r,)) for E, r in _roots(F, g, max_k, residuals)]
    elim = list(without)
    for a, b in _pairs(with_v):
        r = resultant_in(a, b, v)
        if not r.is_zero():
            elim.append(r)
    if not elim:
        raise PositiveDimensional("elimination of %s left no equations" % v)
    partial = _solve(elim, unknowns[:-1], F, max_k, residuals)
    out = []
    rest = unknowns[:-1]
    for E, vals in partial:
        dense = []
        for p in with_v:
            q = p.embed(E)
            for name, val in zip(rest, vals):
                q = q.specialize(name, val)
            d = q.to_dense(v)
            if d:
                dense.append(d)
        if not dense:
            raise PositiveDimensional("fibre over a partial solution is a curve")
        g = U.gcd_many(E, dense)
        if U.deg(g) <= 0:
            continue
        for E2, r in _roots(E, g, max_k, residuals):
            out.append((E2, tuple(gf3.embed(E, E2, x) for x in vals) + (r,)))
    return out


def solve_affine(polys, unknowns=None, max_k=8, residuals=None):
    """Common zeros of polynomials over the algebraic closure (finite sets only).

    polys share ctx and vars; unknowns defaults to all vars. Returns sorted,
    deduplicated [(E, values)] with E the smallest field over ctx holding
    the point. Solutions beyond max_k raise ExtensionExceeded unless
    residuals is a list, which then collects the unsolved factors.
    """
    polys = list(polys)
    if not polys:
        raise PositiveDimensional("empty system")
    F = polys[0].ctx
    vars = polys[0].vars
    unknowns = tuple(unknowns or vars)
    if tuple(vars) != unknowns:
        polys = [p.with_vars(unknowns) for p in polys]
    sols = _solve(polys, unknowns, F, max_k, residuals)
    seen = set()
    out = []
    for E, vals in sols:
        S, v = _min_solution(E, vals, F.k)
        key = (S.k, v)
        if key not in seen:
            seen.add(key)
            out.append((S, v))
    out.sort(key=lambda t: (t[0].k, t[1]))
    return out


def solve_projective(forms, max_k=8, residuals=None):
    """Common zeros in projective space of homogeneous forms.

    Points are normalised with first nonzero coordinate 1.
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        raise PositiveDimensional("no equations")
    F = forms[0].ctx
    vars = forms[0].vars
    n = len(vars)
    out = []
    for i in range(n):
        chart = []
        for f in forms:
            g = f.specialize(vars[i], 1)
            for j in range(i):
                g = g.specialize(vars[j], 0)
            chart.append(g.drop_vars(vars[:i + 1]) if i + 1 <= n else g)
        rest = vars[i + 1:]
        if not rest:
            if all(c.is_zero() for c in chart):
                out.append((F, tuple([0] * i + [1])))
            continue
        for E, vals in solve_affine(chart, rest, max_k, residuals):
            out.append((E, tuple([0] * i + [1]) + vals))
    return out


# Taylor expansion at a point ---------------------------------------------

def _binom3(n, k):
    return comb(n, k) % 3


def hasse_forms(f, P):
    """[H_0, ..., H_d] with f(P + s D) = sum_j s^j H_j(D), H_j forms in f.vars."""
    F = f.ctx
    n = len(f.vars)
    d = f.degree()
    out = [dict() for _ in range(d + 1)]
    pw = [[F.pow(P[i], e) for e in range(d + 1)] for i in range(n)]
    for alpha, a in f.terms.items():
        for beta in itertools.product(*[range(x + 1) for x in alpha]):
            c = a
            for i in range(n):
                b = _binom3(alpha[i], beta[i])
                if b == 0:
                    c = 0
                    break
                c = F.mul(F.scale(b, c), pw[i][alpha[i] - beta[i]])
                if c == 0:
                    break
            if c:
                j = sum(beta)
                out[j][beta] = F.add(out[j].get(beta, 0), c)
    return [MultiPoly(F, f.vars, t) for t in out]


# linear factors of ternary forms -----------------------------------------

def _cross(F, p, q):
    return (F.sub(F.mul(p[1], q[2]), F.mul(p[2], q[1])),
            F.sub(F.mul(p[2], q[0]), F.mul(p[0], q[2])),
            F.sub(F.mul(p[0], q[1]), F.mul(p[1], q[0])))


def normalize_vec(F, v):
    for x in v:
        if x:
            inv = F.inv(x)
            return tuple(F.mul(inv, y) for y in v)
    raise ZeroPolynomial("zero vector")


def restrict_to_line(f, p, d):
    """Binary form f(s p + u d) as (deg, coeffs of s^i u^(deg-i))."""
    F = f.ctx
    n = f.degree()
    coeffs = [0] * (n + 1)
    # expand each monomial as a product of binary linear forms
    lin = [[d[i], p[i]] for i in range(len(p))]  # u-part first: c0 + c1 s
    cache = {}

    def lpow(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = [1] if k == 0 else _pmul(F, lpow(i, k - 1), lin[i])
        return cache[key]

    for e, c in f.terms.items():
        acc = [c]
        for i, k in enumerate(e):
            if k:
                acc = _pmul(F, acc, lpow(i, k))
        for i, x in enumerate(acc):
            coeffs[i] = F.add(coeffs[i], x)
    return n, coeffs


def _pmul(F, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def linear_form_poly(F, vars, coeffs):
    n = len(vars)
    return MultiPoly(F, vars, {tuple(int(j == i) for j in range(n)): c
                               for i, c in enumerate(coeffs) if c})


def exact_divide(p, q):
    """Quotient p/q for multivariate polynomials, or None if inexact."""
    F = p.ctx
    if q.is_zero():
        raise ZeroPolynomial("division by zero polynomial")
    key = lambda e: e  # lexicographic
    lt = max(q.terms, key=key)
    lc_inv = F.inv(q.terms[lt])
    r = p.copy()
    quo = {}
    while not r.is_zero():
        e = max(r.terms, key=key)
        if any(a < b for a, b in zip(e, lt)):
            return None
        c = F.mul(r.terms[e], lc_inv)
        m = tuple(a - b for a, b in zip(e, lt))
        quo[m] = F.add(quo.get(m, 0), c)
        r = r - MultiPoly(F, p.vars, {m: c}) * q
    return MultiPoly(F, p.vars, quo)


def linear_factors(C, max_k=8, residuals=None):
    """Linear factors of a ternary form over extensions of bounded degree.

    Returns [(E, coeffs, multiplicity)] with normalised coefficient triples,
    each in the smallest field over C.ctx containing it. Factors beyond
    max_k raise unless residuals is a list (then they are skipped).
    """
    F = C.ctx
    a, b, c = C.vars
    found = {}
    if C.is_zero():
        raise ZeroPolynomial("linear factors of zero")

    def multiplicity(E, L):
        P = C.embed(E)
        Lp = linear_form_poly(E, C.vars, L)
        m = 0
        while True:
            q = exact_divide(P, Lp)
            if q is None:
                return m
            m += 1
            P = q

    def record(E, L):
        L = normalize_vec(E, L)
        S, L = _min_solution(E, L, F.k)
        if (S.k, L) not in found:
            found[(S.k, L)] = (S, L)

    # strip the factor c first
    R = C
    cpoly = linear_form_poly(F, C.vars, (0, 0, 1))
    while R.specialize(c, 0).is_zero():
        record(F, (0, 0, 1))
        R = exact_divide(R, cpoly)
    if R.degree() > 0:
        zc = R.specialize(c, 0)
        bf = bf_from_poly(zc.drop_vars([c]), a, b, R.degree())
        for E, pt, _ in bf_roots(F, bf, max_k, residuals):
            p = (pt[0], pt[1], 0)
            Ce = R.embed(E)
            # second point d(w) = (0, w, 1) or (w, 0, 1)
            W = ("w",)
            wv = MultiPoly.var(E, W, "w")
            one = MultiPoly.const(E, W, 1)
            if p[0] != 0:
                dvec = (MultiPoly.const(E, W, 0), wv, one)
            else:
                dvec = (wv, MultiPoly.const(E, W, 0), one)
            pvec = tuple(MultiPoly.const(E, W, x) for x in p)
            coeffs = _restrict_symbolic(Ce, pvec, dvec, W)
            dense = [q.to_dense("w") for q in coeffs if not q.is_zero()]
            if not dense:
                continue  # the whole pencil through p lies on C: impossible for a form
            g = U.gcd_many(E, dense)
            if U.deg(g) <= 0:
                continue
            for E2, w in _roots(E, g, max_k, residuals):
                pp = tuple(gf3.embed(E, E2, x) for x in p)
                dd = (0, w, 1) if p[0] != 0 else (w, 0, 1)
                record(E2, _cross(E2, pp, dd))
    out = []
    for (k, L), (S, L2) in sorted(found.items()):
        out.append((S, L2, multiplicity(S, L2)))
    return out


def _restrict_symbolic(Ce, pvec, dvec, W):
    """Coefficients (in s^i u^j) of Ce(s p + u d) with p, d polynomial vectors."""
    E = Ce.ctx
    n = Ce.degree()
    # binary forms with polynomial coefficients: list index = power of s
    lin = [[dvec[i], pvec[i]] for i in range(3)]
    zero = MultiPoly(E, W, {})
    one = MultiPoly.const(E, W, 1)
    cache = {}

    def pmul(x, y):
        out = [zero] * (len(x) + len(y) - 1)
        for i, u in enumerate(x):
            if u.is_zero():
                continue
            for j, v in enumerate(y):
                if not v.is_zero():
                    out[i + j] = out[i + j] + u * v
        return out

    def lpow(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = [one] if k == 0 else pmul(lpow(i, k - 1), lin[i])
        return cache[key]

    total = [zero] * (n + 1)
    for e, c in Ce.terms.items():
        acc = [MultiPoly.const(E, W, c)]
        for i, k in enumerate(e):
            if k:
                acc = pmul(acc, lpow(i, k))
        for i, x in enumerate(acc):
            total[i] = total[i] + x
    return total


# plane cubics ------------------------------------------------------------

TAGS = (
    "smooth",
    "irreducible-nodal",
    "irreducible-cuspidal",
    "conic+line-transverse",
    "conic+tangent-line",
    "three-lines-triangle",
    "three-lines-concurrent",
    "double-line+line",
    "triple-line",
)


class CubicSplit:
    """Splitting type of a plane cubic with its line components.

    lines holds the components found explicitly as (E, coeffs, mult).
    groups holds Galois orbits of lines that live beyond the extension
    bound, as (F, form, size): form is the product of the orbit over F.
    """

    def __init__(self, tag, lines, singular_points, groups=()):
        self.tag = tag
        self.lines = lines
        self.singular_points = singular_points
        self.groups = list(groups)

    @property
    def reducible(self):
        return self.tag not in ("smooth", "irreducible-nodal", "irreducible-cuspidal")

    @property
    def line_count(self):
        return len(self.lines) + sum(n for _, _, n in self.groups)

    @property
    def three_lines(self):
        return self.tag in ("three-lines-triangle", "three-lines-concurrent",
                            "double-line+line", "triple-line")

    def __repr__(self):
        return "CubicSplit(%s, %d lines)" % (self.tag, self.line_count)


def _common_field(*ks):
    k = 1
    for x in ks:
        k = lcm(k, x)
    return gf3.make_field(k)


def _det3(F, rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    m = F.mul
    t1 = m(a, F.sub(m(e, i), m(f, h)))
    t2 = m(b, F.sub(m(d, i), m(f, g)))
    t3 = m(c, F.sub(m(d, h), m(e, g)))
    return F.add(F.sub(t1, t2), t3)


def cubic_singular_points(C, max_k=8, residuals=None):
    # the form itself is needed: Euler's relation degenerates in degree 3
    forms = [C] + [C.partial(v) for v in C.vars]
    return solve_projective(forms, max_k, residuals)


def _tangent_cone_is_double_line(C, E, P):
    H = hasse_forms(C.embed(E), P)
    Q = H[2]
    # directions modulo P: drop the coordinate where P is 1
    i0 = next(i for i, x in enumerate(P) if x)
    Q = Q.specialize(C.vars[i0], 0).drop_vars([C.vars[i0]])
    x, y = Q.vars
    a = Q.coeff((2, 0))
    b = Q.coeff((1, 1))
    c = Q.coeff((0, 2))
    disc = E.sub(E.mul(b, b), E.mul(E.from_int(4), E.mul(a, c)))
    return disc == 0


def _conic_matrix(F, Q):
    """Symmetric matrix of a ternary quadratic form (2 is invertible)."""
    half = F.inv(2)
    M = [[0] * 3 for _ in range(3)]
    for e, c in Q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = M[j][i] = F.mul(c, half)
    return M


def _rank(F, M):
    from .proj import rref
    return len(rref(F, M)[1])


def _on_line(F, L, P):
    return F.sum(F.mul(a, b) for a, b in zip(L, P)) == 0


def _lines_through_three(F, lf):
    E = _common_field(*[S.k for S, _, _ in lf])
    rows = [tuple(gf3.embed(S, E, x) for x in L) for S, L, _ in lf]
    return "three-lines-concurrent" if _det3(E, rows) == 0 else "three-lines-triangle"


def split_ternary_cubic(C, max_k=8):
    """Classify a plane cubic form by how it splits over the closure.

    Component lines are produced when they live in GF(3^m), m <= max_k;
    otherwise their Galois orbits are kept in CubicSplit.groups and the
    tag is decided by rank and incidence tests over the base field.
    """
    if C.degree() != 3 or not C.is_homogeneous():
        raise ValueError("not a ternary cubic form")
    F = C.ctx
    lf = linear_factors(C, F.k, residuals=[])
    total = sum(m for _, _, m in lf)
    if total == 3:
        if len(lf) == 1:
            return CubicSplit("triple-line", lf, [])
        if len(lf) == 2:
            return CubicSplit("double-line+line", lf, [])
        return CubicSplit(_lines_through_three(F, lf), lf, [])
    if total == 1:
        S, L, _ = lf[0]
        Lp = linear_form_poly(F, C.vars, L)
        Q = exact_divide(C, Lp)
        M = _conic_matrix(F, Q)
        if _rank(F, M) == 3:
            basis = _line_points(F, L)
            d, cs = restrict_to_line(Q, basis[0], basis[1])
            u2, su, s2 = cs[0], cs[1], cs[2]
            disc = F.sub(F.mul(su, su), F.mul(F.from_int(4), F.mul(s2, u2)))
            tag = "conic+tangent-line" if disc == 0 else "conic+line-transverse"
            return CubicSplit(tag, lf, [])
        # a pair of conjugate lines over the quadratic extension
        from .proj import nullspace
        vertex = nullspace(F, [tuple(r) for r in M], 3)[0]
        tag = "three-lines-concurrent" if _on_line(F, L, vertex) else "three-lines-triangle"
        res = []
        extra = linear_factors(Q, max_k, residuals=res)
        if res or len(extra) != 2:
            return CubicSplit(tag, lf, [], groups=[(F, Q, 2)])
        return CubicSplit(tag, lf + extra, [])
    if total != 0:
        raise ValueError("inconsistent factorisation")
    # irreducible over F: irreducible, or three conjugate lines
    res = []
    lf = linear_factors(C, max_k, residuals=res)
    if sum(m for _, _, m in lf) == 3:
        return CubicSplit(_lines_through_three(F, lf), lf, [])
    # a unique singular point is Galois-fixed, hence rational
    sing = cubic_singular_points(C, F.k, residuals=[])
    if sing:
        E, P = sing[0]
        if not any(hasse_forms(C, P)[2].terms.values()):
            return CubicSplit("three-lines-concurrent", [], sing, groups=[(F, C, 3)])
        cusp = _tangent_cone_is_double_line(C, E, P)
        return CubicSplit("irreducible-cuspidal" if cusp else "irreducible-nodal", [], sing)
    # smooth cubics have rational points (Hasse); a triangle of conjugate
    # lines has none, since a rational point would be a common vertex
    if res and not _has_rational_point(C):
        return CubicSplit("three-lines-triangle", [], [], groups=[(F, C, 3)])
    return CubicSplit("smooth", [], [])


def _has_rational_point(C):
    F = C.ctx
    ys = np.arange(F.q, dtype=np.int64)
    ones = np.ones(F.q, dtype=np.int64)
    zeros = np.zeros(F.q, dtype=np.int64)
    if not np.all(C.veval([ys, ones, zeros])) or C.evaluate((1, 0, 0)) == 0:
        return True
    for x in range(F.q):
        if not np.all(C.veval([np.full(F.q, x, dtype=np.int64), ys, ones])):
            return True
    return False


def _line_points(F, L):
    """Two points spanning the projective line {L = 0} in P^2."""
    i = next(j for j, x in enumerate(L) if x)
    pts = []
    for j in range(3):
        if j == i:
            continue
        v = [0, 0, 0]
        v[j] = 1
        v[i] = F.NEG[F.div(L[j], L[i])]
        pts.append(tuple(v))
    return pts


def is_smooth_cubic(C, max_k=8):
    return not cubic_singular_points(C, max_k)
