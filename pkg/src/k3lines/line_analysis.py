"""Invariants of a single line on a quartic: the pencil of residual cubics.

A line l is moved to {x0 = x1 = 0}. Planes through it are x0 = t*x1, and
the residual cubic in that plane is g(t, x1, x2, x3) = f(t*x1, x1, x2, x3)/x1.
On l itself the cubic cuts out t*alpha + beta, two binary cubics in x2, x3.
"""
from collections import Counter
from math import lcm

from . import gf3
from . import upoly as U
from .errors import (DegreeZeroLine, ExtensionExceeded, IncompleteProfile,
                     InseparableLine, LineNotOnSurface, NormalizationImpossible,
                     PositiveDimensional, ZeroPolynomial)
from .poly import MultiPoly, bf_gcd, bf_roots, det_polys, resultant_in
from .proj import Line, ProjMap, ProjPoint, mat_vec, nullspace
from .solve import cubic_singular_points, split_ternary_cubic

INF = "inf"
GV = ("t", "x1", "x2", "x3")
QV = ("x0", "x1", "x2", "x3")

PHI_SLOTS = ((2, 0, 2, 0), (2, 0, 1, 1), (2, 0, 0, 2), (1, 1, 2, 0), (1, 1, 1, 1),
             (1, 1, 0, 2), (0, 2, 2, 0), (0, 2, 1, 1), (0, 2, 0, 2))


# charts --------------------------------------------------------------------

class NormalizedLineChart:
    """Coordinates y with x = M y in which the line is {y0 = y1 = 0}."""

    def __init__(self, X, line, ctx, M, form):
        self.X = X
        self.line = line
        self.ctx = ctx
        self.M = [tuple(r) for r in M]
        self.form = form
        self.T = ProjMap.from_inverse(ctx, self.M)

    def coeff(self, i0, i1, i2, i3):
        return self.form.coeff((i0, i1, i2, i3))

    def to_chart(self, P):
        return self.T.apply_point(P)

    def _lift(self, E):
        K = gf3.compositum(self.ctx, E)
        M = [tuple(gf3.embed(self.ctx, K, c) for c in r) for r in self.M]
        return K, M

    def point_back(self, E, y):
        """Original coordinates of the chart vector y over E."""
        K, M = self._lift(E)
        return ProjPoint(K, mat_vec(K, M, [gf3.embed(E, K, c) for c in y]))

    def line_back(self, E, rows):
        K, M = self._lift(E)
        return Line(K, [mat_vec(K, M, [gf3.embed(E, K, c) for c in r]) for r in rows])


def normalize_to_standard(X, l):
    E = X.field_for(l)
    a, b = l.lift(E)
    free = [i for i in range(4) if i not in l.pivots]
    cols = [tuple(int(j == free[0]) for j in range(4)),
            tuple(int(j == free[1]) for j in range(4)), a, b]
    M = [tuple(cols[c][r] for c in range(4)) for r in range(4)]
    f = X.over(E).linear_substitute(M)
    if any(e[0] == 0 and e[1] == 0 for e in f.terms):
        raise LineNotOnSurface("%s does not lie on the surface" % l.fmt())
    return NormalizedLineChart(X, l, E, M, f)


def _bf_of(ctx, f, slot):
    c = [0, 0, 0, 0]
    for e, v in f.terms.items():
        if e[0] + e[1] == 1 and e[slot] == 1:
            c[e[2]] = v
    return 3, c


def pencil_forms(chart):
    """(g, alpha, beta) with g in t, x1, x2, x3."""
    F = chart.ctx
    t = {}
    for (i0, i1, i2, i3), c in chart.form.terms.items():
        key = (i0, i0 + i1 - 1, i2, i3)
        t[key] = F.add(t.get(key, 0), c)
    g = MultiPoly(F, GV, t)
    return g, _bf_of(F, chart.form, 0), _bf_of(F, chart.form, 1)


def residual_at_infinity(chart):
    """The residual cubic in the plane y1 = 0, in (x0, x2, x3)."""
    F = chart.ctx
    t = {}
    for (i0, i1, i2, i3), c in chart.form.terms.items():
        if i1 == 0:
            t[(i0 - 1, i2, i3)] = c
    return MultiPoly(F, ("x0", "x2", "x3"), t)


# degree, separability, ramification ----------------------------------------

def _bf_div(F, f, g):
    d = f[0] - g[0]
    q = U.exact_div(F, U.trim(f[1]), U.trim(g[1]))
    return d, (list(q) + [0] * (d + 1))[:d + 1]


def _wronskian(F, a, b):
    """a b' - a' b for dense polynomials."""
    return U.trim(U.sub(F, U.mul(F, a, U.deriv(F, b)), U.mul(F, U.deriv(F, a), b)))


class DegreeInfo:
    def __init__(self, degree, separable, base_points, reduced, base_form, residuals):
        self.degree = degree
        self.separable = separable
        self.base_points = base_points
        self.reduced = reduced
        self.base_form = base_form
        self.residuals = residuals

    @property
    def base_multiplicity(self):
        return 3 - self.degree


def degree_and_separability(F, alpha, beta, max_k=8):
    """Degree of t = -beta/alpha on the line and whether it is separable.

    base_points are (E, (x2, x3), mult) roots of gcd(alpha, beta).
    """
    if not any(alpha[1]) and not any(beta[1]):
        raise ZeroPolynomial("alpha and beta both vanish")
    gcd = bf_gcd(F, [alpha, beta])
    d = 3 - gcd[0]
    res = []
    base = bf_roots(F, gcd, max_k, res) if gcd[0] else []
    a1, b1 = _bf_div(F, alpha, gcd), _bf_div(F, beta, gcd)
    sep = None
    if d > 0:
        sep = bool(_wronskian(F, a1[1], b1[1]))
    return DegreeInfo(d, sep, base, (a1, b1), gcd, res)


def _fiber_form(E, a1, b1, pt):
    """beta'(p) alpha' - alpha'(p) beta', the divisor of the fibre through p."""
    from .poly import bf_eval
    av, bv = bf_eval(E, a1, pt), bf_eval(E, b1, pt)
    return a1[0], [E.sub(E.mul(bv, x), E.mul(av, y)) for x, y in zip(a1[1], b1[1])]


def _ram_points(F, W, max_k):
    """(root or None, multiplicity) for the roots of W; None beyond max_k."""
    out = []
    if U.deg(W) <= 0:
        return out
    for fac, mult in U.squarefree_decomposition(F, W):
        found, res = U.roots(F, fac, max_k, strict=False)
        out.extend(((E, r), mult) for E, r in found)
        out.extend((None, mult) for _ in range(max(U.deg(res), 0)))
    return out


def ramification_profile(chart, info=None, max_k=8):
    """[(point or None, n, m)] for the ramified points of the line.

    m is the vanishing order of dt/du in a local coordinate u; n is the
    multiplicity of the point in its fibre. Points beyond the extension
    bound get n from m (n = 2 iff m = 1 since 2 is tame in characteristic 3).
    """
    F = chart.ctx
    if info is None:
        _, alpha, beta = pencil_forms(chart)
        info = degree_and_separability(F, alpha, beta, max_k)
    if info.degree < 1 or not info.separable:
        raise InseparableLine("ramification needs a separable line of positive degree")
    (d, a1), (_, b1) = info.reduced
    out = []
    # chart x3 = 1, coordinate u = x2
    for root, m in _ram_points(F, _wronskian(F, a1, b1), max_k):
        if root is None:
            out.append((None, 2 if m == 1 else 3, m))
            continue
        E, u = root
        pt = (u, 1)
        n = _mult_at(E, _fiber_form(E, (d, _emb(F, E, a1)), (d, _emb(F, E, b1)), pt), pt)
        out.append((chart.point_back(E, (0, 0, u, 1)), n, m))
    # the point [1:0] in the chart x2 = 1, coordinate v = x3
    ra, rb = a1[::-1], b1[::-1]
    W = _wronskian(F, ra, rb)
    m = 0
    while m < len(W) and W[m] == 0:
        m += 1
    if m:
        n = _mult_at(F, _fiber_form(F, (d, a1), (d, b1), (1, 0)), (1, 0))
        out.append((chart.point_back(F, (0, 0, 1, 0)), n, m))
    return out


def _emb(F, E, c):
    return [gf3.embed(F, E, x) for x in c]


def _mult_at(E, form, pt):
    from .poly import bf_multiplicity
    return bf_multiplicity(E, form, pt)


def profile_symbol(ram):
    """'2_1^4', '2_1 3_3', '3_4' style summary of a ramification list."""
    c = Counter((n, m) for _, n, m in ram)
    parts = []
    for (n, m), k in sorted(c.items()):
        parts.append("%d_%d" % (n, m) + ("^%d" % k if k > 1 else ""))
    return " ".join(parts)


# kind ------------------------------------------------------------------------

def hessian_on_line(g):
    """det of the second partials of g in x1, x2, x3, restricted to x1 = 0."""
    xs = ("x1", "x2", "x3")
    H = [[g.partial(a).partial(b) for b in xs] for a in xs]
    zero = MultiPoly(g.ctx, g.vars, {})
    one = MultiPoly.const(g.ctx, g.vars, 1)
    h = det_polys(H, zero, one)
    return h.specialize("x1", 0).drop_vars(["x1"])


def line_resultant(chart, pencil=None):
    """(h, R, kind): kind is 'second' iff R vanishes identically."""
    g, alpha, beta = pencil or pencil_forms(chart)
    F = chart.ctx
    info = degree_and_separability(F, alpha, beta)
    if info.degree == 0:
        raise DegreeZeroLine("the resultant is defined for lines of positive degree")
    h = hessian_on_line(g)
    p = g.specialize("x1", 0).drop_vars(["x1"])
    if h.is_zero():
        return h, MultiPoly(F, ("x2", "x3"), {}), "second"
    R = resultant_in(p, h, "t")
    return h, R, "second" if R.is_zero() else "first"


# cuspidal lines ----------------------------------------------------------------

class CuspidalResult:
    def __init__(self, phi, cuspidal, family_C, chart_form=None):
        self.phi = phi
        self.cuspidal = cuspidal
        self.family_C = family_C
        self.chart_form = chart_form


def cuspidal_test(chart, info=None):
    """Normalise so that alpha = x3^3 and beta = -x2^3, then read phi.

    Only inseparable lines of degree 3 can be cuspidal; anything else
    returns a negative result with phi = None.
    """
    F = chart.ctx
    _, alpha, beta = pencil_forms(chart)
    if info is None:
        info = degree_and_separability(F, alpha, beta)
    if info.degree != 3 or info.separable:
        return CuspidalResult(None, False, False)
    a, b = alpha[1], beta[1]
    if a[1] or a[2] or b[1] or b[2]:
        raise NormalizationImpossible("inseparable pencil with mixed terms")
    # alpha = (la2 x2 + la3 x3)^3 and beta = (lb2 x2 + lb3 x3)^3
    la = (F.frob_inv(a[3]), F.frob_inv(a[0]))
    lb = (F.frob_inv(b[3]), F.frob_inv(b[0]))
    # new y2 = L_beta, y3 = L_alpha
    A = [lb, la]
    det = F.sub(F.mul(A[0][0], A[1][1]), F.mul(A[0][1], A[1][0]))
    if det == 0:
        raise NormalizationImpossible("alpha and beta are proportional")
    inv = F.inv(det)
    Ai = [(F.mul(inv, A[1][1]), F.mul(inv, F.NEG[A[0][1]])),
          (F.mul(inv, F.NEG[A[1][0]]), F.mul(inv, A[0][0]))]
    # after the change alpha = x3^3 and beta = x2^3 (coefficients 1)
    S = [(1, 0, 0, 0), (0, F.NEG[1], 0, 0),
         (0, 0, Ai[0][0], Ai[0][1]), (0, 0, Ai[1][0], Ai[1][1])]
    fN = chart.form.linear_substitute(S)
    c1003, c0130 = fN.coeff((1, 0, 0, 3)), fN.coeff((0, 1, 3, 0))
    if c1003 == 0 or c0130 == 0:
        raise NormalizationImpossible("a1003 or a0130 vanishes after normalisation")
    if c1003 != 1 or c0130 != F.NEG[1]:
        raise NormalizationImpossible("unexpected normalisation constants")
    phi = [fN.coeff(e) for e in PHI_SLOTS]
    cusp = not any(phi)
    famC = all(c == 0 for e, c in fN.terms.items()
               if e[2] + e[3] in (2, 3) and e not in ((1, 0, 0, 3), (0, 1, 3, 0)))
    return CuspidalResult(phi, cusp, famC, fN)


# elliptic or quasi-elliptic ------------------------------------------------------

def quasi_elliptic_test(chart, pencil=None, info=None, cusp=None):
    """'elliptic' or 'quasi-elliptic'.

    The discriminant of the residual cubic is a polynomial in t of degree
    at most 12*deg_t(g). Either it vanishes identically or one of any
    12*deg_t(g) + 1 values of t gives a smooth fibre.
    """
    g, alpha, beta = pencil or pencil_forms(chart)
    F = chart.ctx
    if cusp is not None and cusp.cuspidal:
        return "quasi-elliptic"
    B = 12 * max(g.deg_in("t"), 1)
    E = gf3.extension_for(F, B + 1)
    if E is None:
        raise ExtensionExceeded("no field with %d sample parameters" % (B + 1))
    gE = g.embed(E)
    for t in range(B + 1):
        C = gE.specialize("t", t).drop_vars(["t"])
        if C.is_zero() or C.degree() != 3:
            continue
        if _is_smooth(C):
            return "elliptic"
    return "quasi-elliptic"


def _is_smooth(C):
    res = []
    try:
        if cubic_singular_points(C, C.ctx.k, residuals=res):
            return False
    except PositiveDimensional:
        return False
    if not res:
        return True
    return split_ternary_cubic(C, C.ctx.k).tag == "smooth"


# reducible fibres ------------------------------------------------------------------

class FiberRecord:
    def __init__(self, t, field, splitting, lines, groups, local_valency,
                 config_label=None, singular_points=()):
        self.t = t
        self.field = field
        self.splitting = splitting
        self.lines = lines
        self.groups = groups
        self.local_valency = local_valency
        self.config_label = config_label
        self.singular_points = list(singular_points)

    @property
    def three_lines(self):
        return self.splitting in ("three-lines-triangle", "three-lines-concurrent",
                                  "double-line+line", "triple-line")

    @property
    def one_fiber(self):
        return self.splitting in ("conic+line-transverse", "conic+tangent-line")

    def t_text(self):
        return INF if self.t == INF else self.field.fmt(self.t)

    def to_json(self):
        return {
            "t": self.t_text(),
            "field": "GF(3^%d)" % self.field.k,
            "splitting": self.splitting,
            "lines": [l.to_json() for l in self.lines],
            "conjugate_groups": [n for _, _, n in self.groups],
            "local_valency": self.local_valency,
            "config_label": self.config_label,
            "singular_points": [P.to_json() for P in self.singular_points],
        }

    def __repr__(self):
        return "FiberRecord(t=%s, %s, v=%d)" % (self.t_text(), self.splitting,
                                                self.local_valency)


def _ab_at(F, form, z):
    """form(1, z) for a binary form stored by powers of x2."""
    d, c = form
    return U.trim([c[d - j] for j in range(d + 1)])


def _direction_system(chart):
    """Hasse forms H2, H3, H4 of f at (0,0,1,z) in direction (b, -a, 0, mu)."""
    F = chart.ctx
    V = ("s", "z", "mu")
    _, alpha, beta = pencil_forms(chart)
    z = MultiPoly.var(F, V, "z")
    s = MultiPoly.var(F, V, "s")
    mu = MultiPoly.var(F, V, "mu")

    def at(form):
        d, c = form
        p = MultiPoly(F, V, {})
        for i, v in enumerate(c):
            if v:
                p = p + MultiPoly(F, V, {(0, d - i, 0): v})
        return p

    sub = {"x0": s * at(beta), "x1": -(s * at(alpha)),
           "x2": MultiPoly.const(F, V, 1), "x3": z + s * mu}
    W = QV + V
    f = chart.form.with_vars(W)
    sub = {k: v.with_vars(W) for k, v in sub.items()}
    full = f.substitute(sub).drop_vars(list(QV))
    parts = full.coeffs_in("s")
    return [parts[j].drop_vars(["s"]) for j in (2, 3, 4) if j in parts], alpha, beta


def fiber_eliminant(chart, max_k=8):
    """G(t): every plane x0 = t x1 with a line meeting l off the base
    locus and off [0:0:0:1] has G(t) = 0.

    Returns the dense polynomial G (possibly [1]).
    """
    F = chart.ctx
    Qs, alpha, beta = _direction_system(chart)
    Qs = [q for q in Qs if not q.is_zero()]
    if not Qs:
        raise PositiveDimensional("every point of the line has a line through it")
    res = []
    for i in range(len(Qs)):
        for j in range(i + 1, len(Qs)):
            r = resultant_in(Qs[i], Qs[j], "mu")
            if not r.is_zero():
                res.append(r.to_dense("z"))
    if len(Qs) == 1:
        q = Qs[0]
        if q.deg_in("mu") > 0:
            raise PositiveDimensional("a single condition on the direction")
        res.append(q.drop_vars(["mu"]).to_dense("z"))
    if not res:
        raise PositiveDimensional("direction conditions share a factor")
    P = U.gcd_many(F, res)
    a1 = _ab_at(F, alpha, None)
    b1 = _ab_at(F, beta, None)
    base = U.gcd(F, a1, b1) if (a1 and b1) else (a1 or b1)
    if U.deg(base) > 0:
        while U.deg(P) > 0:
            c = U.gcd(F, P, base)
            if U.deg(c) <= 0:
                break
            P = U.exact_div(F, P, c)
    if U.deg(P) <= 0:
        return [1]
    TZ = ("t", "z")
    Pz = MultiPoly.from_dense(F, TZ, "z", P)
    lin = MultiPoly.from_dense(F, TZ, "z", b1) + \
        MultiPoly.var(F, TZ, "t") * MultiPoly.from_dense(F, TZ, "z", a1)
    if lin.deg_in("z") == 0 and Pz.deg_in("z") == 0:
        return [1]
    G = resultant_in(Pz, lin, "z")
    if G.is_zero():
        raise PositiveDimensional("eliminant vanishes identically")
    return G.to_dense("t")


def _plane_parameter(E, y):
    """t with y0 = t y1 for a chart vector off l, or INF."""
    if y[1]:
        return E.div(y[0], y[1])
    return INF


def _candidates(chart, info, sing_chart, max_k, residuals):
    """Parameters of planes that may contain a line other than l."""
    F = chart.ctx
    _, alpha, beta = pencil_forms(chart)
    cands = set()
    cands.add((F.k, INF))
    G = fiber_eliminant(chart, max_k)
    if U.deg(G) > 0:
        found, res = U.roots(F, G, max_k, strict=False)
        if U.deg(res) > 0:
            residuals.append(("fibers", F, res))
        for E, r in found:
            cands.add((E.k, r))
    # the point [0:0:0:1] of l
    a0, b0 = alpha[1][0], beta[1][0]
    if a0:
        cands.add((F.k, F.div(F.NEG[b0], a0)))
    # lines through base points
    if info.base_points or info.residuals:
        from .surface import QuarticSurface, lines_through_point
        Y = QuarticSurface(chart.form)
        l0 = Line(F, [(0, 0, 1, 0), (0, 0, 0, 1)])
        for E, (x, y), _ in info.base_points:
            P = ProjPoint(E, (0, 0, x, y))
            lr = []
            for m in lines_through_point(Y, P, max_k, lr):
                if m == l0:
                    continue
                a, b = m.lift(m.ctx)
                y2 = a if (a[0] or a[1]) else b
                cands.add((m.ctx.k, _plane_parameter(m.ctx, y2)))
            residuals.extend(("base-point lines", E, r) for _, r in lr)
        residuals.extend(("base points", F, r) for _, r in info.residuals)
    # planes through singular points off l
    for P in sing_chart:
        c = P.coords
        if c[0] or c[1]:
            cands.add((P.ctx.k, _plane_parameter(P.ctx, c)))
    # for degree 0 the plane containing l twice
    if info.degree == 0:
        if any(alpha[1]):
            i = next(j for j, x in enumerate(alpha[1]) if x)
            cands.add((F.k, F.div(F.NEG[beta[1][i]], alpha[1][i])))
    out = set()
    for k, t in cands:
        E = gf3.make_field(k)
        K = gf3.make_field(lcm(k, F.k))
        if t == INF:
            out.add((F.k, INF))
            continue
        t = gf3.embed(E, K, t)
        m = lcm(K.min_degree(t), F.k)
        if m != K.k:
            t = gf3.pullback(K, gf3.make_field(m), t)
        out.add((m, t))
    return [(gf3.make_field(k), t) for k, t in
            sorted(out, key=lambda x: (x[1] == INF, x[0], 0 if x[1] == INF else x[1]))]


def _residual_cubic(chart, g, E, t):
    if t == INF:
        return residual_at_infinity(chart).embed(E)
    return g.embed(E).specialize("t", t).drop_vars(["t"])


def _plane_rows(E, t, L):
    """Chart vectors spanning the line {plane t, L = 0}."""
    basis = nullspace(E, [tuple(L)], 3)
    rows = []
    for v in basis:
        if t == INF:
            rows.append((v[0], 0, v[1], v[2]))
        else:
            rows.append((E.mul(t, v[0]), v[0], v[1], v[2]))
    return rows


def _fiber_record(chart, g, E, t, sing_on_l, sing_chart, max_k, qe3):
    C = _residual_cubic(chart, g, E, t)
    if C.is_zero():
        raise PositiveDimensional("a plane through the line lies on the surface")
    sp = split_ternary_cubic(C, max_k)
    lines, meet, mults = [], [], []
    for S, L, mult in sp.lines:
        if not (L[1] or L[2]):
            continue  # the line l itself
        Ek = gf3.compositum(S, E)
        Lk = [gf3.embed(S, Ek, x) for x in L]
        tk = t if t == INF else gf3.embed(E, Ek, t)
        rows = _plane_rows(Ek, tk, Lk)
        lines.append(chart.line_back(Ek, rows))
        meet.append(ProjPoint(Ek, (0, 0, Lk[2], Ek.NEG[Lk[1]])))
        mults.append(mult)
    v = sum(1 for P in meet if P not in sing_on_l)
    for S, form, n in sp.groups:
        r = form.specialize(form.vars[0], 0)
        hit = False
        for P in sing_on_l:
            K = gf3.compositum(S, P.ctx)
            if r.embed(K).evaluate((0,) + P.lift(K)[2:]) == 0:
                hit = True
        v += 0 if hit else n
    in_plane = [P for P in sing_chart if _in_plane(P, E, t)]
    label = None
    if qe3:
        label = _iv_label(chart, C, E, t, sp, sing_chart)
    elif sp.three_lines and not sp.groups:
        from .graph import classify_configuration
        pts = [chart.point_back(P.ctx, P.coords) for P in in_plane]
        label = classify_configuration([(chart.line, 1)] + list(zip(lines, mults)), pts)
    return FiberRecord(t, E, sp.tag, lines, sp.groups, v, label,
                       [chart.point_back(P.ctx, P.coords) for P in in_plane])


def _in_plane(P, E, t):
    c = P.coords
    if t == INF:
        return c[1] == 0
    K = gf3.compositum(P.ctx, E)
    tk = gf3.embed(E, K, t)
    c = P.lift(K)
    return c[0] == K.mul(tk, c[1])


def _to_chart_vec(E, t, w):
    """Chart vector of a point (w, x2, x3) of the plane with parameter t."""
    if t == INF:
        return (w[0], 0, w[1], w[2])
    return (E.mul(t, w[0]), w[0], w[1], w[2])


def _tangent_rank(chart, E, y):
    """Rank of the quadratic part of the surface at the chart point y."""
    from .proj import rref
    from .solve import hasse_forms
    Q = hasse_forms(chart.form.embed(E), y)[2]
    half = E.inv(2)
    M = [[0] * 4 for _ in range(4)]
    for e, c in Q.terms.items():
        i, j = [a for a, k in enumerate(e) for _ in range(k)]
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = M[j][i] = E.mul(c, half)
    return len(rref(E, M)[1])


def _iv_label(chart, C, E, t, sp, sing_chart):
    """Residual cubic labels for a quasi-elliptic line of degree 3.

    The surface singularity at the special point of the cubic is told
    apart by the rank of its tangent cone: 3 for A1, 2 for A_n (n > 1),
    at most 1 for D and E types.
    """
    tag = sp.tag
    if tag == "triple-line":
        return "IV*_1t"
    if tag == "double-line+line":
        from .solve import _cross
        (S1, a, _), (S2, b, _) = sp.lines
        K = gf3.compositum(S1, S2, E)
        p = _cross(K, [gf3.embed(S1, K, x) for x in a], [gf3.embed(S2, K, x) for x in b])
        tk = t if t == INF else gf3.embed(E, K, t)
        P = ProjPoint(K, _to_chart_vec(K, tk, p))
        return "IV*_2b" if P in set(sing_chart) else "IV*_2a"
    if tag not in ("irreducible-cuspidal", "conic+tangent-line", "three-lines-concurrent"):
        return None
    pts = cubic_singular_points(C, C.ctx.k, residuals=[])
    if not pts:
        return None
    K, w = pts[0]
    tk = t if t == INF else gf3.embed(E, K, t)
    y = _to_chart_vec(K, tk, w)
    if ProjPoint(K, y) not in set(sing_chart):
        return "IV_3" if tag == "three-lines-concurrent" else None
    r = _tangent_rank(chart, K, y)
    if tag == "irreducible-cuspidal":
        return {2: "IV_0"}.get(r, "IV*_0" if r <= 1 else None)
    if tag == "conic+tangent-line":
        return {3: "IV_1"}.get(r, "IV*_1" if r <= 1 else None)
    return "IV*_3"


def reducible_fibers(chart, info=None, sing_chart=None, max_k=8, qe3=False,
                     residuals=None, cuspidal=None):
    """FiberRecords for every plane through l whose residual cubic is reducible.

    If cuspidal is a list, irreducible cuspidal candidates that are not
    reported as fibers are appended to it. For an elliptic pencil this
    list is not guaranteed to be exhaustive.
    """
    F = chart.ctx
    g, alpha, beta = pencil_forms(chart)
    if info is None:
        info = degree_and_separability(F, alpha, beta, max_k)
    if sing_chart is None:
        sing_chart = [chart.to_chart(P) for P in chart.X.singular_points(max_k)]
    sing_on_l = {P for P in sing_chart if P.coords[0] == 0 and P.coords[1] == 0}
    residuals = [] if residuals is None else residuals
    cands = _candidates(chart, info, sing_chart, max_k, residuals)
    out, seen = [], set()
    for E, t in cands:
        key = (E.k, t)
        if key in seen:
            continue
        seen.add(key)
        rec = _fiber_record(chart, g, E, t, sing_on_l, sing_chart, max_k, qe3)
        if rec.splitting in ("smooth", "irreducible-nodal"):
            continue
        if rec.splitting == "irreducible-cuspidal" and (not qe3 or rec.config_label is None):
            if cuspidal is not None:
                cuspidal.append(rec)
            continue
        out.append(rec)
    order = lambda r: (r.t == INF, r.field.k, 0 if r.t == INF else r.t)
    out.sort(key=order)
    if cuspidal is not None:
        cuspidal.sort(key=order)
    return out


# the full profile ------------------------------------------------------------------

class LineProfile:
    def __init__(self, line):
        self.line = line
        self.degree = None
        self.singularity = 0
        self.base_multiplicity = 0
        self.separable = None
        self.kind = None
        self.ramification = []
        self.fibration = None
        self.cuspidal = False
        self.family_C = False
        self.phi = None
        self.fibers = []
        self.cuspidal_fibers = []
        self.valency = None
        self.valency_geometric = None
        self.complete = False
        self.fiberwise_complete = False
        self.residuals = []

    @property
    def pq(self):
        p = sum(1 for f in self.fibers if f.three_lines)
        q = sum(1 for f in self.fibers if f.one_fiber)
        return p, q

    @property
    def ramification_symbol(self):
        return profile_symbol(self.ramification) if self.ramification else None

    def to_json(self):
        p, q = self.pq
        return {
            "line": self.line.to_json(),
            "equations": self.line.fmt(),
            "degree": self.degree,
            "singularity": self.singularity,
            "base_multiplicity": self.base_multiplicity,
            "separable": self.separable,
            "kind": self.kind,
            "ramification": [{"point": None if P is None else P.to_json(), "n": n, "m": m}
                             for P, n, m in self.ramification],
            "ramification_symbol": self.ramification_symbol,
            "fibration": self.fibration,
            "cuspidal": self.cuspidal,
            "family_C": self.family_C,
            "pq": [p, q],
            "fibers": [f.to_json() for f in self.fibers],
            "cuspidal_fibers": [f.to_json() for f in self.cuspidal_fibers],
            "valency": {"fiberwise": self.valency, "geometric": self.valency_geometric,
                        "fiberwise_complete": self.fiberwise_complete,
                        "complete": self.complete},
        }


def geometric_valency(X, l, lines, max_k=8):
    """Lines other than l meeting l at smooth points of X."""
    from .graph import meet_point
    sing = set(X.singular_points(max_k))
    v = 0
    for m in lines:
        if m != l:
            meets, _, smooth = meet_point(l, m, sing)
            v += bool(meets and smooth)
    return v


def line_profile(X, l, known_lines=None, max_k=8):
    """Every invariant of the line l on X.

    The fiberwise valency is exact when no parameter or component was
    beyond GF(3^max_k); complete records that. If known_lines is given
    (and complete, e.g. a LineSet from lines_exact) the geometric valency
    is reported beside it.
    """
    chart = normalize_to_standard(X, l)
    F = chart.ctx
    pencil = pencil_forms(chart)
    g, alpha, beta = pencil
    info = degree_and_separability(F, alpha, beta, max_k)
    prof = LineProfile(l)
    prof.degree = info.degree
    prof.base_multiplicity = info.base_multiplicity
    sing = X.singular_points(max_k)
    sing_chart = [chart.to_chart(P) for P in sing]
    prof.singularity = sum(1 for P in sing_chart if P.coords[0] == 0 and P.coords[1] == 0)
    res = list(("base points", F, r) for _, r in info.residuals)
    if info.degree > 0:
        prof.separable = info.separable
        prof.kind = line_resultant(chart, pencil)[2]
        if info.separable:
            prof.ramification = ramification_profile(chart, info, max_k)
        if info.degree == 3 and not info.separable:
            c = cuspidal_test(chart, info)
            prof.cuspidal = c.cuspidal
            prof.family_C = c.family_C
            prof.phi = c.phi
        else:
            c = None
        prof.fibration = quasi_elliptic_test(chart, pencil, info, c)
    else:
        prof.fibration = quasi_elliptic_test(chart, pencil, info)
    qe3 = prof.fibration == "quasi-elliptic" and info.degree == 3
    fres = []
    prof.fibers = reducible_fibers(chart, info, sing_chart, max_k, qe3, fres,
                                   prof.cuspidal_fibers)
    res.extend(fres)
    prof.residuals = res
    prof.valency = sum(f.local_valency for f in prof.fibers)
    prof.complete = prof.fiberwise_complete = not res
    if known_lines is not None:
        prof.valency_geometric = geometric_valency(X, l, known_lines, max_k)
        if getattr(known_lines, "complete", True) is False:
            prof.complete = False
    return prof


# bounds ------------------------------------------------------------------------

_SEPARABLE_ELLIPTIC = {
    ("first", 3): 18, ("first", 2): 13, ("first", 1): 8,
    ("second", 3): 21, ("second", 2): 14,
}
_QUASI_ELLIPTIC = {2: 14, 1: 10, 0: 2}


def audit_bounds(prof):
    """[(name, bound, value, ok)] for every bound that applies to the line."""
    if not prof.fiberwise_complete:
        raise IncompleteProfile("valency is not certified for %s" % prof.line.fmt())
    v = prof.valency
    d = prof.degree
    p, q = prof.pq
    out = [("v <= d*p + q", d * p + q if d else None, v, None)]
    if d:
        out[0] = ("v <= d*p + q", d * p + q, v, v <= d * p + q)
    if d == 0:
        out.append(("degree 0", 2, v, v <= 2))
        return out
    if prof.kind == "first":
        out.append(("first kind: v <= 3 + 5d", 3 + 5 * d, v, v <= 3 + 5 * d))
    if prof.fibration == "elliptic":
        if prof.separable:
            b = _SEPARABLE_ELLIPTIC.get((prof.kind, d))
            if b is None and d == 1:
                b = 9 if prof.singularity >= 2 else 11
            out.append(("separable elliptic, %s kind, degree %d" % (prof.kind, d), b, v, v <= b))
        if d == 2:
            out.append(("elliptic degree 2", 14, v, v <= 14))
    else:
        if d == 3:
            b = 30 if prof.cuspidal else 21
            out.append(("quasi-elliptic degree 3" + (" cuspidal" if prof.cuspidal else ""),
                        b, v, v <= b))
        else:
            b = _QUASI_ELLIPTIC[d]
            out.append(("quasi-elliptic degree %d" % d, b, v, v <= b))
        out.append(("at most 10 reducible fibers", 10, p + q, p + q <= 10))
    if d == 3 and not prof.separable and not prof.cuspidal:
        out.append(("inseparable, not cuspidal", 12, v, v <= 12))
    return out
