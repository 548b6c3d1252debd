"""Quartic surfaces: validation, singular points, line search."""
import numpy as np

from . import gf3
from . import upoly as U
from .errors import (ExtensionExceeded, NotASubfield, NotK3, NotOnSurface,
                     NotQuartic, PositiveDimensional)
from .poly import QUART_VARS, MultiPoly, bf_gcd, bf_roots, parse_poly
from .proj import PIVOT_PATTERNS, Line, ProjPoint, line_arrays, mat_vec
from .solve import hasse_forms, restrict_to_line, solve_projective


class QuarticSurface:
    """Zero set of a quartic form in x0..x3."""

    def __init__(self, form, name=None, params=None):
        self.form = form
        self.ctx = form.ctx
        self.name = name
        self.params = dict(params or {})
        self._lifted = {form.ctx.k: form}
        self._partials = {}
        self._sing = None
        self.certificate = None

    def over(self, E):
        """The form with coefficients pushed into E."""
        if E.k not in self._lifted:
            if E.k % self.ctx.k:
                raise NotASubfield("%r does not contain %r" % (E, self.ctx))
            self._lifted[E.k] = self.form.embed(E)
        return self._lifted[E.k]

    def partials(self, E=None):
        E = E or self.ctx
        if E.k not in self._partials:
            f = self.over(E)
            self._partials[E.k] = [f.partial(v) for v in f.vars]
        return self._partials[E.k]

    def field_for(self, obj):
        return gf3.compositum(self.ctx, obj.ctx)

    def contains_point(self, P):
        E = self.field_for(P)
        return self.over(E).evaluate(P.lift(E)) == 0

    def singular_points(self, max_k=8):
        if self._sing is None:
            self._sing = singular_points(self, max_k)
        return self._sing

    def is_singular_point(self, P):
        return P in set(self.singular_points())

    def fmt(self):
        return self.form.fmt()

    def __repr__(self):
        return "QuarticSurface(%s)" % (self.name or self.form.fmt())


def new_surface(form, ctx=None, name=None, params=None, max_k=8):
    """Validate a quartic and attach a K3 certificate."""
    if isinstance(form, str):
        if ctx is None:
            raise ValueError("a field is needed to parse a form")
        form = parse_poly(form, ctx)
    if form.vars != QUART_VARS:
        form = form.with_vars(QUART_VARS)
    if form.is_zero() or form.degree() != 4 or not form.is_homogeneous():
        raise NotQuartic("form is not a homogeneous quartic in x0..x3")
    X = QuarticSurface(form, name=name, params=params)
    try:
        sing = X.singular_points(max_k)
    except PositiveDimensional as e:
        raise NotK3("singular locus is not finite (%s)" % e) from None
    X.certificate = {
        "degree": 4,
        "finite_singular_locus": True,
        "singular_point_count": len(sing),
        "rdp_unverified": bool(sing),
    }
    return X


def singular_points(X, max_k=8):
    """Common zeros of the four partials, as sorted ProjPoints."""
    forms = X.partials()
    pts = solve_projective(forms, max_k)
    out = sorted({ProjPoint(E, p) for E, p in pts})
    for P in out:
        if not X.contains_point(P):
            raise NotOnSurface("singular point off the surface: %r" % P)
    return out


def is_smooth_point(X, P):
    if not X.contains_point(P):
        raise NotOnSurface("%r is not on the surface" % P)
    E = X.field_for(P)
    p = P.lift(E)
    return any(d.evaluate(p) for d in X.partials(E))


def contains_line(X, l):
    E = X.field_for(l)
    a, b = l.lift(E)
    _, cs = restrict_to_line(X.over(E), a, b)
    return not any(cs)


# brute force ----------------------------------------------------------------

def _eval_points(f, E, pts):
    return f.veval([pts[:, i] for i in range(4)])


def _bf_block(X, G, E, A, B):
    """Indices of lines (rows of A, B over G) that lie on X."""
    f = X.over(E)
    if E.k != G.k:
        A = gf3.vembed(G, E, A)
        B = gf3.vembed(G, E, B)
    # five points of P^1(E): (1,0), (0,1), (1,1), (1,-1), (1,c)
    c = next(x for x in range(E.q) if E.min_degree(x) == E.k) if E.q > 3 else 2
    coeffs = [(1, 0), (0, 1), (1, 1), (1, 2), (1, c)]
    alive = np.arange(len(A))
    for s, u in coeffs:
        if len(alive) == 0:
            break
        a, b = A[alive], B[alive]
        if u == 0:
            pts = a
        elif s == 0:
            pts = b
        else:
            pts = E.vadd(a, E.vmul(b, u))
        vals = _eval_points(f, E, pts)
        alive = alive[vals == 0]
    return alive


def _bf_chunk(args):
    form_txt, base_k, k, idx = args
    G = gf3.make_field(k)
    X = QuarticSurface(parse_poly(form_txt, gf3.make_field(base_k)))
    return _bf_run(X, G, [idx])


def _bf_run(X, G, which=None):
    E = G if G.q > 3 else gf3.make_field(2)
    out = []
    step = 1 << 20
    for piv, a, b in line_arrays(G, step):
        if which is not None and PIVOT_PATTERNS.index(piv) not in which:
            continue
        for j in _bf_block(X, G, E, a, b).tolist():
            out.append(Line(G, [tuple(a[j].tolist()), tuple(b[j].tolist())]))
    return out


def lines_bruteforce(X, k=None, jobs=1):
    """Every line defined over GF(3^k) lying on X, by exhaustive search."""
    k = X.ctx.k if k is None else k
    if k % X.ctx.k:
        raise NotASubfield("GF(3^%d) does not contain the base field" % k)
    G = gf3.make_field(k)
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        args = [(X.form.fmt(), X.ctx.k, k, i) for i in range(6)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_bf_chunk, args))
        res = [l for p in parts for l in p]
    else:
        res = _bf_run(X, G)
    return sorted(set(res))


# lines through a point --------------------------------------------------------

def _direction_line(E, p, D):
    return Line(E, [p, D])


def lines_through_point(X, P, max_k=8, residuals=None):
    """All lines on X through the point P (exact).

    If residuals is a list, directions outside the extension bound are
    recorded there instead of raising ExtensionExceeded.
    """
    E = X.field_for(P)
    p = P.lift(E)
    f = X.over(E)
    if f.evaluate(p):
        raise NotOnSurface("%r is not on the surface" % P)
    H = hasse_forms(f, p)
    i0 = next(i for i, x in enumerate(p) if x)
    dv = [v for i, v in enumerate(f.vars) if i != i0]
    Hs = [h.specialize(f.vars[i0], 0).drop_vars([f.vars[i0]]) for h in H]
    out = set()

    def full_dir(F2, d3):
        D = list(d3)
        D.insert(i0, 0)
        return tuple(D)

    if not Hs[1].is_zero():
        L = Hs[1]
        cvec = [L.coeff(tuple(int(j == i) for j in range(3))) for i in range(3)]
        w = next(i for i in range(3) if cvec[i])
        free = [i for i in range(3) if i != w]
        inv = E.inv(cvec[w])
        # d_w = -(c_a d_a + c_b d_b)/c_w
        lin = {}
        for i in free:
            lin[i] = E.NEG[E.mul(cvec[i], inv)]
        V3 = Hs[1].vars
        a, b = V3[free[0]], V3[free[1]]
        sub = {V3[w]: MultiPoly(E, V3, {
            tuple(int(j == free[0]) for j in range(3)): lin[free[0]],
            tuple(int(j == free[1]) for j in range(3)): lin[free[1]]})}
        forms = []
        for j in range(2, len(Hs)):
            q = Hs[j].substitute(sub).drop_vars([V3[w]])
            forms.append(_as_bf(q, a, b, j))
        if all(not any(c) for _, c in forms):
            raise PositiveDimensional("a plane through the point lies on the surface")
        g = bf_gcd(E, forms)
        if g[0] == 0:
            return []
        for E2, (x, y), _ in bf_roots(E, g, max_k, residuals):
            d3 = [0, 0, 0]
            d3[free[0]], d3[free[1]] = x, y
            d3[w] = E2.add(E2.mul(gf3.embed(E, E2, lin[free[0]]), x),
                           E2.mul(gf3.embed(E, E2, lin[free[1]]), y))
            pp = tuple(gf3.embed(E, E2, c) for c in p)
            out.add(_direction_line(E2, pp, full_dir(E2, d3)))
    else:
        forms = [h for h in Hs[2:] if not h.is_zero()]
        if not forms:
            raise PositiveDimensional("the surface is a cone over the point")
        try:
            sols = solve_projective(forms, max_k)
        except ExtensionExceeded as e:
            if residuals is None:
                raise
            residuals.append((E, e.residual))
            sols = []
        for E2, d3 in sols:
            pp = tuple(gf3.embed(E, E2, c) for c in p)
            out.add(_direction_line(E2, pp, full_dir(E2, d3)))
    return sorted(out)


def _as_bf(q, a, b, d):
    c = [0] * (d + 1)
    ia, ib = q.vars.index(a), q.vars.index(b)
    for e, v in q.terms.items():
        c[e[ia]] = v
    return d, c


def lines_exact(X, max_k=8, seed=0, strict=False):
    from .exact_lines import lines_exact as _impl
    return _impl(X, max_k=max_k, seed=seed, strict=strict)
