"""The line graph: lines as vertices, edges for meetings at smooth points."""
from itertools import combinations

from . import gf3
from .errors import ExtensionExceeded, IncompleteProfiles, LineNotOnSurface
from .poly import MultiPoly
from .proj import Line, ProjPoint, lines_meet, mat_vec, nullspace, rref
from .solve import linear_factors
from .surface import contains_line, lines_through_point

NOT_REDUCIBLE = "not-completely-reducible"
UNLABELLED = "other"


class LineGraph:
    def __init__(self, vertices):
        self.vertices = list(vertices)
        self.adj = [set() for _ in self.vertices]
        self.meet_points = {}

    def degree(self, i):
        return len(self.adj[i])

    def degree_sequence(self):
        return sorted((len(a) for a in self.adj), reverse=True)

    def edges(self):
        return [(i, j) for i in range(len(self.adj)) for j in sorted(self.adj[i]) if i < j]


def meet_point(l1, l2, sing):
    """(meets, point, smooth) for two distinct lines.

    point is None when the lines meet at a smooth point whose coordinates
    lie beyond GF(3^8). Singular points are all known, so they are found
    by testing incidence instead.
    """
    try:
        P = lines_meet(l1, l2)
    except ExtensionExceeded:
        on = [Q for Q in sing if l1.contains_point(Q) and l2.contains_point(Q)]
        if on:
            return True, on[0], False
        return True, None, True
    if P is None:
        return False, None, None
    return True, P, P not in sing


def build_graph(X, lines, max_k=8):
    lines = list(lines)
    for l in lines:
        if not contains_line(X, l):
            raise LineNotOnSurface("%s is not on the surface" % l.fmt())
    sing = set(X.singular_points(max_k))
    G = LineGraph(lines)
    for i, j in combinations(range(len(lines)), 2):
        meets, P, smooth = meet_point(lines[i], lines[j], sing)
        if not meets:
            continue
        G.meet_points[(i, j)] = (P, smooth)
        if smooth:
            G.adj[i].add(j)
            G.adj[j].add(i)
    return G


def _coplanar(lines):
    E = gf3.compositum(*[l.ctx for l in lines])
    rows = [r for l in lines for r in l.lift(E)]
    return len(rref(E, rows)[1]) == 3


def find_triangles_stars(G, X=None):
    """(triangles, stars, triangle_free) as index tuples.

    A star is four lines through one smooth point; they necessarily lie in
    the tangent plane there.
    """
    tri = []
    for i in range(len(G.vertices)):
        for j in G.adj[i]:
            if j <= i:
                continue
            for k in G.adj[i] & G.adj[j]:
                if k > j:
                    if not _coplanar([G.vertices[i], G.vertices[j], G.vertices[k]]):
                        raise AssertionError("triangle of lines that is not coplanar")
                    tri.append((i, j, k))
    through = {}
    for (i, j), (P, smooth) in G.meet_points.items():
        if smooth and P is not None:
            through.setdefault(P, set()).update((i, j))
    stars = []
    for P, idx in sorted(through.items()):
        if len(idx) >= 4:
            for quad in combinations(sorted(idx), 4):
                stars.append((P, quad))
    return tri, stars, not tri


def plane_of(lines):
    """Coefficients of the plane spanned by coplanar lines."""
    E = gf3.compositum(*[l.ctx for l in lines])
    rows = [r for l in lines for r in l.lift(E)]
    ns = nullspace(E, rows, 4)
    if len(ns) != 1:
        raise ValueError("lines are not coplanar or all equal")
    return E, ns[0]


def classify_configuration(lines, sing):
    """Configuration label (A, B, C0, D0, E0) of four lines in a plane.

    lines: [(Line, multiplicity)] with multiplicities summing to 4.
    sing: singular points of the surface lying in the plane.
    """
    if sum(m for _, m in lines) != 4:
        return NOT_REDUCIBLE
    sing = set(sing)
    ls = [l for l, _ in lines]
    if len(ls) == 4:
        pts = {}
        for i, j in combinations(range(4), 2):
            pts.setdefault(lines_meet(ls[i], ls[j]), set()).update((i, j))
        if len(pts) == 1:
            P = next(iter(pts))
            return "C0" if P not in sing else UNLABELLED
        triple = [P for P, s in pts.items() if len(s) == 3]
        if triple:
            if triple[0] in sing:
                return UNLABELLED
            n = sum(1 for P in pts if P in sing)
            return "B%d" % n
        bad = [P for P in pts if P in sing]
        if len(bad) > 3:
            return UNLABELLED
        for i in range(4):
            if all(i in pts[P] for P in bad):
                return "A%d" % len(bad)
        return UNLABELLED
    if len(ls) == 3:
        dbl = [l for l, m in lines if m == 2][0]
        a, b = [l for l, m in lines if m == 1]
        P = lines_meet(a, b)
        return "E0" if dbl.contains_point(P) else "D0"
    return UNLABELLED


def _plane_basis(E, plane):
    return nullspace(E, [tuple(plane)], 4)


def plane_lines(X, plane, max_k=8):
    """Lines of X in the plane as [(Line, mult)], or None if the section
    is not a union of lines within the extension bound."""
    E0 = X.ctx if not hasattr(plane, "__len__") else None
    F, coeffs = plane if E0 is None else (X.ctx, plane)
    E = gf3.compositum(X.ctx, F)
    coeffs = [gf3.embed(F, E, c) for c in coeffs]
    B = _plane_basis(E, coeffs)
    M = [tuple(B[c][r] for c in range(3)) + (0,) for r in range(4)]
    V = ("u0", "u1", "u2")
    f = X.over(E)
    W = f.vars + V
    sub = {}
    for r, x in enumerate(f.vars):
        sub[x] = MultiPoly(E, W, {tuple(int(k == 4 + c) for k in range(7)): M[r][c]
                                  for c in range(3)})
    C = f.with_vars(W).substitute(sub).drop_vars(list(f.vars))
    if C.is_zero():
        raise ValueError("the plane lies on the surface")
    res = []
    lf = linear_factors(C, max_k, residuals=res)
    if res or sum(m for _, _, m in lf) != 4:
        return None
    out = []
    for S, L, m in lf:
        K = gf3.compositum(S, E)
        Lk = [gf3.embed(S, K, x) for x in L]
        rows = nullspace(K, [tuple(Lk)], 3)
        Mk = [tuple(gf3.embed(E, K, x) for x in r) for r in M]
        pts = [mat_vec(K, Mk, r + (0,)) for r in rows]
        out.append((Line(K, pts), m))
    return out


def _in_plane(E, plane, P):
    K = gf3.compositum(E, P.ctx)
    c = P.lift(K)
    return K.sum(K.mul(gf3.embed(E, K, a), b) for a, b in zip(plane, c)) == 0


def classify_plane(X, plane, max_k=8):
    """Configuration label of the plane (E, coeffs), or NOT_REDUCIBLE."""
    E, coeffs = plane
    lines = plane_lines(X, plane, max_k)
    if lines is None:
        return NOT_REDUCIBLE
    sing = [P for P in X.singular_points(max_k) if _in_plane(E, coeffs, P)]
    return classify_configuration(lines, sing)


def phi_bound(X, plane, profiles, max_k=8):
    """Right-hand side of the completely-reducible-plane bound on the
    number of lines; profiles maps each line of the plane to its profile."""
    E, coeffs = plane
    lines = plane_lines(X, plane, max_k)
    if lines is None:
        raise ValueError("the plane is not completely reducible")
    distinct = [l for l, _ in lines]
    for l in distinct:
        p = profiles.get(l)
        if p is None or not p.complete:
            raise IncompleteProfiles("no complete profile for %s" % l.fmt())
    sing = set(X.singular_points(max_k))
    total = len(distinct)
    for P in sing:
        if _in_plane(E, coeffs, P):
            through = [m for m in lines_through_point(X, P, max_k)
                       if m not in distinct]
            total += min(8, len(through))
    for l in distinct:
        inside = 0
        for m in distinct:
            if m != l:
                meets, _, smooth = meet_point(l, m, sing)
                if meets and smooth:
                    inside += 1
        total += profiles[l].valency - inside
    return total


def theorem_audit(count, has_star, triangle_free):
    """[(statement, ok)] for the global line-count bounds."""
    out = [("112 lines or at most 67", count == 112 or count <= 67)]
    if has_star:
        out.append(("a star forces 112 lines or at most 58", count == 112 or count <= 58))
    if triangle_free:
        out.append(("triangle free: at most 64 lines", count <= 64))
    return out
