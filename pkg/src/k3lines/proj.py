"""Points, lines and linear maps of P^3 over GF(3^k).

Points and lines are always stored in their minimal field of definition
(over GF(3)), so equality is plain comparison of that representation.
"""
from functools import lru_cache
from itertools import combinations, product
from math import gcd, lcm

import numpy as np

from . import gf3
from .errors import DegenerateSpan, ExtensionExceeded, SameLine, SingularMatrix


def rref(F, rows):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return [tuple(x) for x in m], pivots


def nullspace(F, rows, ncols):
    """Basis of {v : rows . v = 0}."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(F, rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = F.NEG[red[i][f]]
        basis.append(tuple(v))
    return basis


def mat_inv(F, M):
    n = len(M)
    aug = [list(M[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [tuple(r[n:]) for r in red]


def mat_mul(F, A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = 0
            for k in range(m):
                if A[i][k] and B[k][j]:
                    acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return out


def mat_vec(F, M, v):
    return tuple(F.sum(F.mul(a, b) for a, b in zip(row, v)) for row in M)


def _reduce_field(F, vals):
    d = 1
    for v in vals:
        d = lcm(d, F.min_degree(v))
        if d == F.k:
            break
    if d == F.k:
        return F, tuple(vals)
    S = gf3.make_field(d)
    return S, tuple(gf3.pullback(F, S, v) for v in vals)


def _lift(src, dst, vals):
    if dst.k % src.k:
        raise gf3.NotASubfield("cannot lift from %r to %r" % (src, dst))
    return tuple(gf3.embed(src, dst, v) for v in vals)


class ProjPoint:
    __slots__ = ("ctx", "coords")

    def __init__(self, ctx, coords):
        coords = tuple(coords)
        if not any(coords):
            raise DegenerateSpan("the zero vector is not a point")
        i = next(j for j, x in enumerate(coords) if x)
        inv = ctx.inv(coords[i])
        coords = tuple(ctx.mul(inv, x) for x in coords)
        self.ctx, self.coords = _reduce_field(ctx, coords)

    def lift(self, E):
        return _lift(self.ctx, E, self.coords)

    def key(self):
        return (self.ctx.k, self.coords)

    def __eq__(self, o):
        return isinstance(o, ProjPoint) and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, o):
        return self.key() < o.key()

    def fmt(self):
        return "[" + ":".join(self.ctx.fmt(c) for c in self.coords) + "]"

    __repr__ = fmt

    def to_json(self):
        return [self.ctx.fmt(c) for c in self.coords]


class Line:
    """A line in P^3 as the canonical row-reduced 2x4 basis."""

    __slots__ = ("ctx", "rows", "pivots")

    def __init__(self, ctx, rows):
        red, piv = rref(ctx, rows)
        if len(piv) < 2:
            raise DegenerateSpan("rows do not span a line")
        red = red[:2]
        flat = red[0] + red[1]
        S, flat = _reduce_field(ctx, flat)
        self.ctx = S
        self.rows = (flat[:4], flat[4:])
        self.pivots = tuple(piv[:2])

    def lift(self, E):
        return (_lift(self.ctx, E, self.rows[0]), _lift(self.ctx, E, self.rows[1]))

    def key(self):
        return (self.ctx.k, self.pivots, self.rows)

    def __eq__(self, o):
        return isinstance(o, Line) and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, o):
        return self.key() < o.key()

    def equations(self, E=None):
        """Two linear forms cutting out the line (coefficient vectors)."""
        E = E or self.ctx
        a, b = self.lift(E)
        return nullspace(E, [a, b], 4)

    def contains_point(self, P):
        E = gf3.compositum(self.ctx, P.ctx)
        a, b = self.lift(E)
        p = P.lift(E)
        red, piv = rref(E, [a, b, p])
        return len(piv) == 2

    def point_at(self, E, s, u):
        a, b = self.lift(E)
        return tuple(E.add(E.mul(s, x), E.mul(u, y)) for x, y in zip(a, b))

    def fmt(self):
        eqs = self.equations()
        parts = []
        for e in eqs:
            terms = []
            for i, c in enumerate(e):
                if c:
                    cs = self.ctx.fmt(c)
                    if "+" in cs:
                        cs = "(%s)" % cs
                    terms.append(("x%d" % i) if cs == "1" else "%s*x%d" % (cs, i))
            parts.append("+".join(terms))
        return "{%s = 0, %s = 0}" % (parts[0], parts[1])

    def __repr__(self):
        return "Line<%s | %s>" % (",".join(self.ctx.fmt(x) for x in self.rows[0]),
                                  ",".join(self.ctx.fmt(x) for x in self.rows[1]))

    def to_json(self):
        return [[self.ctx.fmt(x) for x in r] for r in self.rows]


def span_line(p, q):
    """Line through two points (ProjPoints or raw tuples with a ctx)."""
    E = gf3.compositum(p.ctx, q.ctx)
    a, b = p.lift(E), q.lift(E)
    red, piv = rref(E, [a, b])
    if len(piv) < 2:
        raise DegenerateSpan("points coincide")
    return Line(E, [a, b])


def canonical_line(ctx, rows):
    return Line(ctx, rows)


def line_from_equations(ctx, eqs):
    """Line cut out by two independent linear forms."""
    basis = nullspace(ctx, [tuple(e) for e in eqs], 4)
    if len(basis) != 2:
        raise DegenerateSpan("equations do not cut out a line")
    return Line(ctx, basis)


def lines_meet(l1, l2):
    """Intersection point of two lines, None if skew; SameLine if equal.

    Raises ExtensionExceeded only for meeting lines whose compositum is
    beyond GF(3^8); see lines_coplanar and meet_point.
    """
    if lcm(l1.ctx.k, l2.ctx.k) > gf3.MAX_K:
        if not lines_coplanar(l1, l2):
            return None
        raise ExtensionExceeded("meeting point of %r and %r lies beyond GF(3^%d)"
                                % (l1, l2, gf3.MAX_K))
    E = gf3.compositum(l1.ctx, l2.ctx)
    a, b = l1.lift(E)
    c, d = l2.lift(E)
    red, piv = rref(E, [a, b, c, d])
    r = len(piv)
    if r == 2:
        raise SameLine("the lines coincide")
    if r == 4:
        return None
    # s a + u b = s' c + u' d
    cols = [a, b, tuple(E.NEG[x] for x in c), tuple(E.NEG[x] for x in d)]
    M = [tuple(cols[j][i] for j in range(4)) for i in range(4)]
    ns = nullspace(E, M, 4)
    s, u = ns[0][0], ns[0][1]
    pt = tuple(E.add(E.mul(s, x), E.mul(u, y)) for x, y in zip(a, b))
    return ProjPoint(E, pt)


@lru_cache(maxsize=None)
def _relative_coords(m, d):
    """Table x -> coordinates of x in GF(3^m) over GF(3^d), basis 1, g, .., g^(m/d-1)."""
    F, S = gf3.make_field(m), gf3.make_field(d)
    pw = [F.pow(F.gen, a) for a in range(m // d)]
    out = {}
    for u in product(range(S.q), repeat=m // d):
        x = F.sum(F.mul(gf3.embed(S, F, c), p) for c, p in zip(u, pw))
        out[x] = u
    return out


def _pluecker(l):
    F = l.ctx
    a, b = l.rows
    return {S: F.sub(F.mul(a[S[0]], b[S[1]]), F.mul(a[S[1]], b[S[0]]))
            for S in combinations(range(4), 2)}


_COMPLEMENT = {(0, 1): ((2, 3), 1), (0, 2): ((1, 3), 2), (0, 3): ((1, 2), 1),
               (1, 2): ((0, 3), 1), (1, 3): ((0, 2), 2), (2, 3): ((0, 1), 1)}


def lines_coplanar(l1, l2):
    """Whether two lines meet, for any pair of fields of definition.

    The determinant of the four spanning rows is the Pluecker pairing. When
    the compositum is too large, it is evaluated in GF(3^m) (x) GF(3^n) over
    GF(3^d), d = gcd(m, n); the two fields are linearly disjoint over GF(3^d),
    so the pairing vanishes iff every coordinate does.
    """
    m, n = l1.ctx.k, l2.ctx.k
    if lcm(m, n) <= gf3.MAX_K:
        E = gf3.compositum(l1.ctx, l2.ctx)
        return len(rref(E, list(l1.lift(E)) + list(l2.lift(E)))[1]) < 4
    return _coplanar_tensor(l1, l2)


def _coplanar_tensor(l1, l2):
    p1, p2 = _pluecker(l1), _pluecker(l2)
    F2 = l2.ctx
    u, v = [], []
    for A, (B, sign) in _COMPLEMENT.items():
        u.append(p1[A])
        v.append(p2[B] if sign == 1 else F2.NEG[p2[B]])
    return pairing_vanishes(l1.ctx, u, F2, v)


def pairing_vanishes(F1, u, F2, v):
    """Whether sum(u_i * v_i) = 0, for u over F1 and v over F2.

    Works past GF(3^8): F1 and F2 are linearly disjoint over GF(3^d),
    d = gcd of their degrees, so the sum vanishes in the compositum iff
    each of its coordinates over GF(3^d) does.
    """
    m, n = F1.k, F2.k
    if lcm(m, n) <= gf3.MAX_K:
        E = gf3.compositum(F1, F2)
        return E.sum(E.mul(gf3.embed(F1, E, x), gf3.embed(F2, E, y))
                      for x, y in zip(u, v)) == 0
    d = gcd(m, n)
    S = gf3.make_field(d)
    t1, t2 = _relative_coords(m, d), _relative_coords(n, d)
    acc = {}
    for x, y in zip(u, v):
        for i, a in enumerate(t1[x]):
            if a:
                for j, b in enumerate(t2[y]):
                    if b:
                        acc[i, j] = S.add(acc.get((i, j), 0), S.mul(a, b))
    return not any(acc.values())


class ProjMap:
    """Projective linear map x -> T x, stored with its inverse."""

    def __init__(self, ctx, T, Tinv=None):
        self.ctx = ctx
        self.T = [tuple(r) for r in T]
        self.Tinv = [tuple(r) for r in (Tinv or mat_inv(ctx, self.T))]

    @classmethod
    def from_inverse(cls, ctx, M):
        """Map whose inverse has the given matrix."""
        return cls(ctx, mat_inv(ctx, M), M)

    def lift(self, E):
        t = [_lift(self.ctx, E, r) for r in self.T]
        ti = [_lift(self.ctx, E, r) for r in self.Tinv]
        return ProjMap(E, t, ti)

    def inverse(self):
        return ProjMap(self.ctx, self.Tinv, self.T)

    def compose(self, other):
        """self after other."""
        E = gf3.compositum(self.ctx, other.ctx)
        a, b = self.lift(E), other.lift(E)
        return ProjMap(E, mat_mul(E, a.T, b.T), mat_mul(E, b.Tinv, a.Tinv))

    def apply_point(self, P):
        E = gf3.compositum(self.ctx, P.ctx)
        m = self.lift(E)
        return ProjPoint(E, mat_vec(E, m.T, P.lift(E)))

    def apply_line(self, l):
        E = gf3.compositum(self.ctx, l.ctx)
        m = self.lift(E)
        a, b = l.lift(E)
        return Line(E, [mat_vec(E, m.T, a), mat_vec(E, m.T, b)])

    def apply_form(self, f):
        """Push a form forward: returns f o T^{-1} over the compositum."""
        E = gf3.compositum(self.ctx, f.ctx)
        m = self.lift(E)
        return f.embed(E).linear_substitute(m.Tinv)


def apply_map(T, obj):
    from .poly import MultiPoly
    if isinstance(obj, ProjPoint):
        return T.apply_point(obj)
    if isinstance(obj, Line):
        return T.apply_line(obj)
    if isinstance(obj, MultiPoly):
        return T.apply_form(obj)
    if hasattr(obj, "form"):
        from .surface import QuarticSurface
        return QuarticSurface(T.apply_form(obj.form), name=obj.name)
    raise TypeError(type(obj))


# enumeration of all lines --------------------------------------------------

PIVOT_PATTERNS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def line_count(q):
    return (q * q + 1) * (q * q + q + 1)


def _free_positions(piv):
    a, b = piv
    first = [c for c in range(a + 1, 4) if c != b]
    second = [c for c in range(b + 1, 4)]
    return first, second


def line_arrays(ctx, step=1 << 20):
    """Yield (pivots, rowsA, rowsB) numpy blocks covering every line once.

    Blocks hold at most step lines, in canonical order.
    """
    q = ctx.q
    for piv in PIVOT_PATTERNS:
        first, second = _free_positions(piv)
        nfree = len(first) + len(second)
        n = q ** nfree
        for lo in range(0, n, step):
            idx = np.arange(lo, min(n, lo + step), dtype=np.int64)
            m = len(idx)
            digits = []
            for _ in range(nfree):
                digits.append(idx % q)
                idx = idx // q
            digits = digits[::-1]
            A = np.zeros((m, 4), dtype=np.int64)
            B = np.zeros((m, 4), dtype=np.int64)
            A[:, piv[0]] = 1
            B[:, piv[1]] = 1
            for j, c in enumerate(first):
                A[:, c] = digits[j]
            for j, c in enumerate(second):
                B[:, c] = digits[len(first) + j]
            yield piv, A, B


def all_lines(ctx, chunk=None):
    """All lines of P^3 over ctx in canonical order.

    chunk=(i, n) restricts to the i-th of n contiguous slices.
    """
    total = line_count(ctx.q)
    lo, hi = 0, total
    if chunk is not None:
        i, n = chunk
        lo, hi = total * i // n, total * (i + 1) // n
    pos = 0
    for piv, A, B in line_arrays(ctx):
        m = len(A)
        a0, a1 = max(lo - pos, 0), min(hi - pos, m)
        for j in range(a0, a1):
            yield Line(ctx, [tuple(A[j].tolist()), tuple(B[j].tolist())])
        pos += m
