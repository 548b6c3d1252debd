"""Sparse multivariate polynomials over GF(3^k)."""
import itertools
import re
from functools import reduce

import numpy as np

from . import gf3
from . import upoly as U
from .errors import ExtensionExceeded, ParseError, VariableClash, ZeroPolynomial

QUART_VARS = ("x0", "x1", "x2", "x3")


class MultiPoly:
    __slots__ = ("ctx", "vars", "terms")

    def __init__(self, ctx, vars, terms=None):
        self.ctx = ctx
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars) or "g" in self.vars:
            raise VariableClash("bad variable list %r" % (self.vars,))
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, ctx, vars, c):
        n = len(vars)
        return cls(ctx, vars, {(0,) * n: c})

    @classmethod
    def var(cls, ctx, vars, name):
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(ctx, vars, {tuple(e): 1})

    def _new(self, terms):
        p = MultiPoly.__new__(MultiPoly)
        p.ctx, p.vars, p.terms = self.ctx, self.vars, terms
        return p

    def copy(self):
        return self._new(dict(self.terms))

    # basic queries ------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def deg_in(self, v):
        i = self.vars.index(v) if isinstance(v, str) else v
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def uses(self, v):
        i = self.vars.index(v)
        return any(e[i] for e in self.terms)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), 0)

    def constant_value(self):
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            e, c = next(iter(self.terms.items()))
            if not any(e):
                return c
        return None

    # arithmetic ---------------------------------------------------------
    def _check(self, o):
        if isinstance(o, MultiPoly):
            if o.ctx is not self.ctx or o.vars != self.vars:
                raise VariableClash("incompatible polynomials")
            return o
        if isinstance(o, int):
            return MultiPoly.const(self.ctx, self.vars, self.ctx.from_int(o))
        if isinstance(o, gf3.FieldElement):
            return MultiPoly.const(self.ctx, self.vars, gf3.embed(o.ctx, self.ctx, o.v))
        raise TypeError(type(o))

    def __add__(self, o):
        o = self._check(o)
        F = self.ctx
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = F.add(t.get(e, 0), c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        N = self.ctx.NEG
        return self._new({e: N[c] for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._check(o))

    def __rsub__(self, o):
        return self._check(o) - self

    def __mul__(self, o):
        o = self._check(o)
        F = self.ctx
        fm, fa = F.mul, F.add
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = fa(t.get(e, 0), fm(c1, c2))
        return self._new({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def scale(self, c):
        if c == 0:
            return self._new({})
        fm = self.ctx.mul
        return self._new({e: fm(c, v) for e, v in self.terms.items()})

    def __pow__(self, n):
        r = MultiPoly.const(self.ctx, self.vars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def __eq__(self, o):
        if not isinstance(o, MultiPoly):
            return NotImplemented
        return self.ctx.k == o.ctx.k and self.vars == o.vars and self.terms == o.terms

    def __hash__(self):
        return hash((self.ctx.k, self.vars, frozenset(self.terms.items())))

    # calculus and substitution -----------------------------------------
    def partial(self, v):
        i = self.vars.index(v) if isinstance(v, str) else v
        F = self.ctx
        t = {}
        for e, c in self.terms.items():
            if e[i] % 3:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = F.scale(e[i], c)
        return self._new(t)

    def evaluate(self, point):
        """Evaluate at a tuple of ints (one per variable)."""
        F = self.ctx
        fm, fa, fp = F.mul, F.add, F.pow
        acc = 0
        cache = {}
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = fp(point[i], k)
                    v = fm(v, pw)
            acc = fa(acc, v)
        return acc

    def veval(self, arrays):
        """Evaluate on numpy arrays (one per variable, broadcastable)."""
        F = self.ctx
        arrays = [np.asarray(a, dtype=np.int64) for a in arrays]
        shape = np.broadcast_shapes(*[a.shape for a in arrays]) if arrays else ()
        acc = np.zeros(shape, dtype=np.int64)
        powers = {}
        for e, c in self.terms.items():
            v = np.full(shape, c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = F.vpow(arrays[i], k)
                    v = F.vmul(v, powers[key])
            acc = F.vadd(acc, v)
        return acc

    def specialize(self, v, value):
        """Set variable v to a scalar; the variable stays in the list."""
        i = self.vars.index(v) if isinstance(v, str) else v
        F = self.ctx
        t = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            val = F.mul(c, F.pow(value, e[i]))
            t[ne] = F.add(t.get(ne, 0), val)
        return self._new({e: c for e, c in t.items() if c})

    def drop_vars(self, names):
        """Remove variables that do not occur."""
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        for e in self.terms:
            for i, v in enumerate(self.vars):
                if v in names and e[i]:
                    raise VariableClash("variable %s still occurs" % v)
        nv = tuple(self.vars[i] for i in keep)
        return MultiPoly(self.ctx, nv, {tuple(e[i] for i in keep): c
                                         for e, c in self.terms.items()})

    def with_vars(self, new_vars):
        """Re-express over a superset (or reordering) of variables."""
        idx = [self.vars.index(v) if v in self.vars else None for v in new_vars]
        for e in self.terms:
            for i, v in enumerate(self.vars):
                if e[i] and v not in new_vars:
                    raise VariableClash("variable %s would be lost" % v)
        return MultiPoly(self.ctx, new_vars, {
            tuple(e[i] if i is not None else 0 for i in idx): c
            for e, c in self.terms.items()})

    def substitute(self, mapping):
        """Substitute polynomials (same vars) or scalars for variables."""
        F = self.ctx
        one = MultiPoly.const(F, self.vars, 1)
        subs = []
        for i, v in enumerate(self.vars):
            r = mapping.get(v)
            if r is None:
                r = MultiPoly.var(F, self.vars, v)
            elif isinstance(r, int):
                r = MultiPoly.const(F, self.vars, r)
            subs.append(r)
        pcache = {}

        def pw(i, k):
            key = (i, k)
            if key not in pcache:
                pcache[key] = one if k == 0 else (pw(i, k - 1) * subs[i])
            return pcache[key]

        acc = self._new({})
        for e, c in self.terms.items():
            term = MultiPoly.const(F, self.vars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            acc = acc + term
        return acc

    def linear_substitute(self, M):
        """p(M y) for a square matrix M of ints (rows index old variables)."""
        F = self.ctx
        n = len(self.vars)
        lin = [MultiPoly(F, self.vars, {tuple(int(j == c) for j in range(n)): M[r][c]
                                        for c in range(n)}) for r in range(n)]
        return self.substitute(dict(zip(self.vars, lin)))

    def embed(self, dst):
        if dst.k == self.ctx.k:
            return self
        t = gf3.embedding_table(self.ctx.k, dst.k)
        return MultiPoly(dst, self.vars, {e: t[c] for e, c in self.terms.items()})

    def pullback(self, small):
        return MultiPoly(small, self.vars, {e: gf3.pullback(self.ctx, small, c)
                                            for e, c in self.terms.items()})

    def min_field(self):
        return gf3.min_field_of(self.ctx, self.terms.values())

    # univariate views ---------------------------------------------------
    def coeffs_in(self, v):
        """Dict exponent -> coefficient polynomial (variable set to 0)."""
        i = self.vars.index(v)
        out = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(e[i], {})[ne] = c
        return {k: self._new(t) for k, t in out.items()}

    def to_dense(self, v=None):
        """Dense coefficient list for a polynomial in a single variable."""
        if v is None:
            used = [x for x in self.vars if self.uses(x)]
            if len(used) > 1:
                raise VariableClash("not univariate: %r" % (used,))
            v = used[0] if used else self.vars[0]
        i = self.vars.index(v)
        out = []
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise VariableClash("not univariate in %s" % v)
            while len(out) <= e[i]:
                out.append(0)
            out[e[i]] = c
        return U.trim(out)

    @classmethod
    def from_dense(cls, ctx, vars, v, coeffs):
        i = vars.index(v)
        n = len(vars)
        return cls(ctx, vars, {tuple(k if j == i else 0 for j in range(n)): c
                               for k, c in enumerate(coeffs) if c})

    def dehomogenize(self, v):
        return self.specialize(v, 1)

    def homogenize(self, v, d=None):
        i = self.vars.index(v)
        d = self.degree() if d is None else d
        t = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += d - sum(e)
            t[tuple(ne)] = c
        return self._new(t)

    # formatting ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def fmt(self):
        if not self.terms:
            return "0"
        F = self.ctx
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else "%s^%d" % (v, k)
                            for v, k in zip(self.vars, e) if k)
            neg = False
            cs = F.fmt(c)
            if "+" in cs:
                ncs = F.fmt(F.NEG[c])
                if "+" not in ncs:
                    neg, cs = True, ncs
            elif cs.startswith("2") and F.k == 1:
                neg, cs = True, "1"
            if "+" in cs:
                cs = "(%s)" % cs
            if mono:
                body = mono if cs == "1" else "%s*%s" % (cs, mono)
            else:
                body = cs
            out.append(("-" if neg else "+") + body)
        s = "".join(out)
        return s[1:] if s[0] == "+" else s

    __repr__ = fmt
    __str__ = fmt


# parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def parse_poly(text, ctx, vars=QUART_VARS, params=None):
    """Parse an expression such as '2*g*x0^2*x1*x2 - (g+1)*x3^4'.

    params maps extra identifiers to FieldElements or ints (e.g. a=...).
    """
    vars = tuple(vars)
    params = dict(params or {})
    if "g" in vars or set(vars) & set(params):
        raise VariableClash("variable names clash: %r / %r" % (vars, list(params)))
    toks = []
    pos = 0
    text = str(text)

    def where(at):
        line = text.count("\n", 0, at) + 1
        return line, at - (text.rfind("\n", 0, at) + 1) + 1

    def fail(msg, at):
        raise ParseError(msg, *where(at))

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        at = m.start(m.lastindex)
        pos = m.end()
        if m.group(1):
            toks.append(("int", int(m.group(1)), at))
        elif m.group(2):
            toks.append(("id", m.group(2), at))
        else:
            toks.append(("op", m.group(3), at))
    if text[pos:].strip():
        at = pos + len(text[pos:]) - len(text[pos:].lstrip())
        fail("unexpected character %r" % text[at], at)
    toks.append(("end", None, len(text)))
    idx = [0]

    def peek():
        return toks[idx[0]][:2]

    def take():
        t = toks[idx[0]]
        idx[0] += 1
        return t[:2]

    def here():
        return toks[idx[0]][2]

    def const(c):
        return MultiPoly.const(ctx, vars, c)

    def atom():
        at = here()
        kind, val = take()
        if kind == "int":
            return const(ctx.from_int(val))
        if kind == "id":
            if val == "g":
                return const(ctx.gen)
            if val in vars:
                return MultiPoly.var(ctx, vars, val)
            if val in params:
                p = params[val]
                if isinstance(p, gf3.FieldElement):
                    return const(gf3.embed(p.ctx, ctx, p.v))
                return const(ctx.from_int(int(p)))
            fail("unknown identifier %r" % val, at)
        if kind == "op" and val == "(":
            e = expr()
            if peek() != ("op", ")"):
                fail("missing ')'", here())
            take()
            return e
        fail("unexpected %s" % ("end of input" if kind == "end" else repr(val)), at)

    def power():
        b = atom()
        if peek() == ("op", "^"):
            take()
            at = here()
            kind, n = take()
            if kind != "int":
                fail("exponent must be an integer", at)
            return b ** n
        return b

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def term():
        r = unary()
        while peek() == ("op", "*"):
            take()
            r = r * unary()
        return r

    def expr():
        r = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = term()
            r = r + t if op == "+" else r - t
        return r

    out = expr()
    if peek()[0] != "end":
        fail("unexpected %r" % (peek()[1],), here())
    return out


# resultants -------------------------------------------------------------

def _grid_field(ctx, need):
    E = gf3.extension_for(ctx, need)
    if E is None:
        raise ExtensionExceeded("no field of size >= %d over %r" % (need, ctx))
    return E


def resultant_in(p, q, v):
    """Res_v(p, q) by evaluation and interpolation on a tensor grid.

    The result lives over p.vars without v. Formal degrees are the degrees
    in v of p and q.
    """
    if p.vars != q.vars or p.ctx is not q.ctx:
        raise VariableClash("incompatible polynomials")
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    F = p.ctx
    vi = p.vars.index(v)
    rest = tuple(x for x in p.vars if x != v)
    m, n = p.deg_in(v), q.deg_in(v)
    if m == 0 and n == 0:
        return MultiPoly.const(F, rest, 1)
    others = [x for x in rest if p.uses(x) or q.uses(x)]
    bounds = [n * p.deg_in(x) + m * q.deg_in(x) for x in others]
    pc = p.coeffs_in(v)
    qc = q.coeffs_in(v)
    if not others:
        pd = [pc[j].constant_value() if j in pc else 0 for j in range(m + 1)]
        qd = [qc[j].constant_value() if j in qc else 0 for j in range(n + 1)]
        return MultiPoly.const(F, rest, U.resultant(F, pd, qd, m, n))
    E = _grid_field(F, max(bounds) + 1)
    nodes = [np.arange(b + 1, dtype=np.int64) for b in bounds]
    grids = np.meshgrid(*nodes, indexing="ij")
    full = []
    for x in p.vars:
        full.append(grids[others.index(x)] if x in others else np.zeros_like(grids[0]))
    pe = {j: c.embed(E).veval(full) for j, c in pc.items()}
    qe = {j: c.embed(E).veval(full) for j, c in qc.items()}
    shape = grids[0].shape
    zero = np.zeros(shape, dtype=np.int64)
    pa = np.stack([pe.get(j, zero) for j in range(m + 1)], axis=-1).reshape(-1, m + 1)
    qa = np.stack([qe.get(j, zero) for j in range(n + 1)], axis=-1).reshape(-1, n + 1)
    vals = np.array([U.resultant(E, U.trim(a), U.trim(b), m, n)
                     for a, b in zip(pa.tolist(), qa.tolist())], dtype=np.int64)
    vals = vals.reshape(shape)
    coef = vals
    for ax in range(len(others)):
        coef = np.moveaxis(U.vinterpolate(E, nodes[ax], np.moveaxis(coef, ax, 0)), 0, ax)
    out = {}
    idxs = [rest.index(x) for x in others]
    for pos in zip(*np.nonzero(coef)):
        e = [0] * len(rest)
        for ax, k in enumerate(pos):
            e[idxs[ax]] = int(k)
        out[tuple(e)] = int(coef[pos])
    r = MultiPoly(E, rest, out)
    return r.pullback(F) if E.k != F.k else r


def discriminant_univariate(F, a):
    a = U.trim(a)
    return U.resultant(F, a, U.deriv(F, a), U.deg(a), U.deg(a) - 1)


# binary forms -----------------------------------------------------------
# A binary form of degree d in (x, y) is a pair (d, c) with c[i] the
# coefficient of x^i y^(d-i).

def bf_from_poly(p, xv, yv, d=None):
    d = p.degree() if d is None else d
    i, j = p.vars.index(xv), p.vars.index(yv)
    c = [0] * (d + 1)
    for e, v in p.terms.items():
        if any(k for t, k in enumerate(e) if t not in (i, j)):
            raise VariableClash("not a binary form in %s, %s" % (xv, yv))
        c[e[i]] = v
    return d, c


def bf_is_zero(f):
    return not any(f[1])


def bf_mul(F, f, g):
    return f[0] + g[0], _pad(U.mul(F, f[1], g[1]), f[0] + g[0])


def _pad(c, d):
    c = list(c) + [0] * (d + 1 - len(c))
    return c[:d + 1]


def bf_gcd(F, forms):
    """GCD of nonzero binary forms, as a monic form (d, c)."""
    forms = [f for f in forms if not bf_is_zero(f)]
    if not forms:
        raise ZeroPolynomial("gcd of zero forms")
    # multiplicity of [1:0] is d - deg(affine part in x)
    mult_inf = min(f[0] - U.deg(U.trim(f[1])) for f in forms)
    g = U.gcd_many(F, [U.trim(f[1]) for f in forms])
    d = U.deg(g) + mult_inf
    return d, _pad(g, d)


def bf_eval(F, f, pt):
    x, y = pt
    d, c = f
    acc = 0
    for i, v in enumerate(c):
        if v:
            acc = F.add(acc, F.mul(v, F.mul(F.pow(x, i), F.pow(y, d - i))))
    return acc


def bf_roots(F, f, max_k=8, residuals=None):
    """Roots [x:y] of a nonzero binary form with multiplicities.

    Returns [(E, (x, y), mult)] with points normalised to y=1 or (1, 0).
    Roots beyond max_k raise, unless residuals is a list to collect them.
    """
    d, c = f
    aff = U.trim(c)
    if not aff:
        raise ZeroPolynomial("roots of the zero form")
    out = []
    inf_mult = d - U.deg(aff)
    if inf_mult:
        out.append((F, (1, 0), inf_mult))
    if U.deg(aff) > 0:
        if residuals is None:
            found = U.roots(F, aff, max_k)
        else:
            found, res = U.roots(F, aff, max_k, strict=False)
            if U.deg(res) > 0:
                residuals.append((F, res))
        for E, r in found:
            out.append((E, (r, 1), U.multiplicity(E, U.embed(F, E, aff), r)))
    return out


def bf_multiplicity(F, f, pt):
    """Multiplicity of the point pt=(x, y) as a root of the form f."""
    d, c = f
    x, y = pt
    if y == 0:
        return d - U.deg(U.trim(c))
    # change to affine coordinate x/y
    r = F.div(x, y)
    aff = U.trim(c)
    if not aff:
        raise ZeroPolynomial("multiplicity in the zero form")
    return U.multiplicity(F, aff, r)


def gcd_forms(forms, xv="x2", yv="x3"):
    """GCD of binary forms given as MultiPolys; returns a MultiPoly."""
    F = forms[0].ctx
    vars = forms[0].vars
    d, c = bf_gcd(F, [bf_from_poly(p, xv, yv) for p in forms])
    i, j = vars.index(xv), vars.index(yv)
    t = {}
    for a, v in enumerate(c):
        if v:
            e = [0] * len(vars)
            e[i], e[j] = a, d - a
            t[tuple(e)] = v
    return MultiPoly(F, vars, t)


def factor_univariate(p, seed=0):
    """Factor a univariate MultiPoly: (lc, [(MultiPoly factor, mult)])."""
    F = p.ctx
    used = [x for x in p.vars if p.uses(x)]
    v = used[0] if used else p.vars[0]
    lc, fac = U.factor(F, p.to_dense(v), seed)
    return lc, [(MultiPoly.from_dense(F, p.vars, v, f), m) for f, m in fac]


def monomials(nvars, d):
    """Exponent tuples of total degree d in lexicographically decreasing order."""
    out = []
    for e in itertools.product(range(d, -1, -1), repeat=nvars):
        if sum(e) == d:
            out.append(e)
    return out


def det_polys(M, zero, one):
    """Division-free determinant of a square matrix of ring elements."""
    n = len(M)
    # subset DP over columns: minors of the first r rows
    dp = {0: one}
    for r in range(n):
        nxt = {}
        for mask, val in dp.items():
            sign_count = 0
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    sign_count += 1
                    continue
                entry = M[r][c]
                if _is_zero(entry):
                    continue
                # sign from number of used columns to the right of c
                right = bin(mask >> (c + 1)).count("1")
                term = val * entry
                if right % 2:
                    term = -term
                nm = mask | bit
                nxt[nm] = nxt[nm] + term if nm in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, zero)


def _is_zero(x):
    if isinstance(x, MultiPoly):
        return x.is_zero()
    return x == 0


def product(items, one):
    return reduce(lambda a, b: a * b, items, one)
