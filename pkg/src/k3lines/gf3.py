"""Finite fields GF(3^k) for 1 <= k <= 8.

Elements are plain ints in [0, 3^k): base-3 digit i is the coefficient of
g^i, where g is the class of x modulo the defining polynomial. Arithmetic goes
through log/exp tables and digit-wise addition tables, with numpy versions of
every operation for bulk work.
"""
import re
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, NotASubfield, ParseError, UnsupportedDegree

MAX_K = 8

# coefficient lists, constant term first; k=1 and k=2 are fixed by convention,
# the rest are Conway polynomials
MODULI = {
    1: (0, 1),
    2: (1, 0, 1),
    3: (1, 2, 0, 1),
    4: (2, 0, 0, 2, 1),
    5: (1, 2, 0, 0, 0, 1),
    6: (2, 2, 1, 0, 2, 0, 1),
    7: (1, 0, 2, 0, 0, 0, 0, 1),
    8: (2, 2, 2, 0, 1, 2, 0, 0, 1),
}


def _digits(v, k):
    out = []
    for _ in range(k):
        out.append(v % 3)
        v //= 3
    return out


def _undigits(ds):
    v = 0
    for d in reversed(ds):
        v = 3 * v + d
    return v


def _raw_mul(a, b, mod):
    """Multiply digit lists modulo the monic polynomial mod."""
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % 3
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % 3
    return prod[:k]


def _poly_mod3_divides(a, b):
    # does a divide b over GF(3)? lists constant first, a monic
    r = list(b)
    da = len(a) - 1
    for d in range(len(r) - 1, da - 1, -1):
        c = r[d] % 3
        if c:
            for i in range(da + 1):
                r[d - da + i] = (r[d - da + i] - c * a[i]) % 3
    return not any(x % 3 for x in r[:da])


def is_irreducible_mod3(mod):
    """Trial division by every monic polynomial of degree <= deg/2."""
    n = len(mod) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for v in range(3 ** d):
            cand = _digits(v, d) + [1]
            if _poly_mod3_divides(cand, mod):
                return False
    return True


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """Arithmetic context for GF(3^k)."""

    def __init__(self, k):
        if not isinstance(k, int) or k < 1 or k > MAX_K:
            raise UnsupportedDegree("GF(3^%r) is outside 1..%d" % (k, MAX_K))
        mod = MODULI[k]
        if not is_irreducible_mod3(list(mod)):
            raise UnsupportedDegree("modulus for k=%d is reducible" % k)
        self.k = k
        self.q = q = 3 ** k
        self.modulus = mod
        self.name = "3^%d" % k
        self.gen = 0 if k == 1 else 3
        self._build_tables()

    # construction ---------------------------------------------------------
    def _build_tables(self):
        k, q, mod = self.k, self.q, list(self.modulus)
        n = q - 1
        one = [1] + [0] * (k - 1)

        def rpow(ds, e):
            r, b = one, ds
            while e:
                if e & 1:
                    r = _raw_mul(r, b, mod)
                b = _raw_mul(b, b, mod)
                e >>= 1
            return r

        ps = _prime_factors(n)
        prim = None
        for cand in range(2, q):
            ds = _digits(cand, k)
            if all(rpow(ds, n // p) != one for p in ps):
                prim = ds
                break
        if prim is None:  # q == 3 handled above, q == 2 never
            prim = [2]
        exp = [0] * n
        cur = one
        for i in range(n):
            exp[i] = _undigits(cur)
            cur = _raw_mul(cur, prim, mod)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        big = 2 * n
        log[0] = big
        self.primitive = _undigits(prim)
        self.EXP = exp + exp + [0] * (2 * n + 1)
        self.LOG = log
        self.EXPv = np.array(self.EXP, dtype=np.int64)
        self.LOGv = np.array(log, dtype=np.int64)

        # digit-wise addition on 4-digit blocks
        r = np.arange(81)
        dr = np.stack([(r // 3 ** i) % 3 for i in range(4)])
        s = (dr[:, :, None] + dr[:, None, :]) % 3
        a81 = sum(s[i] * 3 ** i for i in range(4)).reshape(-1)
        self.A81v = a81.astype(np.int64)
        ng = (2 * dr) % 3
        self.N81v = sum(ng[i] * 3 ** i for i in range(4)).astype(np.int64)
        vals = np.arange(q)
        if q <= 81:
            negv = self.N81v[vals]
        else:
            negv = self.N81v[vals % 81] + 81 * self.N81v[vals // 81]
        self.NEGv = negv.astype(np.int64)
        self.NEG = negv.tolist()
        if q <= 729:
            lo = vals % 81
            hi = vals // 81
            tab = (self.A81v[(lo[:, None] * 81 + lo[None, :])]
                   + 81 * self.A81v[(hi[:, None] * 81 + hi[None, :])])
            self.ADDv = tab.reshape(-1).astype(np.int64)
            self.ADD = self.ADDv.tolist()
            add_tab, qq = self.ADD, q

            def add(a, b):
                return add_tab[a * qq + b]
        else:
            self.ADDv = None
            a81 = self.A81v.tolist()
            self.ADD = None

            def add(a, b):
                return a81[(a % 81) * 81 + b % 81] + 81 * a81[(a // 81) * 81 + b // 81]
        self.add = add
        neg = self.NEG

        def sub(a, b):
            return add(a, neg[b])
        self.sub = sub
        E, L = self.EXP, self.LOG

        def mul(a, b):
            return E[L[a] + L[b]]
        self.mul = mul
        self.FROB = [E[(3 * L[a]) % n] if a else 0 for a in range(q)]

    # scalar ops -----------------------------------------------------------
    def neg(self, a):
        return self.NEG[a]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero in GF(%s)" % self.name)
        n = self.q - 1
        return self.EXP[(n - self.LOG[a]) % n]

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero in GF(%s)" % self.name)
        if a == 0:
            return 0
        n = self.q - 1
        return self.EXP[(self.LOG[a] - self.LOG[b]) % n]

    def pow(self, a, e):
        n = self.q - 1
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("zero to a negative power")
            return 0
        return self.EXP[(self.LOG[a] * e) % n]

    def frob(self, a, r=1):
        r %= self.k
        for _ in range(r):
            a = self.FROB[a]
        return a

    def frob_inv(self, a):
        """Cube root (inverse Frobenius)."""
        return self.frob(a, self.k - 1)

    def scale(self, c, a):
        # multiplication by an integer constant in GF(3)
        c %= 3
        if c == 0:
            return 0
        return a if c == 1 else self.NEG[a]

    def from_int(self, n):
        return self.scale(n, 1)

    def sum(self, it):
        s, add = 0, self.add
        for x in it:
            s = add(s, x)
        return s

    def elements(self):
        return range(self.q)

    def in_subfield(self, a, d):
        return self.frob(a, d) == a

    def min_degree(self, a):
        """Smallest d | k with a in GF(3^d)."""
        for d in range(1, self.k + 1):
            if self.k % d == 0 and self.frob(a, d) == a:
                return d
        return self.k

    # vectorised ops -------------------------------------------------------
    def vadd(self, a, b):
        if self.ADDv is not None:
            return self.ADDv[a * self.q + b]
        A = self.A81v
        return A[(a % 81) * 81 + b % 81] + 81 * A[(a // 81) * 81 + b // 81]

    def vneg(self, a):
        return self.NEGv[a]

    def vsub(self, a, b):
        return self.vadd(a, self.NEGv[b])

    def vmul(self, a, b):
        return self.EXPv[self.LOGv[a] + self.LOGv[b]]

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero in GF(%s)" % self.name)
        n = self.q - 1
        return self.EXPv[(n - self.LOGv[a]) % n]

    def vpow(self, a, e):
        a = np.asarray(a)
        n = self.q - 1
        out = self.EXPv[(self.LOGv[a] * e) % n]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vfrob(self, a, r=1):
        n = self.q - 1
        a = np.asarray(a)
        out = self.EXPv[(self.LOGv[a] * pow(3, r % self.k, n)) % n]
        return np.where(a == 0, 0, out)

    def vsum(self, arr, axis=0):
        """Field sum along an axis via digit arithmetic."""
        arr = np.asarray(arr)
        acc = 0
        for i in range(self.k):
            acc = acc + (((arr // 3 ** i) % 3).sum(axis=axis) % 3) * 3 ** i
        return acc

    # literals -------------------------------------------------------------
    def fmt(self, a):
        if a == 0:
            return "0"
        ds = _digits(a, self.k)
        parts = []
        for i in range(self.k - 1, -1, -1):
            c = ds[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "g" if i == 1 else "g^%d" % i
                parts.append(mono if c == 1 else "%d*%s" % (c, mono))
        return "+".join(parts)

    def parse(self, s):
        """Parse an element literal such as '2*g+1' or '-g^2'."""
        if isinstance(s, int):
            return self.from_int(s)
        txt = str(s).replace(" ", "")
        if not txt:
            raise ParseError("empty element literal")
        if txt[0] not in "+-":
            txt = "+" + txt
        pieces = re.findall(r"[+-][^+-]+", txt)
        if "".join(pieces) != txt:
            raise ParseError("bad element literal %r" % s)
        total = 0
        for piece in pieces:
            sign = 1 if piece[0] == "+" else 2
            body = piece[1:]
            m = re.fullmatch(r"(\d+)?(?:\*?(g)(?:\^(\d+))?)?", body)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise ParseError("bad element literal %r" % s)
            coef = int(m.group(1)) if m.group(1) is not None else 1
            val = self.from_int(coef * sign)
            if m.group(2):
                e = int(m.group(3)) if m.group(3) else 1
                val = self.mul(val, self.pow(self.gen, e))
            total = self.add(total, val)
        return total

    def el(self, v):
        if isinstance(v, str):
            v = self.parse(v)
        return FieldElement(self, v)

    def __repr__(self):
        return "GF(%s)" % self.name

    def __reduce__(self):
        return (make_field, (self.k,))


@lru_cache(maxsize=None)
def make_field(k):
    return FieldCtx(k)


def field_from_literal(s):
    m = re.fullmatch(r"\s*3\s*\^\s*(\d+)\s*", str(s))
    if not m:
        if str(s).strip() == "3":
            return make_field(1)
        raise ParseError("field literal must look like 3^k, got %r" % s)
    return make_field(int(m.group(1)))


def extension_for(ctx, min_size):
    """Smallest field containing ctx with at least min_size elements."""
    for m in range(ctx.k, MAX_K + 1, ctx.k):
        if 3 ** m >= min_size:
            return make_field(m)
    return None


def compositum(*ctxs):
    from math import lcm
    k = 1
    for c in ctxs:
        k = lcm(k, c.k)
    if k > MAX_K:
        from .errors import ExtensionExceeded
        raise ExtensionExceeded("compositum GF(3^%d) exceeds GF(3^%d)" % (k, MAX_K))
    return make_field(k)


# embeddings ---------------------------------------------------------------

def _raw_root(src, dst):
    # smallest root of src.modulus inside dst
    mod = src.modulus
    for r in range(dst.q):
        acc = 0
        for c in reversed(mod):
            acc = dst.add(dst.mul(acc, r), dst.from_int(c))
        if acc == 0:
            return r
    raise NotASubfield("no root of the modulus of %r in %r" % (src, dst))


@lru_cache(maxsize=None)
def embedding_table(a, b):
    """Table of the embedding GF(3^a) -> GF(3^b) as a tuple of ints."""
    if b % a:
        raise NotASubfield("GF(3^%d) is not a subfield of GF(3^%d)" % (a, b))
    src, dst = make_field(a), make_field(b)
    if a == b:
        return tuple(range(src.q))
    if a == 1:
        return (0, 1, 2)
    # factor through the largest intermediate field so the tower commutes
    mids = [c for c in range(a + 1, b) if c % a == 0 and b % c == 0]
    if mids:
        c = mids[-1]
        t1, t2 = embedding_table(a, c), embedding_table(c, b)
        return tuple(t2[x] for x in t1)
    gamma = _raw_root(src, dst)
    pw = [1]
    for _ in range(1, a):
        pw.append(dst.mul(pw[-1], gamma))
    out = []
    for v in range(src.q):
        ds = _digits(v, a)
        acc = 0
        for d, p in zip(ds, pw):
            acc = dst.add(acc, dst.scale(d, p))
        out.append(acc)
    return tuple(out)


@lru_cache(maxsize=None)
def _pullback_table(a, b):
    return {v: i for i, v in enumerate(embedding_table(a, b))}


@lru_cache(maxsize=None)
def _embedding_array(a, b):
    return np.array(embedding_table(a, b), dtype=np.int64)


def embed(src, dst, x):
    if src.k == dst.k:
        return x
    return embedding_table(src.k, dst.k)[x]


def vembed(src, dst, arr):
    if src.k == dst.k:
        return np.asarray(arr)
    return _embedding_array(src.k, dst.k)[np.asarray(arr)]


def pullback(big, small, x):
    """Inverse of embed; raises NotASubfield when x is not in the image."""
    if big.k == small.k:
        return x
    try:
        return _pullback_table(small.k, big.k)[x]
    except KeyError:
        raise NotASubfield("%s is not in GF(%s)" % (big.fmt(x), small.name)) from None


def min_field_of(ctx, values):
    """Smallest subfield of ctx containing all values."""
    d = 1
    from math import lcm
    for v in values:
        d = lcm(d, ctx.min_degree(v))
        if d == ctx.k:
            break
    return make_field(d)


class FieldElement:
    """User-facing wrapper around an int element of a FieldCtx."""

    __slots__ = ("ctx", "v")

    def __init__(self, ctx, v):
        self.ctx = ctx
        self.v = v

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is self.ctx:
                return other.v
            if self.ctx.k % other.ctx.k == 0:
                return embed(other.ctx, self.ctx, other.v)
            raise NotASubfield("mixing %r and %r" % (self.ctx, other.ctx))
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def _wrap(self, v):
        return FieldElement(self.ctx, v)

    def __add__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(self.v, o))

    def __rsub__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(o, self.v))

    def __mul__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(self.v, o))

    def __rtruediv__(self, o):
        o = self._coerce(o)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(o, self.v))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.v))

    def __pow__(self, e):
        return self._wrap(self.ctx.pow(self.v, e))

    def inverse(self):
        return self._wrap(self.ctx.inv(self.v))

    def frobenius(self, r=1):
        return self._wrap(self.ctx.frob(self.v, r))

    def embed(self, dst):
        return FieldElement(dst, embed(self.ctx, dst, self.v))

    def is_zero(self):
        return self.v == 0

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            if o.ctx.k == self.ctx.k:
                return o.v == self.v
            try:
                big = compositum(self.ctx, o.ctx)
            except Exception:
                return False
            return embed(self.ctx, big, self.v) == embed(o.ctx, big, o.v)
        if isinstance(o, int):
            return self.v == self.ctx.from_int(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.k, self.v))

    def __lt__(self, o):
        return self.v < o.v

    def __repr__(self):
        return self.ctx.fmt(self.v)

    __str__ = __repr__
