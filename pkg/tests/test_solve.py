import random

import pytest

from k3lines import gf3
from k3lines.poly import MultiPoly, monomials, parse_poly
from k3lines.proj import mat_inv
from k3lines.errors import SingularMatrix
from k3lines.solve import (cubic_singular_points, exact_divide, linear_form_poly,
                           split_ternary_cubic)

V = ("x1", "x2", "x3")
F1, F2 = gf3.make_field(1), gf3.make_field(2)


def C(text, F=F1):
    return parse_poly(text, F, V)


def test_split_examples():
    assert split_ternary_cubic(C("x1*x2*x3")).tag == "three-lines-triangle"
    assert split_ternary_cubic(C("x1^2*x2")).tag == "double-line+line"
    assert split_ternary_cubic(C("x1^3")).tag == "triple-line"
    s = split_ternary_cubic(C("x3*x2^2 + x1^3"))
    assert s.tag == "irreducible-cuspidal"
    assert [P for _, P in s.singular_points] == [(0, 0, 1)]
    assert split_ternary_cubic(C("x1*(x1+x2)*(x1-x2)")).tag == "three-lines-concurrent"
    assert split_ternary_cubic(C("x2^2*x3 - x1^3 - x1^2*x3")).tag == "irreducible-nodal"
    assert split_ternary_cubic(C("x1*(x1*x3 - x2^2)")).tag == "conic+tangent-line"
    assert split_ternary_cubic(C("x2*(x1*x3 - x2^2)")).tag == "conic+line-transverse"
    # conjugate pair over GF(9) plus a rational line
    assert split_ternary_cubic(C("x1*(x2^2 + x3^2)")).tag == "three-lines-triangle"
    assert split_ternary_cubic(C("x2*(x2^2 + x3^2)")).tag == "three-lines-concurrent"


# ground-truth shapes: (tag, cubic over GF(3))
SHAPES = [
    ("three-lines-triangle", "x1*x2*x3"),
    ("three-lines-triangle", "x1*(x2^2 + x3^2)"),
    ("three-lines-concurrent", "x1*x2*(x1+x2)"),
    ("three-lines-concurrent", "x2*(x2^2 + x3^2)"),
    ("double-line+line", "x1^2*x2"),
    ("triple-line", "x1^3"),
    ("conic+tangent-line", "x1*(x1*x3 - x2^2)"),
    ("conic+line-transverse", "x2*(x1*x3 - x2^2)"),
    ("irreducible-cuspidal", "x2^2*x3 - x1^3"),
    ("irreducible-nodal", "x2^2*x3 - x1^3 - x1^2*x3"),
]


def random_map(F, rng):
    while True:
        M = [[rng.randrange(F.q) for _ in range(3)] for _ in range(3)]
        try:
            mat_inv(F, M)
            return M
        except SingularMatrix:
            continue


def transform(f, M):
    F = f.ctx
    sub = {v: MultiPoly(f.ctx, f.vars, {tuple(int(j == c) for j in range(3)): M[r][c]
                                         for c in range(3) if M[r][c]})
           for r, v in enumerate(f.vars)}
    return f.substitute(sub)


def reconstruct(f, s):
    """Product of the split components over a common field."""
    ks = [f.ctx.k] + [E.k for E, _, _ in s.lines] + [G.k for G, _, _ in s.groups]
    K = gf3.make_field(_lcm(ks))
    prod = MultiPoly.const(K, V, 1)
    for E, L, m in s.lines:
        Lk = [gf3.embed(E, K, x) for x in L]
        prod = prod * linear_form_poly(K, V, Lk) ** m
    for G, form, _ in s.groups:
        prod = prod * form.embed(K)
    if s.tag.startswith("conic+"):
        (E, L, _), = s.lines
        assert E.k == f.ctx.k
        Q = exact_divide(f, linear_form_poly(f.ctx, V, L))
        assert Q is not None
        prod = prod * Q.embed(K)
    return K, prod


def _lcm(ks):
    from math import lcm
    out = 1
    for k in ks:
        out = lcm(out, k)
    return out


def equal_up_to_scalar(p, q):
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    e = next(iter(q.terms))
    if e not in p.terms:
        return False
    c = p.ctx.div(p.terms[e], q.terms[e])
    return p == q.scale(c)


def test_reconstruction_identity_1000_cubics():
    rng = random.Random(2024)
    mons = monomials(3, 3)
    seen = set()
    for i in range(1000):
        F = F1 if i % 2 else F2
        if i % 5 == 0:
            want, text = SHAPES[(i // 5) % len(SHAPES)]
            f = transform(C(text).embed(F), random_map(F, rng))
        else:
            want = None
            pick = rng.sample(mons, rng.randint(2, len(mons)))
            f = MultiPoly(F, V, {m: rng.randrange(1, F.q) for m in pick})
        s = split_ternary_cubic(f)
        seen.add(s.tag)
        if want is not None:
            assert s.tag == want, (f.fmt(), s.tag, want)
        if s.tag in ("smooth", "irreducible-nodal", "irreducible-cuspidal"):
            assert not s.lines and not s.groups
            assert len(s.singular_points) == (0 if s.tag == "smooth" else 1)
            assert len(cubic_singular_points(f)) == len(s.singular_points)
            continue
        K, prod = reconstruct(f, s)
        assert equal_up_to_scalar(f.embed(K), prod), (f.fmt(), s.tag)
        if s.three_lines:
            assert sum(m for _, _, m in s.lines) + sum(n for _, _, n in s.groups) == 3
    assert len(seen) == 9


@pytest.mark.parametrize("tag,text", SHAPES)
def test_tag_invariant_under_coordinate_change(tag, text):
    rng = random.Random(hash(text) % 1000)
    f = C(text)
    for _ in range(10):
        F = F2 if rng.random() < 0.5 else F1
        assert split_ternary_cubic(transform(f.embed(F), random_map(F, rng))).tag == tag
