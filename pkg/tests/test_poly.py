import random

import pytest

from k3lines import gf3
from k3lines import upoly as U
from k3lines.errors import ExtensionExceeded, ParseError, VariableClash
from k3lines.poly import (MultiPoly, QUART_VARS, factor_univariate, gcd_forms, parse_poly,
                          resultant_in)

F1, F2 = gf3.make_field(1), gf3.make_field(2)


def P(text, F=F1, vars=QUART_VARS):
    return parse_poly(text, F, vars)


def test_substitute_examples():
    p = P("x0^4", vars=("x0", "x1", "t"))
    got = p.substitute({"x0": P("t*x1", vars=("x0", "x1", "t"))})
    assert got == P("t^4*x1^4", vars=("x0", "x1", "t"))
    assert got.is_homogeneous()


def test_partial_examples():
    assert P("x1^3").partial("x1").is_zero()
    assert P("x1^2*x2").partial("x1") == P("2*x1*x2")


def test_euler_relation():
    rng = random.Random(3)
    from k3lines.poly import monomials
    for _ in range(20):
        f = MultiPoly(F2, QUART_VARS, {m: rng.randrange(F2.q) for m in monomials(4, 4)})
        acc = MultiPoly(F2, QUART_VARS)
        for x in QUART_VARS:
            acc = acc + MultiPoly.var(F2, QUART_VARS, x) * f.partial(x)
        assert acc == f


def test_resultant_examples():
    V = ("t",)
    r = resultant_in(P("t-1", vars=V), P("t-2", vars=V), "t")
    assert r.constant_value() == 2
    r = resultant_in(P("t^2+1", F2, V), P("t-g", F2, V), "t")
    assert r.is_zero()


def test_resultant_symmetry_and_gcd():
    rng = random.Random(7)
    V = ("t", "s")
    for _ in range(60):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        p = MultiPoly(F2, V, {(i, j): rng.randrange(F2.q) for i in range(m + 1) for j in range(3)})
        q = MultiPoly(F2, V, {(i, j): rng.randrange(F2.q) for i in range(n + 1) for j in range(3)})
        if p.deg_in("t") < 1 or q.deg_in("t") < 1:
            continue
        a, b = resultant_in(p, q, "t"), resultant_in(q, p, "t")
        sign = (p.deg_in("t") * q.deg_in("t")) % 2
        assert a == (-b if sign else b)
        # specialising s commutes with the resultant when leading terms survive
        for s in range(F2.q):
            ps, qs = p.specialize("s", s), q.specialize("s", s)
            if ps.deg_in("t") == p.deg_in("t") and qs.deg_in("t") == q.deg_in("t"):
                pd, qd = ps.to_dense("t"), qs.to_dense("t")
                shared = U.deg(U.gcd(F2, pd, qd)) > 0
                assert (a.specialize("s", s).constant_value() == 0) == shared


def test_gcd_forms_examples():
    g = gcd_forms([P("x2^2*x3"), P("x2*x3^2")])
    assert g == P("x2*x3")
    g = gcd_forms([P("x3^2*(x2+x3)"), P("x2^3")])
    assert g.constant_value() == 1
    assert gcd_forms([P("2*x2*x3^2 + x3^3"), MultiPoly(F1, QUART_VARS)]) == P("x2*x3^2 + 2*x3^3")


def test_roots_examples():
    assert sorted(r for _, r in U.roots(F1, [1, 0, 1], 2)) == sorted(
        [F2.parse("g"), F2.parse("2*g")])
    assert all(E.k == 2 for E, _ in U.roots(F1, [1, 0, 1], 2))
    with pytest.raises(ExtensionExceeded):
        U.roots(F1, [1, 0, 1], 1)
    assert U.roots(F2, [0] * 8 + [1]) == [(F2, 0)]
    assert U.multiplicity(F2, [0] * 8 + [1], 0) == 8
    lc, fac = factor_univariate(P("x2^8", F2))
    assert lc == 1 and fac == [(P("x2", F2), 8)]


def _random_with_mults(F, rng):
    # product of random monic factors raised to random powers, degree <= 12
    poly, deg = [1], 0
    while True:
        d = rng.randint(1, 3)
        m = rng.randint(1, 4)
        if deg + d * m > 12:
            break
        f = [rng.randrange(F.q) for _ in range(d)] + [1]
        poly = U.mul(F, poly, [1] if m == 0 else _pow(F, f, m))
        deg += d * m
    return poly


def _pow(F, f, m):
    r = [1]
    for _ in range(m):
        r = U.mul(F, r, f)
    return r


@pytest.mark.parametrize("k", (1, 2))
def test_squarefree_against_derivative_oracle(k):
    F = gf3.make_field(k)
    rng = random.Random(11 + k)
    for _ in range(100):
        a = _random_with_mults(F, rng)
        if U.deg(a) < 1:
            continue
        dec = U.squarefree_decomposition(F, a)
        prod = [1]
        for f, m in dec:
            prod = U.mul(F, prod, _pow(F, f, m))
            # each declared factor is squarefree: gcd with its derivative is 1
            assert U.deg(U.gcd(F, f, U.deriv(F, f))) == 0
        assert prod == U.monic(F, a)
        mults = [m for _, m in dec]
        assert len(set(mults)) == len(mults)
        # multiplicities agree with the full factorisation
        lc, fac = U.factor(F, a, seed=1)
        want = {}
        for f, m in fac:
            assert len(U.roots(F, f, F.k, strict=False)[0]) == (1 if U.deg(f) == 1 else 0)
            want[m] = U.mul(F, want.get(m, [1]), f)
        assert {m: U.monic(F, f) for m, f in want.items()} == {m: f for f, m in dec}


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as e:
        parse_poly("x0^4 +\n (x1", F1)
    assert (e.value.line, e.value.col) == (2, 5)
    assert "missing ')'" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse_poly("x0^4 + y", F1)
    assert e.value.col == 8 and "unknown identifier" in str(e.value)
    with pytest.raises(ParseError):
        parse_poly("x0^x1", F1)
    with pytest.raises(ParseError):
        parse_poly("x0 $ x1", F1)
    with pytest.raises(VariableClash):
        parse_poly("x0", F1, ("x0", "g"))


def test_parse_params_and_fmt_round_trip():
    a = F2.el("g+1")
    p = parse_poly("a*x0^2*x1^2 - (a^2+1)*x3^4", F2, params={"a": a})
    assert parse_poly(p.fmt(), F2) == p
