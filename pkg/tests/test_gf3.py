import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k3lines import gf3
from k3lines.errors import DivisionByZero, NotASubfield, ParseError, UnsupportedDegree

N = 10 ** 4
KS = (1, 2, 3, 4)


def sample(F, seed, nonzero=False):
    rng = np.random.default_rng(seed)
    lo = 1 if nonzero else 0
    return rng.integers(lo, F.q, N)


def test_make_field_examples():
    F1 = gf3.make_field(1)
    assert F1.q == 3
    F2 = gf3.make_field(2)
    assert F2.q == 9 and F2.modulus == (1, 0, 1)
    with pytest.raises(UnsupportedDegree):
        gf3.make_field(9)
    with pytest.raises(UnsupportedDegree):
        gf3.make_field(0)


def test_moduli_irreducible():
    for k in range(1, gf3.MAX_K + 1):
        assert gf3.is_irreducible_mod3(list(gf3.MODULI[k]))


def test_gf9_examples():
    F = gf3.make_field(2)
    g = F.parse("g")
    assert F.mul(g, g) == 2
    assert F.inv(g) == F.parse("2*g")
    assert F.pow(g, 8) == 1
    assert F.frob(g) == F.neg(g)
    with pytest.raises(DivisionByZero):
        F.inv(0)


def test_embed_examples():
    F1, F2, F3 = (gf3.make_field(k) for k in (1, 2, 3))
    assert gf3.embed(F1, F2, 2) == 2
    with pytest.raises(NotASubfield):
        gf3.embed(F2, F3, 3)
    with pytest.raises(NotASubfield):
        gf3.pullback(F2, F1, F2.parse("g"))


def test_literals_round_trip():
    for k in KS:
        F = gf3.make_field(k)
        for a in F.elements():
            assert F.parse(F.fmt(a)) == a
    with pytest.raises(ParseError):
        gf3.make_field(2).parse("g*")
    assert gf3.field_from_literal("3^4").k == 4
    with pytest.raises(ParseError):
        gf3.field_from_literal("9")


@pytest.mark.parametrize("k", KS)
def test_tables_match_schoolbook(k):
    # log tables against digit-polynomial multiplication mod the modulus
    F = gf3.make_field(k)
    a, b = sample(F, 1), sample(F, 2)
    got = F.vmul(a, b)
    for x, y, z in list(zip(a, b, got))[:2000]:
        ref = gf3._undigits(gf3._raw_mul(gf3._digits(int(x), k), gf3._digits(int(y), k),
                                         list(F.modulus)))
        assert int(z) == ref


@pytest.mark.parametrize("k", KS)
def test_field_axioms(k):
    F = gf3.make_field(k)
    a, b, c = sample(F, 10 * k), sample(F, 10 * k + 1), sample(F, 10 * k + 2)
    add, mul = F.vadd, F.vmul
    assert np.array_equal(add(a, b), add(b, a))
    assert np.array_equal(mul(a, b), mul(b, a))
    assert np.array_equal(add(add(a, b), c), add(a, add(b, c)))
    assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert np.array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
    assert np.all(add(a, 0 * a) == a)
    assert np.all(mul(a, np.ones_like(a)) == a)
    assert np.all(add(a, F.vneg(a)) == 0)
    assert np.all(add(add(a, a), a) == 0)
    nz = sample(F, 10 * k + 3, nonzero=True)
    assert np.all(mul(nz, F.vinv(nz)) == 1)
    assert np.all(F.vpow(nz, F.q - 1) == 1)


@pytest.mark.parametrize("k", KS)
def test_frobenius_laws(k):
    F = gf3.make_field(k)
    a, b = sample(F, 20 * k), sample(F, 20 * k + 1)
    fr = F.vfrob
    assert np.array_equal(fr(F.vadd(a, b)), F.vadd(fr(a), fr(b)))
    assert np.array_equal(fr(F.vmul(a, b)), F.vmul(fr(a), fr(b)))
    assert np.array_equal(fr(a), F.vpow(a, 3))
    assert np.array_equal(fr(a, k), a)
    fixed = [x for x in F.elements() if F.frob(x) == x]
    assert fixed == [0, 1, 2]


def _pairs():
    return [(a, b) for b in range(1, gf3.MAX_K + 1) for a in range(1, b) if b % a == 0]


@pytest.mark.parametrize("a,b", _pairs())
def test_embedding_laws(a, b):
    S, D = gf3.make_field(a), gf3.make_field(b)
    x, y = sample(S, a * 100 + b), sample(S, a * 100 + b + 1)
    e = lambda v: gf3.vembed(S, D, v)
    assert np.array_equal(e(S.vmul(x, y)), D.vmul(e(x), e(y)))
    assert np.array_equal(e(S.vadd(x, y)), D.vadd(e(x), e(y)))
    assert np.array_equal(e(S.vfrob(x)), D.vfrob(e(x)))
    assert len(set(gf3.embedding_table(a, b))) == S.q
    assert all(D.in_subfield(v, a) for v in gf3.embedding_table(a, b))
    assert all(gf3.pullback(D, S, gf3.embed(S, D, v)) == v for v in range(min(S.q, 729)))


def test_tower_commutes():
    for a, c, b in ((1, 2, 4), (2, 4, 8), (1, 3, 6), (2, 6, 6), (1, 2, 8), (2, 2, 6)):
        A, C, B = (gf3.make_field(k) for k in (a, c, b))
        for v in range(A.q):
            assert gf3.embed(C, B, gf3.embed(A, C, v)) == gf3.embed(A, B, v)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(range(1, gf3.MAX_K + 1)), st.data())
def test_scalar_ops_agree_with_vector_ops(k, data):
    F = gf3.make_field(k)
    a = data.draw(st.integers(0, F.q - 1))
    b = data.draw(st.integers(1, F.q - 1))
    assert F.add(a, b) == int(F.vadd(np.array([a]), np.array([b]))[0])
    assert F.mul(a, b) == int(F.vmul(np.array([a]), np.array([b]))[0])
    assert F.mul(F.div(a, b), b) == a
    assert F.min_degree(a) in [d for d in range(1, k + 1) if k % d == 0]
