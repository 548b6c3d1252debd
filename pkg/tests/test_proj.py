import random

import numpy as np
import pytest

from k3lines import gf3
from k3lines.errors import DegenerateSpan, SameLine
from k3lines.poly import parse_poly
from k3lines.proj import (Line, ProjMap, ProjPoint, all_lines, apply_map, line_arrays,
                          line_count, line_from_equations, lines_coplanar, lines_meet, rref,
                          span_line)

F1, F2 = gf3.make_field(1), gf3.make_field(2)


def L(F, *eqs):
    return line_from_equations(F, eqs)


def test_span_examples():
    l = span_line(ProjPoint(F1, (0, 0, 1, 0)), ProjPoint(F1, (0, 0, 0, 1)))
    assert l.rows == ((0, 0, 1, 0), (0, 0, 0, 1))
    assert l == span_line(ProjPoint(F1, (0, 0, 1, 1)), ProjPoint(F1, (0, 0, 1, 2)))
    assert l == L(F1, (1, 0, 0, 0), (0, 1, 0, 0))
    with pytest.raises(DegenerateSpan):
        span_line(ProjPoint(F1, (1, 0, 0, 0)), ProjPoint(F1, (1, 0, 0, 0)))


def test_field_of_definition_is_minimal():
    l = Line(F2, [(1, 0, 2, 0), (0, 1, 0, 1)])
    assert l.ctx.k == 1
    g = F2.parse("g")
    assert Line(F2, [(1, 0, g, 0), (0, 1, 0, 1)]).ctx.k == 2


def test_meet_examples():
    a = L(F1, (1, 0, 0, 0), (0, 1, 0, 0))
    b = L(F1, (1, 0, 0, 0), (0, 0, 1, 0))
    c = L(F1, (0, 0, 1, 0), (0, 0, 0, 1))
    assert lines_meet(a, b) == ProjPoint(F1, (0, 0, 0, 1))
    assert lines_meet(a, c) is None
    with pytest.raises(SameLine):
        lines_meet(a, a)


def test_apply_map_examples():
    ident = ProjMap(F1, [[int(i == j) for j in range(4)] for i in range(4)])
    l = L(F1, (1, 0, 0, 0), (0, 0, 1, 0))
    assert apply_map(ident, l) == l
    swap = ProjMap(F1, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert apply_map(swap, l) == L(F1, (0, 1, 0, 0), (0, 0, 1, 0))
    f = parse_poly("x0^3*x1 + x2*x3^3", F1)
    assert apply_map(swap, f) == parse_poly("x1^3*x0 + x2*x3^3", F1)


@pytest.mark.parametrize("k,count", [(1, 130), (2, 7462)])
def test_enumeration_count_and_uniqueness(k, count):
    F = gf3.make_field(k)
    assert line_count(F.q) == count
    keys = set()
    n = 0
    for piv, A, B in line_arrays(F):
        for a, b in zip(A.tolist(), B.tolist()):
            keys.add((tuple(a), tuple(b)))
            n += 1
    assert n == count and len(keys) == count
    # each block row is already in canonical form
    sample = list(all_lines(F))
    assert len(sample) == count and len(set(sample)) == count
    rng = random.Random(k)
    for l in rng.sample(sample, 50):
        assert Line(F, list(l.lift(F))) == l


def _random_line(F, rng):
    while True:
        rows = [tuple(rng.randrange(F.q) for _ in range(4)) for _ in range(2)]
        if len(rref(F, rows)[1]) == 2:
            return Line(F, rows)


def test_canonicalisation_is_idempotent_under_maps():
    rng = random.Random(5)
    for _ in range(100):
        F = gf3.make_field(rng.choice((1, 2, 4)))
        l = _random_line(F, rng)
        while True:
            M = [[rng.randrange(F.q) for _ in range(4)] for _ in range(4)]
            if len(rref(F, M)[1]) == 4:
                break
        T = ProjMap(F, M)
        m = apply_map(T, l)
        assert Line(m.ctx, list(m.rows)) == m
        assert apply_map(T.inverse(), m) == l


def test_coplanarity_matches_rank_oracle():
    rng = random.Random(9)
    for _ in range(300):
        k1, k2 = rng.choice([(1, 2), (2, 4), (2, 2), (3, 6), (4, 8), (1, 1)])
        a = _random_line(gf3.make_field(k1), rng)
        if rng.random() < 0.5:
            b = _random_line(gf3.make_field(k2), rng)
        else:
            # force a meeting: through a point of a
            E = gf3.make_field(k2) if k2 % k1 == 0 else gf3.make_field(k1 * k2)
            p = a.point_at(E, 1, rng.randrange(E.q))
            q = tuple(rng.randrange(E.q) for _ in range(4))
            if len(rref(E, [p, q])[1]) < 2:
                continue
            b = Line(E, [p, q])
        if a == b:
            continue
        E = gf3.compositum(a.ctx, b.ctx)
        want = len(rref(E, list(a.lift(E)) + list(b.lift(E)))[1]) == 3
        assert lines_coplanar(a, b) == want
        assert (lines_meet(a, b) is not None) == want


def test_coplanarity_beyond_the_largest_field():
    # GF(3^6) and GF(3^8) lines share GF(9) only; the tensor test still decides
    E6, E8 = gf3.make_field(6), gf3.make_field(8)
    base = Line(F2, [(1, 0, 0, 0), (0, 1, 0, 0)])
    P = ProjPoint(F2, (1, 1, 0, 0))
    a = Line(E6, [P.lift(E6), (0, 0, 1, E6.primitive)])
    b = Line(E8, [P.lift(E8), (0, 0, E8.primitive, 1)])
    # through [1:2:0:0] instead: the four spanning vectors are independent
    c = Line(E8, [ProjPoint(F2, (1, 2, 0, 0)).lift(E8), (0, 0, E8.primitive, 1)])
    assert lines_coplanar(a, b)
    assert not lines_coplanar(a, c)
    assert lines_meet(a, c) is None
    assert lines_coplanar(a, base) == lines_coplanar(base, a)
