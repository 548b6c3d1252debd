import random

import pytest

from k3lines import gf3
from k3lines import upoly as U
from k3lines.errors import NotK3, NotOnSurface, NotQuartic
from k3lines.exact_lines import lines_exact
from k3lines.families import make_named
from k3lines.poly import MultiPoly, QUART_VARS, monomials, parse_poly
from k3lines.proj import ProjPoint, line_from_equations
from k3lines.surface import (contains_line, is_smooth_point, lines_bruteforce,
                             lines_through_point, new_surface)

from conftest import named

F1, F2 = gf3.make_field(1), gf3.make_field(2)
FERMAT = "x0^4 + x1^4 + x2^4 + x3^4"


def zero_line_quartic():
    # seeded dense quartic over GF(3); smooth, no lines up to GF(3^8)
    rng = random.Random(2)
    return MultiPoly(F1, QUART_VARS, {m: rng.randrange(3) for m in monomials(4, 4)})


def test_validation():
    X = new_surface(FERMAT, F1)
    assert X.singular_points() == []
    assert X.certificate["finite_singular_locus"]
    with pytest.raises(NotQuartic):
        new_surface("x0^3 + x1^3 + x2^3", F1)
    with pytest.raises(NotQuartic):
        new_surface("x0^4 + x1^3", F1)
    with pytest.raises(NotK3):
        new_surface("x0^2*x1^2 + x2^4", F1)
    with pytest.raises(NotK3):
        # three planes times a fourth: the a = inf member of the first family
        new_surface("x0^2*x1*x2", F1)


def test_singular_points_examples():
    X = named("ex412_qe_deg2_v14")
    pts = X.singular_points()
    assert pts == sorted([ProjPoint(F1, (0, 0, 0, 1)), ProjPoint(F1, (2, 1, 1, 0))])
    assert not is_smooth_point(X, ProjPoint(F1, (0, 0, 0, 1)))
    assert len(named("ex63", a="g").singular_points()) == 9
    assert len(named("ex65_shimada48").singular_points()) == 8
    assert len(named("ex64_39").singular_points()) == 1


def test_smooth_point_and_off_surface():
    X = new_surface(FERMAT, F1)
    P = ProjPoint(F1, (1, 1, 1, 0))
    assert X.contains_point(P) and is_smooth_point(X, P)
    with pytest.raises(NotOnSurface):
        is_smooth_point(X, ProjPoint(F1, (1, 0, 0, 0)))


def test_contains_line_examples():
    X = new_surface(FERMAT, F1)
    z = U.roots(F1, [1, 0, 0, 0, 1], 2)
    for _, a in z:
        for _, b in z:
            l = line_from_equations(F2, [(1, 0, F2.neg(a), 0), (0, 1, 0, F2.neg(b))])
            assert contains_line(X, l)
    assert not contains_line(X, line_from_equations(F1, [(1, 0, 0, 0), (0, 1, 0, 0)]))
    Y = named("ex31_val21")
    assert contains_line(Y, line_from_equations(F1, [(1, 0, 0, 0), (0, 1, 0, 0)]))


def test_fermat_brute_force_and_exact():
    X = new_surface(FERMAT, F1)
    b2 = lines_bruteforce(X, 2)
    ex = lines_exact(X)
    assert len(b2) == 112 and ex.complete and list(ex) == b2
    assert all(l.ctx.k in (1, 2) for l in ex)
    b1 = lines_bruteforce(X, 1)
    assert b1 == [l for l in b2 if l.ctx.k == 1]
    assert lines_bruteforce(X, 2, jobs=2) == b2


def test_zero_line_quartic():
    X = new_surface(zero_line_quartic())
    assert X.singular_points() == []
    ls = lines_exact(X)
    assert ls.complete and list(ls) == []
    assert lines_bruteforce(X, 2) == []


@pytest.mark.slow
def test_zero_line_quartic_gf81():
    assert lines_bruteforce(new_surface(zero_line_quartic()), 4, jobs=6) == []


def test_lines_through_point():
    X = new_surface(FERMAT, F1)
    ls = lines_exact(X)
    P = ProjPoint(F1, (1, 1, 1, 0))
    assert X.contains_point(P)
    through = lines_through_point(X, P)
    assert len(through) == 4
    assert sorted(through) == sorted(l for l in ls if l.contains_point(P))


def test_roots_of_constant_do_not_break_callers():
    assert U.roots(F1, [2], strict=False) == ([], [1])
    assert U.roots(F1, [2]) == []


def test_every_enumerated_line_lies_on_the_surface():
    for name in ("ex61", "ex65_shimada48"):
        X = named(name)
        ls = lines_exact(X)
        assert len(set(ls)) == len(ls)
        assert all(contains_line(X, l) for l in ls)
        assert [l for l in ls if l.ctx.k <= 2 and 2 % l.ctx.k == 0] == lines_bruteforce(X, 2)
