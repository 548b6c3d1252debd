import random

import pytest

from k3lines import gf3
from k3lines.errors import IncompleteProfile, InseparableLine, LineNotOnSurface
from k3lines.exact_lines import lines_exact
from k3lines.line_analysis import (PHI_SLOTS, audit_bounds, cuspidal_test,
                                   degree_and_separability, line_profile, line_resultant,
                                   normalize_to_standard, pencil_forms, quasi_elliptic_test,
                                   ramification_profile, reducible_fibers)
from k3lines.poly import parse_poly
from k3lines.proj import ProjMap, line_from_equations, rref
from k3lines.surface import new_surface

from conftest import named

F1, F2 = gf3.make_field(1), gf3.make_field(2)
L0 = line_from_equations(F1, [(1, 0, 0, 0), (0, 1, 0, 0)])
FERMAT = new_surface("x0^4 + x1^4 + x2^4 + x3^4", F1)

# a cusp-free perturbation of the family normal form: only the s^8 slot of phi
LEMMA_FIXTURE = "x0*x3^3 - x1*x2^3 + x2*(x0^3 + x0^2*x1 + x1^3)"
LEMMA_LINE = line_from_equations(F1, [(1, 0, 0, 0), (0, 1, 2, 0)])
# alpha = beta = x2^3, so the line has degree 0
DEGREE_ZERO = ("x0^3*x3 - x0^2*x1^2 + x0^2*x2^2 + x0*x1*x2*x3 + x0*x2^3 + x1^3*x3"
               " + x1*x2^3")
# seeded search result: a first-kind line of degree 3
FIRST_KIND = ("-x0^4-x0^3*x2+x0^3*x3+x0^2*x1^2-x0^2*x1*x2-x0^2*x2^2+x0^2*x3^2"
              "-x0*x1*x2^2-x0*x1*x2*x3+x0*x2^3-x0*x2^2*x3+x0*x3^3-x1^4-x1^3*x3"
              "+x1^2*x2*x3+x1^2*x3^2-x1*x2^3+x1*x2*x3^2")


def chart_of(X, l=L0):
    return normalize_to_standard(X, l)


def test_normalize_standard_line_is_identity():
    X = named("ex31_val21")
    ch = chart_of(X)
    assert ch.form == X.form
    for l in lines_exact(FERMAT)[::9]:
        ch = chart_of(FERMAT, l)
        assert not any(e[0] == 0 and e[1] == 0 for e in ch.form.terms)
    with pytest.raises(LineNotOnSurface):
        normalize_to_standard(FERMAT, L0)


def test_pencil_forms_examples():
    g, a, b = pencil_forms(chart_of(named("ex31_val21")))
    # alpha = x2*x3^2 + x3^3 and beta = x2^3, coefficient i at x2^i x3^(3-i)
    assert a == (3, [1, 1, 0, 0]) and b == (3, [0, 0, 0, 1])
    # the pencil restricted to the line is t*alpha + beta
    on_line = g.specialize("x1", 0)
    assert on_line == parse_poly("t*(x2*x3^2 + x3^3) + x2^3", F1, g.vars)
    g, a, b = pencil_forms(chart_of(named("family_C")))
    assert a == (3, [1, 0, 0, 0])


def test_degree_and_separability_examples():
    info = degree_and_separability(F1, (3, [1, 1, 0, 0]), (3, [0, 0, 0, 1]))
    assert (info.degree, info.separable) == (3, True)
    info = degree_and_separability(F1, (3, [1, 0, 0, 0]), (3, [0, 0, 0, 2]))
    assert (info.degree, info.separable) == (3, False)
    info = degree_and_separability(F1, (3, [1, 2, 0, 1]), (3, [1, 2, 0, 1]))
    assert info.degree == 0


@pytest.mark.parametrize("name,symbol", [("ex31_val21", "2_1 3_3"), ("ex32_val21", "3_4"),
                                         ("ex33_deg2_v14", "2_1^2")])
def test_ramification_examples(name, symbol):
    p = line_profile(named(name), L0)
    assert p.ramification_symbol == symbol
    # Riemann-Hurwitz: total wild plus tame order is 2d - 2 on P^1
    assert sum(m for _, _, m in p.ramification) == 2 * p.degree - 2


def test_ramification_needs_separable_line():
    with pytest.raises(InseparableLine):
        ramification_profile(chart_of(named("family_C")))


def test_kind_examples():
    assert line_resultant(chart_of(named("ex31_val21")))[2] == "second"
    l = lines_exact(FERMAT)[0]
    assert line_resultant(chart_of(FERMAT, l))[2] == "second"
    X = new_surface(FIRST_KIND, F1)
    p = line_profile(X, L0)
    assert p.kind == "first" and p.degree == 3 and p.valency <= 18


def _stabiliser_maps(F, rng, n):
    # maps preserving x0 = x1 = 0: new (x0, x1) span old (x0, x1)
    out = []
    while len(out) < n:
        M = [[rng.randrange(F.q) for _ in range(4)] for _ in range(4)]
        M[0][2] = M[0][3] = M[1][2] = M[1][3] = 0
        if len(rref(F, M)[1]) == 4:
            out.append(ProjMap(F, M))
    return out


@pytest.mark.parametrize("text", [FIRST_KIND, "ex31_val21", "ex411_qe_v21"])
def test_kind_invariant_under_stabiliser(text):
    X = named(text) if text.startswith("ex") else new_surface(text, F1)
    want = line_resultant(chart_of(X))[2]
    rng = random.Random(len(text))
    for T in _stabiliser_maps(F1, rng, 10):
        Y = new_surface(T.apply_form(X.form))
        assert T.apply_line(L0) == L0
        assert line_resultant(chart_of(Y))[2] == want


def test_cuspidal_examples():
    c = cuspidal_test(chart_of(named("family_C")))
    assert c.cuspidal and c.family_C and not any(c.phi)
    X = new_surface(LEMMA_FIXTURE, F1)
    c = cuspidal_test(chart_of(X, LEMMA_LINE))
    assert not c.cuspidal
    assert c.phi == [1] + [0] * (len(PHI_SLOTS) - 1)
    c = cuspidal_test(chart_of(named("ex31_val21")))
    assert c.phi is None and not c.cuspidal


def test_lemma_fixture_single_three_line_fiber():
    p = line_profile(new_surface(LEMMA_FIXTURE, F1), LEMMA_LINE)
    assert p.degree == 3 and not p.separable
    assert p.pq == (1, 0) and p.valency == 3
    # the one three-line fiber, then a cuspidal fiber through each singular point
    assert (p.fibers[0].t_text(), p.fibers[0].config_label) == ("0", "IV_3")
    rest = p.fibers[1:]
    assert len(rest) == 9 and {f.config_label for f in rest} == {"IV_0"}
    pts = [P for f in rest for P in f.singular_points]
    assert sorted(pts) == new_surface(LEMMA_FIXTURE, F1).singular_points()


def test_quasi_elliptic_examples():
    for l in lines_exact(FERMAT)[::28]:
        assert quasi_elliptic_test(chart_of(FERMAT, l)) == "quasi-elliptic"
    p = line_profile(named("ex412_qe_deg2_v14"), L0)
    assert (p.fibration, p.degree, p.valency) == ("quasi-elliptic", 2, 14)
    assert quasi_elliptic_test(chart_of(named("ex31_val21"))) == "elliptic"


def test_fibers_examples():
    p = line_profile(named("ex33_deg2_v14"), L0)
    assert [f.splitting for f in p.fibers] == ["three-lines-triangle"] * 7
    assert [f.splitting for f in p.cuspidal_fibers] == ["irreducible-cuspidal"]
    assert p.valency == 14
    l = lines_exact(FERMAT)[0]
    fs = reducible_fibers(chart_of(FERMAT, l))
    assert len(fs) == 10
    assert all(f.splitting == "three-lines-concurrent" and f.local_valency == 3 for f in fs)


def test_fermat_profiles():
    ls = lines_exact(FERMAT)
    for l in ls[::7]:
        p = line_profile(FERMAT, l, ls)
        assert (p.degree, p.separable, p.fibration, p.cuspidal) == (3, False, "quasi-elliptic", True)
        assert p.pq == (10, 0) and p.valency == 30 == p.valency_geometric
        assert all(ok for *_, ok in audit_bounds(p) if ok is not None)


def _bounds(p):
    return {name: b for name, b, _, _ in audit_bounds(p)}


def test_audit_examples():
    p = line_profile(new_surface(FIRST_KIND, F1), L0)
    assert _bounds(p)["first kind: v <= 3 + 5d"] == 18
    assert _bounds(line_profile(named("family_C"), L0))["quasi-elliptic degree 3 cuspidal"] == 30
    p = line_profile(new_surface(DEGREE_ZERO, F1), L0)
    assert p.degree == 0 and _bounds(p)["degree 0"] == 2
    for name in ("ex31_val21", "ex32_val21", "ex33_deg2_v14", "ex411_qe_v21",
                 "ex412_qe_deg2_v14"):
        assert all(ok is not False for *_, ok in audit_bounds(line_profile(named(name), L0)))


def test_audit_refuses_uncertified_profile():
    p = line_profile(named("ex31_val21"), L0)
    p.fiberwise_complete = False
    with pytest.raises(IncompleteProfile):
        audit_bounds(p)


def test_geometric_valency_matches_fiberwise():
    X = named("ex61")
    ls = lines_exact(X)
    for l in ls[::6]:
        p = line_profile(X, l, ls)
        assert p.valency == p.valency_geometric
