import pytest

from k3lines import gf3
from k3lines.battery import _symmetry, parse_line
from k3lines.errors import DegenerateParameter, UnknownName
from k3lines.exact_lines import lines_exact
from k3lines.families import CATALOG, make_named, names
from k3lines.surface import contains_line


def test_catalog_entries_instantiate():
    for n in names():
        X, e = make_named(n)
        assert X.form.degree() == 4
        assert e.source and e.expected
        d = e.describe()
        assert d["name"] == n and d["literal_field"].startswith("3^")


@pytest.mark.parametrize("name,a,reason", [
    ("ex61", "inf", "union of three planes"),
    ("ex62", "1", "20 lines and a triple point"),
    ("ex62", "2", "20 lines and a triple point"),
    ("ex62", "inf", "union of two planes and a quadric surface"),
    ("ex63", "0", "union of a double plane and a quadric surface"),
    ("ex63", "inf", "projectively equivalent to the Fermat surface"),
])
def test_degenerate_parameters(name, a, reason):
    with pytest.raises(DegenerateParameter) as e:
        make_named(name, {"a": a})
    assert reason in str(e.value)


def test_triple_point_member_accepted_on_request():
    # the printed equation is smooth at a = 1; see the ledger
    X, _ = make_named("ex62", {"a": "1"}, allow_triple=True)
    assert X.singular_points() == [] and not X.certificate["rdp_unverified"]


def test_unknown_names():
    with pytest.raises(UnknownName):
        make_named("nope")
    with pytest.raises(UnknownName):
        make_named("fermat", {"a": "1"})


def test_parameter_fields():
    assert make_named("ex61", {"a": "g"})[0].ctx.k == 2
    assert make_named("ex61", {"a": "1"})[0].ctx.k == 1
    # literals in g for the second family are read in GF(27) unless a field is given
    assert make_named("ex62", {"a": "g"})[0].ctx.k == 3
    assert make_named("ex62", {"a": "g"}, field=gf3.make_field(2))[0].ctx.k == 2


def test_first_family_at_zero_has_112_lines():
    X, _ = make_named("ex61", {"a": "0"})
    ls = lines_exact(X)
    assert ls.complete and len(ls) == 112


class _C:
    def __init__(self, X):
        self.X = X


@pytest.mark.parametrize("a,k", [("2*g^2+1", 3), ("g+1", 2), ("g", 2)])
def test_second_family_symmetries(a, k):
    X, _ = make_named("ex62", {"a": a}, field=gf3.make_field(k))
    assert _symmetry(_C(X), perm=(1, 0, 3, 2)) == "1"
    assert _symmetry(_C(X), negate=(2, 3)) is not None


def test_standard_lines_on_family_members():
    for n in ("ex31_val21", "ex32_val21", "ex33_deg2_v14", "ex411_qe_v21",
              "ex412_qe_deg2_v14", "family_C", "ex61", "ex62", "ex63"):
        X, _ = make_named(n)
        assert contains_line(X, parse_line(X.ctx, "x0=x1=0"))
    X, _ = make_named("ex62")
    assert contains_line(X, parse_line(X.ctx, "x2=x3=0"))
