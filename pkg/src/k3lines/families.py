"""Catalog of named quartic surfaces with their recorded facts."""
from . import gf3
from .errors import DegenerateParameter, UnknownName
from .poly import parse_poly
from .surface import new_surface

INF = "inf"


class CatalogEntry:
    def __init__(self, name, template, params=(), base_k=1, expected=None,
                 degenerate=None, source="", default=None, note="", literal_k=2):
        self.name = name
        self.template = template
        self.params = tuple(params)
        self.base_k = base_k
        self.expected = dict(expected or {})
        self.degenerate = degenerate
        self.source = source
        self.default = dict(default or {})
        self.note = note
        self.literal_k = literal_k

    def describe(self):
        return {
            "name": self.name,
            "params": list(self.params),
            "default": dict(self.default),
            "source": self.source,
            "literal_field": "3^%d" % self.literal_k,
            "note": self.note,
            "expected": self.expected,
        }


def _ex61_degenerate(ctx, a):
    if a == INF:
        return "union of three planes"
    return None


def _ex62_degenerate(ctx, a, allow_triple=False):
    if a == INF:
        return "union of two planes and a quadric surface"
    if a in (1, ctx.NEG[1]) and not allow_triple:
        return "20 lines and a triple point"
    return None


def _ex63_degenerate(ctx, a):
    if a == INF:
        return "projectively equivalent to the Fermat surface; use the fermat entry"
    if a in (0, 1, ctx.NEG[1]):
        return "union of a double plane and a quadric surface"
    return None


_PSI = "({w})*({z})*(({w})^2 + ({w})*({x}) + ({x})^2 + ({y})^2 + ({y})*({z}) + ({z})^2)"

CATALOG = {}


def _add(e):
    CATALOG[e.name] = e


_add(CatalogEntry(
    "fermat", "x0^4 + x1^4 + x2^4 + x3^4",
    source="Fermat quartic, 112 lines",
    expected={"lines": 112, "singular_points": 0, "stars": None,
              "line_profile": {"separable": False, "fibration": "quasi-elliptic",
                               "cuspidal": True, "pq": [10, 0], "valency": 30}}))
_add(CatalogEntry(
    "ex31_val21",
    "x0^4 + x0^2*x1*x2 - x1^3*x2 + x0*x1*x2^2 + x1*x2^3 + x0^2*x1*x3"
    " + x1^2*x3^2 + x0*x2*x3^2 + x0*x3^3",
    source="elliptic lines, separable line of ramification 2_1 3_3",
    expected={"line": "x0=x1=0", "degree": 3, "separable": True,
              "ramification": "2_1 3_3", "valency": 21, "kind": "second"}))
_add(CatalogEntry(
    "ex32_val21",
    "g*x0^3*x1 + g*x1^3*x2 + g*x1*x2^3 - g*x0^3*x3 + g*x0*x1*x2*x3 + g*x0*x3^3"
    " - (x0^2*x1*x2 + x1^2*x2^2 + x0*x2^2*x3 - x0^2*x3^2)",
    base_k=2,
    source="elliptic lines, separable line of ramification 3_4 (i = g in GF(9))",
    expected={"line": "x0=x1=0", "degree": 3, "separable": True,
              "ramification": "3_4", "valency": 21, "kind": "second"}))
_add(CatalogEntry(
    "ex33_deg2_v14",
    "x0^4 + x0^2*x1*x2 - x1^3*x2 + x0*x1*x2^2 + x1*x2^3 + x1^2*x3^2 + x0*x2*x3^2",
    source="elliptic line of degree 2 with valency 14",
    expected={"line": "x0=x1=0", "degree": 2, "fibration": "elliptic",
              "valency": 14, "singular_points": ["[0:0:0:1]"],
              "fibers": {"triangle": 7, "irreducible-cuspidal": 1}}))
_add(CatalogEntry(
    "ex411_qe_v21",
    "x1^4 + x0^2*x2^2 - x1^2*x2^2 - x1*x2^3 + x0*x2^2*x3 + x0*x3^3",
    source="quasi-elliptic separable line of degree 3 with valency 21",
    expected={"line": "x0=x1=0", "degree": 3, "separable": True,
              "fibration": "quasi-elliptic", "valency": 21,
              "singular_points": ["[1:0:0:0]"]}))
_add(CatalogEntry(
    "ex412_qe_deg2_v14",
    "x0^4 + x0^3*x1 + x0*x1^3 + x1*x2^3 + x0*x1*x3^2 + x1^2*x3^2 + x0*x2*x3^2",
    source="quasi-elliptic line of degree 2 with valency 14",
    expected={"line": "x0=x1=0", "degree": 2, "fibration": "quasi-elliptic",
              "valency": 14, "singular_points": ["[0:0:0:1]", "[1:2:2:0]"],
              "fibers": {"concurrent": 7, "through_second_singular_point": 1}}))
_add(CatalogEntry(
    "family_C",
    "x0*x3^3 - x1*x2^3 + x2*(x0^3 + x0*x1^2) + x3*x1^3 + x0^4 + x0*x1^3 - x1^4",
    source="normal form of quartics with a cuspidal line (sample member)",
    expected={"line": "x0=x1=0", "cuspidal": True}))
_add(CatalogEntry(
    "ex61", "x1^3*x2 - x1*x2^3 + x0^3*x3 - x0*x3^3 - a*x0^2*x1*x2",
    params=("a",), default={"a": "1"}, degenerate=_ex61_degenerate,
    source="first one-parameter family with 58 lines",
    expected={"lines": 58, "stars": 19, "star_plane": "x0=0",
              "star_valencies": [3, 3, 30, 30], "type_1_9": 54},
    note="a = 0 is projectively equivalent to the Fermat surface over GF(9): 112 lines"))
_add(CatalogEntry(
    "ex62",
    "x1^3*x2 - x1*x2^3 + x0^3*x3 - x0*x3^3 - a*x0*x1*(a*x0*x2 + a*x1*x3 + x1*x2 + x0*x3)",
    params=("a",), base_k=1, default={"a": "2*g^2+1"}, degenerate=_ex62_degenerate,
    literal_k=3, note="literals in g are read in GF(27); a = g in GF(9) is special (18 lines)",
    source="second one-parameter family with 58 lines",
    expected={"lines": 58, "stars": 10, "cuspidal_line": "x0=x1=0",
              "type_4_6": 27, "type_4_0": 12, "type_1_9": 18,
              "symmetries": [[1, 0, 3, 2], "negate x2 x3"]}))
_add(CatalogEntry(
    "ex63",
    "(a^3 + a^2 + a + 1)*(x1^3*x2 + x1*x2^3 - x0^3*x3 - x0*x3^3)"
    " - (a - 1)*(x0^2*x1*x2 - x0^2*x3^2 + x1*x2*x3^2)"
    " - (a + 1)*(x1^2*x2^2 - x0*x1^2*x3 - x0*x2^2*x3)"
    " - (a^2 - 1)*(x1*x2 + x0*x3)*(x0 + x3)*(x1 + x2)"
    " + (a^2 + 1)*x0*x1*x2*x3",
    params=("a",), default={"a": "g+1"}, degenerate=_ex63_degenerate,
    source="third one-parameter family with 58 lines",
    expected={"lines": 58, "stars": 1, "star_plane": "x0+x3=x1+x2",
              "fibration": "elliptic",
              "types": {"(7,0)": 2, "(1,9)": 2, "(3,6)": 36, "(4,6)": 18},
              "special": {"a^2=-1": {"singular_points": 9, "lines": 40}}}))
_add(CatalogEntry(
    "ex64_39",
    "x0^3*x1 + x0^2*x1^2 + x0*x1^2*x2 + x1^3*x2 + x1^2*x2^2 + x1*x2^3 + x0^3*x3"
    " - x0^2*x1*x3 + x0*x1^2*x3 + x0^2*x2*x3 + x0*x1*x2*x3 + x0*x2^2*x3 + x0*x3^3",
    source="surface with one singular point and 39 lines",
    expected={"lines": 39, "singular_points": 1}))
_add(CatalogEntry(
    "ex65_shimada48",
    _PSI.format(w="x0", x="x1", y="x2", z="x3") + " - "
    + _PSI.format(w="-x1", x="x0", y="-x3", z="x2"),
    source="reduction mod 3 of a surface of Shimada and Shioda",
    expected={"lines": 48, "singular_points": 8}))


def names():
    return sorted(CATALOG)


def get_entry(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownName("unknown catalog entry %r" % name) from None


def _param_value(text, base_k, field=None, literal_k=2):
    """Parse a parameter: 'inf', or a field literal such as 'g+1'.

    Literals mentioning g live in GF(3^literal_k) unless a field is given.
    """
    if isinstance(text, gf3.FieldElement):
        return text.ctx, text.v
    text = str(text).strip()
    if text in (INF, "oo", "infinity"):
        return None, INF
    if field is not None:
        F = field
    else:
        F = gf3.make_field(max(base_k, literal_k) if "g" in text else base_k)
    return F, F.parse(text)


def make_named(name, params=None, allow_triple=False, max_k=8, field=None):
    """Instantiate a catalog entry; returns (QuarticSurface, CatalogEntry).

    field (a FieldCtx) fixes where parameter literals are read.
    """
    e = get_entry(name)
    raw = dict(e.default)
    raw.update(params or {})
    unknown = set(raw) - set(e.params)
    if unknown:
        raise UnknownName("entry %s has no parameter %s" % (name, sorted(unknown)))
    k = e.base_k
    vals = {}
    for p in e.params:
        F, v = _param_value(raw[p], e.base_k, field, e.literal_k)
        vals[p] = (F, v)
        if F is not None:
            k = gf3.compositum(gf3.make_field(k), F).k
    ctx = gf3.make_field(k)
    subs = {}
    for p, (F, v) in vals.items():
        if v == INF:
            reason = e.degenerate(ctx, INF)
            raise DegenerateParameter("%s at %s=inf: %s" % (name, p, reason))
        subs[p] = gf3.embed(F, ctx, v)
    if e.degenerate and subs:
        a = subs.get("a")
        if name == "ex62":
            reason = e.degenerate(ctx, a, allow_triple)
        else:
            reason = e.degenerate(ctx, a)
        if reason:
            raise DegenerateParameter("%s at a=%s: %s" % (name, ctx.fmt(a), reason))
    form = parse_poly(e.template, ctx, params={p: ctx.el(v) for p, v in subs.items()})
    shown = {p: ctx.fmt(v) for p, v in subs.items()}
    X = new_surface(form, name=name, params=shown, max_k=max_k)
    return X, e
