"""The verification battery: every catalog entry against its recorded facts."""
from collections import Counter

from . import gf3
from .errors import DegenerateParameter, K3LinesError
from .families import get_entry, make_named
from .line_analysis import line_profile
from .poly import parse_poly
from .proj import ProjPoint, line_from_equations
from .report import _plane_text, analyze
from .surface import new_surface

STD_LINE = "x0=x1=0"


class Case:
    """One instantiation of a catalog entry with its checks.

    checks: [(label, expected, getter, quick)]; getter(ctx) -> actual.
    """

    def __init__(self, entry, params=None, field=None, checks=(), degenerate=None):
        self.entry = entry
        self.params = dict(params or {})
        self.field = field
        self.checks = list(checks)
        self.degenerate = degenerate

    @property
    def tag(self):
        if not self.params:
            return self.entry
        return "%s[%s]" % (self.entry, ",".join("%s=%s" % kv for kv in sorted(self.params.items())))


class _Ctx:
    # lazily computed data shared by the checks of one case
    def __init__(self, X, quick, jobs, seed):
        self.X = X
        self.quick = quick
        self.jobs = jobs
        self.seed = seed
        self._report = None
        self._profiles = {}

    @property
    def report(self):
        if self._report is None:
            method = "brute:2" if self.quick else "both"
            self._report = analyze(self.X, lines=method, jobs=self.jobs, seed=self.seed,
                                   planes=not self.quick)
        return self._report

    def profile(self, eqs=STD_LINE):
        if eqs not in self._profiles:
            l = parse_line(self.X.ctx, eqs)
            self._profiles[eqs] = line_profile(self.X, l)
        return self._profiles[eqs]

    def report_profile(self, eqs):
        l = parse_line(self.X.ctx, eqs)
        for it, p in zip(self.report["lines"]["items"], self.report["profiles"]):
            if it["rows"] == l.to_json():
                return p
        return None

    def types(self):
        return Counter("(%d,%d)" % tuple(p["pq"]) for p in self.report["profiles"])


def parse_linear(F, text):
    """'x0+x3=x1+x2' to a coefficient vector over F."""
    lhs, _, rhs = text.partition("=")
    p = parse_poly("(%s) - (%s)" % (lhs, rhs or "0"), F)
    return tuple(p.coeff(tuple(int(i == j) for j in range(4))) for i in range(4))


def parse_line(F, text):
    """'x0=x1=0' or 'x0=0, x1=x2' to a Line over F."""
    if "," in text:
        eqs = [parse_linear(F, part) for part in text.split(",")]
    else:
        parts = text.split("=")
        eqs = [parse_linear(F, "%s=%s" % (p, parts[-1])) for p in parts[:-1]]
    return line_from_equations(F, eqs)


def plane_text(F, text):
    return _plane_text(ProjPoint(F, parse_linear(F, text)))


def _star_valencies(ctx, plane):
    want = plane_text(ctx.X.ctx, plane)
    rep = ctx.report
    out = []
    for st in rep["graph"]["stars"]:
        if st["plane"] == want:
            ps = [rep["profiles"][i] for i in st["lines"]]
            out.append(sorted((p["valency"]["fiberwise"], p["cuspidal"]) for p in ps))
    return out


def _symmetry(ctx, perm=None, negate=()):
    """Scalar c with f(sigma x) = c f(x), or None if sigma does not preserve X."""
    f = ctx.X.form
    F = f.ctx
    M = [[0] * 4 for _ in range(4)]
    for i in range(4):
        j = perm[i] if perm else i
        M[i][j] = F.NEG[1] if i in negate else 1
    g = f.linear_substitute([tuple(r) for r in M])
    e, c = f.sorted_terms()[0]
    s = F.div(g.coeff(e), c)
    return F.fmt(s) if g == f.scale(s) else None


def _fiber_summary(p):
    c = Counter(f.splitting for f in p.fibers)
    c.update(f.splitting for f in p.cuspidal_fibers)
    return dict(sorted(c.items()))


def _std_checks(expected, cite_fibers=None):
    out = [
        ("line %s degree" % STD_LINE, expected["degree"], lambda c: c.profile().degree, True),
    ]
    if "separable" in expected:
        out.append(("separable", expected["separable"], lambda c: c.profile().separable, True))
    if "ramification" in expected:
        out.append(("ramification", expected["ramification"],
                    lambda c: c.profile().ramification_symbol, True))
    if "kind" in expected:
        out.append(("kind", expected["kind"], lambda c: c.profile().kind, True))
    if "fibration" in expected:
        out.append(("fibration", expected["fibration"], lambda c: c.profile().fibration, True))
    if "valency" in expected:
        out.append(("valency", expected["valency"], lambda c: c.profile().valency, True))
    if "singular_points" in expected:
        out.append(("singular points", expected["singular_points"],
                    lambda c: [P.fmt() for P in c.X.singular_points()], True))
    if cite_fibers:
        out.append(("fiber splitting types", cite_fibers, lambda c: _fiber_summary(c.profile()), True))
    return out


def _fermat_profile_ok(c):
    want = {"separable": False, "fibration": "quasi-elliptic", "cuspidal": True,
            "pq": [10, 0]}
    bad = 0
    for p in c.report["profiles"]:
        if any(p[k] != v for k, v in want.items()) or p["valency"]["fiberwise"] != 30:
            bad += 1
    return bad


def _oracle(c):
    L = c.report["lines"]
    return L.get("oracle_agrees", "n/a")


def build_cases():
    E = {n: get_entry(n).expected for n in (
        "ex31_val21", "ex32_val21", "ex33_deg2_v14", "ex411_qe_v21", "ex412_qe_deg2_v14")}
    cases = [
        Case("fermat", checks=[
            ("lines", 112, lambda c: c.report["lines"]["count"], True),
            ("singular points", 0, lambda c: len(c.X.singular_points()), True),
            ("lines off the expected profile", 0, _fermat_profile_ok, True),
            ("graph regular of degree", [30], lambda c: sorted(set(c.report["graph"]["degree_sequence"])), True),
            ("exact = brute force over GF(9)", True, _oracle, False),
        ]),
        Case("ex31_val21", checks=_std_checks(E["ex31_val21"])),
        Case("ex32_val21", checks=_std_checks(E["ex32_val21"])),
        Case("ex33_deg2_v14", checks=_std_checks(
            E["ex33_deg2_v14"], {"irreducible-cuspidal": 1, "three-lines-triangle": 7})),
        Case("ex411_qe_v21", checks=_std_checks(E["ex411_qe_v21"])),
        Case("ex412_qe_deg2_v14", checks=_std_checks(
            E["ex412_qe_deg2_v14"], {"irreducible-cuspidal": 2, "three-lines-concurrent": 7}) + [
            ("cuspidal fiber through [1:2:2:0]", True,
             lambda c: any(["1", "2", "2", "0"] in f.to_json()["singular_points"]
                           for f in c.profile().cuspidal_fibers), True)]),
        Case("family_C", checks=[
            ("line %s cuspidal" % STD_LINE, True, lambda c: c.profile().cuspidal, True),
            ("pq", (10, 0), lambda c: c.profile().pq, True),
        ]),
    ]
    for a in ("1", "g"):
        cases.append(Case("ex61", {"a": a}, checks=[
            ("lines", 58, lambda c: c.report["lines"]["count"], False),
            ("stars", 19, lambda c: len(c.report["graph"]["stars"]), False),
            ("star x0=0: (valency, cuspidal)",
             [[(3, False), (3, False), (30, True), (30, True)]],
             lambda c: [[tuple(x) for x in s] for s in _star_valencies(c, "x0=0")], False),
            ("lines of type (1,9)", 54, lambda c: c.types()["(1,9)"], False),
            ("exact = brute force over GF(9)", True, _oracle, False),
        ]))
    for a, F in (("2*g^2+1", 3), ("g+1", 2)):
        cases.append(Case("ex62", {"a": a}, field=F, checks=[
            ("lines", 58, lambda c: c.report["lines"]["count"], False),
            ("stars", 10, lambda c: len(c.report["graph"]["stars"]), False),
            ("line %s cuspidal" % STD_LINE, True, lambda c: c.profile().cuspidal, True),
            ("lines of type (4,6)", 27, lambda c: c.types()["(4,6)"], False),
            ("line x2=x3=0 type", (4, 6), lambda c: c.profile("x2=x3=0").pq, True),
            ("[x1:x0:x3:x2] maps f to c*f, c =", "1",
             lambda c: _symmetry(c, perm=(1, 0, 3, 2)), True),
            ("[x0:x1:-x2:-x3] preserves the surface", True,
             lambda c: _symmetry(c, negate=(2, 3)) is not None, True),
            ("exact = brute force", True, _oracle, False),
        ]))
    for a in ("g+1", "2*g+1"):
        cases.append(Case("ex63", {"a": a}, checks=[
            ("lines", 58, lambda c: c.report["lines"]["count"], False),
            ("stars in x0+x3=x1+x2", 1,
             lambda c: len(_star_valencies(c, "x0+x3=x1+x2")), False),
            ("all lines elliptic", True,
             lambda c: all(p["fibration"] == "elliptic" for p in c.report["profiles"]), False),
            ("types", {"(1,9)": 2, "(3,6)": 36, "(4,6)": 18, "(7,0)": 2},
             lambda c: dict(sorted(c.types().items())), False),
            ("exact = brute force over GF(9)", True, _oracle, False),
        ]))
    cases.append(Case("ex63", {"a": "g"}, checks=[
        ("singular points", 9, lambda c: len(c.X.singular_points()), True),
        ("lines", 40, lambda c: c.report["lines"]["count"], False),
        ("stars in x0+x3=x1+x2", 1,
         lambda c: len(_star_valencies(c, "x0+x3=x1+x2")), False),
        ("exact = brute force over GF(9)", True, _oracle, False),
    ]))
    cases.append(Case("ex64_39", checks=[
        ("singular points", 1, lambda c: len(c.X.singular_points()), True),
        ("lines", 39, lambda c: c.report["lines"]["count"], False),
        ("exact = brute force over GF(9)", True, _oracle, False),
    ]))
    cases.append(Case("ex65_shimada48", checks=[
        ("singular points", 8, lambda c: len(c.X.singular_points()), True),
        ("lines", 48, lambda c: c.report["lines"]["count"], False),
        ("exact = brute force over GF(9)", True, _oracle, False),
    ]))
    for name, a, reason in (("ex61", "inf", "union of three planes"),
                            ("ex62", "1", "20 lines and a triple point"),
                            ("ex63", "0", "union of a double plane and a quadric surface"),
                            ("ex63", "inf", "projectively equivalent to the Fermat surface")):
        cases.append(Case(name, {"a": a}, degenerate=reason))
    return cases


def _corrupted(X):
    f = X.form
    F = f.ctx
    bump = parse_poly("x0*x1*x2*x3", F)
    return new_surface(f + bump, name=X.name, params=X.params)


def run_case(case, quick=False, jobs=1, seed=0, corrupt=None, keep=None):
    """Rows (tag, source, check, expected, actual, status) for one case.

    keep, if a dict, receives the per-case data under the case tag.
    """
    entry = get_entry(case.entry)
    src = entry.source
    field = gf3.make_field(case.field) if case.field else None
    if case.degenerate:
        try:
            make_named(case.entry, case.params, field=field)
            got = "accepted"
        except DegenerateParameter as e:
            got = str(e)
        ok = case.degenerate in got
        return [(case.tag, src, "rejected as degenerate", case.degenerate, got,
                 "PASS" if ok else "FAIL")]
    rows = []
    try:
        X, _ = make_named(case.entry, case.params, field=field)
        if corrupt == case.entry:
            X = _corrupted(X)
    except K3LinesError as e:
        return [(case.tag, src, "instantiate", "valid surface", "%s: %s" % (type(e).__name__, e),
                 "FAIL")]
    ctx = _Ctx(X, quick, jobs, seed)
    if keep is not None:
        keep[case.tag] = ctx
    for label, want, get, q in case.checks:
        if quick and not q:
            continue
        try:
            got = get(ctx)
        except K3LinesError as e:
            got = "%s: %s" % (type(e).__name__, e)
        if isinstance(want, tuple) and isinstance(got, list):
            got = tuple(got)
        rows.append((case.tag, src, label, want, got, "PASS" if got == want else "FAIL"))
    return rows


def run_battery(quick=False, jobs=1, seed=0, corrupt=None, only=None, keep=None):
    rows = []
    for case in build_cases():
        if only and case.entry not in only:
            continue
        rows.extend(run_case(case, quick, jobs, seed, corrupt, keep))
    return rows


def format_rows(rows):
    def cell(x):
        return x if isinstance(x, str) else repr(x)
    head = ("entry", "source", "check", "expected", "actual", "status")
    body = [(r[0], r[1], r[2], cell(r[3]), cell(r[4]), r[5]) for r in rows]
    widths = [min(48, max(len(h), *(len(b[i]) for b in body))) for i, h in enumerate(head)] \
        if body else [len(h) for h in head]
    out = []
    fmt = "  ".join("%%-%ds" % w for w in widths)
    out.append(fmt % head)
    for b in body:
        out.append(fmt % tuple(x if len(x) <= 48 else x[:45] + "..." for x in b))
    n_fail = sum(1 for r in rows if r[5] == "FAIL")
    out.append("%d checks, %d failed" % (len(rows), n_fail))
    return "\n".join(out) + "\n"
