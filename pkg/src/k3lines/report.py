"""The analysis pipeline and its JSON report (schema k3lines.report/1).

Reports are plain dicts built only from exact data in canonical order, so
json.dumps(report, sort_keys=True) is byte-stable for fixed input, version
and seed, whatever the number of worker processes.
"""
import json
import time
from math import lcm
from concurrent.futures import ProcessPoolExecutor

from . import __version__, gf3
from .errors import IncompleteProfile, IncompleteProfiles, ParseError
from .exact_lines import LineSet, lines_exact
from .graph import (NOT_REDUCIBLE, build_graph, classify_plane, find_triangles_stars,
                    phi_bound, plane_of, theorem_audit)
from .line_analysis import audit_bounds, line_profile
from .poly import QUART_VARS, MultiPoly, parse_poly
from .proj import Line, ProjPoint, lines_meet, pairing_vanishes
from .surface import QuarticSurface, lines_bruteforce, new_surface

SCHEMA = "k3lines.report/1"
LEMMA_PER_POINT = 8


# input --------------------------------------------------------------------------

def parse_field(text):
    """'3^k' or 'GF(3^k)' to a FieldCtx."""
    s = str(text).strip()
    if s.upper().startswith("GF(") and s.endswith(")"):
        s = s[3:-1]
    if s.isdigit():
        q = int(s)
        k = 0
        while q > 1 and q % 3 == 0:
            q //= 3
            k += 1
        if q != 1 or k == 0:
            raise ParseError("field size %s is not a power of 3" % text)
        return gf3.make_field(k)
    if not s.startswith("3^") or not s[2:].isdigit():
        raise ParseError("bad field literal %r (expected 3^k)" % text)
    return gf3.make_field(int(s[2:]))


def form_from_json(obj, field=None):
    """{field, terms: [{exps: [a,b,c,d], coeff}]} to a MultiPoly."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno, e.colno) from None
    F = parse_field(obj.get("field", field or "3^1"))
    terms = {}
    for t in obj.get("terms", []):
        e = tuple(int(x) for x in t["exps"])
        if len(e) != 4:
            raise ParseError("exponent vector %r does not have 4 entries" % (t["exps"],))
        c = F.parse(str(t.get("coeff", "1")))
        terms[e] = F.add(terms.get(e, 0), c)
    return MultiPoly(F, QUART_VARS, {e: c for e, c in terms.items() if c})


def form_to_json(form):
    F = form.ctx
    return {"field": F.name,
            "terms": [{"exps": list(e), "coeff": F.fmt(c)} for e, c in form.sorted_terms()]}


def surface_from_text(text, field="3^1", max_k=8):
    """Polynomial text or a JSON surface object to a validated surface."""
    s = text.strip()
    if s.startswith("{"):
        form = form_from_json(s, field)
    else:
        F = parse_field(field)
        if "g" in s.replace("gcd", "") and F.k == 1:
            F = gf3.make_field(2)
        form = parse_poly(s, F)
    return new_surface(form, max_k=max_k)


# lines --------------------------------------------------------------------------

def brute_k_for(X, k=2):
    """Smallest field of the form GF(3^j), j a multiple of the base degree,
    for checking against brute force at level k."""
    b = X.ctx.k
    return k if k % b == 0 else b


def find_lines(X, method="exact", max_k=8, jobs=1, seed=0):
    """(LineSet, record). method is 'exact', 'brute:k' or 'both'."""
    rec = {"method": method}
    if method == "exact":
        ls = lines_exact(X, max_k=max_k, seed=seed)
    elif method.startswith("brute"):
        k = int(method.split(":", 1)[1]) if ":" in method else brute_k_for(X)
        ls = LineSet(lines_bruteforce(X, k, jobs=jobs))
        ls.complete = False
        rec["brute_k"] = k
    elif method == "both":
        ls = lines_exact(X, max_k=max_k, seed=seed)
        k = brute_k_for(X)
        bf = lines_bruteforce(X, k, jobs=jobs)
        rational = sorted(l for l in ls if k % l.ctx.k == 0)
        rec["brute_k"] = k
        rec["brute_count"] = len(bf)
        rec["oracle_agrees"] = rational == sorted(bf)
    else:
        raise ValueError("unknown line method %r" % method)
    rec["complete"] = bool(ls.complete)
    rec["residuals"] = [{"field": F.name, "factor": [F.fmt(c) for c in r]}
                        for F, r in ls.residuals]
    return ls, rec


# profiles -----------------------------------------------------------------------

_W = {}


def _worker_init(form_text, k, rows, complete, max_k):
    F = gf3.make_field(k)
    X = QuarticSurface(parse_poly(form_text, F))
    lines = LineSet([_line_from_payload(r) for r in rows])
    lines.complete = complete
    _W.update(X=X, lines=lines, max_k=max_k)


def _line_payload(l):
    return (l.ctx.k, l.rows)


def _line_from_payload(p):
    return Line(gf3.make_field(p[0]), p[1])


def _profile_task(i):
    X, lines, max_k = _W["X"], _W["lines"], _W["max_k"]
    return _profile_entry(X, lines[i], lines, max_k)


class _Summary:
    # stands in for a LineProfile where only these fields are needed
    def __init__(self, valency, complete):
        self.valency = valency
        self.complete = complete


def _profile_entry(X, l, lines, max_k):
    p = line_profile(X, l, known_lines=lines, max_k=max_k)
    js = p.to_json()
    try:
        audits = [{"bound": name, "limit": b, "value": v, "ok": ok}
                  for name, b, v, ok in audit_bounds(p)]
    except IncompleteProfile:
        audits = None
    return js, audits


def profile_all(X, lines, max_k=8, jobs=1):
    if jobs and jobs > 1 and len(lines) > 1:
        payload = [_line_payload(l) for l in lines]
        args = (X.form.fmt(), X.ctx.k, payload, bool(getattr(lines, "complete", True)), max_k)
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                 initargs=args) as ex:
            return list(ex.map(_profile_task, range(len(lines))))
    return [_profile_entry(X, l, lines, max_k) for l in lines]


# planes ---------------------------------------------------------------------------

def _plane_key(lines):
    E, c = plane_of(lines)
    return ProjPoint(E, c)


def meeting_planes(lines):
    """Planes spanned by two meeting lines, as sorted ProjPoints of the dual space."""
    out = set()
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            a, b = lines[i], lines[j]
            if lcm(a.ctx.k, b.ctx.k) > gf3.MAX_K:
                continue  # such a plane is defined beyond GF(3^8)
            if lines_meet(a, b) is not None:
                out.add(_plane_key([a, b]))
    return sorted(out)


def _plane_tuple(P):
    return P.ctx, P.coords


def _plane_text(P):
    F = P.ctx
    terms = []
    for i, c in enumerate(P.coords):
        if c:
            cs = F.fmt(c)
            if "+" in cs:
                cs = "(%s)" % cs
            terms.append(("x%d" % i) if cs == "1" else "%s*x%d" % (cs, i))
    return " + ".join(terms) + " = 0"


# the pipeline -------------------------------------------------------------------

def analyze(X, lines="exact", max_k=8, jobs=1, seed=0, planes=True, timing=False,
            source=None):
    """Run the whole pipeline on a validated surface; returns the report dict."""
    t0 = time.perf_counter()
    clock = {}
    sing = X.singular_points(max_k)
    ls, lrec = find_lines(X, lines, max_k, jobs, seed)
    clock["lines"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    prof = profile_all(X, ls, max_k, jobs)
    clock["profiles"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    G = build_graph(X, ls, max_k)
    tri, stars, tri_free = find_triangles_stars(G)
    audits = []
    for i, (js, a) in enumerate(prof):
        if a is None:
            audits.append({"scope": "line %d" % i, "bound": "profile complete",
                           "ok": None, "note": "valency not certified"})
            continue
        for row in a:
            audits.append(dict(scope="line %d" % i, **row))
        vg, vf = js["valency"]["geometric"], js["valency"]["fiberwise"]
        if ls.complete and vg is not None:
            audits.append({"scope": "line %d" % i, "bound": "geometric = fiberwise valency",
                           "limit": vf, "value": vg, "ok": vg == vf})
    for P in sing:
        n = sum(1 for l in ls if l.contains_point(P))
        audits.append({"scope": "point %s" % P.fmt(), "bound": "lines through a singular point",
                       "limit": LEMMA_PER_POINT, "value": n,
                       "ok": n <= LEMMA_PER_POINT if ls.complete else None})

    plane_rows = []
    if planes:
        summaries = {l: _Summary(js["valency"]["fiberwise"], js["valency"]["complete"])
                     for l, (js, _) in zip(ls, prof)}
        star_planes = {_plane_key([ls[q[0]], ls[q[1]]]) for _, q in stars}
        for P in meeting_planes(ls):
            label = classify_plane(X, _plane_tuple(P), max_k)
            row = {"plane": _plane_text(P), "label": label,
                   "lines": sorted(i for i, l in enumerate(ls) if _in_plane_line(P, l))}
            if label != NOT_REDUCIBLE:
                try:
                    b = phi_bound(X, _plane_tuple(P), summaries, max_k)
                    row["phi_bound"] = b
                    if ls.complete:
                        audits.append({"scope": "plane " + row["plane"],
                                       "bound": "line count <= plane bound",
                                       "limit": b, "value": len(ls), "ok": len(ls) <= b})
                except IncompleteProfiles:
                    row["phi_bound"] = None
            if P in star_planes:
                audits.append({"scope": "plane " + row["plane"], "bound": "star plane is C0",
                               "limit": "C0", "value": label, "ok": label == "C0"})
            plane_rows.append(row)
    if ls.complete:
        for name, ok in theorem_audit(len(ls), bool(stars), tri_free):
            audits.append({"scope": "surface", "bound": name, "limit": None,
                           "value": len(ls), "ok": ok})
    clock["graph"] = time.perf_counter() - t2

    failed = [a for a in audits if a["ok"] is False]
    rep = {
        "schema": SCHEMA,
        "version": __version__,
        "seed": seed,
        "options": {"lines": lines, "max_ext": max_k},
        "surface": {
            "name": X.name,
            "params": dict(X.params),
            "field": X.ctx.name,
            "form": X.form.fmt(),
            "source": source,
        },
        "validation": dict(X.certificate or {}),
        "singular_points": [P.to_json() for P in sing],
        "lines": {
            "count": len(ls),
            **lrec,
            "items": [{"rows": l.to_json(), "equations": l.fmt(),
                       "field": l.ctx.name} for l in ls],
        },
        "profiles": [js for js, _ in prof],
        "graph": {
            "degree_sequence": G.degree_sequence(),
            "edges": len(G.edges()),
            "triangles": len(tri),
            "triangle_free": tri_free,
            "stars": [{"point": P.to_json(), "lines": list(q),
                       "plane": _plane_text(_plane_key([ls[q[0]], ls[q[1]]]))}
                      for P, q in stars],
        },
        "planes": plane_rows,
        "audits": audits,
        "audit_summary": {"checked": sum(1 for a in audits if a["ok"] is not None),
                          "failed": len(failed)},
    }
    if timing:
        rep["timing"] = {k: round(v, 3) for k, v in clock.items()}
    return rep


def _in_plane_line(P, l):
    return all(pairing_vanishes(P.ctx, P.coords, l.ctx, r) for r in l.rows)


def dumps(rep):
    return json.dumps(rep, sort_keys=True, indent=1) + "\n"


def render_text(rep):
    """Human-readable mirror of the JSON report."""
    out = []
    s = rep["surface"]
    out.append("k3lines %s  (%s)" % (rep["version"], rep["schema"]))
    out.append("surface: %s" % (s["name"] or s["form"]))
    if s["params"]:
        out.append("params: " + ", ".join("%s=%s" % kv for kv in sorted(s["params"].items())))
    out.append("field: GF(%s)" % s["field"])
    out.append("form: %s" % s["form"])
    v = rep["validation"]
    out.append("validation: degree %s, finite singular locus, rdp_unverified=%s"
               % (v.get("degree"), v.get("rdp_unverified")))
    out.append("singular points (%d): %s" % (
        len(rep["singular_points"]),
        " ".join("[" + ":".join(p) + "]" for p in rep["singular_points"]) or "-"))
    L = rep["lines"]
    out.append("lines: %d (%s, complete=%s)" % (L["count"], L["method"], L["complete"]))
    if "oracle_agrees" in L:
        out.append("  brute force GF(3^%d): %d lines, agrees=%s"
                   % (L["brute_k"], L["brute_count"], L["oracle_agrees"]))
    for i, (it, p) in enumerate(zip(L["items"], rep["profiles"])):
        pq = tuple(p["pq"])
        extra = []
        if p["ramification_symbol"]:
            extra.append(p["ramification_symbol"])
        if p["cuspidal"]:
            extra.append("cuspidal")
        out.append("  %3d %-34s GF(%s) d=%d %s %s %s pq=%s v=%s%s" % (
            i, it["equations"], it["field"], p["degree"],
            {True: "sep", False: "insep", None: "-"}[p["separable"]],
            p["kind"] or "-", p["fibration"], pq, p["valency"]["fiberwise"],
            (" [" + ", ".join(extra) + "]") if extra else ""))
    g = rep["graph"]
    out.append("graph: degrees %s" % _runs(g["degree_sequence"]))
    out.append("  edges %d, triangles %d, stars %d" % (g["edges"], g["triangles"], len(g["stars"])))
    for st in g["stars"]:
        out.append("  star at [%s] in %s: lines %s"
                   % (":".join(st["point"]), st["plane"], st["lines"]))
    if rep["planes"]:
        from collections import Counter
        cnt = Counter(r["label"] for r in rep["planes"])
        out.append("planes: " + ", ".join("%s x%d" % kv for kv in sorted(cnt.items())))
    a = rep["audit_summary"]
    out.append("audits: %d checked, %d failed" % (a["checked"], a["failed"]))
    for r in rep["audits"]:
        if r["ok"] is False:
            out.append("  FAIL %s: %s (limit %s, value %s)"
                       % (r["scope"], r["bound"], r["limit"], r["value"]))
    if "timing" in rep:
        out.append("timing: " + ", ".join("%s %.2fs" % kv for kv in sorted(rep["timing"].items())))
    return "\n".join(out) + "\n"


def _runs(seq):
    parts = []
    i = 0
    while i < len(seq):
        j = i
        while j < len(seq) and seq[j] == seq[i]:
            j += 1
        parts.append("%d^%d" % (seq[i], j - i) if j - i > 1 else str(seq[i]))
        i = j
    return " ".join(parts) if parts else "-"
