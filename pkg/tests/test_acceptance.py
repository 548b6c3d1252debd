"""Acceptance criteria, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` or `python3 tests/test_acceptance.py`.
Criteria that the published data cannot meet are reported as FAIL and
marked xfail; the evidence is in the decisions ledger.
"""
import os
import sys
import time

import pytest

from k3lines import gf3
from k3lines.battery import run_battery
from k3lines.exact_lines import lines_exact
from k3lines.families import make_named
from k3lines.line_analysis import audit_bounds
from k3lines.report import analyze
from k3lines.surface import lines_bruteforce

JOBS = os.cpu_count() or 1
FIXTURES = ("ex31_val21", "ex32_val21", "ex33_deg2_v14", "ex411_qe_v21", "ex412_qe_deg2_v14")

# criteria the printed equations cannot satisfy (see the ledger)
KNOWN = {
    3: "printed second-family equation gives 40 lines at generic a",
    4: "printed third-family equation gives 8 lines at generic a",
    5: "printed 39-line surface gives 21 lines",
}

_state = {}


def battery():
    if "rows" not in _state:
        keep = {}
        t = time.time()
        _state["rows"] = run_battery(quick=False, jobs=JOBS, keep=keep)
        _state["ctx"] = keep
        _state["seconds"] = time.time() - t
    return _state["rows"], _state["ctx"]


def rows_for(pred):
    rows, _ = battery()
    return [r for r in rows if pred(r[0])]


def summarize(rows):
    bad = [r for r in rows if r[5] != "PASS"]
    detail = "%d checks" % len(rows)
    if bad:
        detail += "; failing: " + "; ".join("%s %s: expected %r, got %r" % (r[0], r[2], r[3], r[4])
                                            for r in bad)
    return not bad and bool(rows), detail


def c1():
    X, _ = make_named("fermat")
    t = time.time()
    rep = analyze(X, lines="both", jobs=JOBS)
    dt = time.time() - t
    ok, detail = summarize(rows_for(lambda tag: tag == "fermat"))
    agree = rep["lines"]["oracle_agrees"] and rep["lines"]["brute_count"] == 112
    return ok and agree and dt < 10, "%s; exact and brute force agree on 112: %s; %.1f s" % (
        detail, agree, dt)


def c2():
    return summarize(rows_for(lambda tag: tag.startswith("ex61[")))


def c3():
    return summarize(rows_for(lambda tag: tag.startswith("ex62[") and "a=1]" not in tag))


def c4():
    return summarize(rows_for(lambda tag: tag in ("ex63[a=g+1]", "ex63[a=2*g+1]", "ex63[a=g]")))


def c5():
    return summarize(rows_for(lambda tag: tag in ("ex64_39", "ex65_shimada48")))


def c6():
    return summarize(rows_for(lambda tag: tag in FIXTURES))


def c7():
    rows = rows_for(lambda tag: True)
    checked = [r for r in rows if r[2].startswith("exact = brute force")]
    ok = all(r[5] == "PASS" for r in checked)
    # surfaces of the battery without a full report: compare directly
    extra = 0
    for name in FIXTURES + ("family_C",):
        X, _ = make_named(name)
        ex = [l for l in lines_exact(X) if 2 % l.ctx.k == 0]
        bf = lines_bruteforce(X, 2, jobs=JOBS)
        ok = ok and ex == bf
        extra += 1
    return ok, "%d battery reports plus %d fixture surfaces" % (len(checked), extra)


def c8():
    _, ctxs = battery()
    checked = failed = 0
    lines = 0
    for tag, c in sorted(ctxs.items()):
        if c._report is not None:
            s = c._report["audit_summary"]
            checked += s["checked"]
            failed += s["failed"]
            lines += c._report["lines"]["count"]
        for p in c._profiles.values():
            if p.fiberwise_complete:
                for _, _, _, ok in audit_bounds(p):
                    checked += ok is not None
                    failed += ok is False
    return failed == 0 and checked > 0, "%d audits over %d report lines plus fixture lines, %d violations" % (
        checked, lines, failed)


def c9():
    import test_gf3
    import test_proj
    import test_solve
    t = time.time()
    test_solve.test_reconstruction_identity_1000_cubics()
    for k in test_gf3.KS:
        test_gf3.test_field_axioms(k)
        test_gf3.test_frobenius_laws(k)
    for a, b in test_gf3._pairs():
        if b <= 4:
            test_gf3.test_embedding_laws(a, b)
    for k, n in ((1, 130), (2, 7462)):
        test_proj.test_enumeration_count_and_uniqueness(k, n)
    from k3lines.report import dumps
    X, _ = make_named("ex65_shimada48")
    same = dumps(analyze(X, jobs=1)) == dumps(analyze(X, jobs=2))
    dt = time.time() - t
    return same and dt < 300, "reconstruction, field laws, enumeration, serial = parallel: %s; %.1f s" % (
        same, dt)


CRITERIA = [(1, c1), (2, c2), (3, c3), (4, c4), (5, c5), (6, c6), (7, c7), (8, c8), (9, c9)]


def report_line(n, ok, detail):
    return "CRITERION %d %s: %s" % (n, "PASS" if ok else "FAIL", detail)


@pytest.mark.parametrize("n,fn", CRITERIA, ids=["criterion_%d" % n for n, _ in CRITERIA])
def test_criterion(n, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + report_line(n, ok, detail))
    if not ok and n in KNOWN:
        pytest.xfail(KNOWN[n])
    assert ok, detail


if __name__ == "__main__":
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
    fails = 0
    for n, fn in CRITERIA:
        ok, detail = fn()
        fails += not ok
        print(report_line(n, ok, detail), flush=True)
    sys.exit(1 if fails else 0)
