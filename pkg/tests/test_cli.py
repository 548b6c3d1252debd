import io
import json

import pytest

from k3lines import __version__, gf3
from k3lines.cli import main
from k3lines.report import analyze, dumps, render_text, surface_from_text

from conftest import named

FERMAT = "x0^4 + x1^4 + x2^4 + x3^4"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def fermat_reports():
    X = surface_from_text(FERMAT, "3^1")
    return [dumps(analyze(X, jobs=j, seed=0)) for j in (1, 2, 2)]


def test_reports_are_byte_stable_and_parallel_safe(fermat_reports):
    serial, par1, par2 = fermat_reports
    assert serial == par1 == par2
    rep = json.loads(serial)
    assert rep["schema"] == "k3lines.report/1" and rep["version"] == __version__
    assert "timing" not in json.dumps(rep)
    assert rep["lines"]["count"] == 112 and rep["lines"]["complete"]
    assert set(rep["graph"]["degree_sequence"]) == {30}
    assert rep["audit_summary"]["failed"] == 0


def test_cli_analyze_matches_library(fermat_reports):
    code, out = run("analyze", FERMAT, "--jobs", "2")
    assert code == 0 and out == fermat_reports[0]
    code, text = run("analyze", FERMAT, "--jobs", "1", "--format", "text", "--no-planes")
    assert code == 0 and "112" in text


def test_cli_analyze_from_file_and_catalog(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("x1^3*x2 - x1*x2^3 +\n x0^3*x3 - x0*x3^3 - x0^2*x1*x2\n")
    code, out = run("analyze", "@" + str(f), "--no-planes", "--jobs", "1")
    assert code == 0 and json.loads(out)["lines"]["count"] == 58
    code, out = run("analyze", "--catalog", "ex64_39", "--lines", "brute:2", "--no-planes",
                    "--jobs", "1")
    rep = json.loads(out)
    assert code == 0 and rep["lines"]["method"] == "brute:2"
    assert len(rep["singular_points"]) == 1


def test_cli_exit_codes(capsys):
    assert run("analyze", "x0^3 + x1^3")[0] == 2
    assert run("analyze", "x0^2*x1^2 + x2^4")[0] == 2
    code, _ = run("analyze", "x0^4 +\n (x1")
    assert code == 1
    assert "line 2, column 5" in capsys.readouterr().err
    assert run("analyze", "--catalog", "nope")[0] == 1
    assert run("analyze", "--catalog", "ex61", "--param", "a=inf")[0] == 1
    assert run("analyze")[0] == 1
    with pytest.raises(SystemExit) as e:
        run("analyze", FERMAT, "--lines", "brute:9")
    assert e.value.code == 2


def test_cli_catalog_list():
    code, out = run("catalog", "list")
    assert code == 0
    for n in ("fermat", "ex61", "ex62", "ex63", "ex64_39", "ex65_shimada48"):
        assert n + "\n" in out
    code, out = run("catalog", "list", "--format", "json")
    assert code == 0 and {d["name"] for d in json.loads(out)} >= {"fermat", "ex61"}


def test_cli_verify_quick_and_corrupt():
    code, out = run("verify", "--quick", "--only", "ex31_val21", "--only", "fermat",
                    "--jobs", "1", "--format", "text")
    assert code == 0 and "0 failed" in out
    code, out = run("verify", "--quick", "--only", "ex31_val21", "--corrupt", "ex31_val21",
                    "--jobs", "1", "--format", "json")
    rows = json.loads(out)
    assert code == 3
    assert any(r["entry"] == "ex31_val21" and r["status"] == "FAIL" for r in rows)
    assert run("verify", "--corrupt", "nope")[0] == 1


def test_cli_scan():
    code, out = run("scan", "--count", "3", "--seed", "1", "--format", "json", "--jobs", "1")
    rep = json.loads(out)
    assert code == 0 and len(rep["surfaces"]) == 3
    assert run("scan", "--count", "3", "--seed", "1", "--format", "json")[1] == out


def test_render_text_mentions_audits():
    X = named("ex31_val21")
    txt = render_text(analyze(X, jobs=1, planes=False))
    assert "audit" in txt.lower()
