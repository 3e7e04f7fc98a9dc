import json
import subprocess
import sys
from pathlib import Path

import pytest

from code_forge import cli
from code_forge.artifacts import dumps, roundtrip
from code_forge.decode import ListDecodingReport
from code_forge.errors import ViolationFound


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def frs(tmp_path, capsys):
    path = tmp_path / "frs.json"
    assert run(capsys, "build-frs", "--q", 16, "--s", 4, "--n", 3, "--k", 3, "--out", path)[0] == 0
    return path


@pytest.fixture
def bundle(tmp_path, capsys):
    outer, inner, graph, cert = (tmp_path / f for f in ("outer.json", "inner.json", "graph.json", "cert.json"))
    assert run(capsys, "build-outer", "--q", 2, "--k-in", 2, "--n", 4, "--K", 2, "--out", outer)[0] == 0
    assert run(capsys, "search-inner", "--q", 2, "--k-in", 2, "--s", 16, "--d", 4, "--r", 2,
               "--epsilon", "1/2", "--cert", cert, "--out", inner)[0] == 0
    assert run(capsys, "build-graph", "--kind", "complete", "--n", 4, "--out", graph)[0] == 0
    out = tmp_path / "bundle"
    code, stdout, _ = run(capsys, "compose-ael", "--outer", outer, "--inner", inner, "--graph", graph,
                          "--cert", cert, "--r", 2, "--epsilon", "1/100", "--out", out)
    assert code == 0, stdout
    return out


def test_field(capsys):
    code, out, _ = run(capsys, "field", "--q", 8)
    obj = json.loads(out)
    assert code == 0 and obj["modulus"] == [1, 0, 1, 1] and obj["q"] == 8


def test_build_frs_writes_manifest_and_roundtrips(frs):
    manifest = json.loads(Path(str(frs) + ".manifest.json").read_text())
    assert manifest["command"] == "build-frs" and manifest["seed"] == 0
    assert set(manifest["artifacts"]) == {"frs.json"}
    _, canonical = roundtrip(frs)
    assert dumps(canonical) == frs.read_text()


def test_certify_design_and_roundtrip(frs, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert run(capsys, "certify-design", "--code", frs, "--r", 2, "--out", cert)[0] == 0
    obj = json.loads(cert.read_text())
    assert obj["kind"] == "design_certificate" and obj["subspaces_scanned"] == 546
    _, canonical = roundtrip(cert, frs)
    assert dumps(canonical) == cert.read_text()


def test_graphs(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert run(capsys, "build-graph", "--kind", "random", "--n", 8, "--d", 3, "--seed", 4, "--out", path)[0] == 0
    obj = json.loads(path.read_text())
    assert obj["d"] == 3 and "spectral" in obj
    _, canonical = roundtrip(path)
    assert dumps(canonical) == path.read_text()
    assert run(capsys, "build-graph", "--kind", "random", "--n", 8)[0] == 2


def test_search_inner_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, "search-inner", "--q", 2, "--k-in", 2, "--s", 16, "--d", 4, "--r", 2,
                   "--epsilon", "1/2", "--seed", 9, "--out", p)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_compose_and_report(bundle, capsys):
    names = {p.name for p in bundle.iterdir()}
    assert {"code.json", "outer.json", "inner.json", "graph.json", "certificates.json", "report.json",
            "manifest.json"} <= names
    manifest = json.loads((bundle / "manifest.json").read_text())
    assert manifest["verdicts"] == {"hypothesis": "HOLDS", "conclusion": "PASS", "corollary": "PASS"}
    code, out, _ = run(capsys, "report", "--bundle", bundle)
    assert code == 0
    assert "HOLDS" in out and "FAIL" not in out and out.count("PASS") >= 4


def test_report_rejects_tampered_certificate(bundle, capsys):
    certs = json.loads((bundle / "certificates.json").read_text())
    certs["ael_design"]["code_sha256"] = "0" * 64
    (bundle / "certificates.json").write_text(json.dumps(certs))
    code, _, err = run(capsys, "report", "--bundle", bundle)
    assert code == 2 and "sha256" in err


def test_broken_graph_names_the_edge(tmp_path, capsys):
    path = tmp_path / "g.json"
    run(capsys, "build-graph", "--n", 3, "--out", path)
    obj = json.loads(path.read_text())
    obj["left_adj"][1][0] = obj["left_adj"][0][0]  # two edges into the same right slot
    path.write_text(json.dumps(obj))
    with pytest.raises(Exception) as info:
        roundtrip(path)
    assert type(info.value).__name__ == "ParseError" and "(1, 0)" in str(info.value)
    code, _, err = run(capsys, "compose-ael", "--outer", path, "--inner", path, "--graph", path, "--r", 1,
                       "--epsilon", "1/2", "--out", tmp_path / "x")
    assert code == 2


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"p": 2,\n  "m": }')
    code, _, err = run(capsys, "certify-design", "--code", path, "--r", 1)
    assert code == 2 and f"{path}:2:" in err


def test_certificate_for_another_code(frs, tmp_path, capsys):
    cert, other = tmp_path / "cert.json", tmp_path / "other.json"
    run(capsys, "certify-design", "--code", frs, "--r", 1, "--out", cert)
    run(capsys, "build-frs", "--q", 16, "--s", 4, "--n", 3, "--k", 2, "--out", other)
    code, _, err = run(capsys, "check-decoding", "--code", other, "--cert", cert)
    assert code == 2 and "sha256" in err


def test_budget_exit_code(frs, capsys):
    code, _, err = run(capsys, "certify-design", "--code", frs, "--r", 2, "--budget", 10)
    assert code == 2 and "budget" in err.lower()


@pytest.mark.parametrize("check,extra", [("list-decoding", ["--r", 2]),
                                         ("list-recovery", ["--ell", 2, "--epsilon", "1/2"]),
                                         ("curve", ["--ell", 1, "--r", 4, "--trials", 20])])
def test_check_decoding(tmp_path, capsys, check, extra):
    path = tmp_path / "code.json"
    run(capsys, "search-inner", "--q", 2, "--k-in", 3, "--s", 2, "--d", 4, "--r", 1, "--epsilon", 2,
        "--out", path)
    code, out, _ = run(capsys, "check-decoding", "--code", path, "--check", check, *extra)
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


def test_failed_verdict_exits_one_with_witness(tmp_path, capsys, monkeypatch):
    path = tmp_path / "code.json"
    run(capsys, "build-frs", "--q", 4, "--s", 1, "--n", 3, "--k", 2, "--out", path)

    def fake(*a, **k):
        raise ViolationFound(ListDecodingReport(2, "exhaustive", 1, 0, [0, 0, 0], [0, 1], 1), "forced")

    monkeypatch.setattr(cli, "list_decoding_check", fake)
    code, out, _ = run(capsys, "check-decoding", "--code", path, "--out", tmp_path / "w.json")
    assert code == 1
    payload = json.loads((tmp_path / "w.json").read_text())
    assert payload["verdict"] == "FAIL" and payload["witness"]["codewords"] == [0, 1]


def test_verify_lemmas(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--trials", 40, "--seed", 1)
    suites = json.loads(out)["suites"]
    assert code == 0 and all(s["verdict"] == "PASS" for s in suites) and len(suites) == 4


def test_plan_params(capsys):
    code, out, _ = run(capsys, "plan-params", "--ell", 2, "--R", "1/2", "--epsilon", "1/2")
    obj = json.loads(out)
    assert code == 0 and obj["L"] == 4 and obj["r"] == 5
    assert run(capsys, "plan-params", "--ell", 1, "--R", "1/2", "--epsilon", "1/2")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "field")[0] == 2
    assert run(capsys, "field", "--q", 6)[0] == 2
    assert run(capsys, "plan-params", "--ell", 2, "--R", "x", "--epsilon", "1/2")[0] == 2
    assert run(capsys, "--version")[0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "code_forge", "field", "--q", "9"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["p"] == 3


def test_out_into_new_directory(tmp_path, capsys):
    path = tmp_path / "a" / "b" / "field.json"
    assert run(capsys, "field", "--q", 4, "--out", path)[0] == 0
    assert json.loads(path.read_text())["m"] == 2
