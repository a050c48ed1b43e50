import json
import math
import os
import subprocess

import pytest

import ivcl

CLI = os.environ.get("IVCL_CLI", "")
SCHEMAS = os.environ.get("IVCL_SCHEMAS", os.path.join(os.path.dirname(__file__), "..", "..", "schemas"))


def schema(name):
    with open(os.path.join(SCHEMAS, name)) as f:
        return json.load(f)


def test_version():
    assert ivcl.__version__ == "0.1.0"


def test_classify_constraints():
    r = ivcl.classify(order=3)
    assert r["version"] == "0.1.0"
    assert r["verified"]
    c = {x["letter"]: x["display"] for x in r["constraints"]}
    assert c["b1"] == "(a^2/2)'"


def test_bracket_and_normal_form():
    assert ivcl.bracket("u^2 + eps u_x", "u^3 + 3 eps u u_x + eps^2 u_xx", 3)["result"] == "pass"
    assert ivcl.bracket("u^2 + eps u_x", "u^3 + eps u_x^2", 2)["result"] == "fail"
    nf = ivcl.normal_form("u^2 + eps a u_x + eps^2 (b1 u_xx + b2 u_x^2)", 2)
    assert "u_x^2" not in nf["normal_form"]
    assert len(nf["miura"]["steps"]) == 1
    with pytest.raises(ValueError):
        ivcl.current("u^2 + + eps", 1)


def test_hierarchy_and_quasi_miura():
    f = ivcl.hierarchy("negative", 1)
    assert f["family"] == "negative" and f["exact"]
    q = ivcl.quasi_miura(2)
    assert q["terms"][0]["jets"] == "1/2 u_x^-1 u_xx"


def test_simulate_conserves_mass():
    r = ivcl.simulate(datum="v1", t_end=1.0)
    assert not r["blowup"]
    m0 = r["mass"][0]
    assert max(abs(m - m0) for m in r["mass"]) <= 1e-8 * abs(m0)
    assert max(r["constraint"]) <= 1e-9
    assert len(r["x"]) == len(r["v"]) == 256
    with pytest.raises(ValueError):
        ivcl.simulate(N=8)


def test_burgers_and_pearcey():
    assert max(abs(e) for e in ivcl.burgers_error()) <= 1e-6
    p = ivcl.pearcey(0.0, 0.0)
    assert p["P"] == pytest.approx(2 * math.gamma(1.25) / math.sqrt(2), rel=1e-10)
    assert ivcl.pearcey(1.0, -2.0)["linear_residual"] <= 1e-6
    rows = ivcl.general_solution()
    assert [r["function"] for r in rows][3] == "zero"


def test_audit_report_is_complete_and_valid():
    jsonschema = pytest.importorskip("jsonschema")
    r = ivcl.audit(samples=5)
    jsonschema.validate(r, schema("audit.schema.json"))
    ids = {e["id"]: e for e in r["entries"]}
    assert ids["classify.E1-E7"]["status"] == "unverifiable"
    assert ids["critical.0F2-general-solution"]["status"] == "measured"
    assert r["counts"]["error"] == 0


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
class TestCli:
    def run(self, *args, **kw):
        return subprocess.run([CLI, *args], capture_output=True, text=True, **kw)

    def test_schema_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema": "ivcl.eps-current/1", "current": {')
        assert self.run("bracket", str(bad), str(bad)).returncode == 3
        wrong = tmp_path / "wrong.json"
        wrong.write_text('{"schema": "ivcl.eps-current/9", "current": {}}')
        assert self.run("normal-form", str(wrong)).returncode == 3
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"N": "many"}')
        assert self.run("simulate", "--config", str(cfg), "--out", str(tmp_path / "f.csv")).returncode == 3

    def test_other_exit_codes(self, tmp_path):
        assert self.run("classify", "--order", "99").returncode == 2
        assert self.run("normal-form", str(tmp_path / "missing.json")).returncode == 4
        assert self.run("normal-form", "--expr", "u^3 + eps u_x", "--order", "2").returncode == 5

    def test_serialized_currents_round_trip(self, tmp_path):
        jsonschema = pytest.importorskip("jsonschema")
        flow = json.loads(self.run("hierarchy", "--family", "viscousCH", "--order", "3", "--json").stdout)
        doc = {"schema": "ivcl.eps-current/1", "version": "0.1.0", "current": flow["current"]}
        jsonschema.validate(doc, schema("eps-current.schema.json"))
        path = tmp_path / "w.json"
        path.write_text(json.dumps(doc))
        out = self.run("normal-form", str(path), "--json")
        assert out.returncode == 0
        nf = json.loads(out.stdout)
        assert nf["normal_form"]["current"] == flow["current"]

    def test_simulate_writes_artifacts(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"schema": "ivcl.sim-config/1", "datum": "v3", "N": 128, "t_end": 4}))
        jsonschema = pytest.importorskip("jsonschema")
        jsonschema.validate(json.loads(cfg.read_text()), schema("sim-config.schema.json"))
        out = tmp_path / "v3.csv"
        r = self.run("simulate", "--config", str(cfg), "--out", str(out))
        assert r.returncode == 6
        meta = json.loads((tmp_path / "v3.meta.json").read_text())
        assert meta["blowup"] and meta["version"] == "0.1.0"
        assert (tmp_path / "v3.diagnostics.csv").read_text().startswith("t,mass,m_mass,max_slope")
        assert out.read_text().startswith("t,x,v,P")

    def test_audit_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for p in (a, b):
            assert self.run("audit", "--samples", "5", "--out", str(p)).returncode == 0
        assert a.read_bytes() == b.read_bytes()
