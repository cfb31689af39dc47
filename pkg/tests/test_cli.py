import json
from fractions import Fraction

from nogocheck.cli import main
from nogocheck.ontology import load_model, support_overlap


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", "--a2", "1/3", "--chi", "0,pi")
    assert code == 0
    data = json.loads(out)
    assert data["a2"] == "1/3"
    by_chi = {e["chi"]: e for e in data["sweep"]}
    assert by_chi["0"]["ports"] == {"2": "1/3", "3": "2/3", "4": "0/1"}
    assert by_chi["pi"]["ports"] == {"2": "1/3", "3": "0/1", "4": "2/3"}


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--a2", "1/2", "--chi", "0",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "chi,P3,P4,P2"
    assert lines[1] == "0.0,1.0,0.0,0.0"


def test_simulate_deterministic_output(capsys):
    _, first, _ = run(capsys, "simulate", "--a2", "1/3", "--chi", "0,pi/2,pi")
    _, second, _ = run(capsys, "simulate", "--a2", "1/3", "--chi", "0,pi/2,pi")
    assert first == second


def test_simulate_out_of_range_exits_one(capsys):
    code, _, err = run(capsys, "simulate", "--a2", "3/5")
    assert code == 1
    assert "transmission" in err


def test_simulate_bad_flags(capsys):
    assert run(capsys, "simulate", "--a2", "x/y")[0] == 1
    assert run(capsys, "simulate", "--chi", "nonsense")[0] == 1
    assert run(capsys, "simulate", "--chi", "")[0] == 1


def test_check_hroi2_exit_zero(capsys):
    code, out, err = run(capsys, "check", "hroi2", "--a2", "1/3")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "infeasible"
    assert report["solver"]["certificate"]
    assert "certificate verified" in err


def test_check_hroi2_relaxed_writes_witness(tmp_path, capsys):
    code, _, _ = run(capsys, "check", "hroi2", "--a2", "1/3",
                     "--relax", "psi_anomic", "--out", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["status"] == "feasible"
    model = load_model((tmp_path / "witness_model.json").read_text())
    assert model.space


def test_check_hroi_overlap(capsys):
    code, out, _ = run(capsys, "check", "hroi", "--a2", "1/4")
    assert code == 0
    assert json.loads(out)["max_overlap"] == "0/1"
    code, out, _ = run(capsys, "check", "hroi", "--a2", "1/4",
                       "--relax", "roi")
    assert code == 0
    assert json.loads(out)["max_overlap"] == "1/2"


def test_check_pbr(capsys):
    code, out, _ = run(capsys, "check", "pbr")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "contradiction"
    assert len(report["trace"]) > 4


def test_check_rejects_bad_relax(capsys):
    assert run(capsys, "check", "hroi2", "--relax", "gravity")[0] == 1
    assert run(capsys, "check", "pbr", "--relax", "roi")[0] == 1
    assert run(capsys, "check", "hroi", "--relax", "psi_anomic")[0] == 1


def test_model_counterexample_lift_audit_cycle(tmp_path, capsys):
    code, _, _ = run(capsys, "model", "counterexample", "--a2", "1/3",
                     "--style", "arm", "--out", str(tmp_path))
    assert code == 0
    ce_path = tmp_path / "counterexample.json"
    model = load_model(ce_path.read_text())
    assert support_overlap(model, "Psi+", "Psi0").overlap == Fraction(1, 3)

    code, out, _ = run(capsys, "model", "audit", str(ce_path),
                       "--a2", "1/3")
    assert code == 0
    audit = json.loads(out)
    assert audit["reproduces"] is True
    assert audit["assumptions"]["psi_anomic"]["status"] == "fail"

    code, _, _ = run(capsys, "model", "lift", str(ce_path),
                     "--out", str(tmp_path))
    assert code == 0
    code, out, _ = run(capsys, "model", "audit",
                       str(tmp_path / "lifted.json"), "--a2", "1/3")
    assert code == 0
    audit = json.loads(out)
    assert audit["reproduces"] is True
    assert audit["assumptions"]["psi_anomic"]["status"] == "pass"
    assert audit["assumptions"]["roi"]["status"] == "fail"
    assert audit["overlap"]["disjoint_supports"] is True


def test_model_audit_schema_error_names_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ontic_states": ["h"], "epistemics": {"P": {"h": "1/zero"}},'
                   ' "responses": [], "flags": {}}')
    code, _, err = run(capsys, "model", "audit", str(bad))
    assert code == 1
    assert "epistemics/P/h" in err


def test_model_lift_needs_file(capsys):
    assert run(capsys, "model", "lift")[0] == 1
    assert run(capsys, "model", "audit", "/does/not/exist.json")[0] == 1
