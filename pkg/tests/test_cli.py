import json

from qmforms.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_convolve_w(capsys):
    code, out = run(capsys, "convolve", "--kind", "W", "--N", "2", "--n", "3")
    assert code == 0
    assert "W_2(3) = 1" in out


def test_convolve_range_jsonl(capsys):
    code, out = run(capsys, "convolve", "--kind", "W", "--N", "1", "--n", "1:4",
                    "--format", "jsonl")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["value"] for r in rows] == [0, 1, 6, 17]


def test_convolve_smod(capsys):
    code, out = run(capsys, "convolve", "--kind", "Smod", "--a", "1", "--b", "3",
                    "--n", "2")
    assert code == 0 and "= 1" in out


def test_expand(capsys):
    code, out = run(capsys, "expand", "E(4)", "--prec", "3")
    assert code == 0
    assert "240*q" in out


def test_expand_jsonl_roundtrip(capsys):
    code, out = run(capsys, "expand", "phi(1,5)", "--prec", "4", "--format", "jsonl")
    rec = json.loads(out)
    assert rec["coeffs"] == ["1", "6", "18", "24", "42"]
    assert rec["field"] == "Q"


def test_basis(capsys):
    code, out = run(capsys, "basis", "--weight", "4", "--level", "6", "--prec", "64")
    assert code == 0
    assert "dimension 5" in out


def test_newforms(capsys):
    code, out = run(capsys, "newforms", "--weight", "4", "--level", "14", "--prec", "64")
    assert code == 0
    assert "4.14.1" in out and "4.14.2" in out


def test_linearize(capsys):
    code, out = run(capsys, "linearize", "E(2)*E(2,2)", "--level", "2", "--prec", "64")
    assert code == 0
    assert "1/5 * E(4)" in out and "6 * D(E(2))" in out


def test_tables_check(capsys):
    code, out = run(capsys, "tables", "--name", "tau_4_10", "--check", "--prec", "64")
    assert code == 0
    assert "tau_4_10: 22/22 match" in out


def test_verify_pass_and_exit_codes(capsys):
    code, out = run(capsys, "verify", "--id", "w3", "--nmax", "40", "--prec", "64")
    assert code == 0
    assert "w3: 40/40 pass" in out
    code, _ = run(capsys, "verify", "--id", "nope", "--nmax", "10")
    assert code == 2


def test_verify_jsonl_schema(capsys):
    code, out = run(capsys, "verify", "--id", "w2", "--nmax", "30", "--prec", "64",
                    "--format", "jsonl")
    rec = json.loads(out)
    assert rec == {"id": "w2", "n_max": 30, "passed": 30, "failures": []}


def test_usage_error(capsys):
    code = main(["convolve", "--kind", "W", "--n", "3"])
    assert code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("precision=64\nformat=jsonl\n")
    code, out = run(capsys, "--config", str(cfg), "verify", "--id", "w1", "--nmax", "20")
    assert code == 0
    assert json.loads(out)["passed"] == 20


def test_verify_all_deterministic(capsys):
    args = ("verify", "--all", "--nmax", "12", "--prec", "64", "--format", "jsonl")
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert len(out1.splitlines()) == 27


def test_csv_output(capsys):
    code, out = run(capsys, "convolve", "--kind", "W", "--N", "3", "--n", "4:6",
                    "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("kind,n,value")
    assert len(lines) == 4
