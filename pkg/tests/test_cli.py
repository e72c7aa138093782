import io
import json

from oneclean import cli
from oneclean.circuit import parse_instance
from oneclean.simulate import dqc1_exact

YES_HARD = """\
wires 3
h 1
t 1
h 1
h 2
t 2
h 2
ccx 1 2 0
"""

NO_HARD = "wires 3\nx 0\n" + YES_HARD.split("\n", 1)[1]

GAP = "wires 3\nh 0\n"

INSTANCE = """\
wires 3
mixed 2
measure 1
h 0
cx 0 1
"""


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_simulate_exact(tmp_path, capsys):
    path = write(tmp_path, "inst.qc", INSTANCE)
    code, out, err = run(["simulate", "--in", path, "--exact"], capsys)
    assert code == 0 and err == ""
    rec = json.loads(out)
    assert rec["kind"] == "exact"
    assert rec["m"] == 1
    assert set(rec["p"]) == {"0", "1"}
    assert abs(sum(rec["p"].values()) - 1.0) <= 1e-12


def test_simulate_shots(tmp_path, capsys):
    path = write(tmp_path, "inst.qc", INSTANCE)
    code, out, _ = run(["simulate", "--in", path, "--shots", "500",
                        "--seed", "3"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["kind"] == "empirical"
    assert rec["shots"] == 500 and rec["seed"] == 3


def test_simulate_density_backend_agrees(tmp_path, capsys):
    path = write(tmp_path, "inst.qc", INSTANCE)
    _, out_e, _ = run(["simulate", "--in", path, "--exact"], capsys)
    _, out_d, _ = run(["simulate", "--in", path, "--exact",
                       "--backend", "density"], capsys)
    pe = json.loads(out_e)["p"]
    pd = json.loads(out_d)["p"]
    assert all(abs(pe[k] - pd[k]) <= 1e-10 for k in pe)


def test_simulate_stdin(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(INSTANCE))
    code, out, _ = run(["simulate", "--in", "-", "--exact"], capsys)
    assert code == 0 and json.loads(out)["kind"] == "exact"


def test_simulate_repeat_byte_identical(tmp_path, capsys):
    path = write(tmp_path, "inst.qc", INSTANCE)
    argv = ["simulate", "--in", path, "--shots", "1000", "--seed", "9"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    assert first.endswith("\n") and first.count("\n") == 1


def test_simulate_shots_conflicts(tmp_path, capsys):
    path = write(tmp_path, "inst.qc", INSTANCE)
    code, _, err = run(["simulate", "--in", path, "--shots", "10",
                        "--mixed-clean"], capsys)
    assert code == 1 and "error" in err
    code, _, _ = run(["simulate", "--in", path, "--shots", "10",
                      "--backend", "density"], capsys)
    assert code == 1
    # --exact and --shots are mutually exclusive
    code, _, _ = run(["simulate", "--in", path, "--exact", "--shots", "10"],
                     capsys)
    assert code == 1


def test_simulate_cap_exit_code(tmp_path, capsys):
    big = "wires 25\nmixed 24\nmeasure 1\n"
    path = write(tmp_path, "big.qc", big)
    code, _, err = run(["simulate", "--in", path, "--exact"], capsys)
    assert code == 2 and "error" in err


def test_syntax_error_reports_position(tmp_path, capsys):
    path = write(tmp_path, "bad.qc", "wires 2\nh 0\nfoo 1\n")
    code, _, err = run(["simulate", "--in", path, "--exact"], capsys)
    assert code == 1
    assert "line 3" in err


def test_missing_file(capsys):
    code, _, err = run(["simulate", "--in", "/nonexistent/x.qc", "--exact"],
                       capsys)
    assert code == 1 and "error" in err


def test_unknown_flag(capsys):
    code, _, err = run(["simulate", "--frobnicate"], capsys)
    assert code == 1 and "error" in err


def test_no_command(capsys):
    assert run([], capsys)[0] == 1


def test_help_exits_zero(capsys):
    assert run(["--help"], capsys)[0] == 0
    assert run(["simulate", "--help"], capsys)[0] == 0


def test_reduce_roundtrip(tmp_path, capsys):
    src = write(tmp_path, "vw.qc", YES_HARD)
    out_path = str(tmp_path / "inst.qc")
    code, out, _ = run(["reduce", "--in", src, "--out", out_path], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["residual"] <= 1e-10
    inst = parse_instance((tmp_path / "inst.qc").read_text())
    assert inst.circuit.wires == 4 and inst.measured_width == 1
    assert abs(dqc1_exact(inst).prob(0) - rec["p0"]) <= 1e-15


def test_reduce_to_stdout(tmp_path, capsys):
    src = write(tmp_path, "vw.qc", YES_HARD)
    code, out, _ = run(["reduce", "--in", src], capsys)
    assert code == 0
    # instance text followed by the JSON report line
    body, last = out.rstrip("\n").rsplit("\n", 1)
    assert parse_instance(body + "\n").circuit.wires == 4
    assert "residual" in json.loads(last)


def test_verify_identity(tmp_path, capsys):
    src = write(tmp_path, "vw.qc", YES_HARD)
    code, out, _ = run(["verify-identity", "--in", src], capsys)
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"q", "predictedP0", "p0", "residual"}
    assert rec["residual"] <= 1e-10
    assert abs(rec["q"] - 0.9785533905932737) <= 1e-12


def test_decide_end_to_end_both_sides(tmp_path, capsys):
    yes = write(tmp_path, "yes.qc", YES_HARD)
    no = write(tmp_path, "no.qc", NO_HARD)
    for proof in ("first", "second"):
        code, out, _ = run(["decide", "--in", yes, "--proof", proof], capsys)
        assert code == 0 and json.loads(out)["decision"] == 0
        code, out, _ = run(["decide", "--in", no, "--proof", proof], capsys)
        assert code == 0 and json.loads(out)["decision"] == 1


def test_decide_trials_first(tmp_path, capsys):
    yes = write(tmp_path, "yes.qc", YES_HARD)
    code, out, _ = run(["decide", "--in", yes, "--trials", "4000"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["trials"] == 4000
    assert rec["boundKind"] == "lower"
    assert rec["empiricalAcceptRate"] >= rec["analyticBound"] - 0.05


def test_decide_trials_second(tmp_path, capsys):
    no = write(tmp_path, "no.qc", NO_HARD)
    code, out, _ = run(["decide", "--in", no, "--proof", "second",
                        "--trials", "4000"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["side"] == "no"
    assert set(rec["cases"]) == {"case3", "case4"}


def test_decide_gap_exit_code(tmp_path, capsys):
    gap = write(tmp_path, "gap.qc", GAP)
    code, _, err = run(["decide", "--in", gap], capsys)
    assert code == 3 and "promise" in err


def test_decide_mc_estimator(tmp_path, capsys):
    yes = write(tmp_path, "yes.qc", YES_HARD)
    code, out, _ = run(["decide", "--in", yes, "--estimator", "mc",
                        "--shots", "20000"], capsys)
    assert code == 0 and json.loads(out)["decision"] == 0


def test_selftest_quick(capsys):
    code, out, err = run(["selftest", "--quick"], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if l]
    assert lines and all(l.startswith("PASS") for l in lines)
    assert "checks passed" in err
