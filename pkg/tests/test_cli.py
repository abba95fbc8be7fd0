"""Command-line interface: envelopes, exit codes, determinism."""

import json
import math

import pytest
from click.testing import CliRunner

from wiener import l1r, l1z
from wiener.cli import main
from wiener.l1z import L1ZSeq


@pytest.fixture
def runner():
    return CliRunner()


def seq_file(tmp_path, name, coeffs):
    p = tmp_path / name
    p.write_text(l1z.dumps(L1ZSeq(coeffs)))
    return str(p)


def fn_file(tmp_path, name, f):
    p = tmp_path / name
    p.write_text(l1r.dumps(f))
    return str(p)


def parse(result):
    doc = json.loads(result.output)
    assert set(doc) == {"status", "payload", "log"}
    return doc


def test_invert_ok(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 1.0, 1: 0.5})
    result = runner.invoke(
        main, ["invert", "--input", path, "--epsilon", "0.45", "--target", "1e-9"]
    )
    assert result.exit_code == 0
    doc = parse(result)
    assert doc["status"] == "ok"
    assert doc["payload"]["certificate"]["residual"] <= 1e-9
    inv = l1z.from_jsonable(doc["payload"]["inverse"])
    assert abs(inv.coeffs[0] - 1.0) <= 1e-9


def test_invert_scalar(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 2.0})
    result = runner.invoke(
        main, ["invert", "--input", path, "--epsilon", "1.0", "--target", "1e-9"]
    )
    assert result.exit_code == 0
    inv = l1z.from_jsonable(parse(result)["payload"]["inverse"])
    assert abs(inv.coeffs[0] - 0.5) <= 1e-9


def test_invert_hypothesis_failure_exit_2(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 1.0, 1: 1.0})
    result = runner.invoke(
        main, ["invert", "--input", path, "--epsilon", "0.1", "--target", "1e-6"]
    )
    assert result.exit_code == 2
    doc = parse(result)
    assert doc["status"] == "hypothesis-failed"
    assert doc["payload"] is None
    assert any("minimum modulus" in line for line in doc["log"])


def test_invert_invalid_input_exit_3(tmp_path, runner):
    p = tmp_path / "bad.json"
    p.write_text("not json at all")
    result = runner.invoke(
        main, ["invert", "--input", str(p), "--epsilon", "0.5", "--target", "1e-6"]
    )
    assert result.exit_code == 3
    assert parse(result)["status"] == "invalid-input"


def test_invert_missing_file_exit_3(tmp_path, runner):
    result = runner.invoke(
        main,
        ["invert", "--input", str(tmp_path / "nope.json"), "--epsilon", "0.5",
         "--target", "1e-6"],
    )
    assert result.exit_code == 3


def test_eval_command(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 1.0, 1: 0.5})
    result = runner.invoke(main, ["eval", "--input", path, "--re", "-1", "--im", "0"])
    assert result.exit_code == 0
    doc = parse(result)
    assert abs(doc["payload"]["re"] - 0.5) <= 1e-12


def test_norm_command_seq_and_fn(tmp_path, runner):
    spath = seq_file(tmp_path, "f.json", {0: 3.0, 2: -4.0})
    result = runner.invoke(main, ["norm", "--input", spath, "--kind", "seq"])
    assert result.exit_code == 0
    assert abs(parse(result)["payload"]["norm_upper"] - 7.0) <= 1e-9

    fpath = fn_file(tmp_path, "t.json", l1r.triangle())
    result = runner.invoke(main, ["norm", "--input", fpath, "--kind", "fn"])
    assert result.exit_code == 0
    n = parse(result)["payload"]["norm_upper"]
    assert 1.0 <= n <= 1.001


def test_exp_command(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 1.0})
    result = runner.invoke(main, ["exp", "--input", path, "--tol", "1e-10"])
    assert result.exit_code == 0
    doc = parse(result)
    e = l1z.from_jsonable(doc["payload"])
    assert abs(e.coeffs[0] - math.e) <= 1e-9


def test_resolvent_demo(tmp_path, runner):
    path = seq_file(tmp_path, "u.json", {1: 1.0})
    trace = tmp_path / "trace.csv"
    result = runner.invoke(
        main,
        ["resolvent-demo", "--u", path, "--radius", "2", "--steps", "512",
         "--tol", "1e-6", "--trace", str(trace)],
    )
    assert result.exit_code == 0
    doc = parse(result)
    assert doc["payload"]["deviation_from_2pii"] <= doc["payload"]["err"]
    lines = trace.read_text().strip().split("\n")
    assert lines[0] == "t,re,im"
    assert len(lines) == 513


def test_tauberian_command(tmp_path, runner):
    f = l1r.fejer_kernel(1.0, 2e-3)
    g = l1r.convolve(f, l1r.spectrum_compactify(l1r.triangle(), 0.4, 0.05), 0.01)
    fpath = fn_file(tmp_path, "f.json", f)
    gpath = fn_file(tmp_path, "g.json", l1r.PLFunction(g.breakpoints, g.values))
    result = runner.invoke(
        main,
        ["tauberian", "--f", fpath, "--g", gpath, "--band", "0.5",
         "--epsilon", "0.45", "--tol", "0.1"],
    )
    assert result.exit_code == 0
    doc = parse(result)
    assert doc["payload"]["residual"] <= 0.1


def test_output_deterministic(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 1.0, 1: 0.5, -3: 0.125})
    args = ["invert", "--input", path, "--epsilon", "0.3", "--target", "1e-8"]
    out1 = runner.invoke(main, args).output
    out2 = runner.invoke(main, args).output
    assert out1 == out2


def test_out_flag_writes_file(tmp_path, runner):
    path = seq_file(tmp_path, "f.json", {0: 2.0})
    out = tmp_path / "result.json"
    result = runner.invoke(main, ["norm", "--input", path, "--out", str(out)])
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "ok"
