import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from maxcomm.cli import main
from maxcomm.grid import Grid1D, load, sample
from maxcomm.maximal import iterated_maximal


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_apply_m_closed_form(tmp_path):
    out = tmp_path / "mf.csv"
    assert main(["apply", "--op", "M", "--builtin", "indicator:0,1", "--grid", "-8,2,5120", "--out", str(out)]) == 0
    f = load(out)
    assert f.value_at(-1.0) == pytest.approx(0.5, abs=0.02)


def test_apply_cb_constant_symbol_is_zero(tmp_path):
    out = tmp_path / "cb.csv"
    code = main(["apply", "--op", "Cb", "--b", "const:1", "--f", "random_step:4:7", "--grid", "0,1,64",
                 "--out", str(out)])
    assert code == 0 and not load(out).values.any()


def test_apply_mdelta_one_equals_m(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    common = ["--f", "gauss:0,1", "--grid", "-3,3,200"]
    assert main(["apply", "--op", "Mdelta", "--delta", "1", *common, "--out", str(a)]) == 0
    assert main(["apply", "--op", "M", *common, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("op, extra", [("M2", []), ("sharp", []), ("sharp_delta", ["--delta", "0.5"]),
                                       ("MbCommutator", ["--b", "log_shift"]), ("OrliczMax", ["--phi", "ExpL"])])
def test_apply_every_operator(tmp_path, op, extra):
    out = tmp_path / "o.json"
    assert main(["apply", "--op", op, "--f", "indicator:0,1", "--grid", "-8,2,128", *extra, "--out", str(out)]) == 0
    assert load(out).n == 128


def test_apply_reads_operand_file(tmp_path):
    src = tmp_path / "f.json"
    main(["apply", "--op", "M", "--f", "gauss:0,1", "--grid", "-2,2,50", "--out", str(src)])
    out = tmp_path / "g.csv"
    assert main(["apply", "--op", "M", "--input", str(src), "--out", str(out)]) == 0
    assert np.array_equal(load(out).values, iterated_maximal(sample("gauss:0,1", Grid1D(-2, 2, 50))).values)


def test_apply_rearrange(tmp_path):
    src = tmp_path / "f.csv"
    src.write_text("x,value\n0.5,3\n1.5,1\n2.5,2\n")
    out = tmp_path / "r.csv"
    assert main(["apply", "--op", "rearrange", "--input", str(src), "--out", str(out)]) == 0
    assert [[float(a), float(b)] for a, b in rows(out)[1:]] == [[0, 3], [1, 2], [2, 1]]
    outj = tmp_path / "r.json"
    assert main(["apply", "--op", "rearrange", "--input", str(src), "--out", str(outj)]) == 0
    assert json.loads(outj.read_text())["values"] == [3, 2, 1]


@pytest.mark.parametrize("argv, flag", [
    (["apply", "--op", "Cb", "--f", "const:1", "--grid", "0,1,4"], "--b"),
    (["apply", "--op", "Mdelta", "--f", "const:1", "--grid", "0,1,4"], "--delta"),
    (["apply", "--op", "sharp_delta", "--delta", "1", "--f", "const:1", "--grid", "0,1,4"], "--delta"),
    (["apply", "--op", "Q", "--f", "const:1", "--grid", "0,1,4"], "--op"),
    (["apply", "--op", "M", "--f", "const:1"], "--grid"),
    (["apply", "--op", "M", "--f", "const:1", "--grid", "0,1"], "--grid"),
    (["apply", "--op", "M", "--f", "nope", "--grid", "0,1,4"], "--f"),
    (["apply", "--op", "M", "--grid", "0,1,4"], "--f"),
    (["verify", "--suite", "nope"], "--suite"),
    (["verify", "--suite", "exact", "--delta", "0.5,2"], "--delta"),
    (["sweep", "--op", "M", "--f", "const:1", "--grid", "0,1,4"], "--lambda-grid"),
    (["sweep", "--op", "M", "--f", "const:1", "--grid", "0,1,4", "--lambda-grid", "lin:1,2,3"], "--lambda-grid"),
])
def test_usage_errors_exit_2_and_name_the_flag(capsys, argv, flag):
    assert main(argv) == 2
    assert flag in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["apply"])
    assert exc.value.code == 2


def test_io_errors_exit_3(tmp_path, capsys):
    assert main(["apply", "--op", "M", "--input", str(tmp_path / "missing.csv")]) == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("x,value\n0,1\n1,nan\n")
    assert main(["apply", "--op", "M", "--input", str(bad)]) == 3
    assert "x_1" in capsys.readouterr().err


def test_verify_closed_form_suite(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "example47", "--X", "8", "--n", "5120", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    case = next(c for c in rep["cases"] if c["name"] == "example47/closed_forms")
    assert case["details"]["err_Mf"] <= 0.02 and case["details"]["err_Mbf"] <= 0.02


def test_verify_exact_twice_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--suite", "exact", "--seed", "7", "--out", str(a)]) == 0
    assert main(["verify", "--suite", "exact", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_failure_exits_1_and_still_writes(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"jn_slope_max": -5.0}))
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "jn", "--config", str(cfg), "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert any(c["verdict"] == "fail" for c in rep["cases"])


def test_verify_with_corpus_manifest(tmp_path):
    man = tmp_path / "m.json"
    grid = {"a": -8, "b": 2, "n": 64}
    man.write_text(json.dumps([
        {"generator": "indicator", "params": {"u": -2, "v": 0}, "grid": grid, "role": "b"},
        {"generator": "gauss", "params": {}, "grid": grid, "role": "f"},
    ]))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"base_n": 128}))
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "domination", "--config", str(cfg), "--corpus", str(man),
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["cases"]
    man.write_text(json.dumps([{"generator": "gauss", "grid": grid, "role": "x"}]))
    assert main(["verify", "--suite", "domination", "--corpus", str(man), "--out", str(out)]) == 3


def test_sweep_m2_indicator(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--op", "M2", "--f", "indicator:0,1", "--grid", "-8,2,1280",
                 "--lambda-grid", "geom:0.05,0.8,16", "--out", str(out)]) == 0
    r = rows(out)
    assert r[0] == ["lambda", "numerator", "denominator", "ratio"] and len(r) == 17
    assert all(np.isfinite(float(x[3])) for x in r[1:])


def test_sweep_m_indicator_above_one(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--op", "M", "--f", "indicator:0,1", "--grid", "-8,2,1280",
                 "--lambda-grid", "geom:1.5,4,4", "--out", str(out)]) == 0
    assert [float(x[1]) for x in rows(out)[1:]] == [0.0] * 4


def test_sweep_commutator_witness(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--op", "MbCommutator", "--b", "log_shift", "--f", "indicator:0,1",
                 "--grid", "-10000,2,100020", "--lambda-grid", "geom:0.02,0.2,4", "--out", str(out)]) == 0
    lam_meas = [float(x[0]) * float(x[1]) for x in rows(out)[1:]]
    assert all(a > b for a, b in zip(lam_meas, lam_meas[1:]))


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "maxcomm.cli", "apply", "--op", "M", "--f", "const:2",
                          "--grid", "0,1,3"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "x,value" and len(res.stdout.splitlines()) == 4
