import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from kanterlab.cli import main, parse_grid, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parse_grid_forms():
    assert np.allclose(parse_grid("1:3:3"), [1, 2, 3])
    assert np.allclose(parse_grid("1:100:3", log=True), [1, 10, 100])
    assert np.allclose(parse_grid("0.5, 2"), [0.5, 2.0])
    for bad in ("1:2", "a,b", "0:1:3"):
        with pytest.raises(UsageError):
            parse_grid(bad, log=bad == "0:1:3")


def test_pdf_csv_stable_half(capsys):
    code, out, _ = run(capsys, "pdf", "--target", "stable", "--alpha", "0.5", "--grid", "1,4")
    assert code == 0
    r = rows(out)
    assert r[0] == ["x", "value"]
    x, v = float(r[1][0]), float(r[1][1])
    assert v == pytest.approx(x ** -1.5 * math.exp(-0.25) / (2 * math.sqrt(math.pi)), rel=1e-12)


def test_pdf_kanter_and_free_closed_forms(capsys):
    _, out, _ = run(capsys, "pdf", "--target", "kanter", "--grid", "0.5")
    assert float(rows(out)[1][1]) == pytest.approx(1 / (2 * math.pi * 0.5 * math.sqrt(0.25)), rel=1e-12)
    _, out, _ = run(capsys, "pdf", "--target", "free", "--grid", "0.5")
    assert float(rows(out)[1][1]) == pytest.approx(1 / (2 * math.pi * 0.25), rel=1e-12)


def test_pdf_expv_json(capsys):
    code, out, _ = run(capsys, "pdf", "--target", "expv", "--r", "1.5", "--grid", "0.5:2:4",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 4 and all(d["value"] > 0 for d in data)


def test_free_limit_metadata(capsys):
    _, out, _ = run(capsys, "pdf", "--target", "free-limit", "--grid", "2", "--out", "json")
    data = json.loads(out)
    assert data["metadata"]["normalizable"] is False
    assert data["rows"][0]["value"] == 0.5


def test_cdf_and_unavailable_target(capsys):
    code, out, _ = run(capsys, "cdf", "--target", "kanter", "--grid", "1")
    assert code == 0
    assert float(rows(out)[1][1]) == pytest.approx(2 * math.atan(2 * math.sqrt(0.75)) / math.pi, rel=1e-12)
    code, _, err = run(capsys, "cdf", "--target", "expv", "--r", "1.5", "--grid", "1")
    assert code == 1 and "not available" in err


def test_sample_reproducible_and_byte_identical(capsys, tmp_path):
    argv = ["sample", "--target", "kanter", "--alpha", "0.3", "--n", "50", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    p = tmp_path / "s.csv"
    assert main(argv + ["--out", str(p)]) == 0
    assert p.read_text() == a
    assert len(rows(a)) == 51


def test_sample_rejections(capsys):
    assert run(capsys, "sample", "--target", "free")[0] == 1
    assert run(capsys, "sample", "--target", "expv", "--r", "0.5")[0] == 1
    assert run(capsys, "sample", "--target", "expv")[0] == 1
    assert run(capsys, "sample", "--n", "0")[0] == 1


def test_mellin_checkpoints(capsys):
    _, out, _ = run(capsys, "mellin", "--target", "kanter", "--alpha", "0.5", "--grid", "1")
    assert rows(out)[0] == ["s", "value"]
    assert float(rows(out)[1][1]) == pytest.approx(2.0, rel=1e-14)
    assert run(capsys, "mellin", "--target", "free", "--grid", "1")[0] == 1


def test_contour_rows(capsys):
    _, out, _ = run(capsys, "contour", "--alpha", "0.5", "--points", "2")
    r = rows(out)
    assert r[0] == ["theta", "re", "im"]
    assert float(r[2][0]) == pytest.approx(math.pi / 2)
    assert float(r[2][2]) == pytest.approx(-0.5, rel=1e-15)


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "pdf", "--alpha", "1.5", "--grid", "1")[0] == 1
    assert run(capsys, "pdf")[0] == 1
    assert run(capsys, "pdf", "--grid", "-1")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1


def test_verify_deterministic_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "contour", "--n", "0")
    assert code == 0
    data = json.loads(out)
    assert data and all(d["passed"] for d in data)


def test_verify_csv_to_file(capsys, tmp_path):
    p = tmp_path / "v.csv"
    assert main(["verify", "--suite", "existence", "--n", "0", "--format", "csv", "--out", str(p)]) == 0
    r = rows(p.read_text())
    assert r[0][0] == "check_name" and all(row[5] == "true" for row in r[1:])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kanterlab", "mellin", "--target", "kanter",
                          "--alpha", "0.6666666666666666", "--grid", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert float(res.stdout.splitlines()[1].split(",")[1]) == pytest.approx(3.0, rel=1e-12)


def test_verify_failure_exit_two(capsys, monkeypatch):
    from kanterlab import cli
    from kanterlab.verify import make_report

    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: [make_report("forced", 1.0, 0.0, 0.1)])
    code, _, err = run(capsys, "verify", "--n", "0")
    assert code == 2 and "FAILED forced" in err
