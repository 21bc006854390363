import json

import pytest

from mordell_basis.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_height_family_point(capsys):
    code, out, _ = run(capsys, "height", "--a", "5", "--b", "3", "--point", "P2", "--format", "json")
    assert code == 0
    a = json.loads(out)
    code, out, _ = run(capsys, "height", "--n", "27289", "--x", "30", "--y", "233", "--format", "json")
    b = json.loads(out)
    assert code == 0
    lo = max(float(a["height"]["lo"]), float(b["height"]["lo"]))
    hi = min(float(a["height"]["hi"]), float(b["height"]["hi"]))
    assert lo <= hi  # different shifts, overlapping enclosures


def test_height_off_curve(capsys):
    code, _, err = run(capsys, "height", "--n", "27289", "--x", "30", "--y", "234")
    assert code == 2
    assert "not on curve" in json.loads(err)["error"]


def test_certify_all(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "certify", "--a", "5", "--b", "3", "--pair", "all", "--json", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["schema_version"] == 1
    pairs = [c for c in data["certificates"] if c["kind"] == "pair"]
    assert len(pairs) == 3 and all(c["conclusion"]["index"] == 1 for c in pairs)


def test_certify_rejects_non_member(capsys):
    code, _, err = run(capsys, "certify", "--a", "5", "--b", "9")
    assert code == 2 and "v3(b) != 1" in json.loads(err)["error"]


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--a-max", "13", "--b-max", "25", "--format", "json")
    assert code == 0
    rows = json.loads(out)["entries"]
    assert [(r["a"], r["b"]) for r in rows][:3] == [(5, 3), (5, 21), (7, 3)]
    code, out, _ = run(capsys, "enumerate", "--a-max", "4", "--b-max", "25", "--format", "json")
    assert code == 0 and json.loads(out)["entries"] == []


def test_enumerate_certify(capsys):
    code, out, _ = run(capsys, "enumerate", "--a-max", "5", "--b-max", "5", "--certify", "--threads", "1")
    assert code == 0 and "index" in out


def test_verify_bounds(capsys):
    code, _, _ = run(capsys, "verify-bounds", "--grid", "41x41")
    assert code == 0
    code, out, _ = run(capsys, "verify-bounds", "--d-kind", "2a2+4b2", "--grid", "41x41",
                       "--z-min", "0.07", "--format", "json")
    assert code == 1
    assert "violations" in out
    code, _, _ = run(capsys, "verify-bounds", "--grid", "0x0")
    assert code == 2


def test_descent(capsys):
    code, out, _ = run(capsys, "descent", "--a", "5", "--b", "3", "--prime", "2", "--format", "json")
    assert code == 0
    groups = json.loads(out)["groups"]
    assert len(groups[0]["verdicts"]) == 7
    code, out, _ = run(capsys, "descent", "--a", "5", "--b", "3", "--prime", "5", "--format", "json")
    assert code == 0
    groups = json.loads(out)["groups"]
    assert len(groups) == 3 and all(len(g["verdicts"]) == 6 for g in groups)
    code, _, _ = run(capsys, "descent", "--a", "5", "--b", "3", "--prime", "7")
    assert code == 2


def test_bad_precision(capsys):
    code, _, _ = run(capsys, "height", "--a", "5", "--b", "3", "--point", "P1", "--precision", "32")
    assert code == 2


def test_argparse_usage():
    with pytest.raises(SystemExit) as exc:
        main(["certify", "--a", "5"])
    assert exc.value.code == 2
