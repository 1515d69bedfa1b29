import csv
import io
import json

import pytest

from twistfield.cli import main
from twistfield.elliptic import legendre
from twistfield.sweep import COLUMNS, SweepError, SweepJob, character_from_row, parse_curve, rows_to_csv, run_sweep


def sweep(**kw):
    args = dict(curve="legendre", ell=3, p=7, d=2)
    args.update(kw)
    return run_sweep(SweepJob(**args))


def test_histogram_and_rows():
    hist, rows = sweep()
    assert hist.as_tuple(3) == (37, 4, 0)
    assert len(rows) == hist.total == 41
    assert all(set(r) == set(COLUMNS) for r in rows)
    for r in rows[:5]:
        chi = character_from_row(r)
        assert " ".join(map(str, chi.conductor.coeffs)) == r["conductor"]
        assert abs(float(r["sign_re"]) ** 2 + float(r["sign_im"]) ** 2 - 1) < 1e-9


def test_parallel_matches_serial():
    _, serial = sweep(curve="e2")
    _, parallel = sweep(curve="e2", jobs=3)
    assert rows_to_csv(serial) == rows_to_csv(parallel)


def test_resume_from_partial_csv(tmp_path):
    out = tmp_path / "run.csv"
    _, full = sweep(out=str(out))
    text = out.read_text()
    assert text == rows_to_csv(full)
    lines = text.splitlines(keepends=True)
    out.write_text("".join(lines[:12]) + lines[12][:7])  # torn last line
    hist, resumed = sweep(out=str(out))
    assert out.read_text() == text
    assert hist.as_tuple(3) == (37, 4, 0)


def test_checkpoint_from_other_job_is_rejected(tmp_path):
    out = tmp_path / "run.csv"
    sweep(out=str(out))
    with pytest.raises(SweepError):
        sweep(curve="e2", out=str(out))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(SweepError):
        sweep(out=str(bad))


def test_json_output(tmp_path):
    out = tmp_path / "run.json"
    hist, rows = sweep(p=5, out=str(out), fmt="json")
    data = json.loads(out.read_text())
    assert data["histogram"]["counts"] == {"0": 6, "1": 4}
    assert data["columns"] == list(COLUMNS)
    assert len(data["rows"]) == 10
    assert not (tmp_path / "run.json.partial.csv").exists()


def test_cache_dir_is_used(tmp_path, monkeypatch):
    monkeypatch.setenv("TWISTFIELD_CACHE", str(tmp_path))
    sweep(p=5)
    assert any(tmp_path.iterdir())


def test_job_validation():
    with pytest.raises(SweepError):
        SweepJob("legendre", 3, 3, 2)
    with pytest.raises(SweepError):
        SweepJob("legendre", 3, 7, 0)
    with pytest.raises(SweepError):
        parse_curve("weierstrass", 7)
    with pytest.raises(SweepError):
        parse_curve("custom:1/2", 7)


def test_curve_selectors():
    assert parse_curve("legendre", 7).conductor.degree == 4
    assert parse_curve("e2", 7).conductor.degree == 5
    E = parse_curve("custom:6,6/0,1/0", 7)
    assert E.a_table(2).tolist() == legendre(7).a_table(2).tolist()
    C = parse_curve("constant:0", 7)
    assert C.conductor.degree == 0


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_sweep(capsys):
    code, out, err = run_cli(capsys, "sweep", "--ell", "3", "--p", "7", "--cond-deg", "1")
    assert code == 0
    assert "(5) total=5" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5


def test_cli_long_gate(capsys):
    code, _, err = run_cli(capsys, "sweep", "--curve", "e2", "--ell", "3", "--p", "7", "--cond-deg", "8")
    assert code == 2 and "--long" in err


def test_cli_usage_errors(capsys):
    assert run_cli(capsys, "sweep", "--curve", "nope", "--ell", "3", "--p", "7", "--cond-deg", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_cli_search_constant(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "search-constant", "--ell", "3", "--p", "7")
    assert code == 0 and "traces: {-2, -1, 1, 2, 4}" in out
    target = tmp_path / "s.json"
    assert run_cli(capsys, "search-constant", "--ell", "5", "--p", "11", "--format", "json", "--out", str(target))[0] == 0
    assert json.loads(target.read_text())["traces"] == [-2, 2, 3]


def test_cli_gen_vanishing(capsys):
    code, out, _ = run_cli(capsys, "gen-vanishing", "--count", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["members"]) == 3 and data["shortfall"] == 0
    assert all(m["rank"] >= 1 for m in data["members"])
    code, _, _ = run_cli(capsys, "gen-vanishing", "--count", "3", "--max-degree", "4")
    assert code == 1


def test_cli_verify(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "covers")
    assert code == 0 and "covers: pass" in out
    code, out, _ = run_cli(capsys, "verify", "--suite", "fe", "--negative-control")
    assert code == 1 and "FAIL" in out
