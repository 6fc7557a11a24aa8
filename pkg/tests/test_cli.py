import csv
import io
import json
import subprocess
import sys

import pytest

from amwkit.cli import dumps, main, run


def write_spec(tmp_path, spec, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(spec), encoding="utf-8")
    return p


def test_dumps_is_deterministic():
    assert dumps({"b": 0.1, "a": [1, None, True, float("inf")]}) == \
        '{"a": [1, null, true, "inf"], "b": 0.10000000000000001}'


def test_certify_classic(tmp_path):
    spec = write_spec(tmp_path, {"command": "certify", "family": {"kind": "classic"}})
    assert main(["--spec", str(spec), "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["schema"] == "amwkit-report-v1"
    cert = report["certificates"][0]
    assert "harmonic norms" in cert["reason"]
    assert cert["depth"] == 20


def test_certify_summable_scalars_exit_2(tmp_path):
    spec = write_spec(tmp_path, {"command": "certify", "family": {"kind": "power_scaled", "c": 2}})
    assert main(["--spec", str(spec), "--out", str(tmp_path / "o")]) == 2


def test_oracle_csv(tmp_path):
    spec = write_spec(tmp_path, {"command": "oracle", "oracle": "lemma22",
                                 "scalar": {"kind": "power", "c": 1}, "N_list": [10, 100, 1000]})
    assert main(["--spec", str(spec), "--out", str(tmp_path / "o"), "--csv"]) == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "o" / "series.csv").read_text())))
    assert [r["N"] for r in rows] == ["10", "100", "1000"]
    for r in rows:
        assert float(r["tail_sup"]) == 1 / int(r["N"])
        assert float(r["predicted_tail"]) == float(r["tail_sup"])


def test_unknown_exit_3(tmp_path):
    spec = write_spec(tmp_path, {"command": "spaces", "mode": "remark37",
                                 "scalar": {"kind": "log", "c": 1}, "fs": [{"kind": "power", "c": 1}],
                                 "coeffs": [1]})
    # the largest scalar sits at n = 1, so depth 1 covers it
    assert main(["--spec", str(spec), "--depth", "1"]) == 0


@pytest.mark.parametrize("spec,field", [
    ({"command": "certify", "family": {"kind": "power_scaled", "c": -1}}, "family.c"),
    ({"command": "certify"}, "family"),
    ({"command": "nope"}, "command"),
    ({"command": "oracle", "oracle": "lemma22", "scalar": {"kind": "power", "c": 1}, "N_list": [0]}, "N_list[0]"),
    ({"command": "spaces", "mode": "thm31", "basis": [{"kind": "power", "c": 2}]}, "basis"),
])
def test_malformed_specs(tmp_path, capsys, spec, field):
    p = write_spec(tmp_path, spec)
    assert main(["--spec", str(p)]) == 1
    assert field in capsys.readouterr().err


def test_invalid_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    assert main(["--spec", str(p)]) == 1
    assert "--spec" in capsys.readouterr().err


def test_env_depth(tmp_path, monkeypatch):
    monkeypatch.setenv("AMWKIT_DEPTH", "7")
    code, report, _ = run({"command": "certify", "family": {"kind": "classic"}}, depth=7)
    assert report["depth"] == 7
    spec = write_spec(tmp_path, {"command": "construct", "family": {"kind": "jlambda"}})
    main(["--spec", str(spec), "--out", str(tmp_path / "o")])
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["depth"] == 7 and len(report["terms"]) == 7


def test_construct_jlambda_family_certificate():
    code, report, _ = run({"command": "construct", "family": {"kind": "jlambda", "f": {"kind": "exp", "c": 1}}})
    assert code == 0
    assert report["certificates"][0]["status"] == "affirmed"


def test_algebra_and_spaces_commands():
    code, report, _ = run({"command": "algebra", "mode": "thm45",
                           "basis": [{"kind": "log", "c": 1}, {"kind": "log", "c": 2}],
                           "polys": [[[[1, 1], 1]]]})
    assert code == 0
    code, report, _ = run({"command": "spaces", "mode": "spaceable", "scalar": {"kind": "power", "c": 1},
                           "fs": [{"kind": "power", "c": 1}, {"kind": "power", "c": 2}],
                           "random_combinations": 3})
    assert code == 0 and report["rank"] == 2
    code, report, _ = run({"command": "spaces", "mode": "isometry", "random_functions": 3})
    assert code == 0


def test_module_entry_point(tmp_path):
    spec = write_spec(tmp_path, {"command": "certify", "family": {"kind": "classic"}})
    r = subprocess.run([sys.executable, "-m", "amwkit", "--spec", str(spec)], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["exit_code"] == 0


def test_seed_changes_random_draws(tmp_path):
    spec = {"command": "spaces", "mode": "thm31",
            "basis": [{"kind": "power", "c": 0.3}, {"kind": "power", "c": 0.6}], "random_combinations": 4}
    a = dumps(run(spec, seed=0x5EED)[1])
    b = dumps(run(spec, seed=0x5EED)[1])
    c = dumps(run(spec, seed=0x1234)[1])
    assert a == b and a != c
