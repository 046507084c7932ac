import json
import subprocess
import sys

import pytest

from tchow.build import fixture
from tchow.cli import divisor_document, main, parse_input
from tchow.fansy import validate

P2E_FAN = {
    "rank": 3,
    "maximal_cones": [
        [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
        [[1, 0, 1], [0, 1, 0], [0, 0, -1]],
        [[0, 1, 0], [-1, -1, 0], [0, 0, 1]],
        [[0, 1, 0], [-1, -1, 0], [0, 0, -1]],
        [[-1, -1, 0], [1, 0, 1], [0, 0, 1]],
        [[-1, -1, 0], [1, 0, 1], [0, 0, -1]],
    ],
}


def run_cli(args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "tchow.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
    )
    return proc


def test_document_round_trip():
    for name in ("gr24", "p1p1_bundle", "p2_E"):
        x = fixture(name)
        doc = divisor_document(x)
        again = parse_input(json.loads(json.dumps(doc)))
        assert again == x
        # canonical documents also round-trip byte-for-byte
        assert json.dumps(divisor_document(again), sort_keys=True) == json.dumps(
            doc, sort_keys=True
        )


def test_fixture_pipe_chow(tmp_path):
    fx = run_cli(["fixture", "gr24"])
    assert fx.returncode == 0
    chow = run_cli(["chow", "-", "--json"], stdin=fx.stdout)
    assert chow.returncode == 0
    doc = json.loads(chow.stdout)
    ranks = [res["smith"]["free_rank"] for res in doc["results"]]
    assert ranks == [1, 1, 2, 1, 1]
    assert all(res["smith"]["torsion"] == [] for res in doc["results"])


def test_counts_table_fixture():
    fx = run_cli(["fixture", "p2_E"])
    counts = run_cli(["counts", "-", "--json"], stdin=fx.stdout)
    doc = json.loads(counts.stdout)
    by_k = {e["k"]: (e["r"], e["v"], e["t"]) for e in doc["results"]}
    assert by_k[2] == (2, 3, 0)
    assert by_k[1] == (1, 7, 1)
    assert by_k[0] == (0, 4, 2)


def test_validate_corrupted_document_exit_one():
    fx = run_cli(["fixture", "p1p1_bundle"])
    doc = json.loads(fx.stdout)
    doc["marked"] = [m for m in doc["marked"] if len(m) == 1]  # break closure
    res = run_cli(["validate", "-", "--json"], stdin=json.dumps(doc))
    assert res.returncode == 1
    report = json.loads(res.stdout)
    assert not report["valid"]
    assert any("UPWARD" in v["code"] for v in report["violations"])


def test_parse_error_exit_two():
    res = run_cli(["chow", "-"], stdin="{not json")
    assert res.returncode == 2
    res = run_cli(["chow", "-"], stdin='{"schema_version": 1}')
    assert res.returncode == 2


def test_byte_identical_json():
    a = run_cli(["fixture", "gr24", "--json"]).stdout
    b = run_cli(["fixture", "gr24", "--json"]).stdout
    assert a == b
    fx = run_cli(["fixture", "gr24"]).stdout
    c1 = run_cli(["chow", "-", "--json"], stdin=fx).stdout
    c2 = run_cli(["chow", "-", "--json"], stdin=fx).stdout
    assert c1 == c2


def test_crosscheck_and_oracle(tmp_path):
    fanfile = tmp_path / "fan.json"
    fanfile.write_text(json.dumps(P2E_FAN))
    res = run_cli(["crosscheck", str(fanfile), "--json"])
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["match"] and all(r["match"] for r in doc["results"])
    res = run_cli(["oracle", str(fanfile), "--k", "2", "--json"])
    smith = json.loads(res.stdout)["results"][0]["smith"]
    assert smith == {"free_rank": 2, "torsion": []}


def test_out_flag(tmp_path):
    target = tmp_path / "out.json"
    fx = run_cli(["fixture", "p2_F", "--json", "--out", str(target)])
    assert fx.returncode == 0 and fx.stdout == ""
    doc = json.loads(target.read_text())
    assert doc["points"] == ["0", "inf"]


def test_constructor_stanza_inputs():
    doc = {"schema_version": 1, "downgrade": {"fan": P2E_FAN}}
    res = run_cli(["counts", "-", "--json"], stdin=json.dumps(doc))
    assert res.returncode == 0
    bundle_doc = {
        "schema_version": 1,
        "bundle": {
            "fan": {
                "rank": 2,
                "maximal_cones": [
                    [[1, 0], [0, 1]],
                    [[0, 1], [-1, 0]],
                    [[-1, 0], [0, -1]],
                    [[0, -1], [1, 0]],
                ],
            },
            "filtrations": [
                {"ray": [1, 0], "full_until": 0, "line": "0", "line_until": 1},
                {"ray": [0, 1], "full_until": 0, "line": "1", "line_until": 1},
                {"ray": [-1, 0], "full_until": 0, "line": "inf", "line_until": 1},
                {"ray": [0, -1], "full_until": 0},
            ],
        },
    }
    res = run_cli(["counts", "-", "--json"], stdin=json.dumps(bundle_doc))
    assert res.returncode == 0
    by_k = {
        e["k"]: (e["r"], e["v"], e["t"])
        for e in json.loads(res.stdout)["results"]
    }
    assert by_k[1] == (0, 8, 5)


def test_eff_cli():
    fx = run_cli(["fixture", "gr24"]).stdout
    res = run_cli(["eff", "-", "--k", "2", "--json"], stdin=fx)
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert len(doc["generators"]) == 11
    assert len(doc["distinct_classes"]) == 3


def test_main_callable_directly(capsys):
    code = main(["fixture", "gr24"])
    assert code == 0
    out = capsys.readouterr().out
    assert json.loads(out)["rank"] == 3
