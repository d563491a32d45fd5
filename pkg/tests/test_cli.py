import csv
import io as stdio
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import DATA
from forcing_lab import io
from forcing_lab.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(stdio.StringIO(text)))


def sharko(x):
    # the PL map through (0, 1), (1, 2), (2, 0)
    return x + 1 if x <= 1 else 4 - 2 * x


def test_sft_entropy(capsys):
    code, out, _ = run(capsys, "sft", "--matrix-file", DATA / "fib.json", "--entropy")
    assert code == 0 and out == "0.481212\n"


def test_sft_periodic_words(capsys):
    code, out, _ = run(capsys, "sft", "--matrix-file", DATA / "fib.json", "--period", 4)
    assert code == 0
    r = rows(out)
    # the classes partition the trace(A^4) = 7 points of period 4
    assert sum(int(x["class_size"]) for x in r) == 7
    assert sorted(x["minimal_period"] for x in r) == ["1", "2", "4"]


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "bogus")
    assert code == 2 and "invalid choice" in err


def test_missing_required_flag(capsys):
    assert run(capsys, "interval", "--map-file", DATA / "sharko.json")[0] == 2


def test_interval_periods_one_to_five(capsys):
    code, out, _ = run(capsys, "interval", "--map-file", DATA / "sharko.json", "--max-period", 5)
    assert code == 0
    r = rows(out)
    assert [int(x["period"]) for x in r] == [1, 2, 3, 4, 5]
    for x in r:
        T = int(x["period"])
        orbit = [Fraction(v) for v in x["orbit"].split()]
        assert len(orbit) == T and orbit[0] == Fraction(x["point"])
        for a, b in zip(orbit, orbit[1:] + orbit[:1]):
            assert sharko(a) == b
        assert len(set(orbit)) == T
    assert r[0]["point"] == "4/3"
    assert sorted(Fraction(v) for v in r[1]["orbit"].split()) == [Fraction(2, 3), Fraction(5, 3)]


def test_interval_guard_exits_1(capsys):
    code, _, err = run(capsys, "interval", "--map-file", DATA / "sharko.json", "--max-period", 25)
    assert code == 1 and "error" in err


def test_malformed_json_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "kind": "interval",\n  "breakpoints": [[0, 1],\n}\n')
    code, _, err = run(capsys, "interval", "--map-file", p, "--max-period", 3)
    assert code == 2 and f"{p}:4:1" in err


def test_unknown_field_reports_location(capsys, tmp_path):
    p = tmp_path / "extra.json"
    doc = json.loads((DATA / "sharko.json").read_text())
    doc["colour"] = "blue"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "interval", "--map-file", p, "--max-period", 3)
    assert code == 2 and "colour" in err


def test_bad_field_reports_pointer(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"kind": "sft", "transition_matrix": [[1, "x"], [1, 0]]}))
    code, _, err = run(capsys, "sft", "--matrix-file", p, "--entropy")
    assert code == 2 and "$.transition_matrix[0][1]" in err


def test_wrong_kind(capsys):
    code, _, err = run(capsys, "sft", "--matrix-file", DATA / "sharko.json", "--entropy")
    assert code == 2 and "$.kind" in err


def test_output_file_and_manifest(capsys, tmp_path):
    out = tmp_path / "sub" / "orbits.csv"
    code, stdout, _ = run(capsys, "interval", "--map-file", DATA / "sharko.json", "--max-period", 3, "-o", out)
    assert code == 0 and stdout == ""
    assert out.read_text().startswith("period,itinerary,point,orbit\n")
    m = json.loads((tmp_path / "sub" / "orbits.csv.manifest.json").read_text())
    assert m["tool"] == "forcing-lab" and m["command"] == "interval"
    assert m["scenario_hash"] == io.scenario_hash(json.loads((DATA / "sharko.json").read_text()))
    assert m["budgets"]["max_period"] == 3 and m["budgets"]["boundary_periods"] == [3]
    assert m["wall_time_s"] >= 0
    assert not [p for p in out.parent.iterdir() if p.name.endswith(".tmp")]


def _strip_time(text):
    doc = json.loads(text)
    doc["manifest"].pop("wall_time_s")
    return doc


def test_deterministic_output(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "forcing", "--scenario-file", DATA / "crossing.json", "--derive", "--above", "-o", p)[0] == 0
    ta, tb = a.read_text(), b.read_text()
    assert _strip_time(ta) == _strip_time(tb)
    strip = lambda t: "\n".join(l for l in t.splitlines() if "wall_time_s" not in l)
    assert strip(ta) == strip(tb)


def test_interrupted_write_leaves_target_untouched(tmp_path, monkeypatch):
    target = tmp_path / "result.csv"
    target.write_text("old\n")

    def boom(src, dst):
        raise KeyboardInterrupt

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(KeyboardInterrupt):
        io.atomic_write(target, "new\n" * 1000)
    assert target.read_text() == "old\n"
    assert [p.name for p in tmp_path.iterdir()] == ["result.csv"]


def test_rotation_hull(capsys):
    code, out, _ = run(capsys, "rotation", "--lift-file", DATA / "translation.json", "--grid", 8, "--n", 16)
    assert code == 0
    r = rows(out)
    assert len(r) == 1
    assert float(r[0]["x"]) == pytest.approx(0.5, abs=1e-12)
    assert float(r[0]["y"]) == pytest.approx(1 / 3, abs=1e-12)


def test_rotation_measure_from_lift_file(capsys):
    code, out, _ = run(capsys, "rotation", "--lift-file", DATA / "raised_cosine.json", "--measure")
    assert code == 0 and rows(out) == [{"x": "0.5", "y": "0.0"}]


def test_rotation_measure_file(capsys, tmp_path):
    m = tmp_path / "mu.json"
    m.write_text(json.dumps({"points": [[0.1, 0.5]], "weights": [1.0]}))
    code, out, _ = run(capsys, "rotation", "--lift-file", DATA / "raised_cosine.json", "--measure", m)
    assert code == 0 and float(rows(out)[0]["x"]) == pytest.approx(1.0)


def test_rotation_find_periodic(capsys):
    code, out, _ = run(capsys, "rotation", "--lift-file", DATA / "coupled_shear.json", "--find-periodic", "0,0", 1)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["success"] and res["residual"] < 1e-8
    assert res["certificates"][0]["degree"] != 0
    code, out, _ = run(capsys, "rotation", "--lift-file", DATA / "translation.json", "--find-periodic", "0", "0", 1)
    res = json.loads(out)["result"]
    assert code == 0 and not res["success"]


def test_rotation_find_periodic_bad_vector(capsys):
    assert run(capsys, "rotation", "--lift-file", DATA / "coupled_shear.json", "--find-periodic", "0,0")[0] == 2


def test_rotation_deviation(capsys):
    code, out, _ = run(capsys, "rotation", "--lift-file", DATA / "coupled_shear.json", "--grid", 8, "--n", 64,
                       "--deviation", "16,32")
    assert code == 0 and [x["n"] for x in rows(out)] == ["16", "32"]


def test_threads_flag_and_environment(capsys, monkeypatch, tmp_path):
    args = ["rotation", "--lift-file", DATA / "coupled_shear.json", "--grid", 8, "--n", 32]
    outs = []
    for extra, env in (([], "1"), (["--threads", 3], "1"), ([], None)):
        if env is None:
            monkeypatch.delenv("FORCING_THREADS", raising=False)
        else:
            monkeypatch.setenv("FORCING_THREADS", env)
        out = tmp_path / f"hull{len(outs)}.csv"
        assert run(capsys, *args, *extra, "-o", out)[0] == 0
        outs.append((out.read_text(), json.loads(out.with_name(out.name + ".manifest.json").read_text())))
    assert outs[0][1]["budgets"]["threads"] == 1
    assert outs[1][1]["budgets"]["threads"] == 3
    assert outs[0][0] == outs[1][0] == outs[2][0]
    monkeypatch.setenv("FORCING_THREADS", "many")
    assert run(capsys, *args)[0] == 2
    assert run(capsys, *args, "--threads", 0)[0] == 2


def test_forcing_brouwer_model(capsys):
    code, out, _ = run(capsys, "forcing", "--scenario-file", DATA / "brouwer_model.json", "--derive")
    assert code == 0
    res = json.loads(out)["result"]
    assert len(res["derived"]) == 2
    assert all(c["verdict"] == "true" for c in res["checks"].values())
    assert all(b["verdict"] == "true" for b in res["brouwer"].values())
    d = res["database"]["disjunctions"][0]
    assert d["either"]["order"] == 3 and d["or"]["order"] == 2


def test_forcing_certificate(capsys):
    code, out, _ = run(capsys, "forcing", "--scenario-file", DATA / "horseshoe.json", "--certify")
    assert code == 0
    cert = json.loads(out)["result"]["certificate"]
    assert cert["q"] == 2 and cert["deck"] == [0, 2]
    code, out, _ = run(capsys, "forcing", "--scenario-file", DATA / "horseshoe.json", "--certify", 3, "0,2")
    assert json.loads(out)["result"]["certificate"]["entropy_lower_bound"] == pytest.approx(0.154033, abs=5e-7)


def test_forcing_above(capsys):
    code, out, _ = run(capsys, "forcing", "--scenario-file", DATA / "above.json", "--above")
    assert code == 0
    assert {"upper": "A2", "lower": "A1", "relative_to": "phi"} in json.loads(out)["result"]["above"]


def test_forcing_precondition_exits_1(capsys, tmp_path):
    doc = json.loads((DATA / "above.json").read_text())
    doc["leaves"].append({"label": "cut", "vertices": [[-3, -5], [-3, 5]]})
    p = tmp_path / "cut.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "forcing", "--scenario-file", p)
    assert code == 1 and "disjoint" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "forcing_lab.cli", "sft", "--matrix-file", str(DATA / "fib.json"),
                        "--entropy"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "0.481212\n"
