import json
import os

import numpy as np
import pytest

from twistlab.cli import main
from twistlab.su2 import IDENTITY, QI, QJ, from_axis_angle
from twistlab.surface import SurfaceRep


def run(*argv):
    try:
        return main(list(argv))
    except SystemExit as e:
        return e.code


def test_sample_writes_and_is_deterministic(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert run("sample", "--genus", "2", "--seed", "42", "-o", str(out1)) == 0
    assert run("sample", "--genus", "2", "--seed", "42", "-o", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()
    blob = json.loads(out1.read_text())
    assert blob["genus"] == 2 and len(blob["generators"]) == 4
    assert "relator defect" in capsys.readouterr().out


def test_sample_genus_validation():
    assert run("sample", "--genus", "1") == 64


def test_lemma_missing_rep():
    assert run("lemma", "--rep", "/nonexistent/rep.json") == 66


def test_lemma_parse_error(tmp_path):
    rep = tmp_path / "rep.json"
    assert run("sample", "--seed", "1", "-o", str(rep)) == 0
    assert run("lemma", "--rep", str(rep), "--gamma", "zz9") == 64
    assert run("lemma", "--rep", str(rep), "--phi", "Tq1") == 64


def test_lemma_singular_theta_exit_65(tmp_path):
    rep = SurfaceRep(2, (IDENTITY, QJ, QI, from_axis_angle((1, 0, 0), 0.4)))
    path = tmp_path / "singular.json"
    path.write_text(json.dumps(rep.to_json()))
    assert run("lemma", "--rep", str(path), "--gamma", "a1", "--phi", "Tb1") == 65


def test_lemma_degenerate_pair_exit_0(tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert run("sample", "--seed", "1", "-o", str(rep)) == 0
    out = tmp_path / "lem"
    assert run("lemma", "--rep", str(rep), "--phi", "Ta1", "-o", str(out)) == 0
    side = json.loads((tmp_path / "lem.json").read_text())
    assert side["degenerate"] is True
    assert side["config"]["kh_threshold"] == 0.05


def test_lemma_outputs(tmp_path):
    rep = tmp_path / "rep.json"
    assert run("sample", "--seed", "3", "-o", str(rep)) == 0
    out = tmp_path / "lem"
    assert run("lemma", "--rep", str(rep), "--gamma", "a1", "--phi", "Tb1",
               "--qmax", "100000", "-o", str(out)) == 0
    csv = (tmp_path / "lem.csv").read_text()
    assert csv.splitlines()[0] == "q,kh_score,hl_score,s,d,taylor_diag"
    side = json.loads((tmp_path / "lem.json").read_text())
    assert {"alpha", "beta", "kh_floor", "hl_floor", "timestamp"} <= set(side)


def test_density_outputs_and_determinism(tmp_path):
    rep = tmp_path / "rep.json"
    assert run("sample", "--seed", "4", "-o", str(rep)) == 0
    o1, o2 = tmp_path / "d1", tmp_path / "d2"
    for o in (o1, o2):
        assert run("density", "--rep", str(rep), "--steps", "2000",
                   "--seed", "11", "-o", str(o)) == 0
    assert (tmp_path / "d1.csv").read_bytes() == (tmp_path / "d2.csv").read_bytes()
    lines = (tmp_path / "d1.csv").read_text().splitlines()
    assert lines[0] == "steps,occupancy,skipped"
    side = json.loads((tmp_path / "d1.json").read_text())
    assert side["mode"] == "full" and side["steps"] == 2000


def test_density_observables_and_normal_mode(tmp_path):
    rep = tmp_path / "rep.json"
    assert run("sample", "--seed", "5", "-o", str(rep)) == 0
    assert run("density", "--rep", str(rep), "--steps", "500",
               "--observables", "a1*b1,b2", "-o", str(tmp_path / "dd")) == 0
    side = json.loads((tmp_path / "dd.json").read_text())
    assert side["observables"] == ["a1*b1", "b2"]
    assert run("density", "--rep", str(rep), "--steps", "500", "--mode",
               "normal", "--witness", "Tb1", "-o", str(tmp_path / "dn")) == 0
    assert run("density", "--rep", str(rep), "--steps", "10",
               "--observables", "a1", "-o", str(tmp_path / "db")) == 64


def test_dioph_golden_is_empty(tmp_path):
    import math
    golden = repr((math.sqrt(5.0) - 1.0) / 2.0)
    out = tmp_path / "g.csv"
    assert run("dioph", "--alpha", golden, "--kh", "0.4", "--hl", "0.5",
               "--qmax", "1000000", "--exhaustive", "-o", str(out)) == 0
    assert out.read_text().strip() == "q,kh_score,hl_score"
    side = json.loads((tmp_path / "g.json").read_text())
    assert side["entries"] == 0 and side["kh_floor"] > 0.4


def test_dioph_quotients(tmp_path):
    out = tmp_path / "q.csv"
    assert run("dioph", "--quotients", "2,4,16,256,65536", "--kh", "0.001",
               "--hl", "0.5", "--qmax", "100000000", "-o", str(out)) == 0
    lines = out.read_text().splitlines()
    assert len(lines) > 1
    assert int(lines[1].split(",")[0]) == 37385
    assert run("dioph", "--quotients", "0,3") == 64
    assert run("dioph") == 64


def test_check_command(tmp_path):
    out = tmp_path / "check.json"
    assert run("check", "--trials", "5", "--seed", "2", "-o", str(out)) == 0
    side = json.loads(out.read_text())
    assert side["all_passed"] is True


def test_threads_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("TWISTLAB_THREADS", "3")
    rep = tmp_path / "rep.json"
    assert run("sample", "--seed", "6", "-o", str(rep)) == 0
    assert run("density", "--rep", str(rep), "--steps", "300",
               "-o", str(tmp_path / "denv")) == 0
    side = json.loads((tmp_path / "denv.json").read_text())
    assert side["config"]["threads"] == 3
    assert side["chains"] == 3
