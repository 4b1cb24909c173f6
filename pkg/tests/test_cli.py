import json

import numpy as np
import pytest

from ttcodes.cli import main


def test_build(capsys, tmp_path):
    out = tmp_path / "code.json"
    main(["build", "--dims", "3,2,2", "--A", "1+xyz", "--B", "1+x^2z",
          "--C", "1+x^2y", "--out", str(out)])
    data = json.loads(capsys.readouterr().out)
    assert data["n"] == 36 and data["k"] == 3
    assert json.load(open(out))["dims"] == [3, 2, 2]


def test_params_skip_distance(capsys):
    main(["params", "ccz_36_3_3", "--skip-distance"])
    text = capsys.readouterr().out
    assert "n = 36" in text and "k = 3" in text
    assert "connected Tanner graph: True" in text


def test_distance_certify(capsys):
    main(["distance", "ccz_36_3_3", "--basis", "Z", "--certify", "3"])
    assert "d_Z = 3" in capsys.readouterr().out


def test_logicals(capsys):
    main(["logicals", "ccz_36_3_3", "--no-pairs"])
    text = capsys.readouterr().out
    assert "covers" in text and "best:" in text


def test_automorphism(capsys):
    main(["automorphism", "ccz_36_3_3", "--beta", "1,0,0"])
    text = capsys.readouterr().out
    assert "verified" in text


def test_cz(capsys, tmp_path):
    out = tmp_path / "cz.json"
    main(["cz", "ccz_36_3_3", "--pair", "LC", "--beta", "0,0,0", "--out", str(out)])
    data = json.load(open(out))
    assert len(data["gates"]) == 2 * 12
    action = np.array(data["logical_action"])
    assert action.shape == (3, 3)


def test_ccz_check_and_count(capsys):
    main(["ccz", "ccz_36_3_3", "--check"])
    text = capsys.readouterr().out
    assert text.count("conditions=pass") == 3
    main(["ccz", "ccz_36_3_3", "--count"])
    data = json.loads(capsys.readouterr().out)
    assert data["logical_ccz_count"] == 6


def test_circuit_verify_and_emit(capsys, tmp_path):
    main(["circuit", "verify", "ccz_36_3_3"])
    text = capsys.readouterr().out
    assert "depth: 13" in text and "tableau verification: pass" in text
    out = tmp_path / "round.txt"
    main(["circuit", "emit", "ccz_36_3_3", "--out", str(out)])
    assert "LAYER 0" in out.read_text()


def test_simulate_and_fit(capsys, tmp_path):
    out = tmp_path / "run.csv"
    main(["simulate", "--code", "ccz_36_3_3", "--noise", "phenomenological",
          "--basis", "X", "--p", "0.02,0.03,0.04", "--rounds", "4",
          "--shots", "400", "--seed", "5", "--out", str(out)])
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 4  # header + three points
    assert (tmp_path / "run.csv.json").exists()
    capsys.readouterr()  # drop the simulate status line
    main(["fit", str(out), "--d-eff", "3"])
    fit = json.loads(capsys.readouterr().out)
    assert "c0" in fit


def test_search(capsys):
    main(["search", "--dims", "2,2,1", "--weight", "2", "--effort", "30"])
    text = capsys.readouterr().out
    assert "[[12," in text
