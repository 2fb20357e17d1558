import json
import subprocess
import sys
from fractions import Fraction

import pytest

from flatspec import bieberbach as bb
from flatspec import manifest
from flatspec.cli import main, parse_tau
from flatspec import orthogonal as od


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_tau():
    assert parse_tau("2;+1", 3) == od.irrep(3, (2,), 1)
    assert parse_tau("1,1;0", 4) == od.irrep(4, (1, 1), 0)
    assert parse_tau(";-1", 1) == od.determinant(1)
    with pytest.raises(ValueError):
        parse_tau("1,1;1", 4)


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "3", "--weight-bound", "1")
    assert code == 0
    assert len(out.splitlines()) == 4
    assert out.count("dim 3") == 2


def test_branch_both_embeddings(capsys):
    code, out, _ = run(capsys, "branch", "4", "1,1;0")
    assert code == 0
    lines = out.splitlines()
    assert sum(l.startswith("standard") for l in lines) == 2
    assert sum(l.startswith("M") for l in lines) == 2


def test_character(capsys):
    code, out, _ = run(capsys, "character", "1;-1", "[[-1,0,0],[0,-1,0],[0,0,-1]]")
    assert code == 0 and out.startswith("-3 ")
    code, _, err = run(capsys, "character", "1;-1", "[[1,1],[0,1]]")
    assert code == 2 and "error" in err


def test_presets(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0 and "klein-bottle" in out
    code, out, _ = run(capsys, "presets", "--format", "json")
    data = json.loads(out)
    assert set(data["groups"]) == set(bb.presets())


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "klein-bottle", "0;+1", "--nu-max", "2")
    assert code == 0
    lines = out.splitlines()
    header = [l for l in lines if l.startswith("#")]
    assert any(l.startswith("# manifest_sha256=") for l in header)
    assert "# nu_max=2/1" in header
    rows = [l for l in lines if not l.startswith("#")]
    assert rows[0] == "nu_num,nu_den,lambda_float,multiplicity"
    assert rows[1].startswith("0,1,") and rows[1].endswith(",1")


def test_spectrum_json(capsys, tmp_path):
    out_file = tmp_path / "s.json"
    code, _, _ = run(capsys, "spectrum", "torus-rect2", "0;+1", "--nu-max", "1/2", "--format", "json",
                     "-o", str(out_file))
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["nu_max"] == "1/2"
    assert data["manifest_sha256"] == manifest.builtin().sha256


def test_compare_exit_codes(capsys):
    code, out, _ = run(capsys, "compare", "klein-bottle", "torus-Z2", "--weight-bound", "1",
                       "--nu-max", "2")
    assert code == 1 and "consistent: yes" in out
    code, out, _ = run(capsys, "compare", "torus-Z2", "torus-Z2", "--weight-bound", "1",
                       "--nu-max", "2", "--format", "json")
    assert code == 0 and json.loads(out)["report"]["representation_equivalence"]["equivalent_up_to_cutoffs"]


def test_reconstruct(capsys):
    code, out, _ = run(capsys, "reconstruct", "klein-bottle", "--weight-bound", "2", "--nu-max", "3")
    assert code == 0
    data = json.loads(out)
    assert data["round_trip"]["ok"]


def test_errors_exit_2(capsys):
    code, _, err = run(capsys, "spectrum", "no-such-group", ";+1", "--nu-max", "1")
    assert code == 2 and "no-such-group" in err
    code, _, _ = run(capsys, "spectrum", "torus-Z2", "5;+2", "--nu-max", "1")
    assert code == 2
    code, _, _ = run(capsys, "spectrum", "torus-Z2", "0;+1", "--nu-max", "1", "--threads", "0")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["spectrum", "torus-Z2", "0;+1", "--nu-max", "-1"])


def write_manifest(path):
    half = "1/2"
    data = {
        "version": 1,
        "groups": {
            "kb": {"n": 2, "basis": [[1, 0], [0, 1]],
                   "generators": [{"coords": "lattice", "matrix": [[1, 0], [0, -1]],
                                   "translation": [half, 0]}]},
            "t2": {"n": 2, "basis": [[1, 0], [0, 1]], "generators": []},
        },
        "jobs": [
            {"command": "spectrum", "group": "kb", "tau": "0;+1", "nu_max": "1"},
            {"command": "compare", "first": "kb", "second": "t2", "weight_bound": 1, "nu_max": "1"},
        ],
    }
    path.write_text(json.dumps(data))
    return data


def test_manifest_and_run(capsys, tmp_path):
    path = tmp_path / "m.json"
    write_manifest(path)
    man = manifest.load(path)
    assert set(man.groups) == {"kb", "t2"}
    assert man.group("kb").canonical_key() == bb.presets()["klein-bottle"].canonical_key()
    code, out, _ = run(capsys, "run", str(path))
    assert code == 1  # the compare job distinguishes the pair
    assert man.sha256 in out


def test_bad_manifest(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"version": 1, "groups": {"x": {"n": 2, "basis": [[1, 0], [0, 1]],
                    "generators": [{"matrix": [[1, 0], [0, -1]], "translation": [0, 0]}]}}}))
    code, _, err = run(capsys, "spectrum", "x", "0;+1", "--nu-max", "1", "-m", str(path))
    assert code == 2 and "error" in err


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--n", "2", "--weight-bound", "1", "--nu-max", "2")
    assert code == 0
    data = json.loads(out)
    assert data["members"] == len(bb.diagonal_family(bb.FamilyDescriptor(n=2)))


def test_character_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FLATSPEC_CACHE", str(tmp_path))
    code, first, _ = run(capsys, "spectrum", "hantzsche-wendt", "1;+1", "--nu-max", "2")
    assert code == 0 and (tmp_path / "characters.json").exists()
    code, second, _ = run(capsys, "spectrum", "hantzsche-wendt", "1;+1", "--nu-max", "2")
    assert first == second


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flatspec.cli", "catalog", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "dim 2" in proc.stdout


def test_search_output_is_a_manifest(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--n", "3", "--weight-bound", "1", "--nu-max", "3")
    assert code == 0
    data = json.loads(out)
    path = tmp_path / "found.json"
    path.write_text(json.dumps(data["manifest"]))
    bucketed = {name for b in data["buckets"] for name in b}
    assert set(data["manifest"]["groups"]) == bucketed
    fam = {g.name: g for g in bb.diagonal_family(bb.FamilyDescriptor(n=3))}
    man = manifest.load(path)
    for name in bucketed:
        assert man.group(name).canonical_key() == fam[name].canonical_key()
    assert data["pairs"]
    for pair in data["pairs"][:5]:
        code, _, _ = run(capsys, "compare", pair["first"], pair["second"], "--weight-bound", "1",
                         "--nu-max", "3", "-m", str(path))
        assert code == 1
