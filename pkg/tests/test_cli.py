import json

import pytest

from spinsys.cli import ConfigError, merge_config, parse_config_file, run

GRAPH4 = "vertices 4\n0 1 1.0\n1 2 1.0\n2 3 1.0\n"


def read(path):
    return path.read_text()


def test_config_file_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "threads = 2          # comment\n"
        "[spectrum]\n"
        "L = 5\n"
        "model = heisenberg\n"
    )
    sections = parse_config_file(str(cfg))
    assert sections["common"]["threads"] == "2"
    assert sections["spectrum"]["L"] == "5"


def test_config_unknown_section_and_key(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[nonsense]\n")
    with pytest.raises(ConfigError):
        parse_config_file(str(bad))
    with pytest.raises(ConfigError):
        merge_config("spectrum", {"common": {"bogus_key": "1"}}, {})
    with pytest.raises(ConfigError):
        merge_config("spectrum", {}, {"bogus_flag": 1})


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[spectrum]\nL = 3\n")
    merged = merge_config("spectrum", parse_config_file(str(cfg)), {"L": 5})
    assert merged["L"] == 5
    merged2 = merge_config("spectrum", parse_config_file(str(cfg)), {})
    assert merged2["L"] == 3


def test_spectrum_roundtrip(tmp_path):
    out = tmp_path / "spec.csv"
    code = run(["spectrum", "--model", "heisenberg", "--L", "4",
                "--out", str(out)])
    assert code == 0
    lines = read(out).strip().splitlines()
    assert lines[0] == "sector_M,index,energy"
    assert len(lines) == 17          # header + 16 states
    manifest = json.loads(read(tmp_path / "spec.csv.manifest.json"))
    assert manifest["subcommand"] == "spectrum"
    assert all(a["passed"] for a in manifest["assertions"])


def test_json_format(tmp_path):
    out = tmp_path / "spec.json"
    code = run(["spectrum", "--L", "3", "--format", "json", "--out", str(out)])
    assert code == 0
    data = json.loads(read(out))
    assert set(data) == {"sector_M", "index", "energy"}
    assert len(data["energy"]) == 8


def test_foel_emits_level_table(tmp_path):
    out = tmp_path / "foel.csv"
    code = run(["foel", "--L", "4", "--spin", "1", "--out", str(out)])
    assert code == 0
    levels = read(tmp_path / "foel.levels.csv").strip().splitlines()
    assert levels[0] == "twice_S,S,E_min,E_max"
    assert len(levels) == 6          # S = 0..4


def test_ssep_subcommand(tmp_path):
    gfile = tmp_path / "p4.graph"
    gfile.write_text(GRAPH4)
    out = tmp_path / "ssep.csv"
    code = run(["ssep", "--graph", str(gfile), "--out", str(out)])
    assert code == 0
    lines = read(out).strip().splitlines()
    assert lines[0] == "n,dim,lambda_n,aldous_margin"
    assert len(lines) == 4


def test_missing_graph_is_config_error(tmp_path):
    out = tmp_path / "x.csv"
    assert run(["ssep", "--out", str(out)]) == 2
    assert run(["ssep", "--graph", str(tmp_path / "absent.graph"),
                "--out", str(out)]) == 2


def test_bad_model_is_config_error(tmp_path):
    assert run(["spectrum", "--model", "bogus",
                "--out", str(tmp_path / "x.csv")]) == 2


def test_unwritable_output_is_output_error(tmp_path):
    assert run(["spectrum", "--L", "3",
                "--out", str(tmp_path / "no_dir" / "x.csv")]) == 4


def test_byte_identical_across_threads(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(["cluster", "--L", "6", "--threads", "1", "--out", str(a)]) == 0
    assert run(["cluster", "--L", "6", "--threads", "4", "--out", str(b)]) == 0
    assert read(a) == read(b)


def test_droplet_assertion_failure_is_exit_one(tmp_path):
    # n = 3 at tiny L is far from the infinite-volume value
    out = tmp_path / "drop.csv"
    code = run(["droplet", "--q", "0.5", "--n", "3", "--Lmin", "8",
                "--Lmax", "8", "--out", str(out)])
    assert code == 1
    manifest = json.loads(read(tmp_path / "drop.csv.manifest.json"))
    assert any(not a["passed"] for a in manifest["assertions"])
