"""CLI harness tests: config parsing contract, CSV schemas, reproducibility,
exit codes."""

import os
import subprocess
import sys

import pytest

from biomote.cli import CSV_SCHEMAS, main
from biomote.config import ConfigError, default_parameters, load_config, packaged_config_path


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    env.pop("BIOLINK_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "biomote.cli", *args],
                          capture_output=True, text=True, env=env)


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_shipped_table3_values():
    params = load_config(packaged_config_path())
    assert params.reader_radius_m == 0.05
    assert params.mote_radius_m == 125e-6
    assert params.noise_dbm == -105.0
    assert params.resonance_freq_hz == 13.56e6
    assert params.medium_rel_permeability == 1.0
    assert params.subcarrier_divider == 6


def test_repo_config_matches_packaged(tmp_path):
    repo = load_config("configs/table3.cfg")
    packaged = load_config(packaged_config_path())
    assert repo == packaged


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "empty.cfg"
    p.write_text("")
    assert load_config(p) == default_parameters()


def test_comments_and_blank_lines(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# top comment\n\nseparation_m = 0.05  # inline\n")
    assert load_config(p).separation_m == 0.05


def test_unknown_key_names_line(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# ok\nbogus_key = 3\n")
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert err.value.line == 2
    assert "bogus_key" in str(err.value)


def test_malformed_line_rejected(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("separation_m 0.05\n")
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert err.value.line == 1


def test_out_of_range_names_key_and_line(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("\nresonance_freq_hz = -1\n")
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert err.value.line == 2
    assert "resonance_freq_hz" in str(err.value)


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/nowhere.cfg")


def test_list_and_range_syntax(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("mac_n_motes = 10:40:10\nlink_distances_m = 0.05, 0.06\n")
    params = load_config(p)
    assert params.mac_n_motes == [10, 20, 30, 40]
    assert params.link_distances_m == [0.05, 0.06]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def test_schema_headers_match_contract(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table1", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == CSV_SCHEMAS["table1"]


def test_table1_brackets_reference_rows(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table1", "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    pre = {(float(r[0]), float(r[1])): float(r[7]) for r in rows}
    assert abs(pre[(1.0, 1.0)] - (-128.37)) <= 3.0
    assert abs(pre[(1.0, 10.0)] - (-108.38)) <= 3.0
    assert abs(pre[(1.0, 50.0)] - (-95.47)) <= 3.0
    assert abs(pre[(13.56, 1.0)] - (-98.82)) <= 3.0


def test_link_sweep_monotone(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["link-sweep", "--out", str(out)]) == 0
    vals = [float(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["mac-compare", "--seed", "7", "--set", "mac_n_motes=10,30",
            "--set", "mac_trials=10"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["mac-scenario2", "--set", "mac_n_motes=500", "--set", "mac_trials=20",
            "--set", "mac_read_times_s=2"]
    assert main([*base, "--seed", "1", "--out", str(a)]) == 0
    assert main([*base, "--seed", "2", "--out", str(b)]) == 0
    assert a.read_bytes() != b.read_bytes()


def test_env_seed_fallback(tmp_path):
    out_env = tmp_path / "env.csv"
    out_flag = tmp_path / "flag.csv"
    args = ["mac-scenario2", "--set", "mac_n_motes=40", "--set", "mac_trials=10",
            "--set", "mac_read_times_s=2"]
    r = run_cli([*args, "--out", str(out_env)], env_extra={"BIOLINK_SEED": "123"})
    assert r.returncode == 0
    assert main([*args, "--seed", "123", "--out", str(out_flag)]) == 0
    assert out_env.read_bytes() == out_flag.read_bytes()


def test_set_override(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["link-sweep", "--set", "link_distances_m=0.06", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("0.06,")


def test_unknown_set_key_exits_2(tmp_path, capsys):
    rc = main(["link-sweep", "--set", "nope=1", "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "nope" in capsys.readouterr().err


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("drive_voltage_v = -3\n")
    rc = main(["table1", "--config", str(cfg), "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "drive_voltage_v" in err and "line 1" in err


def test_unwritable_output_exits_3(capsys):
    rc = main(["table1", "--out", "/nonexistent-dir/x.csv"])
    assert rc == 3
    assert "runtime error" in capsys.readouterr().err


def test_cli_help_documents_schema():
    r = run_cli(["table1", "--help"])
    assert r.returncode == 0
    assert CSV_SCHEMAS["table1"] in r.stdout
