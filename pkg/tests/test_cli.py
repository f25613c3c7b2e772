import json
import os

import pytest

from quadtwist import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kernel(capsys):
    code, out, _ = run(capsys, "kernel", "--sigma", "1.2")
    assert code == 0
    assert "0.416666666666667" in out


def test_poisson_check_pass(capsys):
    code, out, _ = run(capsys, "poisson-check", "--q", "3", "--X", "10")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "q X lhs rhs diff mTerms"
    assert len(lines[1].split()) == 6
    assert lines[-1] == "PASS diff<1e-6"


def test_poisson_check_accuracy_exit(capsys):
    # a contour this short cannot certify its tail
    code, _, err = run(capsys, "poisson-check", "--q", "3", "--X", "10", "--height", "10")
    assert code == 4
    assert "accuracy" in err


def test_density_csv(capsys, tmp_path):
    out_path = tmp_path / "d.csv"
    code, _, _ = run(capsys, "density", "--family", "gl1", "--sigma", "1.0", "--X", "1e3,1e4",
                     "--out", str(out_path))
    assert code == 0
    rows = out_path.read_text().strip().splitlines()
    assert rows[0].split(",")[:3] == ["X", "family", "M"]
    assert len(rows) == 3
    diff = [abs(float(r.split(",")[10])) for r in rows[1:]]
    assert diff[1] < diff[0]


def test_density_json_keys(capsys):
    code, out, _ = run(capsys, "density", "--X", "1e3", "--format", "json")
    assert code == 0
    (obj,) = json.loads(out)
    assert set(obj) == set(cli.dens.REPORT_KEYS)


@pytest.mark.parametrize("argv", [
    ["kernel", "--sigma", "0.5,1.0"],
    ["gauss-check", "--qmax", "30"],
    ["delta-check", "--x", "1e3"],
    ["sieve", "--limit", "1000"],
    ["tau", "--N", "50"],
    ["split-check", "--X", "1e3"],
    ["density-sweep", "--X", "1e3", "--sigma", "0.5", "--mode", "simplified"],
    ["poisson-check", "--q", "5", "--X", "5"],
])
def test_every_command_speaks_json(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    json.loads(out)


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\ntest.sigma = 0.5\nrun.X = 1e3\nmode = full\n")
    code, out, _ = run(capsys, "density", "--config", str(cfg), "--format", "json")
    (obj,) = json.loads(out)
    assert code == 0 and obj["sigma"] == 0.5 and obj["mode"] == "full"
    code, out, _ = run(capsys, "density", "--config", str(cfg), "--sigma", "0.8", "--format", "json")
    (obj,) = json.loads(out)
    assert obj["sigma"] == 0.8 and obj["mode"] == "full"


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 3\n")
    code, _, err = run(capsys, "kernel", "--config", str(cfg))
    assert code == 2
    assert "valid keys" in err and "sigma" in err


def test_usage_errors(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "density", "--family", "delta", "--sigma", "1.2", "--X", "1e3")[0] == 2


def test_tau_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    assert run(capsys, "tau", "--N", "200")[0] == 0
    assert (tmp_path / "tau.txt").exists()
    code, out, _ = run(capsys, "tau", "--N", "100", "--show", "3", "-v")
    assert code == 0 and out.split() == ["1", "1", "2", "-24", "3", "252"]


def test_corrupt_cache_is_rebuilt(capsys, tmp_path):
    (tmp_path / "tau.txt").write_text("1\t1\n2\t99\n")
    code, out, _ = run(capsys, "tau", "--N", "20", "--show", "2", "--cache-dir", str(tmp_path))
    assert code == 0 and "-24" in out


def test_range_exit(capsys, tmp_path):
    # the GL(2) provider needs tau past the available table
    code, _, err = run(capsys, "delta-check", "--family", "delta", "--x", "3e9")
    assert code == 3
    assert "range error" in err


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "quadtwist", "kernel", "--sigma", "0.8"],
                         capture_output=True, text=True, env={**os.environ})
    assert res.returncode == 0 and "0.6" in res.stdout
