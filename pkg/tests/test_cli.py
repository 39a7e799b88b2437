import json
import subprocess
import sys

import pytest

from robindrift.cli import main, parse_args

QUICK = {
    "eigen": ["--domain", "disk(1)", "--h", "0.1", "--bc", "dirichlet"],
    "sweep": ["--domain", "ellipse(2,0.5)", "--h", "0.1", "--beta-grid", "0.5,1,2", "--drift", "random:3",
              "--tau", "1"],
    "limits": ["--domain", "stadium(2,0.5)", "--h", "0.1", "--drift", "radial", "--tau", "1"],
    "extremal": ["--domain", "disk(1)", "--h", "0.1", "--tau", "1", "--sense", "maximize"],
    "fk": ["--domain", "ellipse(2,0.5)", "--h", "0.1", "--tau", "1", "--beta-grid", "5,10"],
    "radial": ["--d", "2", "--tau", "1", "--beta-grid", "1,10", "--n", "512"],
    "converge": ["--domain", "disk(1)", "--h-list", "0.2,0.1,0.05", "--bc", "dirichlet"],
}


@pytest.mark.parametrize("cmd", sorted(QUICK))
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_commands_write_output_and_pass(cmd, fmt, tmp_path, capsys):
    code = main([cmd, *QUICK[cmd], "--out", str(tmp_path), "--format", fmt])
    out = capsys.readouterr().out
    assert code == 0, out
    assert out.startswith("PASS")
    text = (tmp_path / f"{cmd}.{fmt}").read_text()
    if fmt == "json":
        assert json.loads(text)["schema_version"] == 1 if cmd != "eigen" else "lambda" in json.loads(text)
    else:
        assert "," in text.splitlines()[0]


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"domain": "stadium(2,0.5)", "h": 0.1, "beta-grid": [1, 2]}))
    args = parse_args(["sweep", "--config", str(cfg), "--h", "0.2"])
    assert args.domain == "stadium(2,0.5)"
    assert args.h == 0.2  # command line wins
    assert args.beta_grid == [1.0, 2.0]


def test_invalid_input_exits_with_two(tmp_path, capsys):
    assert main(["eigen", "--domain", "ellipse(2,0.5)", "--h", "0.3", "--out", str(tmp_path)]) == 2
    assert "too coarse" in capsys.readouterr().err
    assert main(["sweep", "--beta-grid", "0,1", "--out", str(tmp_path)]) == 2


def test_failed_check_exits_with_one(tmp_path, capsys):
    # two-step refinement from a very coarse mesh cannot show second order
    code = main(["converge", "--domain", "disk(1)", "--h-list", "0.9,0.85,0.8", "--bc", "dirichlet",
                 "--out", str(tmp_path)])
    assert code == 1
    assert capsys.readouterr().out.startswith("FAIL")


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "robindrift", "radial", "--n", "256", "--bc", "dirichlet",
                           "--out", str(tmp_path), "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "radial.csv").read_text().startswith("d,R,tau,sign,bc,beta,lambda,err_estimate")
