"""CLI verbs, exit codes, and output formats."""

import json
import subprocess
import sys

import pytest

from calab.cli import main
from calab.formats import parse_block_map
from calab.ca1d import maps_equal, shift_map
from calab.mulca import mul_prime
from calab.symcore import Alphabet


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_compose_verb(capsys):
    code, out = run_cli(capsys, "compose", "--s", "10", "--a", "mu:2", "--b", "mu:5")
    assert code == 0
    assert maps_equal(parse_block_map(out), shift_map(Alphabet(10)))


def test_commute_verb_exit_codes(capsys):
    code, out = run_cli(capsys, "commute", "--s", "10", "--a", "mu:2", "--b", "mu:5")
    assert code == 0
    assert json.loads(out)["commutes"] is True
    code, out = run_cli(capsys, "commute", "--s", "10", "--a", "mirror", "--b", "zero")
    assert code == 1
    payload = json.loads(out)
    assert payload["commutes"] is False and payload["witness"] == [0]


def test_mu_verb(capsys):
    code, out = run_cli(capsys, "mu", "--s", "6", "--u", "2")
    assert code == 0
    assert parse_block_map(out) == mul_prime(Alphabet(6), 2)


def test_eval_verb(capsys):
    code, out = run_cli(capsys, "eval", "s=10 pre= cyc=3")
    assert code == 0
    assert out.strip() == "1/3"


def test_eval_verb_json(capsys):
    code, out = run_cli(capsys, "eval", "s=15 pre= cyc=7", "--format", "json")
    assert code == 0
    assert json.loads(out)["value"] == "1/2"


def test_represents_verb(capsys):
    code, out = run_cli(capsys, "represents", "--s", "10", "--u", "2",
                        "--trials", "50", "--seed", "1")
    assert code == 0
    code, out = run_cli(capsys, "represents", "--s", "10", "--u", "2",
                        "--trials", "20", "--seed", "1", "--map", "id")
    assert code == 1


def test_witness_pm_verb(capsys):
    code, out = run_cli(capsys, "witness-pm", "--p", "2", "--m", "2",
                        "--steps", "20", "--prefix-len", "200")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_witness_plambda_verb(capsys):
    code, _ = run_cli(capsys, "witness-plambda", "--s", "6", "--trials", "30")
    assert code == 0
    code, _ = run_cli(capsys, "witness-plambda", "--s", "6", "--trials", "10",
                      "--sabotage")
    assert code == 1


def test_poly2ca_and_back(capsys):
    code, out = run_cli(capsys, "poly2ca", "--poly", "ring=mod:6 coeffs=1,1")
    assert code == 0
    rule_text = out
    code, out = run_cli(capsys, "ca2poly", "--map", rule_text, "--ring", "mod:6")
    assert code == 0
    assert json.loads(out)["poly"] == "ring=mod:6 coeffs=1,1"


def test_ca2poly_nonlinear_exit1(capsys):
    code, out = run_cli(capsys, "ca2poly", "--map", "mu:2", "--ring", "mod:10")
    assert code == 1
    assert json.loads(out)["linear"] is False


def test_linhit_verb(capsys):
    code, out = run_cli(capsys, "linhit", "--source", "s=2 gen=thue-morse",
                        "--target", "1,0,1", "--ring", "mod:2")
    assert code == 0
    rule = parse_block_map(out)
    from calab.ca1d import apply
    from calab.symcore import thue_morse
    assert apply(rule, thue_morse(Alphabet(2)).prefix_of(3 + rule.radius)) == (1, 0, 1)


def test_hit_verb(capsys):
    code, out = run_cli(capsys, "hit", "--source", "s=6 gen=champernowne",
                        "--target", "4,5,4")
    assert code == 0
    rule = parse_block_map(out)
    from calab.ca1d import apply
    from calab.symcore import champernowne
    image = apply(rule, champernowne(Alphabet(6)).prefix_of(3 + rule.radius))
    assert image == (4, 5, 4)


def test_witness_verb_and_sabotage(capsys):
    code, out = run_cli(capsys, "witness", "--s", "6", "--p", "2", "--m", "2",
                        "--steps", "20", "--trials", "30")
    assert code == 0
    assert json.loads(out)["passed"] is True
    code, out = run_cli(capsys, "witness", "--s", "6", "--p", "2", "--m", "2",
                        "--steps", "20", "--trials", "30", "--sabotage")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_coverage_with_config_file_and_override(tmp_path, capsys):
    config = tmp_path / "exp.cfg"
    config.write_text(
        "experiment=coverage\ns=6\ngenerators=mu:2,sigma\n"
        "seed_sequence=s=6 gen=champernowne\nword_length=2\nwindow=2\n"
        "prefix_length=300\n")
    code, out = run_cli(capsys, "coverage", "--config", str(config))
    assert code == 0
    report = json.loads(out)
    assert report["final_fraction"] == "1/1"
    code, out = run_cli(capsys, "coverage", "--config", str(config),
                        "--window", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "depth,windows_seen,total_windows,fraction"


def test_lacunary_csv(capsys):
    code, out = run_cli(capsys, "lacunary", "--p", "2", "--m", "2",
                        "--truncation", "3", "--steps", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "step,value,nearest,distance"


def test_config_error_exit2(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense=1\n")
    code = main(["coverage", "--config", str(bad)])
    assert code == 2


def test_cap_env_override(monkeypatch, capsys):
    monkeypatch.setenv("CALAB_CAP", "100")
    code = main(["commutant", "--s", "2", "--generators", "id", "--max-radius", "1"])
    assert code == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "rule.ca1"
    code, _ = run_cli(capsys, "mu", "--s", "10", "--u", "5", "--out", str(target))
    assert code == 0
    assert parse_block_map(target.read_text()) == mul_prime(Alphabet(10), 5)


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "calab", "eval", "s=10 pre= cyc=3"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1/3"
