from __future__ import annotations

import json

import pytest

from lehmer_congruence.cli import main
from lehmer_congruence.errors import BoundViolation, InputError
from lehmer_congruence.intpoly import congruent_to_phi, divides_mod, phi
from lehmer_congruence.search import COLUMNS, CSV_SCHEMA, SearchConfig, candidates, data_section, run_search


def test_check_json(capsys):
    assert main(["check", "--poly", "X^2+3X+3", "-m", "2", "--n", "3", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["delta"] == "2/3" and out["delta_threshold"] is True
    assert out["resultant_phi"] == "4"


def test_exit_codes(capsys):
    assert main(["check", "--poly", "X^2+X+1", "-m", "2", "--n", "3"]) == 3
    assert main(["check", "--poly", "X^2+1.5", "-m", "2", "--n", "3"]) == 2
    assert main(["check", "--poly", "2X+1", "-m", "2", "--n", "3"]) == 2
    assert main(["elliptic", "--curve", "0,0,1,-1,0", "--point", "0,0", "-m", "37", "--n", "2"]) == 3
    assert main(["elliptic", "--curve", "0,0,0,0,1", "--point", "2,3", "-m", "5", "--n", "2"]) == 3
    err = capsys.readouterr().err
    assert "error:" in err


def test_cyclotomic_input_lists_factors(capsys):
    assert main(["check", "--poly", "(X^2+X+1)(X^2-2)", "-m", "2", "--n", "3"]) == 3
    assert "cyclotomic(3)" in capsys.readouterr().out


def test_elliptic_command(capsys):
    code = main(["elliptic", "--curve", "0,0,1,-1,0", "--point", "0,0", "-m", "2", "--n", "5", "--format", "json"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["delta"] == "1/25"


def test_fejer_command(capsys):
    assert main(["fejer", "--j-max", "8", "--format", "json"]) == 0


def test_bounds_table(capsys):
    assert main(["bounds-table", "-D", "4,6", "-m", "2,3"]) == 0
    assert capsys.readouterr().out.strip()


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("poly = X^2+3X+3\nmodulus = 2\nn = 3\nformat = json\n")
    assert main(["--config", str(cfg), "check"]) == 0
    assert json.loads(capsys.readouterr().out)["m"] == 2
    assert main(["--config", str(cfg), "check", "-m", "7"]) == 0
    assert json.loads(capsys.readouterr().out)["m"] == 7
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    assert main(["--config", str(bad), "check"]) == 2


@pytest.mark.parametrize("mode", ["congruent-to-phi", "divisible-by-phi", "samuels"])
def test_candidates_belong_to_family(mode):
    kw = {"n": 4} if mode == "divisible-by-phi" else {}
    cfg = SearchConfig(degree=6, modulus=3, count=30, mode=mode, u="X-1" if mode == "samuels" else "0", **kw)
    for _, f in candidates(cfg):
        assert f.is_monic() and f.degree == 6
        if mode == "congruent-to-phi":
            assert congruent_to_phi(f, 3)
        if mode == "divisible-by-phi":
            assert divides_mod(phi(3), f, 3)


def test_config_validation():
    with pytest.raises(InputError):
        SearchConfig(degree=4, modulus=2, n=3)
    with pytest.raises(InputError):
        SearchConfig(degree=4, modulus=2, mode="bogus")
    with pytest.raises(InputError):
        SearchConfig(degree=3, modulus=2, mode="samuels", u="X^3")


def test_exhaustive_count():
    cfg = SearchConfig(degree=3, modulus=3, coeff_bound=2, exhaustive=True)
    # residues 1, 1, 1 mod 3 in [-2, 2]: {-2, 1} for each coefficient
    assert len(list(candidates(cfg))) == 8


def test_run_writes_outputs(tmp_path):
    out = tmp_path / "run.csv"
    rec = run_search(SearchConfig(degree=4, modulus=3, count=20, seed=5, out=str(out)))
    lines = out.read_text().splitlines()
    assert lines[0] == f"# {CSV_SCHEMA}"
    assert lines[3].split(",") == COLUMNS
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["generated"] == 20 == rec.generated
    assert summary["counterexample_count"] == 0


def test_same_seed_same_data_section():
    cfg = SearchConfig(degree=5, modulus=2, count=25, seed=11)
    assert data_section(run_search(cfg, write=False)) == data_section(run_search(cfg, write=False))
    other = SearchConfig(degree=5, modulus=2, count=25, seed=12)
    assert data_section(run_search(cfg, write=False)) != data_section(run_search(other, write=False))


def test_parallel_matches_serial():
    serial = SearchConfig(degree=6, modulus=3, n=3, mode="divisible-by-phi", count=40, seed=3)
    par = SearchConfig(degree=6, modulus=3, n=3, mode="divisible-by-phi", count=40, seed=3, workers=3)
    a = run_search(serial, write=False)
    b = run_search(par, write=False)
    assert [r.csv_row() for r in a.rows] == [r.csv_row() for r in b.rows]


def test_violation_is_reported(tmp_path, monkeypatch):
    import lehmer_congruence.search as search

    monkeypatch.setattr(search, "bdm_reference", lambda D, m: 100.0)
    out = tmp_path / "v.csv"
    with pytest.raises(BoundViolation):
        run_search(SearchConfig(degree=3, modulus=2, count=3, out=str(out)))
    dump = json.loads(out.with_suffix(".counterexample.json").read_text())
    assert dump["counterexamples"][0]["violations"] == ["bdm"]
