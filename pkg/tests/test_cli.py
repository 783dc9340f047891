from __future__ import annotations

import json

import pytest

from motzeta import __version__
from motzeta.cli import EXIT_BOUNDS, EXIT_FAILED, EXIT_OK, EXIT_PARSE, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_zeta_example(capsys):
    code, out = call(capsys, "zeta", "--variety", "elliptic", "--q", "5", "--a", "1", "--prec", "6")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["ok"]
    assert rep["version"] == __version__ and rep["command"] == "zeta"
    assert rep["zeta"] == rep["rational_form"] == [1, 7, 42, 217, 1092, 5467, 27342]


def test_howe_example(capsys):
    code, out = call(capsys, "howe", "--max-blocks", "8", "--max-n", "3")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["failures"] == [] and rep["tuples"] > 1000


def test_poisson_example_csv(capsys, tmp_path):
    code = run(["poisson", "--q", "2", "--n", "1", "--trials", "200", "--seed", "1", "--format", "csv",
                "--out", str(tmp_path)])
    assert code == EXIT_OK
    lines = (tmp_path / "poisson.csv").read_text().splitlines()
    assert lines[0] == "seed,q,levels,lhs,rhs,equal"
    assert len(lines) == 201 and all(line.endswith(",true") for line in lines[1:])


@pytest.mark.parametrize("argv", [
    ["eulerprod", "--q", "3", "--prec", "5", "--base", "gm", "--factor", "quadratic"],
    ["mult-check", "--trials", "3", "--seed", "4"],
    ["height-demo", "--q", "2", "--dmax", "6"],
    ["family-poisson", "--q", "2", "--m", "1"],
    ["annulus", "--q", "5", "--m", "2", "--d", "3"],
])
def test_reports_are_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(argv + ["--out", str(a)]) == EXIT_OK
    assert run(argv + ["--out", str(b)]) == EXIT_OK
    name = f"{argv[0]}.json"
    assert (a / name).read_bytes() == (b / name).read_bytes()


@pytest.mark.parametrize("argv", [
    ["sympow", "--variety", "projective", "--n", "2", "--n-power", "3"],
    ["oracle", "--q", "3", "--base", "projective", "--factor", "linear"],
    ["double-check", "--cover", "squaring_cover", "--base", "gm"],
    ["ts-example"], ["dl-zeta", "--example", "square"], ["weight", "--variety", "gm"],
    ["radius", "--variety", "projective", "--n", "2"], ["coef-growth", "--example", "double"],
    ["pole-order"],
])
def test_commands_succeed(capsys, argv):
    code, out = call(capsys, *argv)
    assert code == EXIT_OK
    assert json.loads(out)["ok"] is True


def test_scenario_file(capsys, tmp_path):
    scen = {"compactification": {"n": 2, "rho": {"a": 2, "b": 3}, "A_D": ["b"],
                                 "good": [{"A": [], "class": {"L": 2}}],
                                 "bad": {"0": {"strata": [{"A": [], "class": {"L": 2}}], "d": 1}}}}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(scen))
    code, out = call(capsys, "pole-order", "--scenario", str(path))
    assert code == EXIT_OK and json.loads(out)["pole_order"] == 2


def test_exit_codes(capsys, tmp_path):
    assert run(["no-such-command"]) == EXIT_PARSE
    assert run(["zeta", "--q", "x"]) == EXIT_PARSE
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["pole-order", "--scenario", str(bad)]) == EXIT_PARSE
    growth = tmp_path / "g.json"
    growth.write_text(json.dumps({"numerator": [[[k, k, 1]] for k in range(9)], "a": 1, "r": 1}))
    assert run(["coef-growth", "--scenario", str(growth), "--prec", "8"]) == EXIT_BOUNDS
    # characteristic dividing d: the integral is not zero, so the verification fails
    assert run(["annulus", "--q", "3", "--m", "1", "--d", "3", "--P", "[[1], [0, 1]]"]) == EXIT_FAILED
    capsys.readouterr()


def test_csv_key_value_layout(capsys):
    code, out = call(capsys, "pole-order", "--format", "csv")
    rows = out.splitlines()
    assert code == EXIT_OK and rows[0] == "key,value" and rows[1] == f"version,{__version__}"
