"""Command-line behaviour: outputs, exit codes, determinism."""

import json

import pytest

from capgames.cli import main, parse_levels


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_levels():
    assert parse_levels("1..4") == [1, 2, 3, 4]
    assert parse_levels("5,1..2") == [1, 2, 5]


def test_aog_trend_csv(capsys):
    code, out, _ = run(capsys, "aog", "--M", "10", "--rho", "1/5", "--mu", "-4/5",
                       "--levels", "1..24", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "b,w_eq_closed,w_best,poa"
    assert lines[22] == "22,44/5,22,5/2"
    assert lines[21].startswith("21,10,")


def test_aog_decimal_flags(capsys):
    a = run(capsys, "aog", "--M", "2", "--rho", "0.2", "--mu", "-0.5", "--csv")[1]
    b = run(capsys, "aog", "--M", "2", "--rho", "1/5", "--mu", "-1/2", "--csv")[1]
    assert a == b


def test_aog_outside_interior(capsys):
    code, _, err = run(capsys, "aog", "--M", "1", "--rho", "1/5", "--mu", "-1/10")
    assert code == 2 and "outside interior" in err


def test_validate_missing_default(tmp_path, capsys):
    data = {"variant": "dncda", "vertices": ["s", "a", "t"], "source": "s", "sink": "t",
            "bound": 1, "players": 1,
            "edges": [{"from": "s", "to": "a", "weight": 1, "delay": ["1"]},
                      {"from": "a", "to": "t", "weight": 1, "delay": ["1"]}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2
    assert "missing default action" in err


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "validate", str(tmp_path / "nope.json"))[0] == 1
    (tmp_path / "x.json").write_text("{not json")
    assert run(capsys, "validate", str(tmp_path / "x.json"))[0] == 1
    assert run(capsys, "sweep", "x", "--levels", "a..b")[0] == 1


def test_threshold_round_trip(tmp_path, capsys):
    tg = tmp_path / "tg.json"
    tg.write_text(json.dumps({"n": 2, "pair_delay": {"1,2": ["1", "3"]},
                              "out_delay": {"1": ["2"], "2": ["2"]}}))
    out = tmp_path / "g.json"
    assert run(capsys, "construct", "threshold", "--n", "2", "--tables", str(tg),
               "--out", str(out))[0] == 0
    assert run(capsys, "validate", str(out))[0] == 0
    code, text, _ = run(capsys, "enumerate", str(out))
    assert code == 0
    assert json.loads(text)["pnes"] == 2


@pytest.mark.parametrize("argv", [
    ["threshold", "--n", "3", "--seed", "4"],
    ["partition3-best", "--items", "3,3,4", "--T", "10"],
    ["partition3-worst", "--items", "3,3,4", "--T", "10"],
    ["pp-positive", "--table", "1,2"],
    ["pp-zero", "--table", "0,1"],
    ["ap", "--table", "1"],
    ["gmg-pp-gold", "--table", "1,1/2"],
    ["gmg-pp-mine", "--table", "-1,-2"],
    ["gmg-bwr", "--table", "1,9/10,1/2", "--n", "3"],
    ["gmg-bfr", "--table", "1,1"],
    ["random-dnc", "--seed", "3"],
    ["random-dncda", "--seed", "3"],
    ["random-layout", "--seed", "3"],
])
def test_constructions_validate(tmp_path, capsys, argv):
    out = tmp_path / "c.json"
    assert run(capsys, "construct", *argv, "--out", str(out))[0] == 0
    code, text, err = run(capsys, "validate", str(out))
    assert code == 0, err


def test_construct_refuses(capsys):
    code, _, err = run(capsys, "construct", "pp-positive", "--table", "2,2")
    assert code == 2 and "no counterexample" in err


def test_sweep_csv_deterministic(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(capsys, "construct", "random-dncda", "--seed", "11", "--players", "3", "--out", str(g))
    a = run(capsys, "sweep", str(g), "--workers", "2")[1]
    b = run(capsys, "sweep", str(g), "--workers", "2")[1]
    assert a == b
    assert a.startswith("b,bestw,worstw,centralized_best\n")
    assert "# PP:" in a


def test_budget_exit(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(capsys, "construct", "gmg-pp-gold", "--table", "1,1/2", "--out", str(g))
    code, _, err = run(capsys, "sweep", str(g), "--levels", "6", "--budget", "100")
    assert code == 3 and "budget" in err


def test_solve_trace(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(capsys, "construct", "random-dnc", "--seed", "2", "--players", "3", "--out", str(g))
    code, out, _ = run(capsys, "solve", str(g), "--csv", "--pivot", "round-robin")
    assert code == 0
    assert out.splitlines()[0] == "step,player,old_delay,new_delay,potential"
    code, out, _ = run(capsys, "solve", str(g))
    assert json.loads(out)["is_pne"] is True


def test_parse_program(tmp_path, capsys):
    p = tmp_path / "p.txt"
    p.write_text("if (x < 2) { return 1; } else { return 0; }")
    lay = tmp_path / "l.json"
    run(capsys, "construct", "random-layout", "--seed", "1", "--size", "4", "--out", str(lay))
    code, out, _ = run(capsys, "parse-program", str(p), "--grammar", "piecewise",
                       "--instance", str(lay))
    assert code == 0
    assert json.loads(out)["assignment"] == [1, 1, 0, 0]
    p.write_text("if (x < ) {")
    code, _, err = run(capsys, "parse-program", str(p), "--grammar", "piecewise")
    assert code == 1 and "1:" in err


def test_enumerate_gmg_csv(tmp_path, capsys):
    lay = tmp_path / "l.json"
    run(capsys, "construct", "gmg-bfr", "--table", "1,1", "--out", str(lay))
    code, out, _ = run(capsys, "enumerate", str(lay), "--csv")
    assert code == 0
    assert out.splitlines()[0] == "profile,welfare"
