import json

import pytest

from optout_pricing.cli import ScenarioError, fmt, main, parse_scenario
from optout_pricing.population import Uniform
from optout_pricing.ranges import EmptyRangeError, inclusive_range, parse_range

SINGLE = {
    "distribution": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
    "benefit": 0.6,
    "revenue_rate": 1.0,
    "gamma": 0.3,
}
DUOPOLY = {**SINGLE, "benefit": 1.0, "gamma": 0.5, "duopoly": {"benefit2": 1.0, "revenue_rate2": 1.0, "gamma2": 0.5}}


@pytest.fixture
def write_scenario(tmp_path):
    def write(data, name="s.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return write


def test_parse_minimal_scenario():
    s = parse_scenario(json.dumps({**SINGLE, "gamma": 0.5, "benefit": 1}))
    assert s.distribution == Uniform(0.0, 1.0)
    assert (s.benefit, s.revenue_rate, s.gamma, s.duopoly) == (1.0, 1.0, 0.5, None)


@pytest.mark.parametrize(
    "text, field",
    [
        (json.dumps({**SINGLE, "gamma": 1.5}), "gamma"),
        ('{"gamma": 0.5, "gamma": 0.4}', "gamma"),
        (json.dumps({**SINGLE, "colour": 1}), "colour"),
        (json.dumps({**SINGLE, "revenue_rate": 0}), "revenue_rate"),
        (json.dumps({k: v for k, v in SINGLE.items() if k != "benefit"}), "benefit"),
        (json.dumps({**SINGLE, "distribution": {"kind": "uniform", "lo": 1, "hi": 0}}), "distribution"),
        (json.dumps({**DUOPOLY, "duopoly": {"benefit2": 1, "revenue_rate2": 1, "gamma2": 2}}), "duopoly.gamma2"),
        (json.dumps({**DUOPOLY, "duopoly": {"benefit2": 1, "revenue_rate2": 1, "gamma2": 0.5, "x": 1}}), "duopoly.x"),
        ("{not json", "malformed"),
    ],
)
def test_parse_rejects(text, field):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert field in str(info.value)


def test_gamma_error_names_range():
    with pytest.raises(ScenarioError, match=r"gamma: must lie in \[0, 1\]"):
        parse_scenario(json.dumps({**SINGLE, "gamma": 1.5}))


@pytest.mark.parametrize("data", [SINGLE, DUOPOLY, {**SINGLE, "distribution": {"kind": "empirical", "points": [[0.1, 0.25], [0.7, 0.75]]}}])
def test_dump_scenario_round_trip(data, write_scenario, capsys):
    path = write_scenario(data)
    assert main(["solve-single", "--scenario", path, "--dump-scenario"]) == 0
    dumped = capsys.readouterr().out
    assert parse_scenario(dumped) == parse_scenario(json.dumps(data))


def test_ranges():
    assert parse_range("0:1:0.5") == [0.0, 0.5, 1.0]
    assert parse_range("0:1:0.1")[3] == 0.3
    assert parse_range("0:1:0.3") == [0.0, 0.3, 0.6, 0.9]
    assert parse_range("0.25") == [0.25]
    assert inclusive_range(0, 1, 0.01)[-1] == 1.0 and len(inclusive_range(0, 1, 0.01)) == 101
    with pytest.raises(EmptyRangeError):
        parse_range("1:0:0.1")
    with pytest.raises(EmptyRangeError):
        parse_range("0:1:0")
    with pytest.raises(ValueError):
        parse_range("0:1")


def test_solve_single_summary(write_scenario, capsys):
    assert main(["solve-single", "--scenario", write_scenario(SINGLE), "--step", "0.01"]) == 0
    out = capsys.readouterr().out
    assert out == "c_star=0.6 revenue_star=0.72 revenue_no_optout=0.6 optout_share=0.4\n"


def test_sweep_csv(write_scenario, tmp_path, capsys):
    out = tmp_path / "g.csv"
    rc = main(["sweep", "--scenario", write_scenario(SINGLE), "--param", "gamma", "--values", "0:1:0.5", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "gamma,c_star,revenue_star,revenue_no_optout,optout_share"
    assert len(lines) == 4
    assert lines[1] == "0,0.6,0.6,0.6,0.4"


def test_fmt():
    assert fmt(None) == "none"
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333"
    assert fmt(123456789012.0) == "1.23456789e+11"


def test_solve_duopoly_csv(write_scenario, tmp_path, capsys):
    out = tmp_path / "d.csv"
    args = ["solve-duopoly", "--scenario", write_scenario(DUOPOLY), "--grid", "0:1:0.1", "--out", str(out)]
    assert main(args + ["--dynamics", "--start", "0,0"]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "c1,c2,u1,u2,is_nash"
    assert len(rows) == 1 + 121
    assert rows[1] == "0,0,0.25,0.25,1"
    summary = capsys.readouterr().out
    assert "nash c1=0 c2=0" in summary
    assert "dynamics converged c1=0 c2=0 rounds=1" in summary


def test_solve_duopoly_no_optout_strategy(write_scenario, tmp_path):
    out = tmp_path / "d.csv"
    args = ["solve-duopoly", "--scenario", write_scenario(DUOPOLY), "--grid", "0:1:0.5", "--no-optout", "--out", str(out)]
    assert main(args) == 0
    assert "none,none,0.5,0.5," in out.read_text()


def test_simulate_side_by_side(write_scenario, tmp_path):
    out = tmp_path / "m.csv"
    args = ["simulate", "--scenario", write_scenario(DUOPOLY), "--n", "100000", "--seed", "4", "--cost", "0.3", "--out", str(out)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "component,analytic,monte_carlo,abs_diff"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["targeted_1", "optout_1", "targeted_2", "optout_2", "abstain"]
    assert lines[1].split(",")[1] == "0.15"
    assert all(float(ln.split(",")[3]) <= 0.01 for ln in lines[1:])


@pytest.mark.parametrize(
    "argv, code",
    [
        (["frobnicate"], 1),
        ([], 1),
        (["solve-single"], 1),
        (["sweep", "--param", "gamma", "--values", "0:1:0.5", "--no-scenario"], 1),
        (["solve-duopoly", "--grid", "1:0:0.1"], 2),
        (["solve-duopoly", "--grid", "a:b"], 1),
        (["solve-duopoly", "--grid", "0:1:0.5", "--dynamics", "--start", "9,9"], 1),
        (["sweep", "--param", "gamma", "--values", "0:2:0.5"], 1),
        (["simulate", "--n", "0", "--seed", "1"], 1),
        (["simulate", "--n", "10", "--seed", "1", "--cost", "cheap"], 1),
    ],
)
def test_exit_codes(argv, code, write_scenario, capsys):
    if "--no-scenario" in argv:
        argv = [a for a in argv if a != "--no-scenario"]
    elif len(argv) > 1:
        argv = [argv[0], "--scenario", write_scenario(DUOPOLY)] + argv[1:]
    assert main(argv) == code
    if code == 1 and argv[:1] == ["frobnicate"]:
        assert "usage" in capsys.readouterr().err


def test_invalid_scenario_exit_code(write_scenario, capsys):
    assert main(["solve-single", "--scenario", write_scenario({**SINGLE, "gamma": 1.5})]) == 1
    assert "gamma" in capsys.readouterr().err
    assert main(["solve-single", "--scenario", "/nonexistent/s.json"]) == 1
