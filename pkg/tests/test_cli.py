import json

import pytest

from freeprod.cli import run

WORKED = {
    "factors": [
        {
            "name": "A",
            "atoms": [
                {"label": "p1", "mass": "3/5"},
                {"label": "p2", "mass": "3/10"},
                {"label": "p3", "mass": "1/10"},
            ],
        },
        {
            "name": "B",
            "atoms": [
                {"label": "q1", "mass": "2/5"},
                {"label": "q2", "mass": "3/5"},
            ],
        },
    ]
}

TWO_PROJ_PROBLEM = {
    "factors": [
        {
            "name": "A",
            "atoms": [
                {"label": "p1", "mass": "1/2"},
                {"label": "p2", "mass": "1/2"},
            ],
        },
        {
            "name": "B",
            "atoms": [
                {"label": "q1", "mass": "7/10"},
                {"label": "q2", "mass": "3/10"},
            ],
        },
    ]
}


@pytest.fixture
def problem_file(tmp_path):
    def write(obj, name="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return True


def test_analyze_json(problem_file, capsys):
    assert run(["analyze", problem_file(WORKED), "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["r0_trace"] == "4/5"
    assert obj["summands"] == [{"tuple": {"A": "p1", "B": "q2"}, "gamma": "1/5"}]
    assert obj["verdicts"]["afr_simple"] is False
    assert obj["verdicts"]["stable_rank_one"] == "true"
    assert obj["ideal_count"] == 6
    assert _no_floats(obj)


def test_analyze_text(problem_file, capsys):
    assert run(["analyze", problem_file(WORKED)]) == 0
    out = capsys.readouterr().out
    assert "Afr = Afr₀^{r0=4/5} ⊕ C^{1/5}_{p1∧q2}" in out
    assert "ideal_count=6" in out


def test_analyze_two_projection_redirect(problem_file, capsys):
    assert run(["analyze", problem_file(TWO_PROJ_PROBLEM)]) == 1
    err = capsys.readouterr().err
    assert "two-proj" in err


def test_analyze_invalid_masses(problem_file, capsys):
    bad = {"factors": [{"name": "A", "atoms": [{"label": "p", "mass": "1/2"}]}]}
    assert run(["analyze", problem_file(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_analyze_missing_file(capsys):
    assert run(["analyze", "/nonexistent/problem.json"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["two-proj", "--alpha", "7/10"])  # --beta missing
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_two_proj_json_and_csv(tmp_path, capsys):
    csv = tmp_path / "density.csv"
    assert run([
        "two-proj", "--alpha", "0.7", "--beta", "3/5",
        "--density-csv", str(csv), "--format", "json",
    ]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["atom_at_zero"] == "2/5"
    assert obj["atom_at_one"] == "3/10"
    assert obj["support"][0] == pytest.approx(0.011001113587126909, abs=1e-12)
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,density"
    assert len(lines) == 1025


def test_moments_json(capsys):
    assert run([
        "moments", "--alpha", "7/10", "--beta", "3/5",
        "--max-n", "4", "--compare-law", "--format", "json",
    ]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["wedge_trace"] == "3/10"
    assert obj["moments"][1]["exact"] == "21/50"
    assert all(row["abs_error"] < 1e-8 for row in obj["moments"])


def test_ideals_json(problem_file, capsys):
    assert run(["ideals", problem_file(WORKED)]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["ideal_count"] == 6
    assert len(obj["ideals"]) == 6
    assert _no_floats(obj)


def test_mc_exit_codes(capsys):
    assert run([
        "mc", "--alpha", "7/10", "--beta", "3/5",
        "--dim", "128", "--seed", "0", "--trials", "2",
    ]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["pass"] is True
    # an undersized dimension is a domain error, not a crash
    assert run(["mc", "--alpha", "1/2", "--beta", "1/2", "--dim", "8"]) == 1


def test_mc_eig_csv(tmp_path, capsys):
    csv = tmp_path / "eigs.csv"
    assert run([
        "mc", "--alpha", "1/2", "--beta", "1/2",
        "--dim", "32", "--trials", "2", "--eig-csv", str(csv),
    ]) == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "trial,index,eigenvalue"
    assert len(lines) == 1 + 2 * 32


def test_conjecture_abelian(problem_file, capsys):
    path = problem_file({
        "X": {"name": "X", "atoms": [{"label": "x1", "mass": "3/5"},
                                     {"label": "x2", "mass": "2/5"}]},
        "Y": {"name": "Y", "atoms": [{"label": "y1", "mass": "1/2"},
                                     {"label": "y2", "mass": "1/2"}]},
    }, "conj.json")
    assert run(["conjecture", "--kind", "abelian", path]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["status"] == "proved-nonsimple"
    assert obj["violations"][0]["lhs"] == "11/10"


def test_conjecture_matrix(problem_file, capsys):
    path = problem_file({
        "A": {"blocks": [{"size": 1, "weights": ["1/2"]},
                         {"size": 1, "weights": ["1/2"]}]},
        "B": {"blocks": [{"size": 2, "weights": ["1/8", "3/8"]},
                         {"size": 2, "weights": ["1/8", "3/8"]}]},
    }, "conj.json")
    assert run(["conjecture", "--kind", "matrix", path]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["status"] == "conjectured-simple"


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    assert "freeprod" in capsys.readouterr().out


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in ("analyze", "two-proj", "moments", "ideals", "mc", "conjecture"):
        assert name in out


def test_infinite_problem_via_cli(problem_file, capsys):
    obj = {
        "factors": [
            {"name": "F1", "atoms": [{"label": "a", "mass": "1/2"}],
             "diffuse_mass": "1/2"},
            {"name": "F2", "atoms": [{"label": "b", "mass": "3/4"},
                                     {"label": "c", "mass": "1/4"}]},
        ],
        "tail": {
            "explicit_deficits": ["1/16", "1/32"],
            "remainder_sum_lower_bound": "1/32",
        },
    }
    assert run(["analyze", problem_file(obj), "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["infinite"] is True
    assert rep["r0_trace"] == "7/8"
    assert rep["gamma0_as_printed"] == "1/8"
    assert len(rep["characters"]) == 1
