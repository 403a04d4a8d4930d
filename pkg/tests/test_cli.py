import json
import subprocess
import sys

import pytest

from cordcalc.augment import AugAssignment, augmentation_residual, check_augmentation
from cordcalc.braid import BraidWord, parse_braid
from cordcalc.cli import InputError, RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_augpoly_trefoil_matches(capsys):
    code, out, _ = run(capsys, "augpoly", "--braid", "1 1 1", "--expect-torus", "2", "3")
    assert code == 0
    assert "MATCH (up to sign)" in out


def test_augpoly_mismatch_exit_code(capsys):
    code, out, _ = run(capsys, "augpoly", "--braid", "1 1 1", "--expect-torus", "2", "5")
    assert code == 1 and "MISMATCH" in out


def test_fullrank_8_17(capsys):
    code, out, _ = run(capsys, "fullrank", "--knot", "8_17")
    assert code == 1
    assert out.splitlines()[0] == "unsolvable"


def test_fullrank_solvable_and_inconclusive(capsys):
    assert run(capsys, "fullrank", "--knot", "T(3,4)")[0] == 0
    assert run(capsys, "fullrank", "--knot", "T(3,4)", "--budget", "2")[0] == 2


def test_flype_emits_verifiable_json(capsys):
    code, out, _ = run(capsys, "flype", "--w", "2", "--delta", "-1", "--u", "2", "--v", "3", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["rank"] == 3
    b = BraidWord(data["strands"], tuple(data["braid"]))
    A = AugAssignment.from_json(data["assignment"])
    assert augmentation_residual(b, A) < 1e-9


def test_slice_json_round_trip(capsys):
    code, out, _ = run(capsys, "slice", "--braid", "1 1 1", "--mu0", "2", "--mu0=-1/3", "--json")
    assert code == 0
    b = parse_braid("1 1 1")
    data = json.loads(out)
    assert [d["mu0"] for d in data] == ["2", "-1/3"]
    for d in data:
        for s in d["solutions"]:
            assert check_augmentation(b, AugAssignment.from_json(s))


def test_slice_empty_exit_code(capsys):
    # no symmetric rank-2 point for the figure eight, and only the mu-free branch is symmetric
    code, out, _ = run(capsys, "slice", "--knot", "figure8", "--mu0", "2", "--symmetric")
    assert code in (0, 1)
    assert ("0 solution(s)" in out) == (code == 1)


def test_rank_from_file(tmp_path, capsys):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"field": "exact-rational", "n": 2, "mu0": "2", "lambda0": "-1/8", "avals": {"a12": "1", "a21": "1"}}))
    code, out, _ = run(capsys, "rank", "--braid", "1 1 1", "--assignment", str(path))
    assert code == 0 and "rank=2" in out
    path.write_text(json.dumps({"field": "exact-rational", "n": 2, "mu0": "2", "lambda0": "1", "avals": {"a12": "0", "a21": "0"}}))
    assert run(capsys, "rank", "--braid", "1 1 1", "--assignment", str(path))[0] == 1


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_extend_from_file(tmp_path, capsys):
    base = tmp_path / "base.json"
    # sigma_1^2 closes to a link; the algebra still goes through
    sym2 = {"field": "exact-rational", "n": 2, "symmetric": True, "mu0": "2", "lambda0": "1/4", "avals": {"a12": "0"}}
    base.write_text(json.dumps(sym2))
    code, out, _ = run(capsys, "extend", "--braid", "1 1", "--base", str(base), "--i", "1", "--u", "2", "--v", "3", "--delta", "-1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["rank"] == 3 and data["residual"] < 1e-9


def test_connectsum_knot_sources(capsys):
    code, out, _ = run(capsys, "connectsum", "--left", "knot:trefoil", "--right", "knot:trefoil")
    assert code == 0
    assert "rank 2 # rank 2 -> rank 3" in out and "verify_E: True" in out


def test_phi_and_ideal(capsys):
    code, out, _ = run(capsys, "phi", "--braid", "1")
    assert code == 0 and "[-a21, 1]" in out
    code, out, _ = run(capsys, "phi", "--braid", "1", "--side", "R", "--json")
    assert json.loads(out)["side"] == "R"
    code, out, _ = run(capsys, "ideal", "--braid", "1 1 1")
    assert code == 0 and len(out.splitlines()) == 8


def test_output_is_deterministic(capsys):
    first = run(capsys, "slice", "--knot", "figure8", "--mu0", "3", "--json")
    second = run(capsys, "slice", "--knot", "figure8", "--mu0", "3", "--json")
    assert first == second


@pytest.mark.parametrize(
    "argv",
    [
        ["phi", "--braid", "0"],
        ["phi", "--braid", "1 x"],
        ["phi"],
        ["phi", "--braid", "1", "--knot", "trefoil"],
        ["fullrank", "--knot", "no_such_knot"],
        ["fullrank", "--braid", "1 1 1", "--budget", "0"],
        ["slice", "--braid", "1 1 1", "--mu0", "abc"],
        ["rank", "--braid", "1 1 1", "--assignment", "/nonexistent.json"],
        ["nosuchcommand"],
    ],
)
def test_input_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 3


def test_run_config_budget():
    with pytest.raises(InputError):
        RunConfig("phi", budget=0)


def test_verify_subcommand(capsys):
    code, out, _ = run(capsys, "verify", "--random", "5")
    assert code == 0
    assert out.count("PASS") >= 5 and "FAIL" not in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "cordcalc.cli", "augpoly", "--braid", "1 1 1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("Aug = ")
