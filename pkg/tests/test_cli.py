import json
import subprocess
import sys
from pathlib import Path

import pytest

from sdh import cli, datasets
from sdh.algebra import Matrix, Polynomial, RationalFunction
from sdh.errors import InputError

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "zeta_fib": ["zeta", "examples/fib.json", "--order", "8"],
    "zeta_signed2shift_json": ["zeta", "signed2shift", "--order", "8", "--json"],
    "dimgroup_fib_block2": ["dimgroup", "fib", "--block", "2"],
    "homology_pair_cover": ["homology", "pair_cover"],
    "lefschetz_pair_fib_json": ["lefschetz", "pair_fib", "--n-max", "4", "--json"],
    "verify_se_cert_two": ["verify-se", "cert_two"],
    "compare_torus": ["compare-spectra", "torus"],
    "corollary_torus_json": ["corollary", "torus", "--json"],
    "examples_list": ["examples", "list"],
}


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_output(name, capsys):
    code, out, _ = run(GOLDEN_CASES[name], capsys)
    assert code == 0
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_output_is_deterministic(capsys):
    for argv in (["homology", "pair_cover", "--json"], ["dimgroup", "fib_signed", "--block", "3", "--json"]):
        first = run(argv, capsys)
        second = run(argv, capsys)
        assert first == second


# --- documented examples ------------------------------------------------


def test_zeta_commands(capsys):
    code, out, _ = run(["zeta", "examples/signed2shift.json", "--order", "8", "--json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["display"] == "1" and data["verified"]
    code, out, _ = run(["zeta", "examples/fib.json", "--order", "8"], capsys)
    assert code == 0 and "1 / (1 - z - z^2)" in out
    code, _, err = run(["zeta", "missing.json"], capsys)
    assert code == 2 and "missing.json" in err


def test_zeta_unsigned(capsys):
    code, out, _ = run(["zeta", "signed2shift", "--unsigned", "--order", "4", "--json"], capsys)
    assert code == 0 and json.loads(out)["display"] == "1 / (1 - 2*z)"


def test_dimgroup_commands(capsys):
    def data(argv):
        code, out, _ = run(argv + ["--json"], capsys)
        assert code == 0
        return json.loads(out)

    assert data(["dimgroup", "signed2shift"])["dimension"] == 0
    assert data(["dimgroup", "fib"])["core_polynomial"] == data(["dimgroup", "fib", "--block", "2"])["core_polynomial"]
    assert data(["dimgroup", "full2shift"])["bowen_franks"] == [1]


def test_homology_and_lefschetz_commands(capsys):
    code, out, _ = run(["lefschetz", "pair_fib", "--n-max", "4", "--json"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["degrees"]["0"]["dimension"] == 2
    assert [(r["lhs"], r["rhs"], r["equal"]) for r in data["rows"]] == [
        (1, 1, True), (3, 3, True), (4, 4, True), (7, 7, True)
    ]
    code, out, _ = run(["lefschetz", "pair_signed2shift", "--json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["degrees"] == {} and all(r["lhs"] == r["rhs"] == 0 for r in data["rows"])


def test_aborted_computation_exits_4(capsys):
    code, _, err = run(["lefschetz", "pair_cover_lowcaps"], capsys)
    assert code == 4 and "CapExceeded" in err and "hint" in err
    code, _, err = run(["homology", "pair_cover_lowcaps"], capsys)
    assert code == 4


def test_failed_lefschetz_exits_3(capsys):
    code, out, _ = run(["lefschetz", "pair_not_bijective", "--n-max", "3"], capsys)
    assert code == 3 and "MISMATCH" in out


def test_certificate_commands(capsys, tmp_path):
    assert run(["verify-se", "cert_identity"], capsys)[0] == 0
    assert run(["verify-se", "cert_fib"], capsys)[0] == 0
    bad = {"A": [[2]], "B": [[2]], "R": [[3]], "S": [[1]], "lag": 1}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(["verify-se", str(path)], capsys)
    assert code == 3 and "REJECTED" in out
    path.write_text(json.dumps({**bad, "R": [[1, 0]]}))
    assert run(["verify-se", str(path)], capsys)[0] == 2


def test_torus_commands(capsys):
    assert run(["compare-spectra", "torus", "--q-parity", "odd"], capsys)[0] == 0
    assert run(["corollary", "torus", "--q-parity", "odd"], capsys)[0] == 0
    assert run(["corollary", "torus_cat"], capsys)[0] == 0
    code, out, _ = run(["compare-spectra", "torus_tampered"], capsys)
    assert code == 3 and "NO" in out
    assert run(["corollary", "torus_tampered"], capsys)[0] == 3


def test_two_file_action_input(capsys, tmp_path):
    hom = tmp_path / "hom.json"
    man = tmp_path / "man.json"
    hom.write_text(json.dumps({"-1": [[1]], "0": [[1, 1], [1, 0]], "1": [[-1]]}))
    man.write_text(json.dumps({"0": [[1]], "1": [[1, 1], [1, 0]], "2": [[-1]]}))
    assert run(["compare-spectra", str(hom), str(man), "--q-parity", "odd"], capsys)[0] == 0
    assert run(["corollary", str(hom), str(man), "--q-parity", "odd"], capsys)[0] == 0
    # without a parity there is nothing to compare against
    assert run(["corollary", str(hom), str(man)], capsys)[0] == 2


def test_shape_mismatch_in_actions_exits_2(capsys, tmp_path):
    path = tmp_path / "acts.json"
    path.write_text(json.dumps({"q_parity": "odd", "homology": {"0": [[1, 2]]}, "manifold": {}}))
    assert run(["compare-spectra", str(path)], capsys)[0] == 2


def test_parse_errors_report_line_and_column(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "vertices": ["a"],\n  "edges": [\n    {"id": "e", "src": "a" "dst": "a"}\n  ]\n}\n')
    code, _, err = run(["zeta", str(path)], capsys)
    assert code == 2
    assert f"{path}:4:" in err


def test_validation_errors_exit_2(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"vertices": ["a"], "edges": [{"id": "e", "src": "a", "dst": "b"}]}))
    code, _, err = run(["dimgroup", str(path)], capsys)
    assert code == 2 and "unknown vertex" in err
    assert run(["homology", "fib"], capsys)[0] == 2  # wrong kind of data
    assert run(["zeta", "fib", "--order", "0"], capsys)[0] == 2
    assert run(["nonsense"], capsys)[0] == 2


def test_orbit_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SDH_ORBIT_BUDGET", "10")
    code, _, err = run(["zeta", "full2shift", "--order", "6"], capsys)
    assert code == 4 and "SDH_ORBIT_BUDGET" in err


def test_examples_list(capsys):
    code, out, _ = run(["examples", "list", "--json"], capsys)
    names = [d["name"] for d in json.loads(out)["datasets"]]
    assert code == 0 and names == sorted(names)
    assert {"signed2shift", "fib", "torus", "pair_cover"} <= set(names)


# --- JSON schemas round-trip --------------------------------------------


def test_json_reports_round_trip(capsys):
    _, out, _ = run(["zeta", "fib", "--order", "6", "--json"], capsys)
    data = json.loads(out)
    f = RationalFunction.from_json(data["function"])
    assert str(f) == data["display"]
    assert json.loads(json.dumps(data)) == data

    _, out, _ = run(["homology", "pair_fib", "--json"], capsys)
    data = json.loads(out)
    deg0 = data["degrees"]["0"]
    from sdh.algebra import core_poly

    assert core_poly(Matrix.from_json(deg0["action"])) == Polynomial.from_json(deg0["core_polynomial"])

    _, out, _ = run(["corollary", "torus", "--json"], capsys)
    data = json.loads(out)
    product = RationalFunction.from_json(data["zeta_manifold"]) * RationalFunction.from_json(data["zeta_signed"])
    assert product.is_one() and data["holds"]


# --- datasets -----------------------------------------------------------


def test_every_bundled_dataset_loads_and_validates():
    for name in datasets.bundled_names():
        ds = datasets.load_bundled(name)
        assert ds.kind in datasets.KINDS
        assert ds.description


def test_dataset_lookup():
    assert datasets.load("examples/fib.json").name == "fib"
    with pytest.raises(InputError):
        datasets.load("nowhere/fib.json")
    with pytest.raises(InputError):
        datasets.load_bundled("missing")
    with pytest.raises(InputError):
        datasets.classify({"something": 1})


def test_console_script_runs():
    result = subprocess.run(
        [sys.executable, "-m", "sdh.cli", "zeta", "fib", "--order", "3"], capture_output=True, text=True
    )
    assert result.returncode == 0 and "1 / (1 - z - z^2)" in result.stdout
