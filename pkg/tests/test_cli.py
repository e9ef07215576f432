"""Command-line interface: exit codes, text output, JSON schemas, files."""

import json

import pytest

from triortho.cli import main
from triortho.codes import builtin_15_1_3
from triortho.gf2 import format_matrix, parse_matrix

from conftest import D2_ROWS, SMALL8_ROWS, SMALL8_SEARCH


@pytest.fixture
def builtin_file(tmp_path):
    path = tmp_path / "g15.txt"
    path.write_text(format_matrix(builtin_15_1_3().matrix))
    return str(path)


@pytest.fixture
def d2_file(tmp_path):
    path = tmp_path / "d2.txt"
    path.write_text("\n".join(D2_ROWS) + "\n")
    return str(path)


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"p": 1e-2, "class_weights": [1 / 7] * 7}))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheckMatrix:
    def test_pass_text(self, capsys, builtin_file):
        code, out, _ = run(capsys, ["check-matrix", "--file", builtin_file, "--level", "3"])
        assert code == 0
        assert out.splitlines() == ["PASS level=3 rows=5 cols=15"]

    def test_fail_text_prints_violation(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("110\n011\n")
        code, out, _ = run(capsys, ["check-matrix", "--file", str(bad), "--level", "2"])
        assert code == 1
        assert out.splitlines() == ["FAIL level=2 rows=(0, 1)"]

    def test_json_schema(self, capsys, builtin_file):
        code, out, _ = run(
            capsys, ["check-matrix", "--file", builtin_file, "--level", "3", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload == {
            "command": "check-matrix",
            "file": builtin_file,
            "level": 3,
            "rows": 5,
            "cols": 15,
            "pass": True,
            "violation": None,
        }

    def test_json_violation(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("110\n011\n")
        code, out, _ = run(
            capsys, ["check-matrix", "--file", str(bad), "--level", "2", "--format", "json"]
        )
        assert code == 1
        payload = json.loads(out)
        assert payload["pass"] is False
        assert payload["violation"] == [0, 1]

    def test_missing_file(self, capsys, tmp_path):
        code, out, err = run(capsys, ["check-matrix", "--file", str(tmp_path / "nope.txt")])
        assert code == 1
        assert out == ""
        assert err.startswith("error:")


class TestBuildCode:
    def test_text_with_distances(self, capsys):
        code, out, _ = run(capsys, ["build-code", "--builtin", "15-1-3", "--distances"])
        assert code == 0
        assert out.splitlines() == [
            "n=15 k=1 level=3 x_stabilizers=4 z_stabilizers=10 gauge_pairs=6",
            "d_x=7 d_z=3 distance=3",
        ]

    def test_json(self, capsys):
        code, out, _ = run(
            capsys, ["build-code", "--builtin", "15-1-3", "--distances", "--format", "json"]
        )
        assert code == 0
        assert json.loads(out) == {
            "command": "build-code",
            "n": 15,
            "k": 1,
            "level": 3,
            "x_stabilizers": 4,
            "z_stabilizers": 10,
            "gauge_pairs": 6,
            "d_x": 7,
            "d_z": 3,
        }

    def test_file_source(self, capsys, d2_file):
        code, out, _ = run(capsys, ["build-code", "--file", d2_file, "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert (payload["n"], payload["k"]) == (14, 1)
        assert payload["d_x"] is None


class TestSearch:
    def test_found_writes_reproducible_matrix(self, capsys, tmp_path):
        out_path = tmp_path / "found.txt"
        argv = [
            "search",
            "--n", str(SMALL8_SEARCH["n"]),
            "--k", str(SMALL8_SEARCH["k"]),
            "--m-even", str(SMALL8_SEARCH["m_even"]),
            "--budget", str(SMALL8_SEARCH["budget"]),
            "--seed", str(SMALL8_SEARCH["seed"]),
            "--out", str(out_path),
        ]
        code, out, _ = run(capsys, argv)
        assert code == 0
        assert out.splitlines() == ["# seed=0 budget=50000", "found"]
        text = out_path.read_text()
        assert "seed=0 budget=50000 n=8 k=1 m_even=3" in text
        assert tuple(r.to_string() for r in parse_matrix(text).rows) == SMALL8_ROWS

    def test_not_found_exits_one(self, capsys):
        code, out, _ = run(
            capsys, ["search", "--n", "4", "--k", "2", "--m-even", "3", "--budget", "1000"]
        )
        assert code == 1
        assert out.splitlines()[-1] == "not found"

    def test_json_found(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "search", "--n", "8", "--k", "1", "--m-even", "3",
                "--budget", "50000", "--seed", "0", "--format", "json",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["found"] is True
        assert tuple(payload["rows"]) == SMALL8_ROWS
        assert payload["seed"] == 0


class TestVerifyCcz:
    def test_text_phases(self, capsys):
        code, out, _ = run(capsys, ["verify-ccz", "--builtin", "15-1-3"])
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 9
        assert lines[0] == "(0,0,0) -> +1"
        assert lines[7] == "(1,1,1) -> -1"
        assert lines[8] == "PASS"
        assert all(line.endswith("+1") for line in lines[1:7])

    def test_json(self, capsys):
        code, out, _ = run(capsys, ["verify-ccz", "--builtin", "15-1-3", "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["all_ok"] is True
        assert len(payload["checks"]) == 8
        last = payload["checks"][-1]
        assert last["labels"] == ["1", "1", "1"]
        assert last["phase"] == -1
        assert last["ok"] is True


class TestSimulateHadamard:
    def test_text_multi_seed(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "simulate-hadamard", "--builtin", "15-1-3",
                "--input", "+", "--seeds", "2", "--seed", "7",
            ],
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "# seed=7 rounds=2 input=+"
        assert lines[-1] == "PASS"
        assert all("ok=True" in line for line in lines[1:-1])

    def test_json_schema(self, capsys):
        code, out, _ = run(
            capsys,
            ["simulate-hadamard", "--builtin", "15-1-3", "--seed", "3", "--format", "json"],
        )
        assert code == 0
        header, round_line = out.splitlines()
        head = json.loads(header)
        assert head == {
            "command": "simulate-hadamard",
            "input": "0",
            "n": 15,
            "k": 1,
            "seed": 3,
            "rounds": 1,
        }
        payload = json.loads(round_line)
        assert payload["matches_ideal"] is True
        assert payload["gauge_restored"] is True
        assert payload["seed"] == 3
        assert payload["decode_success"] is True

    def test_byte_identical_reruns(self, capsys):
        argv = ["simulate-hadamard", "--builtin", "15-1-3", "--input", "-", "--seed", "11"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second


class TestInjectFaults:
    def test_single_fault_tolerated(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "inject-faults", "--builtin", "15-1-3",
                "--fault", "data_post_h:X:3", "--format", "json",
            ],
        )
        assert code == 0
        payload = json.loads(payload_line(out))
        assert payload["faults"] == ["data_post_h:X:3"]
        assert payload["residual_sites"] == 0
        assert payload["tolerated"] is True

    def test_weight_two_logical_flip_not_tolerated(self, capsys):
        # Two aliased data errors decode into a logical X; against the
        # |+> input the residual weight is the full X distance.
        code, out, _ = run(
            capsys,
            [
                "inject-faults", "--builtin", "15-1-3", "--input", "+",
                "--fault", "data_post_h:X:0", "--fault", "data_post_h:X:1",
            ],
        )
        assert code == 1
        assert out.splitlines()[-1] == "residual_sites=7 tolerated=False"

    def test_bad_fault_string(self, capsys):
        code, _, err = run(
            capsys, ["inject-faults", "--builtin", "15-1-3", "--fault", "oops"]
        )
        assert code == 1
        assert err.startswith("error:")


def payload_line(out: str) -> str:
    lines = out.splitlines()
    assert len(lines) == 1
    return lines[0]


class TestDistill:
    def test_json_and_files(self, capsys, tmp_path, d2_file, model_file):
        out_json = tmp_path / "stats.json"
        per_trial = tmp_path / "trials.csv"
        argv = [
            "distill", "--file", d2_file, "--model", model_file,
            "--trials", "5000", "--seed", "11",
            "--out", str(out_json), "--per-trial", str(per_trial),
            "--format", "json",
        ]
        code, out, _ = run(capsys, argv)
        assert code == 0
        payload = json.loads(out)
        assert payload["trials"] == 5000
        assert payload["seed"] == 11
        assert payload["n"] == 14
        assert payload["order2_pair_events"] == 49
        assert payload["predicted_failure"] == pytest.approx(1e-4, rel=1e-9)
        assert json.loads(out_json.read_text()) == payload

        lines = per_trial.read_text().splitlines()
        assert lines[0] == "trial,accepted,logical_failure"
        assert len(lines) == 5001
        accepted = sum(int(line.split(",")[1]) for line in lines[1:])
        assert accepted == payload["accepted"]

    def test_text_determinism(self, capsys, d2_file, model_file):
        argv = [
            "distill", "--file", d2_file, "--model", model_file,
            "--trials", "5000", "--seed", "4",
        ]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second
        assert first.splitlines()[0] == "# seed=4 trials=5000 p=0.01"

    def test_missing_model_file(self, capsys, d2_file, tmp_path):
        code, _, err = run(
            capsys,
            ["distill", "--file", d2_file, "--model", str(tmp_path / "nope.json")],
        )
        assert code == 1
        assert err.startswith("error:")

    def test_malformed_model_file(self, capsys, d2_file, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"class_probs": [0.1, 0.1]}', encoding="ascii")
        code, _, err = run(capsys, ["distill", "--file", d2_file, "--model", str(bad)])
        assert code == 1
        assert err.startswith("error:")


class TestCostCurve:
    def test_stdout_csv(self, capsys):
        code, out, _ = run(capsys, ["cost-curve", "--targets", "1e-13"])
        assert code == 0
        assert out == (
            "target_error,jones,jones_double,triortho_k_opt,k_star\n"
            "1e-13,505.08579328118884,,434.9499090845322,100\n"
        )

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "curve.csv"
        code, out, _ = run(capsys, ["cost-curve", "--targets", "1e-13", "--out", str(path)])
        assert code == 0
        assert out == f"wrote {path}\n"
        assert path.read_text().splitlines()[1] == (
            "1e-13,505.08579328118884,,434.9499090845322,100"
        )

    def test_default_grid_size(self, capsys):
        code, out, _ = run(capsys, ["cost-curve"])
        assert code == 0
        assert len(out.splitlines()) == 16

    def test_json(self, capsys):
        code, out, _ = run(
            capsys, ["cost-curve", "--targets", "1e-13,1e-9", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert [row["target_error"] for row in payload["rows"]] == [1e-13, 1e-9]
        assert payload["rows"][0]["k_star"] == 100

    def test_depth_one_blank_row(self, capsys):
        code, out, _ = run(
            capsys, ["cost-curve", "--targets", "1e-9", "--max-depth", "1"]
        )
        assert code == 0
        assert out.splitlines()[1] == "1e-09,,,,"

    def test_custom_menu_file(self, capsys, tmp_path):
        from triortho.cost import default_menu, menu_to_json

        path = tmp_path / "menu.json"
        path.write_text(json.dumps(menu_to_json(default_menu(include_triorthogonal=False))))
        code, out, _ = run(
            capsys, ["cost-curve", "--targets", "1e-13", "--menu", str(path)]
        )
        assert code == 0
        assert out.splitlines()[1] == "1e-13,505.08579328118884,,,"


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["bogus"])
        assert excinfo.value.code == 2

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["distill", "--builtin", "15-1-3"])
        assert excinfo.value.code == 2

    def test_mutually_exclusive_sources(self, capsys, builtin_file):
        with pytest.raises(SystemExit) as excinfo:
            main(["build-code", "--builtin", "15-1-3", "--file", builtin_file])
        assert excinfo.value.code == 2
