import json

import pytest

from racsim.cli import (
    EXIT_CHECK_FAILED,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_UNREADABLE,
    main,
)
from racsim.fixtures import X0_SIX, six_node_damaged, six_node_graph
from racsim.graph import read_edge_list, write_edge_list
from racsim.sim import Scenario, scenario_to_json


@pytest.fixture
def scenario_file(tmp_path):
    sc = Scenario(graph=six_node_graph(), x0=X0_SIX, horizon=30)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario_to_json(sc)))
    return path


class TestRunCommand:
    def test_writes_all_outputs(self, tmp_path, scenario_file, capsys):
        out = tmp_path / "out"
        code = main(["run", "--scenario", str(scenario_file), "--out", str(out)])
        assert code == EXIT_OK
        assert (out / "trace.csv").exists()
        assert (out / "events.csv").exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["target"] == pytest.approx(5.0)
        printed = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert printed == summary

    def test_missing_file_unreadable(self, tmp_path):
        code = main(["run", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
        assert code == EXIT_UNREADABLE

    def test_malformed_json_invalid(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code = main(["run", "--scenario", str(path), "--out", str(tmp_path)])
        assert code == EXIT_INVALID

    def test_semantically_invalid_scenario(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"graph": {"fixture": "six"}, "x0": [1.0]}))
        code = main(["run", "--scenario", str(path), "--out", str(tmp_path)])
        assert code == EXIT_INVALID

    def test_repeated_runs_byte_identical(self, tmp_path, scenario_file):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--scenario", str(scenario_file), "--out", str(out_a)]) == EXIT_OK
        assert main(["run", "--scenario", str(scenario_file), "--out", str(out_b)]) == EXIT_OK
        assert (out_a / "trace.csv").read_bytes() == (out_b / "trace.csv").read_bytes()
        assert (out_a / "events.csv").read_bytes() == (out_b / "events.csv").read_bytes()


class TestCheckGraphCommand:
    def test_passing_graph(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text(write_edge_list(six_node_graph()))
        code = main(["check-graph", str(path), "-f", "1", "--alg3", "--k-strong", "2"])
        assert code == EXIT_OK

    def test_failing_condition(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text(write_edge_list(six_node_damaged()))
        code = main(["check-graph", str(path), "-f", "1", "--alg3"])
        assert code == EXIT_CHECK_FAILED

    def test_unreadable_graph(self, tmp_path):
        code = main(["check-graph", str(tmp_path / "none.txt"), "-f", "1", "--alg3"])
        assert code == EXIT_UNREADABLE

    def test_malformed_graph(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("nodes six\n")
        code = main(["check-graph", str(path), "-f", "1", "--alg3"])
        assert code == EXIT_INVALID

    def test_sharing_condition_rejects_directed_graph(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("n 3\n1 2\n2 3\n3 1\n")
        code = main(["check-graph", str(path), "-f", "1", "--alg2"])
        assert code == EXIT_INVALID


class TestGenGraphCommand:
    def test_generates_valid_graph(self, tmp_path):
        path = tmp_path / "layered.txt"
        code = main(["gen-graph", "--layers", "4", "-f", "1", "--out", str(path)])
        assert code == EXIT_OK
        g = read_edge_list(path.read_text())
        assert g.n == 12

    def test_bad_arguments(self, tmp_path):
        code = main(["gen-graph", "--layers", "1", "-f", "1", "--out", str(tmp_path / "g.txt")])
        assert code == EXIT_INVALID

    def test_generated_graph_usable_by_check(self, tmp_path):
        path = tmp_path / "g.txt"
        assert main(["gen-graph", "--layers", "3", "-f", "2", "--out", str(path)]) == EXIT_OK
        assert main(["check-graph", str(path), "-f", "2", "--alg3"]) == EXIT_OK


class TestGoldenCommand:
    def test_all_cases_pass(self, capsys):
        code = main(["golden"])
        out = capsys.readouterr().out.splitlines()
        assert code == EXIT_OK
        assert len(out) == 8
        assert all(line.startswith("PASS ") for line in out)
