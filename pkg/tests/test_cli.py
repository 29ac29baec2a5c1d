import json

import pytest

from contsolve.cli import run
from contsolve.core import complete_graph, cycle_graph
from contsolve.extsum import ExtSumInstance


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def write_graph(tmp_path, g, name="g.col"):
    path = tmp_path / name
    path.write_text(g.to_dimacs())
    return str(path)


class TestContainersCommand:
    def test_random_regular(self, capsys):
        code, report = run_json(
            capsys, ["containers", "--random-regular", "12", "4", "--seed", "7", "--force"]
        )
        assert code == 0
        assert report["command"] == "containers"
        assert report["instance"] == {
            "n": 12, "m": 24, "max_degree": 4, "average_degree": 4.0,
        }
        assert report["result"]["container_count"] >= 1

    def test_seed_required_for_generator(self, capsys):
        code, report = run_json(capsys, ["containers", "--random-regular", "8", "3"])
        assert code == 2
        assert report["error"]["type"] == "ParameterError"

    def test_file_input(self, capsys, tmp_path):
        path = write_graph(tmp_path, complete_graph(5))
        code, report = run_json(
            capsys, ["containers", "--input", path, "--epsilon", "0.4"]
        )
        assert code == 0
        assert report["instance"]["n"] == 5

    def test_almost_regular_builder(self, capsys, tmp_path):
        path = write_graph(tmp_path, complete_graph(6))
        code, report = run_json(
            capsys,
            ["containers", "--input", path, "--builder", "almost-regular"],
        )
        assert code == 0


class TestPartitionContainersCommand:
    def test_cycle(self, capsys, tmp_path):
        path = write_graph(tmp_path, cycle_graph(16))
        code, report = run_json(
            capsys,
            ["partition-containers", "--input", path, "--k", "2", "--force"],
        )
        assert code == 0
        assert report["result"]["base_container_count"] >= 1


class TestExtsumCommand:
    def test_eval_agreement_across_algorithms(self, capsys, tmp_path):
        inst = ExtSumInstance(4, ((0, 1), (1, 2)), ((1, 2, 3, 4), (5, -1, 2, 0)))
        path = tmp_path / "inst.json"
        path.write_text(inst.to_json())
        values = {}
        for algo in ("naive", "k2", "auto"):
            code, report = run_json(
                capsys, ["extsum", "eval", "--input", str(path), "--algo", algo]
            )
            assert code == 0
            values[algo] = report["result"]["value"]
        assert len(set(values.values())) == 1

    def test_missing_file(self, capsys, tmp_path):
        code, report = run_json(
            capsys, ["extsum", "eval", "--input", str(tmp_path / "none.json")]
        )
        assert code == 2


class TestColorCommand:
    def test_positive_decision(self, capsys, tmp_path):
        path = write_graph(tmp_path, cycle_graph(6))
        code, report = run_json(capsys, ["color", "--input", path, "--k", "2"])
        assert code == 0
        assert report["result"]["colorable"] is True

    def test_negative_decision_exit_one(self, capsys, tmp_path):
        path = write_graph(tmp_path, complete_graph(4))
        code, report = run_json(capsys, ["color", "--input", path, "--k", "3"])
        assert code == 1
        assert report["result"]["colorable"] is False

    def test_certificate(self, capsys, tmp_path):
        path = write_graph(tmp_path, cycle_graph(5))
        code, report = run_json(
            capsys, ["color", "--input", path, "--k", "3", "--certificate"]
        )
        assert code == 0
        cert = {int(v): c for v, c in report["result"]["certificate"].items()}
        g = cycle_graph(5)
        for u, w in g.edges:
            assert cert[u] != cert[w]


class TestMisCommand:
    def test_basic(self, capsys, tmp_path):
        path = write_graph(tmp_path, cycle_graph(8))
        code, report = run_json(capsys, ["mis", "--input", path])
        assert code == 0
        assert report["result"]["size"] == 4

    def test_containers_mode(self, capsys):
        code, report = run_json(
            capsys,
            ["mis", "--random-regular", "12", "6", "--seed", "3", "--mode", "containers"],
        )
        assert code == 0
        assert report["counters"]["path"] == "containers"


class TestSatCommand:
    def test_random_ksat(self, capsys):
        code, report = run_json(
            capsys, ["sat", "--random-ksat", "10", "30", "3", "--seed", "5"]
        )
        assert code in (0, 1)
        assert report["result"]["satisfiable"] is (code == 0)

    def test_unsatisfiable_exit_one(self, capsys, tmp_path):
        path = tmp_path / "phi.cnf"
        path.write_text(
            "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n"
        )
        code, report = run_json(capsys, ["sat", "--input", path.as_posix(), "--mode", "dpll"])
        assert code == 1
        assert report["result"]["satisfiable"] is False


class TestDeterminismAndErrors:
    def test_counters_reproducible(self, capsys):
        argv = ["mis", "--random-regular", "10", "4", "--seed", "11", "--mode", "containers"]
        _, a = run_json(capsys, argv)
        _, b = run_json(capsys, argv)
        a.pop("timing_ms")
        b.pop("timing_ms")
        assert a == b

    def test_bad_arguments_exit_two(self, capsys):
        assert run(["color", "--k", "notanint"]) == 2

    def test_bench(self, capsys):
        code, report = run_json(
            capsys,
            ["bench", "--family", "regular-mis", "--sizes", "8", "10", "--seed", "1", "--d", "4"],
        )
        assert code == 0
        rows = report["result"]["rows"]
        assert [r["n"] for r in rows] == [8, 10]
