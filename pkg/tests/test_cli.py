import json
import time

import pytest

from hampower import cli, core
from hampower.instances import bijective_pattern, complete_collection


def write_instance(path, collection):
    core.save_json(str(path), core.collection_to_dict(collection))


def write_pattern(path, pattern):
    core.save_json(str(path), core.pattern_to_dict(pattern))


@pytest.fixture
def fixed_clock(monkeypatch):
    state = {"t": 0.0}

    def fake_perf_counter():
        state["t"] += 0.001
        return state["t"]

    monkeypatch.setattr(time, "perf_counter", fake_perf_counter)
    return state


class TestGenOracle:
    def test_lowerbound_then_oracle_none(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        code = cli.dispatch(
            ["gen", "lowerbound", "--k", "2", "--p", "3",
             "--out-instance", str(inst), "--out-pattern", str(pat)]
        )
        assert code == 0
        code = cli.dispatch(["oracle", "--instance", str(inst), "--pattern", str(pat)])
        out = capsys.readouterr().out
        assert code == 2
        assert "NONE" in out

    def test_oracle_found_on_complete(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        assert cli.dispatch(["gen", "complete", "--n", "8", "--m", "16",
                             "--out-instance", str(inst)]) == 0
        write_pattern(pat, bijective_pattern(core.power_cycle(8, 2)))
        code = cli.dispatch(["oracle", "--instance", str(inst), "--pattern", str(pat)])
        assert code == 0
        assert "FOUND" in capsys.readouterr().out

    def test_oracle_count(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        write_instance(inst, complete_collection(5, 20))
        write_pattern(pat, bijective_pattern(core.power_cycle(5, 2)))
        code = cli.dispatch(["oracle", "--instance", str(inst), "--pattern", str(pat), "--count"])
        assert code == 0
        assert "COUNT 120" in capsys.readouterr().out


class TestSolveVerify:
    def test_solve_then_verify_round_trip(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        out = tmp_path / "cycle.json"
        pattern = bijective_pattern(core.power_cycle(40, 2))
        write_instance(inst, complete_collection(40, pattern.max_colour))
        write_pattern(pat, pattern)
        code = cli.dispatch(
            ["solve", "--instance", str(inst), "--pattern", str(pat),
             "--seed", "7", "--out", str(out)]
        )
        assert code == 0
        assert out.exists() and (tmp_path / "cycle.json.trace.json").exists()
        code = cli.dispatch(
            ["verify", "--instance", str(inst), "--pattern", str(pat), "--cycle", str(out)]
        )
        assert code == 0
        assert "VALID" in capsys.readouterr().out

    def test_verify_rejects_bad_cycle(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        cyc = tmp_path / "cycle.json"
        pattern = bijective_pattern(core.power_cycle(8, 2))
        # G_1 missing one edge makes the identity cycle invalid somewhere
        edge_lists = [
            [(u, v) for u in range(8) for v in range(u + 1, 8) if (u, v) != (0, 1)]
            for _ in range(16)
        ]
        write_instance(inst, core.GraphCollection.from_edge_lists(8, edge_lists))
        write_pattern(pat, pattern)
        core.save_json(str(cyc), {"k": 2, "vertices": list(range(8))})
        code = cli.dispatch(
            ["verify", "--instance", str(inst), "--pattern", str(pat), "--cycle", str(cyc)]
        )
        assert code == 2
        assert "INVALID" in capsys.readouterr().out

    def test_infeasible_solve_exits_2(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        out = tmp_path / "cycle.json"
        pattern = bijective_pattern(core.power_cycle(5, 2))
        write_instance(inst, complete_collection(5, pattern.max_colour))
        write_pattern(pat, pattern)
        code = cli.dispatch(
            ["solve", "--instance", str(inst), "--pattern", str(pat), "--out", str(out)]
        )
        assert code == 2
        assert "INFEASIBLE" in capsys.readouterr().out


class TestErrors:
    def test_usage_error_exit_1(self, capsys):
        assert cli.dispatch(["solve", "--instance"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_unknown_command_exit_1(self, capsys):
        assert cli.dispatch(["frobnicate"]) == 1

    def test_missing_file_exit_1(self, tmp_path, capsys):
        code = cli.dispatch(
            ["oracle", "--instance", str(tmp_path / "nope.json"),
             "--pattern", str(tmp_path / "nope2.json")]
        )
        assert code == 1

    def test_malformed_json_exit_1_with_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 3,\n  "m": }')
        code = cli.dispatch(["oracle", "--instance", str(bad), "--pattern", str(bad)])
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    def test_schema_error_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        core.save_json(str(bad), {"n": 3, "m": 2, "graphs": [[]]})
        code = cli.dispatch(["oracle", "--instance", str(bad), "--pattern", str(bad)])
        assert code == 1


class TestExperiment:
    def test_sweep_row_accounting(self, tmp_path, fixed_clock):
        out = tmp_path / "sweep.csv"
        code = cli.dispatch(
            ["experiment", "sweep", "--k", "2", "--n", "24",
             "--delta-from", "0.8", "--delta-to", "1.0", "--delta-step", "0.1",
             "--trials", "5", "--seed", "11", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == ",".join(cli.CSV_FIELDS)
        assert len(lines) == 1 + 3 * 5

    def test_sweep_deterministic_bytes(self, tmp_path, fixed_clock):
        args = [
            "experiment", "sweep", "--k", "2", "--n", "20",
            "--delta-from", "0.9", "--delta-to", "1.0", "--delta-step", "0.1",
            "--trials", "3", "--seed", "13",
        ]
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert cli.dispatch(args + ["--out", str(out1)]) == 0
        fixed_clock["t"] = 0.0
        assert cli.dispatch(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_solve_outputs_deterministic_bytes(self, tmp_path, fixed_clock):
        inst = tmp_path / "inst.json"
        pat = tmp_path / "pat.json"
        pattern = bijective_pattern(core.power_cycle(30, 2))
        write_instance(inst, complete_collection(30, pattern.max_colour))
        write_pattern(pat, pattern)
        outs = []
        for name in ("c1.json", "c2.json"):
            fixed_clock["t"] = 0.0
            out = tmp_path / name
            trace = tmp_path / (name + ".trace")
            assert cli.dispatch(
                ["solve", "--instance", str(inst), "--pattern", str(pat),
                 "--seed", "21", "--out", str(out), "--trace", str(trace)]
            ) == 0
            outs.append((out.read_bytes(), trace.read_bytes()))
        assert outs[0] == outs[1]
