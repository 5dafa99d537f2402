import json
import subprocess
import sys

from levyhedge.cli import main


def write_config(tmp_path, **over):
    raw = {
        "model": {"kind": "compound_poisson", "drift_b": 0.03, "brownian_sigma": 0.12,
                  "intensity": 5.0, "jump_law": {"kind": "normal", "mean": -0.01, "std": 0.04}},
        "options": [
            {"kind": "european_call", "strike": 5000, "maturity": 1.0},
            {"kind": "up_and_out", "strike": 5000, "maturity": 1.0, "barrier": 5050},
        ],
        "scenario": {"s0": 5000, "delta_s": [10, 20], "delta_t": 1.0,
                     "r": 0.05, "alpha_tol": 0.01},
        "mc": {"paths": 20000, "steps": 1, "seed": 3},
        "stencil": {"half_width": 8, "p_max": 15, "s_step": 10.0},
        "output": {"dir": str(tmp_path)},
    }
    raw.update(over)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return path


class TestTableBuild:
    def test_build_writes_table(self, tmp_path):
        out = tmp_path / "table.txt"
        rc = main(["table", "build", "--half-width", "3", "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.startswith("N=3 PMAX=5")


class TestQTableCommand:
    def test_deterministic_output(self, tmp_path):
        cfg = write_config(tmp_path)
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["qtable", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["qtable", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_header_and_reference_column(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "q.csv"
        main(["qtable", "--config", str(cfg), "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0] == "option,delta_s,q,achieved_error,q_reference,config_hash"
        assert len(lines) == 5
        first = lines[1].split(",")
        assert first[0] == "european_call"
        assert first[2] == "8" and first[4] == "8"

    def test_flag_fills_missing_field_but_config_wins(self, tmp_path):
        raw_cfg = write_config(tmp_path)
        # config carries seed=3: the flag must NOT displace it
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        main(["qtable", "--config", str(raw_cfg), "--out", str(out1)])
        main(["qtable", "--config", str(raw_cfg), "--out", str(out2), "--seed", "99"])
        assert out1.read_bytes() == out2.read_bytes()
        # drop the seed from the config: now the flag supplies it
        raw = json.loads(raw_cfg.read_text())
        del raw["mc"]["seed"]
        cfg2 = tmp_path / "config2.json"
        cfg2.write_text(json.dumps(raw))
        out3 = tmp_path / "c.csv"
        out4 = tmp_path / "d.csv"
        main(["qtable", "--config", str(cfg2), "--out", str(out3), "--seed", "99"])
        main(["qtable", "--config", str(cfg2), "--out", str(out4), "--seed", "3"])
        h3 = out3.read_text().splitlines()[1].split(",")[-1]
        h4 = out4.read_text().splitlines()[1].split(",")[-1]
        assert h3 != h4

    def test_unreachable_rows_exit_nonzero(self, tmp_path):
        cfg = write_config(tmp_path)
        raw = json.loads(cfg.read_text())
        raw["scenario"]["delta_s"] = [500.0]
        cfg.write_text(json.dumps(raw))
        rc = main(["qtable", "--config", str(cfg), "--out", str(tmp_path / "q.csv")])
        assert rc == 1


class TestConvergeCommand:
    def test_runs_and_is_deterministic(self, tmp_path):
        cfg = write_config(
            tmp_path,
            options=[{"kind": "european_call", "strike": 5000, "maturity": 1.0}],
            scenario={"s0": 5000, "delta_s": [20.0], "delta_t": 1.0,
                      "r": 0.05, "alpha_tol": 0.01},
        )
        out1 = tmp_path / "c1.csv"
        out2 = tmp_path / "c2.csv"
        assert main(["converge", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["converge", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert len(out1.read_text().splitlines()) == 16


class TestPnlCommand:
    def test_writes_rows_and_summary(self, tmp_path):
        cfg = write_config(
            tmp_path,
            options=[{"kind": "european_call", "strike": 5000, "maturity": 0.25}],
            scenario={"s0": 5000, "delta_s": [10.0], "delta_t": 0.002,
                      "r": 0.05, "alpha_tol": 0.01},
            stencil={"half_width": 4, "p_max": 5, "s_step": 10.0},
            strategies=["taylor+swaps", "delta"],
            pnl={"n_scenarios": 50, "q": 3, "swap": {"strike": 0.002, "unit_price": 0.002}},
        )
        out = tmp_path / "pnl.csv"
        assert main(["pnl", "--config", str(cfg), "--out", str(out)]) == 0
        rows = out.read_text().splitlines()
        assert rows[0] == "scenario,strategy,delta_s,residual,n_jumps,config_hash"
        assert len(rows) == 1 + 2 * 50
        summary = (tmp_path / "pnl.csv.summary").read_text().splitlines()
        assert summary[0] == "strategy,mean,sd,regime_violations,n_scenarios,config_hash"
        assert len(summary) == 3


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "levyhedge.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "qtable" in proc.stdout
