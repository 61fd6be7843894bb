import csv
import io
import json

import pytest

from qecost.cli import main
from qecost.config import CodeConfigs, bundled_codes_dir, load_code_configs
from qecost.bacon_shor import BaconShorConfig
from qecost.magic_state import DistillationModel
from qecost.model import load_json
from qecost.report import (SWEEP_COLUMNS, ReportDocument, format_duration, is_close_sig,
                           parse_sweep_csv, render_table, sig3)
from qecost.surface import SurfaceConfig

SWEEP_HEADER = ("p,bs_feasible,bs_level,bs_avg_time_ns,bs_qubits_per_logical,bs_gates_per_logical,"
                "bs_logical_error,sc_feasible,sc_distance,sc_avg_time_ns,sc_qubits_per_logical,"
                "sc_gates_per_logical,sc_logical_error")


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


class TestEstimate:
    def test_surface_table(self, capsys):
        status, out, _ = run(capsys, "estimate", "--tech", "specs/superconductors.json",
                             "--alg", "specs/shor1024.json", "--code", "surface")
        assert status == 0
        assert "Code distance           5" in out
        assert "Logical gate time       210 ns" in out
        assert "No. qubits per logical  3.23e3" in out
        assert "Dominant gate           CNOT" in out

    def test_above_threshold_is_exit_2(self, capsys):
        status, out, _ = run(capsys, "estimate", "--tech", "specs/neutral_atoms.json",
                             "--alg", "specs/shor1024.json", "--code", "bacon-shor")
        assert status == 2
        body = [line for line in out.splitlines() if line.startswith(("Execution", "No.", "Code c"))]
        assert body and all(line.endswith("N/A") for line in body)
        assert "threshold" in out

    def test_json_has_all_fields(self, capsys):
        status, out, _ = run(capsys, "estimate", "--tech", "ion_traps", "--alg", "shor1024",
                             "--code", "bacon-shor", "--out", "json")
        assert status == 0
        est = json.loads(out)["estimate"]
        for key in ("execution_time_ns", "total_physical_qubits", "total_physical_gates",
                    "dominant_gate", "code_parameter", "logical_gate_error", "logical_gate_time_ns",
                    "qubits_per_logical", "gates_per_logical"):
            assert key in est
        assert est["code_parameter"] == 1 and est["gates_per_logical"] == 79

    @pytest.mark.parametrize("tech,code", [("superconductors", "surface"), ("ion_traps", "bacon-shor"),
                                           ("neutral_atoms", "bacon-shor")])
    def test_json_roundtrip_reproduces_table(self, capsys, tech, code):
        base = ("estimate", "--tech", tech, "--alg", "shor1024", "--code", code)
        _, table, _ = run(capsys, *base)
        _, doc, _ = run(capsys, *base, "--out", "json")
        assert render_table(ReportDocument.from_dict(json.loads(doc))) == table

    def test_csv(self, capsys):
        status, out, _ = run(capsys, "estimate", "--tech", "superconductors", "--alg", "shor1024",
                             "--code", "surface", "--out", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert status == 0 and rows[0]["code_parameter"] == "5"
        assert float(rows[0]["logical_gate_time_ns"]) == 210

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "r.txt"
        status, out, _ = run(capsys, "estimate", "--tech", "superconductors", "--alg", "shor1024",
                             "--code", "surface", "--output", str(target))
        assert status == 0 and out == ""
        assert "Code distance" in target.read_text()

    def test_missing_gate_names_key(self, capsys, tmp_path):
        doc = load_json(bundled_codes_dir().parent / "specs" / "superconductors.json")
        doc = dict(doc, gate_times_ns={k: v for k, v in doc["gate_times_ns"].items() if k != "SWAP"})
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        status, _, err = run(capsys, "estimate", "--tech", str(path), "--alg", "shor1024",
                             "--code", "surface")
        assert status == 1
        assert "gate_times_ns.SWAP" in err

    def test_bad_value_names_key(self, capsys, tmp_path):
        path = tmp_path / "alg.json"
        path.write_text(json.dumps({"name": "a", "logical_qubits": 3, "gate_counts": {"T": -4}}))
        status, _, err = run(capsys, "estimate", "--tech", "superconductors", "--alg", str(path),
                             "--code", "surface")
        assert status == 1 and "gate_counts.T" in err

    def test_missing_file(self, capsys):
        status, _, err = run(capsys, "estimate", "--tech", "nowhere.json", "--alg", "shor1024",
                             "--code", "surface")
        assert status == 1 and "nowhere.json" in err

    def test_usage_error_is_exit_1(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["estimate", "--tech", "superconductors", "--alg", "shor1024", "--code", "steane"])
        assert info.value.code == 1

    def test_memory_error_flag(self, capsys):
        status, out, _ = run(capsys, "estimate", "--tech", "ion_traps", "--alg", "shor1024",
                             "--code", "surface", "--include-memory-error")
        assert status == 0
        assert "include_memory_error=True" in out and "effective physical error" in out

    def test_epsilon(self, capsys):
        _, out, _ = run(capsys, "estimate", "--tech", "superconductors", "--alg", "shor1024",
                        "--code", "surface", "--epsilon", "1e-9", "--out", "json")
        # target 1e-9 / 2.696e9: 0.13 * (6.1e-4)**k <= 3.7e-19 first holds at k = 6, so d = 11
        assert json.loads(out)["estimate"]["code_parameter"] == 11


class TestSweep:
    def test_header_and_rows(self, capsys):
        status, out, _ = run(capsys, "sweep", "--points", "9")
        assert status == 0
        assert out.splitlines()[0] == SWEEP_HEADER
        assert ",".join(SWEEP_COLUMNS) == SWEEP_HEADER
        assert len(parse_sweep_csv(out)) == 9

    def test_default_crossovers(self, capsys):
        _, out, _ = run(capsys, "sweep")
        lines = [line for line in out.splitlines() if line.startswith("# crossover")]
        assert len(lines) == 3
        for line in lines:
            lo, hi = (float(x) for x in line.split("[")[1].rstrip("]").split(","))
            assert lo <= 1e-6 and hi >= 1e-8

    def test_single_point(self, capsys):
        status, out, _ = run(capsys, "sweep", "--points", "1")
        assert status == 0
        assert len(parse_sweep_csv(out)) == 1
        assert out.count("insufficient data") == 3

    def test_p_min_not_below_p_max(self, capsys):
        status, _, err = run(capsys, "sweep", "--p-min", "1e-3", "--p-max", "1e-3")
        assert status == 1 and "p-min" in err

    def test_tiny_target_marks_infeasible(self, capsys):
        status, out, _ = run(capsys, "sweep", "--target", "1e-30", "--p-min", "1e-8",
                             "--p-max", "1e-3", "--points", "11")
        assert status == 0
        rows = parse_sweep_csv(out)
        assert any(r["bs_feasible"] == "0" for r in rows)
        assert all(r["bs_level"] == "" for r in rows if r["bs_feasible"] == "0")

    def test_byte_stable(self, capsys):
        _, first, _ = run(capsys, "sweep", "--points", "17", "--workers", "3")
        _, second, _ = run(capsys, "sweep", "--points", "17")
        assert first == second

    def test_json(self, capsys):
        _, out, _ = run(capsys, "sweep", "--points", "5", "--out", "json")
        doc = json.loads(out)
        assert len(doc["rows"]) == 5 and set(doc["crossover"]) == {"time", "qubits", "gates"}

    def test_mix_file(self, capsys, tmp_path):
        path = tmp_path / "mix.json"
        path.write_text(json.dumps({"CNOT": 1}))
        status, out, _ = run(capsys, "sweep", "--points", "5", "--mix", str(path))
        assert status == 0 and len(parse_sweep_csv(out)) == 5

    def test_bad_mix(self, capsys, tmp_path):
        path = tmp_path / "mix.json"
        path.write_text(json.dumps({"CNOT": -1}))
        status, _, err = run(capsys, "sweep", "--mix", str(path))
        assert status == 1 and "mix" in err


class TestComposition:
    def test_logical(self, capsys):
        status, out, _ = run(capsys, "composition", "--logical", "--alg", "specs/shor1024.json",
                             "--out", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert status == 0 and rows[0] == ["gate", "fraction"]
        fractions = {k: float(v) for k, v in rows[1:]}
        assert fractions["T"] == pytest.approx(0.438, abs=5e-4)
        assert fractions["CNOT"] == pytest.approx(0.438, abs=5e-4)
        assert fractions["H"] == pytest.approx(0.125, abs=5e-4)

    def test_surface_cnot_first(self, capsys):
        _, out, _ = run(capsys, "composition", "--tech", "ion_traps", "--alg", "shor1024",
                        "--code", "surface")
        assert out.splitlines()[1].startswith("CNOT")

    def test_bacon_shor_swap_first(self, capsys):
        _, out, _ = run(capsys, "composition", "--tech", "superconductors", "--alg", "shor1024",
                        "--code", "bacon-shor", "--out", "json")
        assert next(iter(json.loads(out))) == "SWAP"

    def test_descending(self, capsys):
        _, out, _ = run(capsys, "composition", "--tech", "superconductors", "--alg", "shor1024",
                        "--code", "bacon-shor", "--out", "json")
        values = list(json.loads(out).values())
        assert values == sorted(values, reverse=True) and min(values) >= 1e-4

    def test_needs_tech_without_logical(self, capsys):
        status, _, err = run(capsys, "composition", "--alg", "shor1024")
        assert status == 1 and "--tech" in err

    def test_infeasible(self, capsys):
        status, out, _ = run(capsys, "composition", "--tech", "neutral_atoms", "--alg", "shor1024",
                             "--code", "bacon-shor")
        assert status == 2 and "N/A" in out


class TestCodesDir:
    def test_bundled_files_match_defaults(self):
        assert load_code_configs() == CodeConfigs()
        assert load_code_configs(bundled_codes_dir()).bacon_shor == BaconShorConfig()
        assert load_code_configs(bundled_codes_dir()).surface == SurfaceConfig()
        assert load_code_configs(bundled_codes_dir()).distillation == DistillationModel()

    def test_override_changes_result(self, capsys, tmp_path):
        (tmp_path / "surface.json").write_text(json.dumps({"K": 100}))
        _, out, _ = run(capsys, "estimate", "--tech", "superconductors", "--alg", "shor1024",
                        "--code", "surface", "--codes-dir", str(tmp_path), "--out", "json")
        assert json.loads(out)["estimate"]["qubits_per_logical"] == 2500

    def test_bad_override(self, capsys, tmp_path):
        (tmp_path / "bacon_shor.json").write_text(json.dumps({"tile": 7}))
        status, _, err = run(capsys, "estimate", "--tech", "superconductors", "--alg", "shor1024",
                             "--code", "bacon-shor", "--codes-dir", str(tmp_path))
        assert status == 1 and "tile" in err

    def test_specs_dir_env(self, capsys, tmp_path, monkeypatch):
        doc = load_json(bundled_codes_dir().parent / "specs" / "superconductors.json")
        (tmp_path / "fast.json").write_text(json.dumps(dict(doc, name="fast")))
        monkeypatch.setenv("QEC_SPECS_DIR", str(tmp_path))
        status, out, _ = run(capsys, "estimate", "--tech", "specs/fast.json", "--alg",
                             str(bundled_codes_dir().parent / "specs" / "shor1024.json"),
                             "--code", "surface")
        assert status == 0 and "Technology: fast" in out


class TestFormatting:
    @pytest.mark.parametrize("x,text", [(3225, "3.23e3"), (1161, "1.16e3"), (49, "49"), (210, "210"),
                                        (2.95e-11, "2.95e-11"), (0, "0"), (9.996e5, "1.00e6")])
    def test_sig3(self, x, text):
        assert sig3(x) == text

    @pytest.mark.parametrize("ns,text", [
        (210, "210 ns"), (5.96e5, "596 µs"), (2.5e7, "25 ms"), (12e9, "12 s"),
        (10.81 * 3600e9, "10.8 hours"), (57.98 * 86400e9, "58 days"),
        (2.22 * 365.25 * 86400e9, "2.22 years"),
    ])
    def test_duration(self, ns, text):
        assert format_duration(ns) == text

    def test_sig_rule(self):
        assert is_close_sig(4.873e-11, 4.99e-11, 2)
        assert not is_close_sig(4.873e-11, 4.99e-11, 3)
        assert is_close_sig(129_471, 1.29e5, 3)
