import math

import pytest
from hypothesis import given, strategies as st

from qecost import AboveThreshold, DistanceCapExceeded, GateKind, InvalidValue, estimate
from qecost.report import NS_PER_HOUR, NS_PER_YEAR
from qecost.surface import (SurfaceConfig, braiding_extras, cell_cycle_composition, cycle_time,
                            distance_for_target, ec_time, logical_error, logical_op_time,
                            qubits_per_tile, required_distance, tile_count, total_gate_count)

N = 2_696_000_000


def oracle_error(p, d):
    return 0.13 * (0.61 * p / 1e-2) ** ((d + 1) // 2)


class TestDistance:
    @pytest.mark.parametrize("p,d", [(1e-5, 5), (3.19e-9, 3), (1.47e-3, 17)])
    def test_reference_distances(self, p, d):
        assert required_distance(p, N, 0.5) == d

    def test_threshold(self):
        with pytest.raises(AboveThreshold):
            distance_for_target(1e-2, 1e-10)
        assert distance_for_target(0.0099, 1e-10) >= 3

    def test_no_encoding(self):
        assert distance_for_target(1e-11, 1e-10) == 0

    def test_cap(self):
        with pytest.raises(DistanceCapExceeded):
            distance_for_target(9e-3, 1e-200, SurfaceConfig(distance_cap=21))

    @given(st.floats(1e-9, 9.9e-3), st.floats(-40, -3))
    def test_minimal_and_odd(self, p, log_t):
        t = 10.0 ** log_t
        try:
            d = distance_for_target(p, t)
        except DistanceCapExceeded:
            assert oracle_error(p, 255) > t
            return
        if d == 0:
            assert p <= t
            return
        assert d % 2 == 1 and d >= 3
        assert oracle_error(p, d) <= t * (1 + 1e-12)
        if d > 3:
            assert oracle_error(p, d - 2) > t

    @given(st.floats(1e-9, 9.9e-3), st.floats(1e-9, 9.9e-3))
    def test_monotone_in_p(self, p, q):
        lo, hi = sorted((p, q))
        assert distance_for_target(lo, 1e-12) <= distance_for_target(hi, 1e-12)


class TestLogicalError:
    def test_superconductors(self):
        assert f"{logical_error(1e-5, 5):.2e}" == "2.95e-11"

    def test_ion_traps(self):
        assert f"{logical_error(3.19e-9, 3):.2e}" == "4.92e-15"

    def test_neutral_atoms_two_figures(self):
        # 4.873e-11 against a reference 4.99e-11: equal to two significant figures.
        assert abs(logical_error(1.47e-3, 17) - 4.99e-11) <= 0.05 * 4.99e-11

    @given(st.floats(1e-9, 9.9e-3), st.integers(1, 60))
    def test_oracle(self, p, half):
        d = 2 * half + 1
        assert logical_error(p, d) == pytest.approx(oracle_error(p, d), rel=1e-12)


class TestTiming:
    def test_cycle_times(self, sc, ion, na):
        assert cycle_time(sc) == 106 + 4 * 22 + 16 == 210
        assert cycle_time(ion) == 10_000 + 480_000 + 106_000 == 596_000
        assert cycle_time(na) == 1_000 + 45_480 + 82_991

    def test_ec_is_d_cycles(self, sc):
        assert ec_time(5, sc) == 5 * 210

    def test_op_times(self, sc):
        ec = ec_time(5, sc)
        assert logical_op_time(GateKind.CNOT, 5, sc) == 12 * ec + 16 + ec
        assert logical_op_time(GateKind.SWAP, 5, sc) == 3 * logical_op_time(GateKind.CNOT, 5, sc)
        assert logical_op_time(GateKind.H, 5, sc) == 2 * ec
        assert logical_op_time(GateKind.MeasZ, 5, sc) == 10 + ec
        assert logical_op_time(GateKind.X, 5, sc) == ec
        assert logical_op_time(GateKind.CNOT, 0, sc) == 22

    @given(st.floats(1e-3, 1e3))
    def test_uniform_scaling(self, k):
        from qecost import load_technology, resolve_spec_path
        tech = load_technology(resolve_spec_path("superconductors"))
        scaled = tech.scaled(k)
        for kind in GateKind:
            assert logical_op_time(kind, 7, scaled) == pytest.approx(k * logical_op_time(kind, 7, tech),
                                                                     rel=1e-9)

    def test_polynomial_growth(self, sc):
        times = [logical_op_time(GateKind.CNOT, d, sc) for d in range(3, 101, 2)]
        ratios = [b / a for a, b in zip(times, times[1:])]
        assert max(ratios) <= 5 / 3 + 1e-12


class TestFootprint:
    @pytest.mark.parametrize("d,q", [(3, 1161), (5, 3225), (17, 37_281)])
    def test_qubits_per_tile(self, d, q):
        assert qubits_per_tile(d) == q

    def test_tile_count(self, shor):
        assert tile_count(shor, 1861) == 14_149
        with pytest.raises(InvalidValue):
            tile_count(shor, -1)


class TestGateCount:
    @pytest.mark.parametrize("name,qubits,exec_ns,ref", [
        ("superconductors", 4.57e7, 10.81 * NS_PER_HOUR, 2.55e19),
        ("ion_traps", 1.44e8, 2.22 * NS_PER_YEAR, 5.10e19),
        ("neutral_atoms", 5.29e8, 2.62 * NS_PER_YEAR, 1.02e21),
    ])
    def test_reference_inputs(self, techs, name, qubits, exec_ns, ref):
        assert total_gate_count(qubits, exec_ns, techs[name]) == pytest.approx(ref, rel=0.05)

    def test_derived_superconductor_value(self, sc):
        # (exec / cycle) * (qubits / 2) * 6
        want = (10.81 * NS_PER_HOUR / 210) * (4.57e7 / 2) * 6
        assert total_gate_count(4.57e7, 10.81 * NS_PER_HOUR, sc) == pytest.approx(want, rel=1e-12)

    @given(st.floats(1, 1e10), st.floats(1, 1e18), st.floats(0.1, 10), st.floats(0.1, 10))
    def test_bilinear(self, q, t, a, b):
        from qecost import load_technology, resolve_spec_path
        tech = load_technology(resolve_spec_path("ion_traps"))
        base = total_gate_count(q, t, tech)
        assert total_gate_count(a * q, b * t, tech) == pytest.approx(a * b * base, rel=1e-9)

    def test_cell_composition(self):
        comp = cell_cycle_composition()
        assert sum(comp.values()) == 6
        assert comp[GateKind.CNOT] == 4
        assert max(comp, key=comp.get) is GateKind.CNOT

    def test_braiding_extras(self):
        assert braiding_extras(10, 5) == 10 * 12 * 5 * 6


class TestEstimate:
    def test_superconductors(self, shor, sc):
        est = estimate(shor, sc, "surface")
        assert est.code_parameter == 5
        assert est.logical_gate_time_ns == 210
        assert est.qubits_per_logical == 3225
        assert est.dominant_gate is GateKind.CNOT
        assert est.total_physical_qubits == pytest.approx(4.57e7, rel=0.25)
        assert 0.5 <= est.execution_time_ns / (10.81 * NS_PER_HOUR) <= 2

    def test_neutral_atoms(self, shor, na):
        est = estimate(shor, na, "surface")
        assert est.code_parameter == 17
        assert est.dominant_gate is GateKind.CNOT

    def test_ion_traps(self, shor, ion):
        est = estimate(shor, ion, "surface")
        assert est.code_parameter == 3
        assert 0.5 <= est.execution_time_ns / (2.22 * NS_PER_YEAR) <= 2

    def test_qubits_are_whole_tiles(self, shor, techs):
        for tech in techs.values():
            est = estimate(shor, tech, "surface")
            tiles = est.total_physical_qubits / est.qubits_per_logical
            assert tiles == int(tiles) and tiles >= 2 * shor.logical_qubits

    def test_execution_time_oracle(self, shor, sc):
        want = sum(n / shor.parallelism_of(k) * logical_op_time(k, 5, sc) for k, n in shor.nonzero_counts())
        assert estimate(shor, sc, "surface").execution_time_ns == pytest.approx(want, rel=1e-12)

    def test_scaled_technology_scales_time_only(self, shor, sc):
        a, b = estimate(shor, sc, "surface"), estimate(shor, sc.scaled(3.0), "surface")
        assert b.execution_time_ns == pytest.approx(3 * a.execution_time_ns, rel=1e-9)
        assert b.code_parameter == a.code_parameter
        assert math.isclose(b.total_physical_gates, a.total_physical_gates, rel_tol=1e-9)


class TestConfig:
    def test_from_dict(self):
        cfg = SurfaceConfig.from_dict({"K": 100, "cycle_measure": "MeasZ"})
        assert cfg.K == 100 and cfg.cycle_measure is GateKind.MeasZ

    def test_unknown_key(self):
        with pytest.raises(InvalidValue, match="D"):
            SurfaceConfig.from_dict({"D": 1})

    def test_bad_value(self):
        with pytest.raises(InvalidValue):
            SurfaceConfig(C1=0)
