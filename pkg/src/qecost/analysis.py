"""Error-rate sweeps, code crossover, parameter maps and gate composition."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from . import bacon_shor, surface
from .errors import Infeasible, InsufficientData, InvalidValue
from .model import (AlgorithmSpec, EstimatorOptions, GateKind, TechnologySpec, load_json)

__all__ = [
    "GateMix",
    "CodeMetrics",
    "SweepRow",
    "default_grid",
    "abstract_technology",
    "bacon_shor_metrics",
    "surface_metrics",
    "sweep",
    "find_crossover",
    "crossovers",
    "parameter_map",
    "gate_composition",
    "count_fractions",
    "logical_composition",
    "report_fractions",
    "METRICS",
    "REPORT_CUTOFF",
]

METRICS = ("time", "qubits", "gates")
REPORT_CUTOFF = 1e-4

Metric = Literal["time", "qubits", "gates"]


@dataclass(frozen=True)
class GateMix:
    """Relative frequency of each logical gate kind."""

    weights: Mapping[GateKind, float]

    def __post_init__(self):
        raw = {GateKind(k): float(v) for k, v in self.weights.items()}
        if any(v < 0 or not math.isfinite(v) for v in raw.values()):
            raise InvalidValue("mix", "weights must be finite and nonnegative")
        total = sum(raw.values())
        if total <= 0:
            raise InvalidValue("mix", "weights must not all be zero")
        object.__setattr__(self, "weights", {k: v / total for k, v in raw.items() if v > 0})

    @classmethod
    def from_algorithm(cls, alg: AlgorithmSpec) -> "GateMix":
        return cls(dict(alg.gate_counts))

    @classmethod
    def load(cls, source) -> "GateMix":
        doc = load_json(source)
        doc = doc.get("weights", doc.get("gate_counts", doc))
        try:
            return cls({GateKind(k): v for k, v in doc.items()})
        except ValueError as exc:
            raise InvalidValue("mix", str(exc)) from None

    def items(self):
        return self.weights.items()


@dataclass(frozen=True)
class CodeMetrics:
    feasible: bool
    code_parameter: int | None = None
    avg_logical_time_ns: float | None = None
    qubits_per_logical: float | None = None
    gates_per_logical: float | None = None
    logical_error: float | None = None
    reason: str | None = field(default=None, compare=False)

    def metric(self, name: Metric) -> float:
        return {"time": self.avg_logical_time_ns, "qubits": self.qubits_per_logical,
                "gates": self.gates_per_logical}[name]

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "code_parameter": self.code_parameter,
            "avg_logical_time_ns": self.avg_logical_time_ns,
            "qubits_per_logical": self.qubits_per_logical,
            "gates_per_logical": self.gates_per_logical,
            "logical_error": self.logical_error,
        }


@dataclass(frozen=True)
class SweepRow:
    p: float
    bacon_shor: CodeMetrics
    surface: CodeMetrics

    def to_dict(self) -> dict:
        return {"p": self.p, "bacon_shor": self.bacon_shor.to_dict(), "surface": self.surface.to_dict()}


def default_grid(p_min: float = 1e-10, p_max: float = 1e-2, points: int = 33) -> list[float]:
    """Log-uniform grid; the default lands on every quarter decade."""
    if points < 1:
        raise InvalidValue("points", "must be >= 1")
    if points == 1:
        return [float(p_min)]
    if not 0 < p_min < p_max:
        raise InvalidValue("p_min", "need 0 < p_min < p_max")
    return [float(x) for x in np.logspace(math.log10(p_min), math.log10(p_max), points)]


def abstract_technology(p: float, gate_time_ns: float = 1000.0) -> TechnologySpec:
    return TechnologySpec("abstract", {k: gate_time_ns for k in GateKind}, p)


def bacon_shor_metrics(tech: TechnologySpec, target: float, mix: GateMix,
                       cfg: bacon_shor.BaconShorConfig | None = None) -> CodeMetrics:
    p = tech.worst_gate_error
    try:
        level = bacon_shor.level_for_target(p, target, cfg)
    except Infeasible as exc:
        return CodeMetrics(False, reason=str(exc))
    model = bacon_shor.BaconShorCostModel(tech, cfg)
    time = gates = 0.0
    for kind, w in mix.items():
        cost = model.logical_gate(kind, level)
        time += w * cost.duration_ns
        gates += w * cost.total
    return CodeMetrics(True, level, time, float(bacon_shor.qubits_per_logical(level, cfg)), gates,
                       bacon_shor.logical_error(p, level, cfg))


def surface_metrics(tech: TechnologySpec, target: float, mix: GateMix,
                    cfg: surface.SurfaceConfig | None = None) -> CodeMetrics:
    p = tech.worst_gate_error
    try:
        d = surface.distance_for_target(p, target, cfg)
    except Infeasible as exc:
        return CodeMetrics(False, reason=str(exc))
    time = gates = 0.0
    for kind, w in mix.items():
        cost = surface.logical_gate(kind, d, tech, cfg)
        time += w * cost.duration_ns
        gates += w * cost.total
    return CodeMetrics(True, d, time, float(surface.qubits_per_tile(d, cfg)), gates,
                       surface.logical_error(p, d, cfg))


def sweep(p_grid: Sequence[float], target: float = 1e-10, mix: GateMix | None = None,
          gate_time_ns: float = 1000.0, tech_template: TechnologySpec | None = None,
          bs_cfg: bacon_shor.BaconShorConfig | None = None,
          sc_cfg: surface.SurfaceConfig | None = None, workers: int = 1) -> list[SweepRow]:
    """Evaluate both codes at every grid error rate against a fixed logical target.

    Every gate of ``tech_template`` (or an abstract technology) is set to
    ``gate_time_ns``. Infeasible points are marked, never raised. Rows come
    back in grid order whatever ``workers`` is.
    """
    if not p_grid:
        raise InvalidValue("p_grid", "must be nonempty")
    if list(p_grid) != sorted(p_grid):
        raise InvalidValue("p_grid", "must be sorted ascending")
    if mix is None:
        from .model import load_algorithm, resolve_spec_path
        mix = GateMix.from_algorithm(load_algorithm(resolve_spec_path("shor1024")))

    def row(p: float) -> SweepRow:
        if tech_template is None:
            tech = abstract_technology(p, gate_time_ns)
        else:
            tech = tech_template.with_uniform_gate_time(gate_time_ns, error=p)
        return SweepRow(p, bacon_shor_metrics(tech, target, mix, bs_cfg),
                        surface_metrics(tech, target, mix, sc_cfg))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(row, p_grid))
    return [row(p) for p in p_grid]


def find_crossover(rows: Sequence[SweepRow], metric: Metric) -> tuple[float, float] | None:
    """Grid interval where the cheaper code flips.

    Only rows where both codes are feasible and at least one is actually
    encoding are compared. An exact tie on a grid point is reported as the
    degenerate interval ``(p, p)``. Returns ``None`` when one code wins
    throughout.
    """
    if metric not in METRICS:
        raise InvalidValue("metric", f"expected one of {METRICS}")
    usable = [r for r in rows
              if r.bacon_shor.feasible and r.surface.feasible
              and (r.bacon_shor.code_parameter or r.surface.code_parameter)]
    if len(usable) < 2:
        raise InsufficientData(f"need two rows where both codes are feasible, got {len(usable)}")
    diffs = [r.bacon_shor.metric(metric) - r.surface.metric(metric) for r in usable]
    for i, diff in enumerate(diffs):
        if diff == 0:
            return usable[i].p, usable[i].p
        if i + 1 < len(diffs) and diffs[i + 1] != 0 and (diff > 0) != (diffs[i + 1] > 0):
            return usable[i].p, usable[i + 1].p
    return None


def parameter_map(p_grid: Sequence[float], target_grid: Sequence[float],
                  bs_cfg: bacon_shor.BaconShorConfig | None = None,
                  sc_cfg: surface.SurfaceConfig | None = None) -> list[list[tuple[int | None, int | None]]]:
    """``[i][j]`` = (level, distance) for ``p_grid[i]`` and ``target_grid[j]``; ``None`` = infeasible."""
    if not p_grid or not target_grid:
        raise InvalidValue("grid", "grids must be nonempty")

    def solve(fn, p, t, cfg):
        try:
            return fn(p, t, cfg)
        except Infeasible:
            return None

    return [[(solve(bacon_shor.level_for_target, p, t, bs_cfg),
              solve(surface.distance_for_target, p, t, sc_cfg)) for t in target_grid]
            for p in p_grid]


def logical_composition(alg: AlgorithmSpec) -> dict[GateKind, float]:
    """Gate fractions of the unencoded algorithm."""
    return count_fractions(alg.gate_counts)


def gate_composition(alg: AlgorithmSpec, tech: TechnologySpec, code: str,
                     opts: EstimatorOptions | None = None, bs_cfg=None, sc_cfg=None) -> dict[GateKind, float]:
    """Fractions of all physical gates by kind in the fault-tolerant run."""
    if code == bacon_shor.CODE_NAME:
        est = bacon_shor.estimate(alg, tech, opts, bs_cfg)
    elif code == surface.CODE_NAME:
        est = surface.estimate(alg, tech, opts, sc_cfg)
    else:
        raise InvalidValue("code", f"unknown code {code!r}")
    return count_fractions(est.gate_counts)


def count_fractions(counts: Mapping[GateKind, float]) -> dict[GateKind, float]:
    total = sum(counts.values())
    if total <= 0:
        raise InsufficientData("no gates to break down")
    return {k: counts[k] / total for k in GateKind if counts.get(k)}


def report_fractions(fractions: Mapping[GateKind, float],
                     cutoff: float = REPORT_CUTOFF) -> list[tuple[GateKind, float]]:
    """Descending (kind, fraction) pairs, dropping kinds rarer than ``cutoff``."""
    order = list(GateKind)
    kept = [(k, f) for k, f in fractions.items() if f >= cutoff]
    return sorted(kept, key=lambda kf: (-kf[1], order.index(kf[0])))


def crossovers(rows: Sequence[SweepRow], metrics: Iterable[str] = METRICS) -> dict[str, object]:
    """Crossover per metric; :class:`InsufficientData` is reported as the string ``"insufficient data"``."""
    out: dict[str, object] = {}
    for m in metrics:
        try:
            out[m] = find_crossover(rows, m)
        except InsufficientData:
            out[m] = "insufficient data"
    return out
