"""Surface code with hole-pair logical qubits and braided CNOTs.

Timing is built from one syndrome cycle (prep, four CNOTs, measure, run on
every ancilla in parallel). An error-correction step is ``d`` cycles. A
smooth-rough CNOT braids in four EC steps; the smooth-smooth CNOT used between
tiles chains three of them plus a measurement and a final EC.

Gate counts follow the background picture: every ancilla cell in the machine
runs its six-gate cycle for the whole execution, plus a small braiding extra
per logical CNOT.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import magic_state
from .errors import AboveThreshold, DistanceCapExceeded, InvalidValue
from .magic_state import CodeContext, DistillationModel
from .model import (AlgorithmSpec, CostVector, EstimatorOptions, GateKind, ResourceEstimate,
                    TechnologySpec, effective_error, total_logical_gates)

__all__ = [
    "SurfaceConfig",
    "required_distance",
    "distance_for_target",
    "logical_error",
    "cycle_time",
    "ec_time",
    "smooth_rough_cnot_time",
    "logical_op_time",
    "qubits_per_tile",
    "tile_count",
    "total_gate_count",
    "braiding_extras",
    "cell_cycle_composition",
    "code_context",
    "estimate",
]

CODE_NAME = "surface"

# Per ancilla per cycle; X- and Z-syndrome ancillas split the prep/measure kinds.
_CELL_CYCLE = {
    GateKind.CNOT: 4.0,
    GateKind.PrepZero: 0.5, GateKind.PrepPlus: 0.5,
    GateKind.MeasZ: 0.5, GateKind.MeasX: 0.5,
}

# A smooth-smooth CNOT is three braids of four EC steps each.
_BRAID_STEPS_PER_CNOT = 12


@dataclass(frozen=True)
class SurfaceConfig:
    p_th: float = 1e-2
    C1: float = 0.13
    C2: float = 0.61
    K: float = 129
    gates_per_cell_cycle: int = 6
    h_factor: float = 2.0
    distance_cap: int = 255
    cycle_prep: GateKind = GateKind.PrepZero
    cycle_measure: GateKind = GateKind.MeasX

    def __post_init__(self):
        for name in ("p_th", "C1", "C2", "K"):
            if not getattr(self, name) > 0:
                raise InvalidValue(name, "must be positive")
        if self.gates_per_cell_cycle < 1:
            raise InvalidValue("gates_per_cell_cycle", "must be >= 1")
        if self.h_factor < 0:
            raise InvalidValue("h_factor", "must be nonnegative")
        if self.distance_cap < 3:
            raise InvalidValue("distance_cap", "must be >= 3")
        object.__setattr__(self, "cycle_prep", GateKind(self.cycle_prep))
        object.__setattr__(self, "cycle_measure", GateKind(self.cycle_measure))

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SurfaceConfig":
        types = {"p_th": float, "C1": float, "C2": float, "K": float, "gates_per_cell_cycle": int,
                 "h_factor": float, "distance_cap": int, "cycle_prep": str, "cycle_measure": str}
        unknown = set(doc) - set(types)
        if unknown:
            raise InvalidValue(sorted(unknown)[0], "unknown key in surface config")
        try:
            return cls(**{k: types[k](v) for k, v in doc.items()})
        except ValueError as exc:
            raise InvalidValue("surface", str(exc)) from None


def _suppression(p: float, cfg: SurfaceConfig) -> float:
    return cfg.C2 * p / cfg.p_th


def logical_error(p: float, d: int, cfg: SurfaceConfig | None = None) -> float:
    cfg = cfg or SurfaceConfig()
    if d == 0:
        return p
    return cfg.C1 * _suppression(p, cfg) ** ((d + 1) // 2)


def distance_for_target(p: float, target: float, cfg: SurfaceConfig | None = None) -> int:
    """Smallest odd ``d >= 3`` meeting ``target`` (0 when no encoding is needed)."""
    cfg = cfg or SurfaceConfig()
    if p <= target:
        return 0
    # The fit is only meaningful below p_th, even where C2 < 1 would still suppress.
    if p >= cfg.p_th or _suppression(p, cfg) >= 1:
        raise AboveThreshold(p, min(cfg.p_th, cfg.p_th / cfg.C2), CODE_NAME)
    d = 3
    while logical_error(p, d, cfg) > target:
        d += 2
        if d > cfg.distance_cap:
            raise DistanceCapExceeded(cfg.distance_cap)
    return d


def required_distance(p: float, n_gates: int, epsilon: float = 0.5,
                      cfg: SurfaceConfig | None = None) -> int:
    return distance_for_target(p, epsilon / n_gates, cfg)


def cycle_time(tech: TechnologySpec, cfg: SurfaceConfig | None = None) -> float:
    """One parallel syndrome round across the whole lattice."""
    cfg = cfg or SurfaceConfig()
    return tech.time(cfg.cycle_prep) + 4 * tech.time(GateKind.CNOT) + tech.time(cfg.cycle_measure)


def ec_time(d: int, tech: TechnologySpec, cfg: SurfaceConfig | None = None) -> float:
    return d * cycle_time(tech, cfg)


def smooth_rough_cnot_time(d: int, tech: TechnologySpec, cfg: SurfaceConfig | None = None) -> float:
    return 4 * ec_time(d, tech, cfg)


def logical_op_time(kind: GateKind, d: int, tech: TechnologySpec,
                    cfg: SurfaceConfig | None = None) -> float:
    """Latency of one logical gate at distance ``d`` (``d == 0``: bare physical gate)."""
    cfg = cfg or SurfaceConfig()
    kind = GateKind(kind)
    if d == 0:
        return tech.time(kind)
    ec = ec_time(d, tech, cfg)
    if kind is GateKind.CNOT:
        return 3 * smooth_rough_cnot_time(d, tech, cfg) + tech.time(GateKind.MeasX) + ec
    if kind is GateKind.SWAP:
        return 3 * logical_op_time(GateKind.CNOT, d, tech, cfg)
    if kind in (GateKind.MeasX, GateKind.MeasZ):
        return tech.time(kind) + ec
    if kind is GateKind.H:
        return cfg.h_factor * ec
    if kind in (GateKind.S, GateKind.T):
        ctx = code_context(d, tech, cfg)
        gadget = magic_state.s_gadget(ctx) if kind is GateKind.S else magic_state.t_gadget(ctx)
        return gadget.duration_ns
    # Paulis are tracked in software and preps run offline; each still costs one EC step.
    return ec


def qubits_per_tile(d: int, cfg: SurfaceConfig | None = None) -> int:
    cfg = cfg or SurfaceConfig()
    if d == 0:
        return 1
    return round(cfg.K * d * d)


def tile_count(alg: AlgorithmSpec, factory_tiles: int = 0) -> int:
    """Data tiles, one CNOT-ancilla tile each, plus distillation area."""
    if factory_tiles < 0:
        raise InvalidValue("factory_tiles", "must be nonnegative")
    return 2 * alg.logical_qubits + factory_tiles


def cell_cycle_composition(cfg: SurfaceConfig | None = None) -> dict[GateKind, float]:
    """Gates per ancilla cell per syndrome cycle, by kind."""
    cfg = cfg or SurfaceConfig()
    scale = cfg.gates_per_cell_cycle / sum(_CELL_CYCLE.values())
    return {k: v * scale for k, v in _CELL_CYCLE.items()}


def braiding_extras(cnot_count: float, d: int, cfg: SurfaceConfig | None = None) -> float:
    """Extra gates for hole expansion/contraction: a ``d``-cell strip per braid step."""
    cfg = cfg or SurfaceConfig()
    return cnot_count * _BRAID_STEPS_PER_CNOT * d * cfg.gates_per_cell_cycle


def total_gate_count(total_qubits: float, execution_time_ns: float, tech: TechnologySpec,
                     cfg: SurfaceConfig | None = None, extras: float = 0.0) -> float:
    """EC cycles x ancilla cells x gates per cell-cycle, plus logical-op extras."""
    cfg = cfg or SurfaceConfig()
    cycles = execution_time_ns / cycle_time(tech, cfg)
    cells = total_qubits / 2
    return cycles * cells * cfg.gates_per_cell_cycle + extras


def _tile_op(duration: float, d: int, tech: TechnologySpec, cfg: SurfaceConfig) -> CostVector:
    # Background gates of one tile while the op runs.
    cycles = duration / cycle_time(tech, cfg)
    cells = qubits_per_tile(d, cfg) / 2
    return CostVector({k: v * cycles * cells for k, v in cell_cycle_composition(cfg).items()}, duration)


def code_context(d: int, tech: TechnologySpec, cfg: SurfaceConfig | None = None) -> CodeContext:
    cfg = cfg or SurfaceConfig()
    if d == 0:
        ops = {k: CostVector.single(k, tech)
               for k in (GateKind.CNOT, GateKind.MeasX, GateKind.MeasZ, GateKind.PrepPlus)}
        ec = CostVector()
    else:
        ops = {k: _tile_op(logical_op_time(k, d, tech, cfg), d, tech, cfg)
               for k in (GateKind.CNOT, GateKind.MeasX, GateKind.MeasZ, GateKind.PrepPlus)}
        ec = _tile_op(ec_time(d, tech, cfg), d, tech, cfg)
    return CodeContext(CODE_NAME, d, ops, ec, logical_error(tech.worst_gate_error, d, cfg))


def logical_gate(kind: GateKind, d: int, tech: TechnologySpec,
                 cfg: SurfaceConfig | None = None) -> CostVector:
    """Latency plus the background gates of one tile for that long."""
    cfg = cfg or SurfaceConfig()
    if d == 0:
        return CostVector.single(GateKind(kind), tech)
    return _tile_op(logical_op_time(kind, d, tech, cfg), d, tech, cfg)


def estimate(alg: AlgorithmSpec, tech: TechnologySpec, opts: EstimatorOptions | None = None,
             cfg: SurfaceConfig | None = None,
             distillation: DistillationModel | None = None) -> ResourceEstimate:
    opts = opts or EstimatorOptions()
    cfg = cfg or SurfaceConfig()
    p = effective_error(tech, opts.include_memory_error)
    if p != tech.worst_gate_error:
        tech = TechnologySpec(tech.name, tech.gate_time_ns, p, tech.memory_error_per_ns)
    d = distance_for_target(p, opts.per_gate_target(total_logical_gates(alg)), cfg)

    execution = sum(n / alg.parallelism_of(k) * logical_op_time(k, d, tech, cfg)
                    for k, n in alg.nonzero_counts())

    if d == 0:
        counts = {k: float(n) for k, n in alg.nonzero_counts()}
        total = CostVector(counts)
        return ResourceEstimate(
            algorithm=alg.name, technology=tech.name, code=CODE_NAME,
            execution_time_ns=execution, total_physical_qubits=alg.logical_qubits,
            total_physical_gates=total.total, dominant_gate=total.dominant(), code_parameter=0,
            logical_gate_error=p, logical_gate_time_ns=0.0, qubits_per_logical=1.0,
            gates_per_logical=0.0, gate_counts=total.counts,
        )

    ctx = code_context(d, tech, cfg)
    factory_tiles = 0
    for plan in magic_state.plan_factories(alg.gate_counts, execution, ctx, p, distillation):
        # Factory blocks are laid out like data: one tile plus one CNOT-ancilla tile.
        factory_tiles += 2 * plan.blocks

    per_tile = qubits_per_tile(d, cfg)
    qubits = tile_count(alg, factory_tiles) * per_tile
    extras = braiding_extras(alg.count(GateKind.CNOT), d, cfg)
    gates = total_gate_count(qubits, execution, tech, cfg, extras)
    composition = cell_cycle_composition(cfg)
    scale = gates / cfg.gates_per_cell_cycle
    counts = CostVector({k: v * scale for k, v in composition.items()})

    return ResourceEstimate(
        algorithm=alg.name,
        technology=tech.name,
        code=CODE_NAME,
        execution_time_ns=execution,
        total_physical_qubits=qubits,
        total_physical_gates=gates,
        dominant_gate=counts.dominant(),
        code_parameter=d,
        logical_gate_error=logical_error(p, d, cfg),
        logical_gate_time_ns=cycle_time(tech, cfg),
        qubits_per_logical=float(per_tile),
        gates_per_logical=per_tile / 2 * cfg.gates_per_cell_cycle,
        gate_counts=counts.counts,
    )
