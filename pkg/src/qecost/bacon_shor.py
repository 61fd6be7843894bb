"""Concatenated Bacon-Shor code: level solver and recursive gate/EC cost model.

Each level-``m`` block is nine level-``m-1`` blocks laid out in a
``tile_side x tile_side`` tile (dummy and ancilla sub-blocks included). A
transversal gate at level ``m`` runs the level-``m-1`` gate on all nine
sub-blocks in parallel and is followed by one error-correction step::

    counts(g, m)   = 9 * counts(g, m-1) + counts(EC, m) [+ movement]
    duration(g, m) = duration(g, m-1) + duration(EC, m) [+ movement]

Two-qubit gates first shuttle sub-blocks together with level-``m-1`` SWAPs
(``movement_overhead``), which adds both counts and serial time. EC at level
1 is a fixed Steane-extraction schedule of physical gates; at higher levels
the same schedule is replayed on level-``m-1`` logical gates.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import magic_state
from .errors import AboveThreshold, InvalidValue, LevelCapExceeded, NonTransversal
from .magic_state import CodeContext, DistillationModel
from .model import (AlgorithmSpec, _frozen, CostVector, EstimatorOptions, GateKind, ResourceEstimate,
                    TechnologySpec, effective_error, total_logical_gates)

__all__ = [
    "ECSchedule",
    "BaconShorConfig",
    "BaconShorCostModel",
    "required_level",
    "level_for_target",
    "logical_error",
    "qubits_per_logical",
    "ec_cost",
    "gate_cost",
    "code_context",
    "estimate",
    "TRANSVERSAL_KINDS",
]

CODE_NAME = "bacon-shor"
SUB_BLOCKS = 9

TRANSVERSAL_KINDS = frozenset(GateKind) - {GateKind.S, GateKind.T}

_DEFAULT_COUNTS = {
    GateKind.PrepZero: 6, GateKind.PrepPlus: 6, GateKind.CNOT: 24, GateKind.SWAP: 24,
    GateKind.MeasX: 6, GateKind.MeasZ: 6, GateKind.X: 4, GateKind.Z: 3,
}
_DEFAULT_PATH = (
    GateKind.PrepZero, GateKind.CNOT, GateKind.CNOT, GateKind.CNOT, GateKind.CNOT,
    GateKind.MeasX, GateKind.MeasZ, GateKind.X, GateKind.Z, GateKind.SWAP, GateKind.SWAP,
)


@dataclass(frozen=True)
class ECSchedule:
    """Gates in one level-1 error-correction step and the chain that sets its latency."""

    counts: Mapping[GateKind, int] = field(default_factory=lambda: dict(_DEFAULT_COUNTS))
    critical_path: Sequence[GateKind] = _DEFAULT_PATH

    def __post_init__(self):
        counts = {GateKind(k): int(v) for k, v in self.counts.items()}
        path = tuple(GateKind(k) for k in self.critical_path)
        if any(v < 0 for v in counts.values()) or sum(counts.values()) <= 0:
            raise InvalidValue("ec_schedule.counts", "counts must be nonnegative with a positive total")
        if GateKind.S in counts or GateKind.T in counts:
            raise InvalidValue("ec_schedule.counts", "EC cannot use non-transversal gates")
        for kind in set(path):
            if counts.get(kind, 0) < path.count(kind):
                raise InvalidValue("ec_schedule.critical_path",
                                   f"{kind} appears more often on the path than in the schedule")
        object.__setattr__(self, "counts", _frozen(counts))
        object.__setattr__(self, "critical_path", path)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class BaconShorConfig:
    p_th: float = 2.02e-5
    tile_side: int = 7
    level1_ec_schedule: ECSchedule = field(default_factory=ECSchedule)
    movement_overhead: Mapping[GateKind, int] = field(
        default_factory=lambda: {GateKind.CNOT: 8, GateKind.SWAP: 6})
    level_cap: int = 12

    def __post_init__(self):
        if not 0 < self.p_th < 1:
            raise InvalidValue("p_th", "must lie in (0, 1)")
        if self.tile_side < 3:
            raise InvalidValue("tile_side", "must be >= 3")
        if self.level_cap < 1:
            raise InvalidValue("level_cap", "must be >= 1")
        mov = {GateKind(k): int(v) for k, v in self.movement_overhead.items()}
        if any(v < 0 for v in mov.values()):
            raise InvalidValue("movement_overhead", "SWAP counts must be nonnegative")
        object.__setattr__(self, "movement_overhead", _frozen(mov))

    @property
    def threshold_reciprocal(self) -> float:
        return 1.0 / self.p_th

    @classmethod
    def from_dict(cls, doc: Mapping) -> "BaconShorConfig":
        allowed = {"p_th", "tile_side", "ec_schedule", "movement_overhead", "level_cap"}
        unknown = set(doc) - allowed
        if unknown:
            raise InvalidValue(sorted(unknown)[0], "unknown key in bacon_shor config")
        kwargs: dict = {}
        if "p_th" in doc:
            kwargs["p_th"] = float(doc["p_th"])
        if "tile_side" in doc:
            kwargs["tile_side"] = int(doc["tile_side"])
        if "level_cap" in doc:
            kwargs["level_cap"] = int(doc["level_cap"])
        if "movement_overhead" in doc:
            kwargs["movement_overhead"] = _parse_kinds(doc["movement_overhead"], "movement_overhead")
        if "ec_schedule" in doc:
            sched = doc["ec_schedule"]
            extra = set(sched) - {"counts", "critical_path"}
            if extra:
                raise InvalidValue(f"ec_schedule.{sorted(extra)[0]}", "unknown key")
            base = ECSchedule()
            kwargs["level1_ec_schedule"] = ECSchedule(
                counts=_parse_kinds(sched.get("counts", base.counts), "ec_schedule.counts"),
                critical_path=[_kind(k, "ec_schedule.critical_path")
                               for k in sched.get("critical_path", base.critical_path)],
            )
        return cls(**kwargs)


def _kind(name, key: str) -> GateKind:
    try:
        return GateKind(name)
    except ValueError:
        raise InvalidValue(f"{key}.{name}", "unknown gate kind") from None


def _parse_kinds(doc: Mapping, key: str) -> dict[GateKind, int]:
    return {_kind(k, key): v for k, v in doc.items()}


def logical_error(p: float, level: int, cfg: BaconShorConfig | None = None) -> float:
    """Failure probability of one gate after ``level`` concatenations."""
    cfg = cfg or BaconShorConfig()
    if level == 0:
        return p
    return (p / cfg.p_th) ** (2 ** level) * cfg.p_th


def level_for_target(p: float, target: float, cfg: BaconShorConfig | None = None) -> int:
    """Smallest level whose logical error is at most ``target`` (0: no encoding needed)."""
    cfg = cfg or BaconShorConfig()
    if p <= target:
        return 0
    if p >= cfg.p_th:
        raise AboveThreshold(p, cfg.p_th, CODE_NAME)
    level = 1
    while logical_error(p, level, cfg) > target:
        level += 1
        if level > cfg.level_cap:
            raise LevelCapExceeded(cfg.level_cap)
    return level


def required_level(p: float, n_gates: int, epsilon: float = 0.5,
                   cfg: BaconShorConfig | None = None) -> int:
    """Level needed so ``n_gates`` gates fail with total probability at most ``epsilon``."""
    return level_for_target(p, epsilon / n_gates, cfg)


def qubits_per_logical(level: int, cfg: BaconShorConfig | None = None) -> int:
    cfg = cfg or BaconShorConfig()
    return (cfg.tile_side ** 2) ** level


class BaconShorCostModel:
    """Memoised recursive costs for one technology and config.

    Levels are filled bottom-up under a lock, so a shared instance can serve
    concurrent callers; the cache never changes a result.
    """

    def __init__(self, tech: TechnologySpec, cfg: BaconShorConfig | None = None):
        self.tech = tech
        self.cfg = cfg or BaconShorConfig()
        self._gates: list[dict[GateKind, CostVector]] = [
            {k: CostVector.single(k, tech) for k in GateKind}
        ]
        self._ec: list[CostVector] = [CostVector()]
        self._lock = threading.Lock()

    def _fill(self, level: int) -> None:
        with self._lock:
            while len(self._gates) <= level:
                m = len(self._gates)
                prev = self._gates[m - 1]
                ec = self._ec_at(m, prev)
                swap_prev = prev[GateKind.SWAP]
                cur = {}
                for kind in TRANSVERSAL_KINDS:
                    moves = self.cfg.movement_overhead.get(kind, 0)
                    cur[kind] = swap_prev.times(moves) + prev[kind].copies(SUB_BLOCKS) + ec
                self._gates.append(cur)
                self._ec.append(ec)

    def _ec_at(self, m: int, prev: Mapping[GateKind, CostVector]) -> CostVector:
        sched = self.cfg.level1_ec_schedule
        if m == 1:
            duration = sum(self.tech.time(k) for k in sched.critical_path)
            return CostVector(dict(sched.counts), duration)
        counts: dict[GateKind, float] = {}
        for kind, n in sched.counts.items():
            for g, c in prev[kind].counts.items():
                counts[g] = counts.get(g, 0) + n * c
        duration = sum(prev[k].duration_ns for k in sched.critical_path)
        return CostVector(counts, duration)

    def ec(self, level: int) -> CostVector:
        if level < 1:
            raise InvalidValue("level", "EC is defined for level >= 1")
        self._fill(level)
        return self._ec[level]

    def gate(self, kind: GateKind, level: int) -> CostVector:
        kind = GateKind(kind)
        if level < 0:
            raise InvalidValue("level", "must be >= 0")
        if level == 0:
            return self._gates[0][kind]
        if kind not in TRANSVERSAL_KINDS:
            raise NonTransversal(kind)
        self._fill(level)
        return self._gates[level][kind]

    def context(self, level: int) -> CodeContext:
        p_ops = (GateKind.CNOT, GateKind.MeasX, GateKind.MeasZ, GateKind.PrepPlus)
        return CodeContext(
            code=CODE_NAME,
            parameter=level,
            ops={k: self.gate(k, level) for k in p_ops},
            ec=self.ec(level) if level >= 1 else CostVector(),
            logical_error=logical_error(self.tech.worst_gate_error, level, self.cfg),
        )

    def logical_gate(self, kind: GateKind, level: int) -> CostVector:
        """Cost of any logical gate, routing S and T through their ancilla gadgets."""
        kind = GateKind(kind)
        if level == 0 or kind in TRANSVERSAL_KINDS:
            return self.gate(kind, level)
        ctx = self.context(level)
        return magic_state.s_gadget(ctx) if kind is GateKind.S else magic_state.t_gadget(ctx)


def ec_cost(level: int, tech: TechnologySpec, cfg: BaconShorConfig | None = None) -> CostVector:
    return BaconShorCostModel(tech, cfg).ec(level)


def gate_cost(kind: GateKind, level: int, tech: TechnologySpec,
              cfg: BaconShorConfig | None = None) -> CostVector:
    return BaconShorCostModel(tech, cfg).gate(kind, level)


def code_context(level: int, tech: TechnologySpec, cfg: BaconShorConfig | None = None) -> CodeContext:
    return BaconShorCostModel(tech, cfg).context(level)


def estimate(alg: AlgorithmSpec, tech: TechnologySpec, opts: EstimatorOptions | None = None,
             cfg: BaconShorConfig | None = None,
             distillation: DistillationModel | None = None) -> ResourceEstimate:
    opts = opts or EstimatorOptions()
    cfg = cfg or BaconShorConfig()
    p = effective_error(tech, opts.include_memory_error)
    if p != tech.worst_gate_error:
        tech = TechnologySpec(tech.name, tech.gate_time_ns, p, tech.memory_error_per_ns)
    level = level_for_target(p, opts.per_gate_target(total_logical_gates(alg)), cfg)
    model = BaconShorCostModel(tech, cfg)

    execution = 0.0
    counts: dict[GateKind, float] = {}
    for kind, n in alg.nonzero_counts():
        cost = model.logical_gate(kind, level)
        execution += n / alg.parallelism_of(kind) * cost.duration_ns
        for g, c in cost.counts.items():
            counts[g] = counts.get(g, 0) + n * c

    block = qubits_per_logical(level, cfg)
    qubits = alg.logical_qubits * block
    if level >= 1:
        for plan in magic_state.plan_factories(alg.gate_counts, execution, model.context(level), p,
                                               distillation):
            qubits += plan.blocks * block
            for g, c in plan.gates.items():
                counts[g] = counts.get(g, 0) + c

    total = CostVector(counts)
    return ResourceEstimate(
        algorithm=alg.name,
        technology=tech.name,
        code=CODE_NAME,
        execution_time_ns=execution,
        total_physical_qubits=qubits,
        total_physical_gates=total.total,
        dominant_gate=total.dominant(),
        code_parameter=level,
        logical_gate_error=logical_error(p, level, cfg),
        logical_gate_time_ns=model.ec(level).duration_ns if level else 0.0,
        qubits_per_logical=float(block),
        gates_per_logical=model.ec(level).total if level else 0.0,
        gate_counts=total.counts,
    )
