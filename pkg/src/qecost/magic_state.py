"""Magic-state distillation for the non-transversal S and T gates.

S gates consume a |+i> ancilla and T gates a T|+> ancilla. Both are injected
(not fault-tolerantly) and then purified over several rounds; each round maps
an input error ``e`` to ``a * e**k``. Dedicated factory regions produce the
states while the algorithm runs, so distillation adds area and gates but not
latency.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DistillationDiverges, InvalidValue, RoundCapExceeded
from .model import CostVector, GateKind

__all__ = [
    "AncillaState",
    "RoundMap",
    "DistillationModel",
    "CodeContext",
    "FactoryPlan",
    "required_rounds",
    "round_errors",
    "distillation_cost",
    "factory_count",
    "plan_factories",
    "s_gadget",
    "t_gadget",
    "ancilla_demand",
]


class AncillaState(str, enum.Enum):
    S = "S-ancilla"
    T = "T-ancilla"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RoundMap:
    """One distillation round: ``e -> a * e**k``, consuming ``inputs`` states per output."""

    a: float
    k: float
    inputs: int

    def __post_init__(self):
        if self.a <= 0 or self.k <= 1:
            raise InvalidValue("round", f"need a > 0 and k > 1, got a={self.a}, k={self.k}")
        if self.inputs < 1:
            raise InvalidValue("round.inputs", "must be >= 1")

    def __call__(self, eps: float) -> float:
        return self.a * eps ** self.k

    @property
    def fixed_point(self) -> float:
        """Error above which a round makes things worse."""
        return self.a ** (-1.0 / (self.k - 1))


@dataclass(frozen=True)
class DistillationModel:
    injection_error_factor: float = 1.0
    s_round: RoundMap = RoundMap(7, 2, 7)
    t_round: RoundMap = RoundMap(35, 3, 15)
    max_rounds: int = 10

    def __post_init__(self):
        if self.injection_error_factor < 1:
            raise InvalidValue("injection_error_factor", "must be >= 1")
        if self.max_rounds < 0:
            raise InvalidValue("max_rounds", "must be >= 0")

    def round_map(self, state: AncillaState) -> RoundMap:
        return self.s_round if AncillaState(state) is AncillaState.S else self.t_round

    @classmethod
    def from_dict(cls, doc: Mapping) -> "DistillationModel":
        allowed = {"injection_error_factor", "s_round", "t_round", "max_rounds"}
        unknown = set(doc) - allowed
        if unknown:
            raise InvalidValue(sorted(unknown)[0], "unknown key in magic_state config")
        kwargs: dict = {}
        if "injection_error_factor" in doc:
            kwargs["injection_error_factor"] = float(doc["injection_error_factor"])
        if "max_rounds" in doc:
            kwargs["max_rounds"] = int(doc["max_rounds"])
        for key, default in (("s_round", cls.s_round), ("t_round", cls.t_round)):
            if key in doc:
                r = doc[key]
                extra = set(r) - {"a", "k", "inputs"}
                if extra:
                    raise InvalidValue(f"{key}.{sorted(extra)[0]}", "unknown key")
                kwargs[key] = RoundMap(float(r.get("a", default.a)), float(r.get("k", default.k)),
                                       int(r.get("inputs", default.inputs)))
        return cls(**kwargs)


@dataclass(frozen=True)
class CodeContext:
    """Logical-level costs of the operations distillation is built from.

    ``ops`` must provide CNOT, MeasX, MeasZ and PrepPlus; ``ec`` is one
    error-correction step on a block; ``logical_error`` is the Clifford error
    the distilled states must beat.
    """

    code: str
    parameter: int
    ops: Mapping[GateKind, CostVector]
    ec: CostVector
    logical_error: float

    def op(self, kind: GateKind) -> CostVector:
        return self.ops[kind]


def _injection_error(p: float, model: DistillationModel) -> float:
    return model.injection_error_factor * p


def required_rounds(state: AncillaState, p: float, target: float,
                    model: DistillationModel | None = None) -> int:
    """Fewest rounds that bring the injected error down to ``target``."""
    model = model or DistillationModel()
    rmap = model.round_map(state)
    eps = _injection_error(p, model)
    rounds = 0
    while eps > target:
        nxt = rmap(eps)
        if not nxt < eps:
            raise DistillationDiverges(
                f"{AncillaState(state)}: error {eps:.3g} is above the round map's fixed point "
                f"{rmap.fixed_point:.3g}")
        rounds += 1
        if rounds > model.max_rounds:
            raise RoundCapExceeded(model.max_rounds)
        eps = nxt
    return rounds


def round_errors(state: AncillaState, p: float, rounds: int,
                 model: DistillationModel | None = None) -> list[float]:
    """``[e0, e1, ..., e_rounds]``: the injected error and the output of each round."""
    model = model or DistillationModel()
    rmap = model.round_map(state)
    errs = [_injection_error(p, model)]
    for _ in range(rounds):
        errs.append(rmap(errs[-1]))
    return errs


def injection_cost(ctx: CodeContext) -> CostVector:
    """Teleport a bare state into the code: two CNOTs, a Z measurement, a |+> prep."""
    cnot = ctx.op(GateKind.CNOT)
    return cnot + cnot + ctx.op(GateKind.MeasZ) + ctx.op(GateKind.PrepPlus)


def round_cost(ctx: CodeContext) -> CostVector:
    return ctx.op(GateKind.CNOT) + ctx.op(GateKind.MeasX) + ctx.ec


def distillation_cost(state: AncillaState, rounds: int, ctx: CodeContext,
                      p: float | None = None, model: DistillationModel | None = None) -> CostVector:
    """Cost of producing one distilled state.

    With ``p`` given, round ``k`` is repeated ``1 / (1 - e_k)`` times on
    average, ``e_k`` being the error of the states it consumes. Without it
    every round succeeds first time and the cost is exactly affine in
    ``rounds``.
    """
    if rounds < 0:
        raise InvalidValue("rounds", "must be >= 0")
    total = injection_cost(ctx)
    per_round = round_cost(ctx)
    if p is None:
        return total + per_round.times(rounds)
    errs = round_errors(state, p, rounds, model)
    for k in range(rounds):
        total = total + per_round.times(1.0 / (1.0 - errs[k]))
    return total


def s_gadget(ctx: CodeContext) -> CostVector:
    """S via a |+i> ancilla: CNOT, measure, correct."""
    return ctx.op(GateKind.CNOT) + ctx.op(GateKind.MeasZ) + ctx.ec


def t_gadget(ctx: CodeContext) -> CostVector:
    """T via a T|+> ancilla; the S fix-up is needed half the time."""
    return ctx.op(GateKind.CNOT) + ctx.op(GateKind.MeasZ) + s_gadget(ctx).times(0.5)


def factory_count(t_gate_rate: float, factory_period_ns: float) -> int:
    """Factories needed so production keeps up with consumption."""
    if t_gate_rate < 0 or factory_period_ns < 0:
        raise InvalidValue("factory_count", "rate and period must be nonnegative")
    demand = t_gate_rate * factory_period_ns
    # Shave float fuzz so an exact integer product does not round up.
    return math.ceil(demand * (1 - 1e-12)) if demand > 0 else 0


def ancilla_demand(gate_counts: Mapping[GateKind, float]) -> dict[AncillaState, float]:
    """Distilled states consumed: one T state per T, one S state per S plus half per T."""
    t = gate_counts.get(GateKind.T, 0)
    s = gate_counts.get(GateKind.S, 0) + 0.5 * t
    return {AncillaState.S: s, AncillaState.T: t}


@dataclass(frozen=True)
class FactoryPlan:
    state: AncillaState
    demand: float
    rounds: int
    per_state: CostVector
    factories: int
    blocks_per_factory: int

    @property
    def blocks(self) -> int:
        return self.factories * self.blocks_per_factory

    @property
    def gates(self) -> Mapping[GateKind, float]:
        return {k: v * self.demand for k, v in self.per_state.counts.items()}


def plan_factories(gate_counts: Mapping[GateKind, float], execution_time_ns: float, ctx: CodeContext,
                   p: float, model: DistillationModel | None = None) -> list[FactoryPlan]:
    """Size S and T factories for a run of ``execution_time_ns``.

    A factory runs one full distillation sequence per period and holds one
    logical block per input state plus one for the output.
    """
    model = model or DistillationModel()
    plans = []
    for state, demand in ancilla_demand(gate_counts).items():
        if demand <= 0:
            continue
        rounds = required_rounds(state, p, ctx.logical_error, model)
        per_state = distillation_cost(state, rounds, ctx, p=p, model=model)
        rate = demand / execution_time_ns if execution_time_ns > 0 else 0.0
        plans.append(FactoryPlan(
            state=state,
            demand=demand,
            rounds=rounds,
            per_state=per_state,
            factories=factory_count(rate, per_state.duration_ns),
            blocks_per_factory=model.round_map(state).inputs + 1,
        ))
    return plans
