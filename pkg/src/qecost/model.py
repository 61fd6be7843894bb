"""Shared data model: gate alphabet, technology and algorithm specs, cost vectors.

Spec documents are plain JSON objects. Loaders validate every field and either
return a fully constructed, immutable spec or raise a :class:`SpecError`
subclass; nothing is ever partially built.
"""
from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from .errors import InvalidValue, MissingGate, SpecError

__all__ = [
    "GateKind",
    "TechnologySpec",
    "AlgorithmSpec",
    "EstimatorOptions",
    "CostVector",
    "ResourceEstimate",
    "load_technology",
    "load_algorithm",
    "load_json",
    "total_logical_gates",
    "decompose_toffoli",
    "effective_error",
    "specs_dir",
    "resolve_spec_path",
    "TOFFOLI_DECOMPOSITION",
]


class GateKind(str, enum.Enum):
    CNOT = "CNOT"
    SWAP = "SWAP"
    H = "H"
    PrepPlus = "PrepPlus"
    PrepZero = "PrepZero"
    MeasX = "MeasX"
    MeasZ = "MeasZ"
    X = "X"
    Y = "Y"
    Z = "Z"
    S = "S"
    T = "T"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "GateKind":
        try:
            return cls(name)
        except ValueError:
            raise InvalidValue("gate", f"unknown gate kind {name!r}") from None


TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.SWAP})

# One Toffoli = 7 T/T-dagger + 7 CNOT + 2 H (T-count optimal decomposition).
TOFFOLI_DECOMPOSITION = MappingProxyType({GateKind.CNOT: 7, GateKind.H: 2, GateKind.T: 7})


def _frozen(mapping: Mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class TechnologySpec:
    name: str
    gate_time_ns: Mapping[GateKind, float]
    worst_gate_error: float
    memory_error_per_ns: float | None = None

    def __post_init__(self):
        for kind in GateKind:
            if kind not in self.gate_time_ns:
                raise MissingGate(kind)
            t = self.gate_time_ns[kind]
            if not _is_finite_number(t) or t <= 0:
                raise InvalidValue(f"gate_times_ns.{kind}", f"gate time must be positive, got {t!r}")
        if not _is_finite_number(self.worst_gate_error) or not 0 < self.worst_gate_error < 1:
            raise InvalidValue("worst_gate_error", f"must lie in (0, 1), got {self.worst_gate_error!r}")
        if self.memory_error_per_ns is not None and (
            not _is_finite_number(self.memory_error_per_ns) or self.memory_error_per_ns < 0
        ):
            raise InvalidValue("memory_error_per_ns", f"must be >= 0, got {self.memory_error_per_ns!r}")
        object.__setattr__(self, "gate_time_ns", _frozen(self.gate_time_ns))

    def time(self, kind: GateKind) -> float:
        return self.gate_time_ns[kind]

    @property
    def average_gate_time_ns(self) -> float:
        return sum(self.gate_time_ns.values()) / len(self.gate_time_ns)

    def with_uniform_gate_time(self, time_ns: float, error: float | None = None) -> "TechnologySpec":
        """Copy with every gate time set to ``time_ns`` (and optionally a new error rate)."""
        return TechnologySpec(
            name=self.name,
            gate_time_ns={k: time_ns for k in GateKind},
            worst_gate_error=self.worst_gate_error if error is None else error,
            memory_error_per_ns=self.memory_error_per_ns,
        )

    def scaled(self, factor: float) -> "TechnologySpec":
        return TechnologySpec(
            name=self.name,
            gate_time_ns={k: t * factor for k, t in self.gate_time_ns.items()},
            worst_gate_error=self.worst_gate_error,
            memory_error_per_ns=self.memory_error_per_ns,
        )

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "name": self.name,
            "gate_times_ns": {str(k): self.gate_time_ns[k] for k in GateKind},
            "worst_gate_error": self.worst_gate_error,
        }
        if self.memory_error_per_ns is not None:
            doc["memory_error_per_ns"] = self.memory_error_per_ns
        return doc


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    logical_qubits: int
    gate_counts: Mapping[GateKind, int]
    parallelism: Mapping[GateKind, float] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.logical_qubits, int) or isinstance(self.logical_qubits, bool) \
                or self.logical_qubits <= 0:
            raise InvalidValue("logical_qubits", f"must be a positive integer, got {self.logical_qubits!r}")
        counts = {}
        for kind, n in self.gate_counts.items():
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise InvalidValue(f"gate_counts.{kind}", f"must be a nonnegative integer, got {n!r}")
            counts[GateKind(kind)] = n
        if not any(counts.values()):
            raise InvalidValue("gate_counts", "at least one gate count must be positive")
        par = {}
        for kind, f in self.parallelism.items():
            if not _is_finite_number(f) or f < 1:
                raise InvalidValue(f"parallelism.{kind}", f"must be >= 1, got {f!r}")
            par[GateKind(kind)] = float(f)
        object.__setattr__(self, "gate_counts", _frozen(counts))
        object.__setattr__(self, "parallelism", _frozen(par))

    @property
    def total_gates(self) -> int:
        return total_logical_gates(self)

    def parallelism_of(self, kind: GateKind) -> float:
        return self.parallelism.get(kind, 1.0)

    def count(self, kind: GateKind) -> int:
        return self.gate_counts.get(kind, 0)

    def nonzero_counts(self) -> Iterable[tuple[GateKind, int]]:
        return [(k, self.gate_counts[k]) for k in GateKind if self.gate_counts.get(k, 0) > 0]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "logical_qubits": self.logical_qubits,
            "gate_counts": {str(k): n for k, n in self.gate_counts.items()},
            "parallelism": {str(k): f for k, f in self.parallelism.items()},
        }


@dataclass(frozen=True)
class EstimatorOptions:
    """Run-wide knobs.

    ``target_failure`` is the whole-algorithm failure budget, spread evenly
    over the logical gates. ``target_logical_error``, when set, replaces that
    per-gate budget outright (sweep mode).
    """

    target_failure: float = 0.5
    target_logical_error: float | None = None
    include_memory_error: bool = False

    def __post_init__(self):
        if not 0 < self.target_failure < 1:
            raise InvalidValue("target_failure", f"must lie in (0, 1), got {self.target_failure!r}")
        if self.target_logical_error is not None and not 0 < self.target_logical_error < 1:
            raise InvalidValue("target_logical_error",
                               f"must lie in (0, 1), got {self.target_logical_error!r}")

    def per_gate_target(self, n_gates: int) -> float:
        if self.target_logical_error is not None:
            return self.target_logical_error
        return self.target_failure / n_gates


@dataclass(frozen=True)
class CostVector:
    """Physical gate counts by kind plus a critical-path duration.

    Counts are floats: expected-attempt multipliers in distillation make them
    fractional, and aggregate totals overflow any fixed-width integer anyway.
    ``+`` composes sequentially; :meth:`parallel` composes side by side.
    """

    counts: Mapping[GateKind, float] = field(default_factory=dict)
    duration_ns: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "counts", _frozen({k: v for k, v in self.counts.items() if v}))

    @classmethod
    def single(cls, kind: GateKind, tech: TechnologySpec) -> "CostVector":
        return cls({kind: 1}, tech.time(kind))

    @property
    def total(self) -> float:
        return float(sum(self.counts.values()))

    def count(self, kind: GateKind) -> float:
        return self.counts.get(kind, 0)

    def __add__(self, other: "CostVector") -> "CostVector":
        return CostVector(_sum_counts(self.counts, other.counts), self.duration_ns + other.duration_ns)

    def parallel(self, other: "CostVector") -> "CostVector":
        return CostVector(_sum_counts(self.counts, other.counts), max(self.duration_ns, other.duration_ns))

    def times(self, k: float) -> "CostVector":
        """``k`` back-to-back repetitions."""
        return CostVector({g: n * k for g, n in self.counts.items()}, self.duration_ns * k)

    def copies(self, k: float) -> "CostVector":
        """``k`` simultaneous repetitions: counts scale, duration does not."""
        return CostVector({g: n * k for g, n in self.counts.items()}, self.duration_ns)

    def dominant(self) -> GateKind | None:
        if not self.counts:
            return None
        return max(GateKind, key=lambda k: (self.counts.get(k, 0), -list(GateKind).index(k)))


def _sum_counts(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


@dataclass(frozen=True)
class ResourceEstimate:
    algorithm: str
    technology: str
    code: str
    execution_time_ns: float
    total_physical_qubits: int
    total_physical_gates: float
    dominant_gate: GateKind
    code_parameter: int
    logical_gate_error: float
    logical_gate_time_ns: float
    qubits_per_logical: float
    gates_per_logical: float
    gate_counts: Mapping[GateKind, float] = field(default_factory=dict, compare=False)

    @property
    def parameter_name(self) -> str:
        return "level" if self.code == "bacon-shor" else "distance"

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "technology": self.technology,
            "code": self.code,
            "execution_time_ns": self.execution_time_ns,
            "total_physical_qubits": self.total_physical_qubits,
            "total_physical_gates": self.total_physical_gates,
            "dominant_gate": str(self.dominant_gate),
            "code_parameter": self.code_parameter,
            "logical_gate_error": self.logical_gate_error,
            "logical_gate_time_ns": self.logical_gate_time_ns,
            "qubits_per_logical": self.qubits_per_logical,
            "gates_per_logical": self.gates_per_logical,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "ResourceEstimate":
        d = dict(doc)
        d["dominant_gate"] = GateKind(d["dominant_gate"])
        return cls(**d)


def _is_finite_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _as_count(key: str, value: Any) -> int:
    # JSON writers emit 1.18e9 as a float; accept any integral value.
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidValue(key, f"must be an integer, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise InvalidValue(key, f"must be an integer, got {value!r}")
        value = int(value)
    return value


def _check_keys(doc: Mapping, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(doc, Mapping):
        raise SpecError(f"{where}: expected a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise InvalidValue(sorted(unknown)[0], f"unknown key in {where}")
    for key in sorted(required):
        if key not in doc:
            raise InvalidValue(key, f"missing required key in {where}")


def _gate_map(doc: Any, key: str) -> dict[GateKind, Any]:
    if not isinstance(doc, Mapping):
        raise InvalidValue(key, "expected an object keyed by gate kind")
    out = {}
    for name, value in doc.items():
        try:
            kind = GateKind(name)
        except ValueError:
            raise InvalidValue(f"{key}.{name}", "unknown gate kind") from None
        out[kind] = value
    return out


def load_json(source: str | os.PathLike | Mapping) -> Mapping:
    """Accept a mapping, a path, or a JSON string."""
    if isinstance(source, Mapping):
        return source
    text = str(source)
    if text.lstrip().startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON: {exc}") from None
    path = Path(source)
    try:
        with path.open() as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: malformed JSON: {exc}") from None
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None


def load_technology(doc: str | os.PathLike | Mapping) -> TechnologySpec:
    doc = load_json(doc)
    _check_keys(doc, {"name", "gate_times_ns", "worst_gate_error", "memory_error_per_ns"},
                {"name", "gate_times_ns", "worst_gate_error"}, "technology spec")
    times = _gate_map(doc["gate_times_ns"], "gate_times_ns")
    for kind in GateKind:
        if kind not in times:
            raise MissingGate(kind)
    return TechnologySpec(
        name=str(doc["name"]),
        gate_time_ns=times,
        worst_gate_error=doc["worst_gate_error"],
        memory_error_per_ns=doc.get("memory_error_per_ns"),
    )


def load_algorithm(doc: str | os.PathLike | Mapping) -> AlgorithmSpec:
    doc = load_json(doc)
    _check_keys(doc, {"name", "logical_qubits", "gate_counts", "parallelism"},
                {"name", "logical_qubits", "gate_counts"}, "algorithm spec")
    counts = {k: _as_count(f"gate_counts.{k}", v)
              for k, v in _gate_map(doc["gate_counts"], "gate_counts").items()}
    parallelism = _gate_map(doc.get("parallelism", {}), "parallelism")
    return AlgorithmSpec(
        name=str(doc["name"]),
        logical_qubits=_as_count("logical_qubits", doc["logical_qubits"]),
        gate_counts=counts,
        parallelism=parallelism,
    )


def total_logical_gates(alg: AlgorithmSpec) -> int:
    return sum(alg.gate_counts.values())


def decompose_toffoli(count: int) -> dict[GateKind, int]:
    """Elementary CNOT/H/T counts for ``count`` Toffoli gates.

    The T entry lumps T and T-dagger together.
    """
    if count < 0:
        raise InvalidValue("count", "Toffoli count must be nonnegative")
    return {kind: n * count for kind, n in TOFFOLI_DECOMPOSITION.items()}


def effective_error(tech: TechnologySpec, include_memory_error: bool = False) -> float:
    """Physical error rate fed to the code solvers.

    Memory error is opt-in: it adds the idle error accrued over one average
    gate duration.
    """
    p = tech.worst_gate_error
    if include_memory_error and tech.memory_error_per_ns:
        p += tech.memory_error_per_ns * tech.average_gate_time_ns
    return p


def specs_dir() -> Path:
    env = os.environ.get("QEC_SPECS_DIR")
    if env:
        return Path(env)
    return Path(__file__).parent / "specs"


def resolve_spec_path(name: str | os.PathLike) -> Path:
    """Find a spec file as given, or by bare/``specs/``-prefixed name in :func:`specs_dir`."""
    path = Path(name)
    if path.exists():
        return path
    base = specs_dir()
    parts = path.parts[1:] if path.parts and path.parts[0] == "specs" else path.parts
    for candidate in (base.joinpath(*parts), base / path.name, base / f"{path.name}.json"):
        if candidate.exists():
            return candidate
    return path
