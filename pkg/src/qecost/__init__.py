"""Fault-tolerant overhead estimates for Bacon-Shor and surface codes."""
from .analysis import (CodeMetrics, GateMix, SweepRow, crossovers, default_grid, find_crossover,
                       gate_composition, logical_composition, parameter_map, report_fractions, sweep)
from .config import CodeConfigs, load_code_configs
from .errors import (AboveThreshold, DistanceCapExceeded, Infeasible, InsufficientData,
                     InvalidValue, LevelCapExceeded, MissingGate, NonTransversal, QECostError,
                     SpecError)
from .estimator import CODES, estimate
from .model import (AlgorithmSpec, CostVector, EstimatorOptions, GateKind, ResourceEstimate,
                    TechnologySpec, decompose_toffoli, effective_error, load_algorithm,
                    load_technology, resolve_spec_path, specs_dir, total_logical_gates)

__version__ = "0.1.0"

__all__ = [
    "AboveThreshold", "AlgorithmSpec", "CODES", "CodeConfigs", "CodeMetrics", "CostVector",
    "DistanceCapExceeded", "EstimatorOptions", "GateKind", "GateMix", "Infeasible",
    "InsufficientData", "InvalidValue", "LevelCapExceeded", "MissingGate", "NonTransversal",
    "QECostError", "ResourceEstimate", "SpecError", "SweepRow", "TechnologySpec", "crossovers",
    "decompose_toffoli", "default_grid", "effective_error", "estimate", "find_crossover",
    "gate_composition", "load_algorithm", "load_code_configs", "load_technology",
    "logical_composition", "parameter_map", "report_fractions", "resolve_spec_path", "specs_dir",
    "sweep", "total_logical_gates",
]
