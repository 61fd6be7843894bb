"""Code-agnostic entry point: pick the estimator by code name."""
from __future__ import annotations

from . import bacon_shor, surface
from .config import CodeConfigs
from .errors import InvalidValue
from .model import AlgorithmSpec, EstimatorOptions, ResourceEstimate, TechnologySpec

CODES = (bacon_shor.CODE_NAME, surface.CODE_NAME)


def estimate(alg: AlgorithmSpec, tech: TechnologySpec, code: str,
             opts: EstimatorOptions | None = None,
             configs: CodeConfigs | None = None) -> ResourceEstimate:
    configs = configs or CodeConfigs()
    if code == bacon_shor.CODE_NAME:
        return bacon_shor.estimate(alg, tech, opts, configs.bacon_shor, configs.distillation)
    if code == surface.CODE_NAME:
        return surface.estimate(alg, tech, opts, configs.surface, configs.distillation)
    raise InvalidValue("code", f"unknown code {code!r}; expected one of {', '.join(CODES)}")
