"""Per-code override files (``bacon_shor.json``, ``surface.json``, ``magic_state.json``)."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .bacon_shor import BaconShorConfig
from .magic_state import DistillationModel
from .model import load_json
from .surface import SurfaceConfig


def bundled_codes_dir() -> Path:
    return Path(__file__).parent / "codes"


@dataclass(frozen=True)
class CodeConfigs:
    bacon_shor: BaconShorConfig = field(default_factory=BaconShorConfig)
    surface: SurfaceConfig = field(default_factory=SurfaceConfig)
    distillation: DistillationModel = field(default_factory=DistillationModel)


def load_code_configs(directory: str | os.PathLike | None = None) -> CodeConfigs:
    """Read whichever override files exist in ``directory``; missing files keep defaults."""
    base = Path(directory) if directory is not None else bundled_codes_dir()
    kwargs = {}
    for attr, fname, cls in (("bacon_shor", "bacon_shor.json", BaconShorConfig),
                             ("surface", "surface.json", SurfaceConfig),
                             ("distillation", "magic_state.json", DistillationModel)):
        path = base / fname
        if path.exists():
            kwargs[attr] = cls.from_dict(load_json(path))
    return CodeConfigs(**kwargs)
