import os
from pathlib import Path

_scenes = Path(__file__).with_name("scenes")
if _scenes.is_dir():
    os.environ.setdefault("SPONGE_SPECTRA_SCENES", str(_scenes))

from ._core import (  # noqa: E402
    BudgetExceeded,
    DomainError,
    Model,
    ParseError,
    Scene,
    SpongeError,
    ValidationError,
    builtin_scenes,
    carpet_spectrum,
    legendre_transform,
    load_scene,
    parse_scene,
)

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "Model",
    "ParseError",
    "Scene",
    "SpongeError",
    "ValidationError",
    "builtin_scenes",
    "carpet_spectrum",
    "legendre_transform",
    "load_scene",
    "parse_scene",
]
