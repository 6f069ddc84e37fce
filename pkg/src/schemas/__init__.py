from src.schemas.loader import apply_overrides, dump_config, load_config, parse_config, validate_config
from src.schemas.sim_config import (
    ControllerConfig,
    EkfConfig,
    GeometryConfig,
    MassConfig,
    NoiseConfig,
    RunConfig,
    SimConfig,
)

__all__ = [
    "apply_overrides",
    "dump_config",
    "load_config",
    "parse_config",
    "validate_config",
    "ControllerConfig",
    "EkfConfig",
    "GeometryConfig",
    "MassConfig",
    "NoiseConfig",
    "RunConfig",
    "SimConfig",
]
