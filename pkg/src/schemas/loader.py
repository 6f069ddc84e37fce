from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pydantic

from src.schemas.sim_config import SimConfig
from src.services.exceptions import ConfigError, ConfigParseError, ConfigValidationError


def validate_config(data: dict[str, Any]) -> SimConfig:
    try:
        return SimConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        key = ".".join(str(part) for part in first["loc"])
        raise ConfigValidationError(
            f"Invalid config value for '{key}': {first['msg']}", key=key
        ) from exc


def parse_config(text: str) -> SimConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(
            f"Config is not valid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})",
            line=exc.lineno,
            column=exc.colno,
        ) from exc

    if not isinstance(data, dict):
        raise ConfigParseError("Config root must be a JSON object.", line=1, column=1)
    return validate_config(data)


def load_config(path: str | Path) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc.strerror or exc}") from exc
    return parse_config(text)


def apply_overrides(config: SimConfig, **sections: dict[str, Any]) -> SimConfig:
    """Revalidate ``config`` with per-block overrides, e.g. ``run={"dt": 0.02}``."""
    data = config.model_dump(mode="json")
    for block, values in sections.items():
        data.setdefault(block, {}).update(values)
    return validate_config(data)


def dump_config(config: SimConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
