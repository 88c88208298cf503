"""
Settings for AMIN reliability runs.

Each field is resolved independently (first found wins):
1. Explicit override (CLI flag)
2. Environment variable: AMIN_REL_THREADS, AMIN_REL_CAP, AMIN_REL_BUDGET,
   AMIN_REL_BLOCK, AMIN_REL_LOG_LEVEL
3. Project root: amin-rel.yaml or .amin-rel.yaml
4. Home directory: ~/amin-rel.yaml or ~/.amin-rel.yaml
5. Defaults below
"""

import os
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError

logger = logging.getLogger(__name__)

# Settings file names (searched in order)
CONFIG_FILENAMES = ["amin-rel.yaml", ".amin-rel.yaml"]

# Field name -> environment variable
ENV_VARS = {
    "threads": "AMIN_REL_THREADS",
    "ugfm_cap": "AMIN_REL_CAP",
    "oracle_budget": "AMIN_REL_BUDGET",
    "block_size": "AMIN_REL_BLOCK",
    "log_level": "AMIN_REL_LOG_LEVEL",
}

DEFAULT_UGFM_CAP = 1_900_000
DEFAULT_ORACLE_BUDGET = 2**26
DEFAULT_BLOCK_SIZE = 2**20


class Settings(BaseModel):
    """Resolved run settings."""

    threads: int = Field(default=1, ge=1, description="Odometer partitions")
    ugfm_cap: int = Field(
        default=DEFAULT_UGFM_CAP, ge=1, description="Live UGF monomial cap"
    )
    oracle_budget: int = Field(
        default=DEFAULT_ORACLE_BUDGET, ge=1, description="Oracle enumeration cap"
    )
    block_size: int = Field(
        default=DEFAULT_BLOCK_SIZE, ge=1, description="Vectorized sweep buffer"
    )
    log_level: str = "WARNING"


def _find_project_root() -> Optional[Path]:
    """
    Find the project root by looking for common markers.

    Walks up from cwd looking for .git or pyproject.toml.
    Returns None if no project root is found.
    """
    markers = [".git", "pyproject.toml"]

    try:
        current = Path.cwd().resolve()
    except Exception:
        return None

    while current != current.parent:
        for marker in markers:
            if (current / marker).exists():
                return current
        current = current.parent

    return None


def _load_yaml(path: Path) -> Dict[str, Any]:
    """Read one settings file; malformed files are skipped."""
    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except Exception as e:
        logger.warning(f"Failed to load settings from {path}: {e}")
        return {}

    if not isinstance(data, dict):
        logger.warning(f"Ignoring {path}: expected a mapping, got {type(data).__name__}")
        return {}

    logger.debug(f"Loaded settings file {path}")
    return {k: v for k, v in data.items() if k in ENV_VARS}


def _file_layers() -> list:
    """Settings files in priority order (project root before home)."""
    layers = []
    project_root = _find_project_root()
    if project_root:
        for filename in CONFIG_FILENAMES:
            config_path = project_root / filename
            if config_path.exists():
                layers.append(_load_yaml(config_path))

    home = Path.home()
    for filename in CONFIG_FILENAMES:
        config_path = home / filename
        if config_path.exists():
            layers.append(_load_yaml(config_path))
    return layers


def load_settings(**overrides: Any) -> Settings:
    """
    Resolve settings from overrides, environment and YAML files.

    Args:
        **overrides: Field values that win over every other source
            (None values are ignored)

    Returns:
        Settings with every field resolved
    """
    values: Dict[str, Any] = {}
    layers = _file_layers()

    for field, env_var in ENV_VARS.items():
        candidates = []
        if overrides.get(field) is not None:
            candidates.append(("override", overrides[field]))
        env_value = os.environ.get(env_var)
        if env_value:
            candidates.append((env_var, env_value))
        for layer in layers:
            if field in layer:
                candidates.append(("settings file", layer[field]))

        # An invalid value only loses its own field; the next source is tried.
        for origin, value in candidates:
            try:
                Settings(**{field: value})
            except ValidationError:
                logger.warning(f"Ignoring invalid {field}={value!r} from {origin}")
                continue
            values[field] = value
            break

    return Settings(**values)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the process-wide settings instance."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings (next get_settings() reloads)."""
    global _settings
    _settings = None
