"""
Limits Loader Module

This module loads guard limits and CLI defaults from the packaged YAML
configuration. Exhaustive enumerations consult these limits so that a run
which would blow up raises LimitExceededError instead of hanging.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml

from core.config import PATHOGRAPH_LIMITS_PATH

logger = logging.getLogger(__name__)

GuardName = Literal[
    "cl_m.max_members",
    "conn.max_vertices",
    "conn.max_candidates",
    "realizations.max_count",
    "determinize.max_states",
    "tiling.max_period",
]


class LimitsLoader:
    """Loads and serves guard limits and defaults from configuration."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the limits loader.

        Args:
            config_path: Path to a limits YAML file. If None, uses PATHOGRAPH_LIMITS_PATH
                or the packaged core/limits.yaml.
        """
        if config_path is None:
            config_path = PATHOGRAPH_LIMITS_PATH or Path(__file__).parent / "limits.yaml"

        self.config_path = Path(config_path)
        self._config: Optional[Dict] = None

    def _load_config(self) -> Dict:
        """Load the limits configuration from YAML file."""
        if self._config is not None:
            return self._config

        if not self.config_path.exists():
            raise FileNotFoundError(f"Limits configuration not found: {self.config_path}")

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in limits configuration: {e}")
        except Exception as e:
            raise RuntimeError(f"Failed to load limits configuration: {e}")

        if not isinstance(loaded, dict):
            raise ValueError(f"Limits configuration must be a mapping: {self.config_path}")
        self._config = loaded
        logger.info(f"Loaded limits configuration from {self.config_path}")
        return self._config

    def get_limit(self, name: GuardName) -> int:
        """
        Get a guard limit by name.

        Args:
            name: Dotted guard name such as 'cl_m.max_members'

        Returns:
            The configured integer limit
        """
        guards = self._load_config().get("guards", {})
        if name not in guards:
            raise KeyError(f"Guard '{name}' not defined in {self.config_path}")
        return int(guards[name])

    def get_default(self, name: str) -> Any:
        """Get a CLI default (max_internal, bounds, ...) by name."""
        defaults = self._load_config().get("defaults", {})
        if name not in defaults:
            raise KeyError(f"Default '{name}' not defined in {self.config_path}")
        return defaults[name]


_shared_loader: Optional[LimitsLoader] = None


def _loader() -> LimitsLoader:
    global _shared_loader
    if _shared_loader is None:
        _shared_loader = LimitsLoader()
    return _shared_loader


def get_limit(name: GuardName) -> int:
    """
    Convenience function to read a guard limit from the shared loader.

    Args:
        name: Dotted guard name

    Returns:
        The configured integer limit
    """
    return _loader().get_limit(name)


def get_default(name: str) -> Any:
    """Convenience function to read a CLI default from the shared loader."""
    return _loader().get_default(name)
