"""
Shared configuration for the pathograph toolkit.
This module holds configuration values read from the environment (optionally
seeded from a .env file by the CLI) so that library modules and the CLI agree
on defaults without importing each other.
"""

import os

# Oracle bound used when --max-internal is not given
PATHOGRAPH_MAX_INTERNAL = int(os.getenv("PATHOGRAPH_MAX_INTERNAL", 4))

PATHOGRAPH_LOG_LEVEL = os.getenv("PATHOGRAPH_LOG_LEVEL", "INFO").upper()

# Disables the detailed debug log file
PATHOGRAPH_NO_FILE_LOG = os.getenv("PATHOGRAPH_NO_FILE_LOG", "false").lower() == "true"

# Optional override for core/limits.yaml
PATHOGRAPH_LIMITS_PATH = os.getenv("PATHOGRAPH_LIMITS_PATH") or None


def is_file_logging_disabled() -> bool:
    """Re-read the file logging switch so tests can toggle it via the environment."""
    return os.getenv("PATHOGRAPH_NO_FILE_LOG", "false").lower() == "true"


__all__ = [
    "PATHOGRAPH_MAX_INTERNAL",
    "PATHOGRAPH_LOG_LEVEL",
    "PATHOGRAPH_NO_FILE_LOG",
    "PATHOGRAPH_LIMITS_PATH",
    "is_file_logging_disabled",
]
