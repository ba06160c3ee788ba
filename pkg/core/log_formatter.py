"""
Enhanced Log Formatter for the pathograph toolkit

Provides compact, colored console log formatting with per-package prefixes
and a detailed optional debug log file.
"""

import logging
import os
import re
import sys
from typing import Optional

from core.config import is_file_logging_disabled


class EnhancedLogFormatter(logging.Formatter):
    """Custom log formatter that adds ASCII prefixes and visual enhancements to log messages."""

    # Color codes for terminals that support ANSI colors
    COLORS = {
        "DEBUG": "\033[36m",  # Cyan
        "INFO": "\033[32m",  # Green
        "WARNING": "\033[33m",  # Yellow
        "ERROR": "\033[31m",  # Red
        "CRITICAL": "\033[35m",  # Magenta
        "RESET": "\033[0m",  # Reset
    }

    def __init__(self, use_colors: bool = True, *args, **kwargs):
        """
        Initialize the log formatter.

        Args:
            use_colors: Whether to use ANSI color codes (default: True)
        """
        super().__init__(*args, **kwargs)
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record with ASCII prefixes and enhanced styling."""
        prefix = self._get_ascii_prefix(record.name, record.levelname)
        formatted_msg = self._enhance_message(record.getMessage())

        if self.use_colors:
            color = self.COLORS.get(record.levelname, "")
            reset = self.COLORS["RESET"]
            return f"{prefix} {color}{formatted_msg}{reset}"
        return f"{prefix} {formatted_msg}"

    def _get_ascii_prefix(self, logger_name: str, level_name: str) -> str:
        """Get ASCII-safe prefix for Windows compatibility."""
        ascii_prefixes = {
            "core.limits_loader": "[LIMITS]",
            "core.utils": "[UTILS]",
            "pathograph.model": "[MODEL]",
            "pathograph.formats": "[FORMAT]",
            "pathograph.paths": "[PATHS]",
            "pathograph.inclusion": "[INCLUSION]",
            "pathograph.isomorphism": "[ISO]",
            "realization.realization": "[REALIZE]",
            "realization.strings": "[STRINGS]",
            "containment.closures": "[ENCODE]",
            "containment.truemper": "[TRUEMPER]",
            "automaton.machines": "[AUTOMATON]",
            "automaton.regex": "[REGEX]",
            "automaton.partial": "[PARTIAL]",
            "automaton.search_data": "[SEARCH]",
            "automaton.builder": "[BUILDER]",
            "closedcase.closed": "[CLOSED]",
            "reductions.tiles": "[TILES]",
            "reductions.stages": "[REDUCE]",
            "reductions.witness": "[WITNESS]",
        }

        return ascii_prefixes.get(logger_name, f"[{level_name}]")

    def _enhance_message(self, message: str) -> str:
        """Enhance the log message with better formatting."""
        # Machine size reports
        if "states" in message and "transitions" in message:
            pattern = r"(\w+) built with (\d+) states and (\d+) transitions"
            match = re.search(pattern, message)
            if match:
                kind, states, transitions = match.groups()
                return f"{kind}: {states} states / {transitions} transitions"

        # Configuration loading messages
        if "Loaded limits configuration from" in message:
            path = message.split("from ")[-1]
            return f"Limits loaded from {path}"

        # Decision verdicts
        if "Decision for" in message:
            pattern = r"Decision for (.+?) via (\w+): (\w+)"
            match = re.search(pattern, message)
            if match:
                subject, mode, verdict = match.groups()
                return f"{verdict.upper()} ({mode}) for {subject}"

        return message


def setup_enhanced_logging(log_level: int = logging.INFO, use_colors: bool = True) -> None:
    """
    Set up enhanced logging with ASCII prefix formatter for the entire application.

    Args:
        log_level: The logging level to use (default: INFO)
        use_colors: Whether to use ANSI colors (default: True)
    """
    formatter = EnhancedLogFormatter(use_colors=use_colors)
    root_logger = logging.getLogger()

    console_handlers = [
        h
        for h in root_logger.handlers
        if isinstance(h, logging.StreamHandler)
        and getattr(h.stream, "name", None) in ["<stderr>", "<stdout>"]
    ]
    for handler in console_handlers:
        handler.setFormatter(formatter)

    if not console_handlers:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        console_handler.setLevel(log_level)
        root_logger.addHandler(console_handler)


def configure_file_logging(logger_name: Optional[str] = None) -> bool:
    """
    Configure detailed file logging unless PATHOGRAPH_NO_FILE_LOG is set.

    Sets up DEBUG-level logging to 'pathograph_debug.log' at the repository root.

    Args:
        logger_name: Optional name for the logger (defaults to root logger)

    Returns:
        bool: True if file logging was configured, False if skipped
    """
    if is_file_logging_disabled():
        logging.getLogger(logger_name).debug("File logging disabled by PATHOGRAPH_NO_FILE_LOG")
        return False

    log_file_path = None
    try:
        target_logger = logging.getLogger(logger_name)
        # Go up one level since we're in core/ subdirectory
        log_file_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        log_file_path = os.path.join(log_file_dir, "pathograph_debug.log")

        file_handler = logging.FileHandler(log_file_path, mode="a")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(
            logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(process)d - %(threadName)s "
                "[%(module)s.%(funcName)s:%(lineno)d] - %(message)s"
            )
        )
        target_logger.addHandler(file_handler)

        target_logger.debug(f"Detailed file logging configured to: {log_file_path}")
        return True

    except Exception as e:
        sys.stderr.write(f"CRITICAL: Failed to set up file logging to '{log_file_path}': {e}\n")
        return False
