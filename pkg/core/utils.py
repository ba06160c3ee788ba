import functools
import logging
from typing import List, Optional

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_PARSE_ERROR = 3
EXIT_PRECONDITION = 4
EXIT_NOT_REALIZATION = 5


class PathographError(Exception):
    """Base class for all errors raised by the pathograph library."""

    pass


class ValidationError(PathographError):
    """Raised when a pathograph violates its structural invariants."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid pathograph")


class UnknownElementError(PathographError):
    """Raised when an operation names a vertex, urpath or rung that does not exist."""

    pass


class FormatParseError(PathographError):
    """Raised for malformed PGF/PGR/tile/DFA text."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class RegexParseError(PathographError):
    """Raised for malformed regular expressions over determination-string tokens."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"at position {position}: {message}")


class AlphabetMismatchError(PathographError):
    """Raised when automata over different alphabets are combined."""

    pass


class IllFormedStringError(PathographError):
    """Raised when a string is not the determination string of any realization."""

    def __init__(self, reasons: List[str]):
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons) or "ill-formed string")


class NotARealizationError(PathographError):
    """Raised when a graph with internal paths fails to realize a pathograph."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "not a realization")


class LimitExceededError(PathographError):
    """Raised when an enumeration trips one of the configured guard limits."""

    pass


class PreconditionError(PathographError):
    """Raised when an operation's precondition (mode, closedness, rungless) is unmet."""

    def __init__(self, message: str, counterexample: Optional[object] = None):
        self.counterexample = counterexample
        super().__init__(message)


class TilingError(PathographError):
    """Raised for tilings that do not match colors or periods."""

    pass


class VerificationError(PathographError):
    """Raised when a constructed witness fails its own verification."""

    pass


class InternalError(PathographError):
    """Raised for states that valid input can never reach."""

    pass


def handle_command_errors(command_name: str):
    """
    A decorator mapping library errors raised by a CLI command to exit codes.

    It wraps a command function returning an exit code, logs library errors
    with the command name and converts them to the documented exit codes.
    Unexpected exceptions are logged with a traceback and re-raised.

    Args:
        command_name (str): The name of the command being decorated (e.g., 'decide').
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> int:
            try:
                return func(*args, **kwargs)
            except (FormatParseError, RegexParseError) as e:
                logger.error(f"Parse error in {command_name}: {e}")
                return EXIT_PARSE_ERROR
            except PreconditionError as e:
                message = f"Precondition unmet in {command_name}: {e}"
                if e.counterexample is not None:
                    message += f" (counterexample: {e.counterexample})"
                logger.error(message)
                return EXIT_PRECONDITION
            except LimitExceededError as e:
                logger.error(f"Limit exceeded in {command_name}: {e}")
                return EXIT_PRECONDITION
            except NotARealizationError as e:
                logger.error(f"Input of {command_name} is not a realization: {e}")
                return EXIT_NOT_REALIZATION
            except ValidationError as e:
                logger.error(f"Invalid pathograph in {command_name}: {e}")
                return EXIT_PARSE_ERROR
            except TilingError as e:
                logger.error(f"Invalid tiles in {command_name}: {e}")
                return EXIT_PARSE_ERROR
            except OSError as e:
                logger.error(f"File error in {command_name}: {e}")
                return EXIT_PARSE_ERROR
            except PathographError as e:
                logger.error(f"Error in {command_name}: {e}", exc_info=True)
                raise

        return wrapper

    return decorator
