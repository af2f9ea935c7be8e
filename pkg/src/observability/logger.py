"""
Structured logging for macroforge.

Provides contextual logging with support for:
- Structured JSON output
- Per-run identifiers
- Stage / outer-iteration context
- Stage latency
"""

import logging
import sys
import json
import os
import time
import uuid
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Optional
from dataclasses import dataclass, field


ROOT_LOGGER = "macroforge"

# Extra record attributes copied into JSON output when present
_CONTEXT_FIELDS = (
    "run_id",
    "stage",
    "iteration",
    "latency_ms",
    "group",
    "corner",
    "slots",
    "cost",
    "placed",
)


# =============================================================================
# Log Formatters
# =============================================================================

class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        for name in _CONTEXT_FIELDS:
            if hasattr(record, name):
                log_data[name] = getattr(record, name)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


class ColoredFormatter(logging.Formatter):
    """Colored console formatter for development."""

    COLORS = {
        "DEBUG": "\033[36m",     # Cyan
        "INFO": "\033[32m",      # Green
        "WARNING": "\033[33m",   # Yellow
        "ERROR": "\033[31m",     # Red
        "CRITICAL": "\033[35m",  # Magenta
    }
    RESET = "\033[0m"
    BOLD = "\033[1m"

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelname, self.RESET)
        timestamp = datetime.now().strftime("%H:%M:%S")
        prefix = f"{color}{self.BOLD}[{record.levelname:>7}]{self.RESET}"

        stage_ctx = ""
        if hasattr(record, "stage"):
            k = getattr(record, "iteration", None)
            label = record.stage if k is None else f"{record.stage}#{k}"
            stage_ctx = f" \033[90m[{label}]\033[0m"

        latency_ctx = ""
        if hasattr(record, "latency_ms"):
            latency_ctx = f" \033[90m({record.latency_ms:.0f}ms)\033[0m"

        return f"{prefix} {timestamp}{stage_ctx} {record.getMessage()}{latency_ctx}"


# =============================================================================
# Logger Setup
# =============================================================================

def setup_logging(
    level: str = "INFO",
    json_output: bool = False,
    log_file: Optional[str] = None,
) -> None:
    """
    Configure logging for macroforge.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        json_output: Use JSON format (for batch runs)
        log_file: Optional file path for log output
    """
    root_logger = logging.getLogger(ROOT_LOGGER)
    root_logger.setLevel(getattr(logging, level.upper()))
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    if json_output:
        console_handler.setFormatter(JSONFormatter())
    else:
        console_handler.setFormatter(ColoredFormatter())
    root_logger.addHandler(console_handler)

    # File handler (always JSON)
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(JSONFormatter())
        root_logger.addHandler(file_handler)

    root_logger.propagate = False


def get_logger(name: str = "core") -> logging.Logger:
    """Get a logger instance under the macroforge root."""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


# =============================================================================
# Run Logger
# =============================================================================

@dataclass
class StageContext:
    """Context for one pipeline stage execution."""
    stage: str
    run_id: str
    iteration: Optional[int] = None
    started: float = field(default_factory=time.perf_counter)

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.started) * 1000


class RunLogger:
    """
    Structured logger for one placement run with stage tracking.

    Usage:
        logger = RunLogger(run_id="seed1")

        with logger.stage_context("prototype", iteration=3):
            logger.info("Prototype done", placed=12)
    """

    def __init__(self, run_id: Optional[str] = None, name: str = "run"):
        self.run_id = run_id or str(uuid.uuid4())[:8]
        self._logger = get_logger(name)
        self._current: Optional[StageContext] = None

    def _log(self, level: int, message: str, **extra) -> None:
        if not self._logger.isEnabledFor(level):
            return
        extra["run_id"] = self.run_id
        if self._current:
            extra["stage"] = self._current.stage
            extra["latency_ms"] = self._current.elapsed_ms()
            if self._current.iteration is not None:
                extra.setdefault("iteration", self._current.iteration)

        record = self._logger.makeRecord(
            self._logger.name, level, "", 0, message, (), None,
        )
        for key, value in extra.items():
            setattr(record, key, value)
        self._logger.handle(record)

    def debug(self, message: str, **extra) -> None:
        self._log(logging.DEBUG, message, **extra)

    def info(self, message: str, **extra) -> None:
        self._log(logging.INFO, message, **extra)

    def warning(self, message: str, **extra) -> None:
        self._log(logging.WARNING, message, **extra)

    def error(self, message: str, **extra) -> None:
        self._log(logging.ERROR, message, **extra)

    @contextmanager
    def stage_context(self, stage: str, iteration: Optional[int] = None):
        """Tag every record logged inside the block with the stage."""
        outer = self._current
        self._current = StageContext(stage=stage, run_id=self.run_id, iteration=iteration)
        self.debug(f"Entering stage: {stage}")
        try:
            yield self._current
        except Exception as exc:
            self.error(f"Stage failed: {exc}")
            raise
        else:
            self.debug(f"Completed stage: {stage}")
        finally:
            self._current = outer

    def log_assignment(self, group: int, corner: str, slots: int, cost: float) -> None:
        """Log one accepted group-to-corner assignment."""
        self.info(
            f"Packed group {group} into {corner}",
            group=group,
            corner=corner,
            slots=slots,
            cost=cost,
        )


# =============================================================================
# Initialize default logging
# =============================================================================

_log_level = os.getenv("LOG_LEVEL", "INFO")
_json_output = os.getenv("LOG_FORMAT", "").lower() == "json"
setup_logging(level=_log_level, json_output=_json_output)
