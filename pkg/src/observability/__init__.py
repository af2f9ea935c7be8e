"""
Observability module for macroforge.

Provides logging, tracing, and stage timing for the placement pipeline.
"""

from .logger import (
    get_logger,
    setup_logging,
    RunLogger,
)
from .tracing import (
    RunTracer,
    TraceSpan,
)
from .metrics import (
    MetricsCollector,
)

__all__ = [
    # Logging
    "get_logger",
    "setup_logging",
    "RunLogger",
    # Tracing
    "RunTracer",
    "TraceSpan",
    # Metrics
    "MetricsCollector",
]
