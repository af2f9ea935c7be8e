"""Runtime breakdown per pipeline stage."""

from typing import Optional

from src.observability import MetricsCollector

STAGES = ("clustering", "io", "prototype", "abplace", "relocating")


def stage_timings(
    metrics: MetricsCollector,
    enabled: bool = True,
    total_ms: Optional[float] = None,
) -> dict:
    """
    Wall-clock milliseconds per stage plus "others", summing to the total.

    With tracing disabled the breakdown is empty and only the total is kept.
    """
    total = metrics.elapsed_ms() if total_ms is None else float(total_ms)
    if not enabled:
        return {"total_ms": total, "stages": {}}
    stages = {name: metrics.total_ms(name) for name in STAGES}
    stages["others"] = total - sum(stages.values())
    return {"total_ms": total, "stages": stages}
