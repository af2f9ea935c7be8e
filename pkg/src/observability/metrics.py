"""
Metrics collection for macroforge runs.

Tracks stage latencies and counters for the runtime breakdown.
"""

import time
import threading
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class StageClock:
    """Running aggregate of the latencies recorded under one name."""
    count: int = 0
    total_ms: float = 0.0
    min_ms: float = float("inf")
    max_ms: float = 0.0

    def add(self, latency_ms: float) -> None:
        self.count += 1
        self.total_ms += latency_ms
        self.min_ms = min(self.min_ms, latency_ms)
        self.max_ms = max(self.max_ms, latency_ms)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean_ms": self.total_ms / self.count,
            "min_ms": self.min_ms,
            "max_ms": self.max_ms,
            "total_ms": self.total_ms,
        }


class MetricsCollector:
    """
    Collects and aggregates metrics for one placement run.

    Tracks:
    - Stage latencies (clustering, io, prototype, abplace, relocating)
    - Counters (prototype rounds, candidate evaluations, masked assignments)

    Usage:
        metrics = MetricsCollector()

        with metrics.timer("prototype"):
            ...

        metrics.increment("candidate_evaluations", 20)
        metrics.summary()
    """

    def __init__(self):
        self._counters: dict[str, float] = defaultdict(float)
        self._clocks: dict[str, StageClock] = defaultdict(StageClock)
        self._lock = threading.Lock()
        self._created = time.perf_counter()

    def increment(self, name: str, value: float = 1.0) -> None:
        with self._lock:
            self._counters[name] += value

    def counter(self, name: str) -> float:
        with self._lock:
            return self._counters.get(name, 0.0)

    @contextmanager
    def timer(self, name: str):
        """Add the wall-clock time of the block to ``name``."""
        started = time.perf_counter()
        try:
            yield
        finally:
            self.record_latency(name, (time.perf_counter() - started) * 1000)

    def record_latency(self, name: str, latency_ms: float) -> None:
        with self._lock:
            self._clocks[name].add(latency_ms)

    def total_ms(self, name: str) -> float:
        with self._lock:
            clock = self._clocks.get(name)
            return clock.total_ms if clock else 0.0

    def elapsed_ms(self) -> float:
        """Wall-clock time since the collector was created or reset."""
        return (time.perf_counter() - self._created) * 1000

    def summary(self) -> dict:
        with self._lock:
            return {
                "counters": dict(self._counters),
                "timers": {name: clock.to_dict() for name, clock in self._clocks.items() if clock.count},
            }

    def reset(self) -> None:
        with self._lock:
            self._counters.clear()
            self._clocks.clear()
            self._created = time.perf_counter()

