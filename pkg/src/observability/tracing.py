"""
Run tracing for macroforge.

Spans record what each stage did and how long it took. When a trace
directory is bound, the tracer also writes the per-iteration debug artifacts
(ABPlace objective trace, relocating log, packing trees, contours).
"""

import csv
import json
import time
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional, Iterable


@dataclass
class TraceSpan:
    """Represents a single span in a trace."""
    name: str
    trace_id: str
    span_id: str
    parent_span_id: Optional[str] = None
    start_time: float = field(default_factory=time.perf_counter)
    end_time: Optional[float] = None
    metadata: dict = field(default_factory=dict)
    status: str = "running"

    def end(self, status: str = "success") -> None:
        self.end_time = time.perf_counter()
        self.status = status

    @property
    def duration_ms(self) -> float:
        end = self.end_time or time.perf_counter()
        return (end - self.start_time) * 1000


class RunTracer:
    """
    Tracer for a placement run.

    Without an output directory only spans are kept in memory; with one, the
    write_* helpers append to files under it.

    Usage:
        tracer = RunTracer(out_dir=Path("out/trace"))

        with tracer.span("abplace", iteration=2) as span:
            ...
            span.metadata["objective"] = 12.5
    """

    def __init__(self, out_dir: Optional[Path] = None):
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.trace_id = str(uuid.uuid4())
        self._current_span: Optional[TraceSpan] = None
        self._spans: list[TraceSpan] = []
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.out_dir is not None

    @property
    def spans(self) -> list[TraceSpan]:
        return list(self._spans)

    @contextmanager
    def span(self, name: str, **metadata):
        """Create a trace span."""
        span = TraceSpan(
            name=name,
            trace_id=self.trace_id,
            span_id=str(uuid.uuid4())[:8],
            parent_span_id=self._current_span.span_id if self._current_span else None,
            metadata=metadata,
        )

        previous_span = self._current_span
        self._current_span = span
        self._spans.append(span)

        try:
            yield span
            span.end("success")
        except Exception as e:
            span.end("error")
            span.metadata["error"] = str(e)
            raise
        finally:
            self._current_span = previous_span

    def end_trace(self) -> dict:
        """Summarize the trace and flush spans when a directory is bound."""
        summary = {
            "trace_id": self.trace_id,
            "spans": len(self._spans),
            "status": "success" if all(s.status == "success" for s in self._spans) else "error",
        }
        if self.enabled:
            with open(self.out_dir / "spans.jsonl", "w") as f:
                for span in self._spans:
                    row = asdict(span)
                    row["duration_ms"] = span.duration_ms
                    f.write(json.dumps(row, default=str) + "\n")
        return summary

    # -------------------------------------------------------------------------
    # Artifact writers (no-ops when tracing is disabled)
    # -------------------------------------------------------------------------

    def append_jsonl(self, filename: str, record: dict) -> None:
        if not self.enabled:
            return
        with open(self.out_dir / filename, "a") as f:
            f.write(json.dumps(record, sort_keys=True, default=float) + "\n")

    def append_csv(self, filename: str, header: list[str], rows: Iterable[Iterable]) -> None:
        if not self.enabled:
            return
        path = self.out_dir / filename
        new_file = not path.exists()
        with open(path, "a", newline="") as f:
            writer = csv.writer(f)
            if new_file:
                writer.writerow(header)
            writer.writerows(rows)

    def append_text(self, filename: str, text: str) -> None:
        if not self.enabled:
            return
        with open(self.out_dir / filename, "a") as f:
            f.write(text)

    def write_json(self, filename: str, payload: dict) -> None:
        if not self.enabled:
            return
        with open(self.out_dir / filename, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
