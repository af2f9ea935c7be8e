"""Piecewise-constant packed-height profile along a corner's local x-axis."""

import bisect
import math


class Contour:
    """
    Half-open segments [x_start, x_end) with a height each, covering [0, inf).

    Usage:
        contour = Contour()
        y = contour.max_height(0.0, 10.0)
        contour.raise_to(0.0, 10.0, y + 5.0)
    """

    def __init__(self):
        self._starts: list[float] = [0.0]
        self._heights: list[float] = [0.0]

    def _end(self, i: int) -> float:
        return self._starts[i + 1] if i + 1 < len(self._starts) else math.inf

    def _split_at(self, x: float) -> int:
        """Ensure a breakpoint at x; return the index of the segment starting there."""
        i = bisect.bisect_right(self._starts, x) - 1
        if self._starts[i] == x:
            return i
        self._starts.insert(i + 1, x)
        self._heights.insert(i + 1, self._heights[i])
        return i + 1

    def max_height(self, x0: float, x1: float) -> float:
        if x1 <= x0:
            return 0.0
        i = max(bisect.bisect_right(self._starts, x0) - 1, 0)
        top = 0.0
        while i < len(self._starts) and self._starts[i] < x1:
            if self._end(i) > x0:
                top = max(top, self._heights[i])
            i += 1
        return top

    def raise_to(self, x0: float, x1: float, height: float) -> None:
        """Set the profile over [x0, x1) to height."""
        if x1 <= x0:
            return
        lo = self._split_at(x0)
        hi = self._split_at(x1)
        del self._starts[lo + 1:hi]
        del self._heights[lo + 1:hi]
        self._heights[lo] = height
        self._merge()

    def _merge(self) -> None:
        starts, heights = [self._starts[0]], [self._heights[0]]
        for x, h in zip(self._starts[1:], self._heights[1:]):
            if h == heights[-1]:
                continue
            starts.append(x)
            heights.append(h)
        self._starts, self._heights = starts, heights

    def segments(self) -> list[tuple[float, float, float]]:
        """(x_start, x_end, height) for every segment; the last one ends at inf."""
        return [(self._starts[i], self._end(i), self._heights[i]) for i in range(len(self._starts))]

    def height_at(self, x: float) -> float:
        i = max(bisect.bisect_right(self._starts, x) - 1, 0)
        return self._heights[i]
