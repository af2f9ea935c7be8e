"""
I/O keepout regions and corner territories.

Each port reserves a rectangle reaching inward from its edge; the regions
are unioned with shapely so overlapping keepouts are not double counted.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

from shapely import unary_union
from shapely.geometry import box
from shapely.geometry.base import BaseGeometry

from src.netlist import ChipOutline, Design
from src.packing import Corner, Rect

DEFAULT_IO_DEPTH_FRACTION = 0.05
DEFAULT_IO_WIDTH_FRACTION = 0.05


def quadrant(outline: ChipOutline, corner: Corner) -> Rect:
    """Quarter-die rectangle nearest a corner."""
    hw, hh = outline.width / 2.0, outline.height / 2.0
    x = hw if corner in (Corner.BR, Corner.TR) else 0.0
    y = hh if corner in (Corner.TL, Corner.TR) else 0.0
    return (x, y, hw, hh)


def corner_point(outline: ChipOutline, corner: Corner) -> tuple[float, float]:
    x = outline.width if corner in (Corner.BR, Corner.TR) else 0.0
    y = outline.height if corner in (Corner.TL, Corner.TR) else 0.0
    return (x, y)


def rect_box(rect: Rect):
    x, y, w, h = rect
    return box(x, y, x + w, y + h)


@dataclass
class IoRegions:
    """Union of per-port keepout rectangles, clipped to the outline."""
    rects: tuple[Rect, ...] = ()
    geometry: Optional[BaseGeometry] = field(default=None, repr=False)

    def __post_init__(self):
        if self.geometry is None:
            self.geometry = unary_union([rect_box(r) for r in self.rects]) if self.rects else None

    @property
    def empty(self) -> bool:
        return self.geometry is None or self.geometry.is_empty

    @property
    def area(self) -> float:
        return 0.0 if self.empty else float(self.geometry.area)

    def area_within(self, rect: Rect) -> float:
        if self.empty:
            return 0.0
        return float(self.geometry.intersection(rect_box(rect)).area)

    def overlap(self, rects: Sequence[Rect]) -> float:
        """Sum over rectangles of their area inside the keepouts."""
        if self.empty:
            return 0.0
        return float(sum(self.geometry.intersection(rect_box(r)).area for r in rects))


def port_keepout(
    outline: ChipOutline,
    x: float,
    y: float,
    depth_fraction: float = DEFAULT_IO_DEPTH_FRACTION,
    width_fraction: float = DEFAULT_IO_WIDTH_FRACTION,
) -> Rect:
    """Keepout of a port on the nearest die edge, clipped to the outline."""
    W, H = outline.width, outline.height
    depth = depth_fraction * min(W, H)
    # left, right, bottom, top
    distances = (abs(x), abs(W - x), abs(y), abs(H - y))
    edge = distances.index(min(distances))
    if edge < 2:
        half = width_fraction * H / 2.0
        x0 = 0.0 if edge == 0 else W - depth
        y0, y1 = max(y - half, 0.0), min(y + half, H)
        return (x0, y0, depth, y1 - y0)
    half = width_fraction * W / 2.0
    y0 = 0.0 if edge == 2 else H - depth
    x0, x1 = max(x - half, 0.0), min(x + half, W)
    return (x0, y0, x1 - x0, depth)


def build_io_regions(
    design: Design,
    depth_fraction: float = DEFAULT_IO_DEPTH_FRACTION,
    width_fraction: float = DEFAULT_IO_WIDTH_FRACTION,
    enabled: bool = True,
) -> IoRegions:
    if not enabled or not design.ports:
        return IoRegions()
    rects = tuple(
        port_keepout(design.outline, p.x, p.y, depth_fraction, width_fraction)
        for p in design.ports
    )
    return IoRegions(rects=rects)
