"""SVG rendering of a macro placement."""

from typing import Mapping, Optional, Sequence

import svgwrite

from src.abplace import Ellipse
from src.connectivity import MacroGroup
from src.netlist import Design
from src.packing import Rect

DEFAULT_CANVAS = 800.0
UNGROUPED_FILL = "#b0b0b0"


def group_color(group_id: int) -> str:
    """Golden-angle hue walk, so neighbouring ids get well separated colors."""
    return f"hsl({(group_id * 137.508) % 360:.1f}, 65%, 55%)"


def render_svg(
    design: Design,
    rects: Mapping[int, Rect],
    groups: Optional[Sequence[MacroGroup]] = None,
    keepouts: Sequence[Rect] = (),
    ellipse: Optional[Ellipse] = None,
    canvas: float = DEFAULT_CANVAS,
) -> str:
    """
    Draw outline, I/O keepouts, macros colored by group, and the ellipse.

    Chip y points up; the drawing flips it so the origin sits bottom-left.
    """
    W, H = design.outline.width, design.outline.height
    scale = canvas / max(W, H)
    margin = 10.0
    dwg = svgwrite.Drawing(
        size=(W * scale + 2 * margin, H * scale + 2 * margin),
        profile="full",
        debug=False,
    )

    def flip(x: float, y: float, h: float) -> tuple[float, float]:
        return (margin + x * scale, margin + (H - y - h) * scale)

    dwg.add(dwg.rect(
        insert=(margin, margin),
        size=(W * scale, H * scale),
        fill="white",
        stroke="black",
        stroke_width=2,
        class_="outline",
    ))

    for x, y, w, h in keepouts:
        dwg.add(dwg.rect(
            insert=flip(x, y, h),
            size=(w * scale, h * scale),
            fill="#ffd6d6",
            stroke="none",
            class_="keepout",
        ))

    for blk in design.blockages:
        dwg.add(dwg.rect(
            insert=flip(blk.x, blk.y, blk.height),
            size=(blk.width * scale, blk.height * scale),
            fill="#404040",
            fill_opacity=0.5,
            class_="blockage",
        ))

    color_of: dict[int, str] = {}
    for group in groups or ():
        for m in group.member_macro_ids:
            color_of[m] = group_color(group.id)

    for m in sorted(rects):
        x, y, w, h = rects[m]
        name = design.instances[m].name
        dwg.add(dwg.rect(
            insert=flip(x, y, h),
            size=(w * scale, h * scale),
            fill=color_of.get(m, UNGROUPED_FILL),
            stroke="black",
            stroke_width=0.5,
            class_="macro",
            id=f"macro-{name}",
        ))

    if ellipse is not None:
        cx, cy = ellipse.center
        dwg.add(dwg.ellipse(
            center=(margin + cx * scale, margin + (H - cy) * scale),
            r=(ellipse.a * scale, ellipse.b * scale),
            fill="none",
            stroke="#1f4fd1",
            stroke_dasharray="6,4",
            class_="ellipse",
        ))

    for port in design.ports:
        px, py = flip(port.x, port.y, 0.0)
        dwg.add(dwg.circle(center=(px, py), r=2.5, fill="#d11f1f", class_="port"))

    return dwg.tostring()
