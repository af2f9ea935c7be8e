"""Placement, metrics and layout files of a finished run."""

import json
from pathlib import Path
from typing import Mapping, Union

from src.connectivity import connectivity_to_dict
from src.errors import DesignParseError
from src.evaluator import render_svg
from src.netlist import Design, PinKind, read_json_model
from src.netlist.schema import PlacedMacroModel, PlacementFileModel
from src.packing import Rect
from .pipeline import FinalPlacement

PathLike = Union[str, Path]

PLACEMENT_FILE = "placement.json"
METRICS_FILE = "metrics.json"
LAYOUT_FILE = "layout.svg"
CONNECTIVITY_FILE = "connectivity.json"


def placement_to_model(design: Design, rects: Mapping[int, Rect]) -> PlacementFileModel:
    return PlacementFileModel(macros=[
        PlacedMacroModel(name=design.instances[m].name, x=x, y=y, width=w, height=h)
        for m, (x, y, w, h) in sorted(rects.items())
    ])


def dumps_placement(design: Design, rects: Mapping[int, Rect]) -> str:
    return json.dumps(placement_to_model(design, rects).model_dump(), indent=2) + "\n"


def dumps_metrics(metrics: dict) -> str:
    return json.dumps(metrics, indent=2, sort_keys=True) + "\n"


def load_placement(design: Design, path: PathLike) -> dict[int, Rect]:
    """Read placement.json back into instance-id keyed rectangles."""
    model = read_json_model(path, PlacementFileModel)
    rects: dict[int, Rect] = {}
    for entry in model.macros:
        kind, idx = design.name_index.get(entry.name, (None, None))
        if kind is not PinKind.INSTANCE or not design.instances[idx].is_macro:
            raise DesignParseError(str(path), f"macros.{entry.name}", "not a macro of the design")
        rects[idx] = (entry.x, entry.y, entry.width, entry.height)
    missing = [design.instances[m].name for m in design.macro_ids if m not in rects]
    if missing:
        raise DesignParseError(str(path), "macros", f"missing {len(missing)} macros, e.g. '{missing[0]}'")
    return rects


def write_outputs(final: FinalPlacement, out_dir: PathLike, dump_connectivity: bool = False) -> Path:
    """Write placement.json, metrics.json and layout.svg under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    design = final.design
    (out / PLACEMENT_FILE).write_text(dumps_placement(design, final.rects))
    (out / METRICS_FILE).write_text(dumps_metrics(final.metrics.to_dict()))
    (out / LAYOUT_FILE).write_text(render_svg(
        design,
        final.rects,
        groups=final.analysis.groups,
        keepouts=final.analysis.io_regions.rects,
        ellipse=final.state.ellipse,
    ))
    if dump_connectivity:
        payload = connectivity_to_dict(design, final.analysis.groups, final.analysis.clusters, final.analysis.matrix)
        (out / CONNECTIVITY_FILE).write_text(json.dumps(payload, indent=2) + "\n")
    return out
