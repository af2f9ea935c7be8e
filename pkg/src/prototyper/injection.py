"""Externally produced prototypes loaded from a positions file."""

from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np

from src.errors import MissingInstanceError
from src.evaluator.metrics import hpwl
from src.netlist import Design, PinKind, read_json_model
from src.netlist.schema import PrototypeFileModel
from src.observability import get_logger
from .density import Prototype

logger = get_logger("prototyper")


def inject_prototype(
    design: Design,
    path: Union[str, Path],
    fixed: Optional[Mapping[int, tuple[float, float]]] = None,
) -> Prototype:
    """
    Load instance centers from a JSON positions file.

    Every movable instance needs a position; positions are clamped so each
    instance lies inside the outline. Macros in `fixed` keep their fixed
    centers whatever the file says.
    """
    model = read_json_model(path, PrototypeFileModel)
    fixed = dict(fixed or {})
    W, H = design.outline.width, design.outline.height

    given: dict[int, tuple[float, float]] = {}
    ignored = 0
    for entry in model.positions:
        kind, idx = design.name_index.get(entry.ref, (None, None))
        if kind is not PinKind.INSTANCE:
            ignored += 1
            continue
        given[idx] = (entry.x, entry.y)
    if ignored:
        logger.warning(f"Ignored {ignored} prototype entries that name no instance")

    positions = np.zeros((len(design.instances), 2))
    for inst in design.instances:
        if inst.id in fixed:
            positions[inst.id] = fixed[inst.id]
            continue
        if inst.fixed_at is not None:
            positions[inst.id] = (inst.fixed_at[0] + inst.width / 2, inst.fixed_at[1] + inst.height / 2)
            continue
        if inst.id not in given:
            raise MissingInstanceError(inst.name)
        half_w, half_h = min(inst.width, W) / 2, min(inst.height, H) / 2
        x, y = given[inst.id]
        positions[inst.id] = (
            float(np.clip(x, half_w, W - half_w)),
            float(np.clip(y, half_h, H - half_h)),
        )

    return Prototype(
        positions=positions,
        hpwl=hpwl(design, positions),
        density_used=None,
        iterations=0,
        source=f"file:{path}",
    )
