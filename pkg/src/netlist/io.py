"""
Design file ingestion and serialization.

The interchange format is a single JSON document (see schema.DesignModel).
Macros receive ids 0..M-1 in file order, cells follow.
"""

import json
from pathlib import Path
from typing import Type, TypeVar, Callable, Union

from pydantic import BaseModel, ValidationError

from src.errors import DesignParseError, DanglingReferenceError, DesignError
from src.observability import get_logger
from .design import (
    ChipOutline,
    Design,
    Instance,
    InstanceKind,
    Port,
    PinRef,
    PinKind,
    Net,
    Blockage,
)
from .schema import (
    DesignModel,
    OutlineModel,
    MacroModel,
    CellModel,
    PortModel,
    NetModel,
    PinModel,
    PointModel,
    BlockageModel,
)

logger = get_logger("netlist")

M = TypeVar("M", bound=BaseModel)
PathLike = Union[str, Path]


def read_json_model(
    path: PathLike,
    model_cls: Type[M],
    make_error: Callable[[str, str, str], Exception] = DesignParseError,
) -> M:
    """Parse a JSON file into a pydantic model, reporting line or field on failure."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise make_error(str(path), "file", str(e)) from e
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise make_error(str(path), f"line {e.lineno} column {e.colno}", e.msg) from e
    try:
        return model_cls.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise make_error(str(path), location, first["msg"]) from e


# =============================================================================
# Model <-> Design
# =============================================================================

def design_from_model(model: DesignModel) -> Design:
    """Resolve names and build a validated Design."""
    outline = ChipOutline(model.outline.width, model.outline.height)

    instances: list[Instance] = []
    for m in model.macros:
        instances.append(Instance(
            id=len(instances),
            name=m.name,
            kind=InstanceKind.MACRO,
            width=m.width,
            height=m.height,
            hier_path=tuple(m.hier),
            fixed_at=(m.fixed.x, m.fixed.y) if m.fixed is not None else None,
        ))
    for c in model.cells:
        instances.append(Instance(
            id=len(instances),
            name=c.name,
            kind=InstanceKind.CELL,
            width=c.width,
            height=c.height,
            is_flip_flop=c.is_ff,
            hier_path=tuple(c.hier),
        ))
    ports = [Port(id=i, name=p.name, x=p.x, y=p.y) for i, p in enumerate(model.ports)]

    lookup: dict[str, tuple[PinKind, int]] = {}
    for inst in instances:
        if inst.name in lookup:
            raise DesignError(f"duplicate name '{inst.name}'")
        lookup[inst.name] = (PinKind.INSTANCE, inst.id)
    for port in ports:
        if port.name in lookup:
            raise DesignError(f"duplicate name '{port.name}'")
        lookup[port.name] = (PinKind.PORT, port.id)

    nets: list[Net] = []
    for n in model.nets:
        pins = []
        for pin in n.pins:
            if pin.ref not in lookup:
                raise DanglingReferenceError(n.name, pin.ref)
            kind, idx = lookup[pin.ref]
            pins.append(PinRef(kind=kind, index=idx, dx=pin.dx, dy=pin.dy))
        nets.append(Net(id=len(nets), name=n.name, pins=tuple(pins)))

    blockages = tuple(
        Blockage(name=b.name, x=b.x, y=b.y, width=b.width, height=b.height)
        for b in model.blockages
    )
    return Design(
        outline=outline,
        instances=tuple(instances),
        ports=tuple(ports),
        nets=tuple(nets),
        blockages=blockages,
    )


def design_to_model(design: Design) -> DesignModel:
    """Canonical document form of a Design (ids in order)."""
    def ref_name(pin: PinRef) -> str:
        if pin.kind is PinKind.INSTANCE:
            return design.instances[pin.index].name
        return design.ports[pin.index].name

    macros = [
        MacroModel(
            name=inst.name,
            width=inst.width,
            height=inst.height,
            hier=list(inst.hier_path),
            fixed=PointModel(x=inst.fixed_at[0], y=inst.fixed_at[1]) if inst.fixed_at else None,
        )
        for inst in design.instances if inst.is_macro
    ]
    cells = [
        CellModel(
            name=inst.name,
            width=inst.width,
            height=inst.height,
            is_ff=inst.is_flip_flop,
            hier=list(inst.hier_path),
        )
        for inst in design.instances if not inst.is_macro
    ]
    return DesignModel(
        outline=OutlineModel(width=design.outline.width, height=design.outline.height),
        macros=macros,
        cells=cells,
        ports=[PortModel(name=p.name, x=p.x, y=p.y) for p in design.ports],
        nets=[
            NetModel(
                name=net.name,
                pins=[PinModel(ref=ref_name(p), dx=p.dx, dy=p.dy) for p in net.pins],
            )
            for net in design.nets
        ],
        blockages=[
            BlockageModel(name=b.name, x=b.x, y=b.y, width=b.width, height=b.height)
            for b in design.blockages
        ],
    )


# =============================================================================
# Files
# =============================================================================

def load_design(path: PathLike) -> Design:
    """Load and fully resolve a design JSON file."""
    model = read_json_model(path, DesignModel)
    design = design_from_model(model)
    logger.info(
        f"Loaded design {Path(path).name}: {design.macro_count} macros, "
        f"{design.cell_count} cells, {len(design.ports)} ports, {len(design.nets)} nets"
    )
    return design


def dumps_design(design: Design) -> str:
    """Serialize a design to its canonical JSON text."""
    payload = design_to_model(design).model_dump(exclude_none=True)
    if not payload["blockages"]:
        del payload["blockages"]
    return json.dumps(payload, indent=2) + "\n"


def save_design(design: Design, path: PathLike) -> None:
    Path(path).write_text(dumps_design(design))
