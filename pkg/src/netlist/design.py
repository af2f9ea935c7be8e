"""
Design data model: outline, instances, ports, nets and blockages.

A Design is immutable after construction and validates its own invariants,
so every consumer can rely on dense ids, resolved pins and sane geometry.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np

from src.errors import DimensionError, DesignError

PORT_TOLERANCE = 1e-9


class InstanceKind(str, Enum):
    MACRO = "macro"
    CELL = "std-cell"


class PinKind(str, Enum):
    INSTANCE = "instance"
    PORT = "port"


@dataclass(frozen=True)
class ChipOutline:
    """Fixed die rectangle with its origin at (0, 0)."""
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise DimensionError(
                f"outline must have positive size, got {self.width} x {self.height}"
            )

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.width / 2.0, self.height / 2.0)

    def boundary_distance(self, x: float, y: float) -> float:
        """Distance from a point to the nearest of the four die edges."""
        return min(abs(x), abs(self.width - x), abs(y), abs(self.height - y))


@dataclass(frozen=True)
class Instance:
    id: int
    name: str
    kind: InstanceKind
    width: float
    height: float
    is_flip_flop: bool = False
    hier_path: tuple[str, ...] = ()
    # lower-left corner of a pre-placed macro
    fixed_at: Optional[tuple[float, float]] = None

    @property
    def is_macro(self) -> bool:
        return self.kind is InstanceKind.MACRO

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class Port:
    id: int
    name: str
    x: float
    y: float


@dataclass(frozen=True)
class PinRef:
    """One net pin: an instance or a port plus an offset from its center."""
    kind: PinKind
    index: int
    dx: float = 0.0
    dy: float = 0.0


@dataclass(frozen=True)
class Net:
    id: int
    name: str
    pins: tuple[PinRef, ...]

    @property
    def degree(self) -> int:
        return len(self.pins)

    @property
    def driver(self) -> PinRef:
        return self.pins[0]

    @property
    def sinks(self) -> tuple[PinRef, ...]:
        return self.pins[1:]


@dataclass(frozen=True)
class Blockage:
    name: str
    x: float
    y: float
    width: float
    height: float

    @property
    def rect(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.width, self.height)


@dataclass(frozen=True)
class Design:
    outline: ChipOutline
    instances: tuple[Instance, ...]
    ports: tuple[Port, ...] = ()
    nets: tuple[Net, ...] = ()
    blockages: tuple[Blockage, ...] = field(default=())

    def __post_init__(self):
        self._validate()

    # -------------------------------------------------------------------------
    # Validation
    # -------------------------------------------------------------------------

    def _validate(self) -> None:
        W, H = self.outline.width, self.outline.height
        names: set[str] = set()

        for expected, inst in enumerate(self.instances):
            if inst.id != expected:
                raise DesignError(f"instance ids must be dense, '{inst.name}' has id {inst.id}")
            if inst.name in names:
                raise DesignError(f"duplicate name '{inst.name}'")
            names.add(inst.name)
            if inst.is_macro:
                if not (inst.width > 0 and inst.height > 0):
                    raise DimensionError(f"macro '{inst.name}' has non-positive size")
                if inst.is_flip_flop:
                    raise DesignError(f"macro '{inst.name}' cannot be a flip-flop")
                if inst.fixed_at is not None:
                    x, y = inst.fixed_at
                    if x < 0 or y < 0 or x + inst.width > W + PORT_TOLERANCE or y + inst.height > H + PORT_TOLERANCE:
                        raise DimensionError(f"pre-placed macro '{inst.name}' lies outside the outline")
            elif inst.width < 0 or inst.height < 0:
                raise DimensionError(f"cell '{inst.name}' has negative size")

        tol = PORT_TOLERANCE * max(W, H)
        for expected, port in enumerate(self.ports):
            if port.id != expected:
                raise DesignError(f"port ids must be dense, '{port.name}' has id {port.id}")
            if port.name in names:
                raise DesignError(f"duplicate name '{port.name}'")
            names.add(port.name)
            inside = -tol <= port.x <= W + tol and -tol <= port.y <= H + tol
            if not inside or self.outline.boundary_distance(port.x, port.y) > tol:
                raise DimensionError(f"port '{port.name}' at ({port.x}, {port.y}) is not on the boundary")

        for expected, net in enumerate(self.nets):
            if net.id != expected:
                raise DesignError(f"net ids must be dense, '{net.name}' has id {net.id}")
            if len(net.pins) < 2:
                raise DesignError(f"net '{net.name}' has fewer than 2 pins")
            for pin in net.pins:
                bound = len(self.instances) if pin.kind is PinKind.INSTANCE else len(self.ports)
                if not 0 <= pin.index < bound:
                    raise DesignError(f"net '{net.name}' has an unresolved pin")

        for blk in self.blockages:
            if blk.width <= 0 or blk.height <= 0:
                raise DimensionError(f"blockage '{blk.name}' has non-positive size")

        macro_area = sum(inst.area for inst in self.instances if inst.is_macro)
        if macro_area > self.outline.area * (1 + 1e-12):
            raise DimensionError(
                f"total macro area {macro_area:.6g} exceeds outline area {self.outline.area:.6g}"
            )

    # -------------------------------------------------------------------------
    # Lookups
    # -------------------------------------------------------------------------

    @cached_property
    def macro_ids(self) -> tuple[int, ...]:
        return tuple(inst.id for inst in self.instances if inst.is_macro)

    @cached_property
    def cell_ids(self) -> tuple[int, ...]:
        return tuple(inst.id for inst in self.instances if not inst.is_macro)

    @cached_property
    def macro_index(self) -> dict[int, int]:
        """Instance id -> entity index (position in macro_ids)."""
        return {mid: k for k, mid in enumerate(self.macro_ids)}

    @property
    def macro_count(self) -> int:
        return len(self.macro_ids)

    @property
    def cell_count(self) -> int:
        return len(self.cell_ids)

    @cached_property
    def preplaced_ids(self) -> tuple[int, ...]:
        return tuple(i for i in self.macro_ids if self.instances[i].fixed_at is not None)

    @cached_property
    def name_index(self) -> dict[str, tuple[PinKind, int]]:
        index: dict[str, tuple[PinKind, int]] = {}
        for inst in self.instances:
            index[inst.name] = (PinKind.INSTANCE, inst.id)
        for port in self.ports:
            index[port.name] = (PinKind.PORT, port.id)
        return index

    def instance_by_name(self, name: str) -> Instance:
        kind, idx = self.name_index[name]
        if kind is not PinKind.INSTANCE:
            raise KeyError(name)
        return self.instances[idx]

    @cached_property
    def sizes(self) -> np.ndarray:
        """(N, 2) array of instance widths and heights."""
        return np.array([[i.width, i.height] for i in self.instances], dtype=float).reshape(-1, 2)

    @cached_property
    def port_positions(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.ports], dtype=float).reshape(-1, 2)

    @cached_property
    def macro_area(self) -> float:
        return float(sum(self.instances[i].area for i in self.macro_ids))

    # -------------------------------------------------------------------------
    # Flattened pin arrays (instances first, then ports, in one node space)
    # -------------------------------------------------------------------------

    @cached_property
    def pin_nodes(self) -> np.ndarray:
        n = len(self.instances)
        return np.array(
            [pin.index if pin.kind is PinKind.INSTANCE else n + pin.index
             for net in self.nets for pin in net.pins],
            dtype=np.int64,
        )

    @cached_property
    def pin_offsets(self) -> np.ndarray:
        return np.array(
            [[pin.dx, pin.dy] for net in self.nets for pin in net.pins], dtype=float
        ).reshape(-1, 2)

    @cached_property
    def net_starts(self) -> np.ndarray:
        """Index of each net's first pin in the flattened pin arrays."""
        degrees = np.array([net.degree for net in self.nets], dtype=np.int64)
        return np.concatenate([[0], np.cumsum(degrees)[:-1]]).astype(np.int64) if len(degrees) else degrees

    @cached_property
    def pin_net(self) -> np.ndarray:
        return np.repeat(
            np.arange(len(self.nets), dtype=np.int64),
            [net.degree for net in self.nets],
        )
