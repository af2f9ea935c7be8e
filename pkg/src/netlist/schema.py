"""File schemas for design, prototype and placement interchange."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OutlineModel(_Strict):
    width: float
    height: float


class PointModel(_Strict):
    x: float
    y: float


class MacroModel(_Strict):
    name: str
    width: float
    height: float
    hier: List[str] = Field(default_factory=list)
    fixed: Optional[PointModel] = None


class CellModel(_Strict):
    name: str
    width: float
    height: float
    is_ff: bool = False
    hier: List[str] = Field(default_factory=list)


class PortModel(_Strict):
    name: str
    x: float
    y: float


class PinModel(_Strict):
    ref: str
    dx: float = 0.0
    dy: float = 0.0


class NetModel(_Strict):
    name: str
    pins: List[PinModel] = Field(min_length=2)


class BlockageModel(_Strict):
    name: str
    x: float
    y: float
    width: float
    height: float


class DesignModel(_Strict):
    """Top-level design document."""
    outline: OutlineModel
    macros: List[MacroModel] = Field(default_factory=list)
    cells: List[CellModel] = Field(default_factory=list)
    ports: List[PortModel] = Field(default_factory=list)
    nets: List[NetModel] = Field(default_factory=list)
    blockages: List[BlockageModel] = Field(default_factory=list)


class PositionModel(_Strict):
    ref: str
    x: float
    y: float


class PrototypeFileModel(_Strict):
    """Externally produced prototype: instance centers."""
    positions: List[PositionModel]


class PlacedMacroModel(_Strict):
    name: str
    x: float
    y: float
    width: float
    height: float


class PlacementFileModel(_Strict):
    """Final macro placement; (x, y) is the lower-left corner."""
    macros: List[PlacedMacroModel]
