"""
Netlist module for macroforge.

Design data model, JSON interchange and the synthetic design generator.
"""

from .design import (
    ChipOutline,
    Instance,
    InstanceKind,
    Port,
    PinRef,
    PinKind,
    Net,
    Blockage,
    Design,
)
from .io import (
    load_design,
    save_design,
    dumps_design,
    read_json_model,
    design_from_model,
    design_to_model,
)
from .synthetic import generate_synthetic, hierarchy_leaves

__all__ = [
    # Data model
    "ChipOutline",
    "Instance",
    "InstanceKind",
    "Port",
    "PinRef",
    "PinKind",
    "Net",
    "Blockage",
    "Design",
    # Files
    "load_design",
    "save_design",
    "dumps_design",
    "read_json_model",
    "design_from_model",
    "design_to_model",
    # Generator
    "generate_synthetic",
    "hierarchy_leaves",
]
