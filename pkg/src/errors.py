"""
Exception hierarchy for macroforge.

Every error the library raises on purpose derives from MacroForgeError so the
CLI can report it uniformly. Design-level problems are also ValueErrors.
"""

from typing import Optional


class MacroForgeError(Exception):
    """Base class for all macroforge errors."""


# =============================================================================
# Design ingestion
# =============================================================================

class DesignError(MacroForgeError, ValueError):
    """A design is malformed or cannot be built."""


class DesignParseError(DesignError):
    """The design file is not valid JSON or does not follow the schema."""

    def __init__(self, path: str, location: str, message: str):
        self.path = path
        self.location = location
        super().__init__(f"{path}: {location}: {message}")


class DanglingReferenceError(DesignError):
    """A net pin references an instance or port that does not exist."""

    def __init__(self, net: str, reference: str):
        self.net = net
        self.reference = reference
        super().__init__(f"net '{net}' references unknown instance or port '{reference}'")


class DimensionError(DesignError):
    """Non-positive sizes, ports off the boundary, or over-full outlines."""


class InfeasibleAreaError(DesignError):
    """Requested macro area exceeds the allowed share of the outline."""

    def __init__(self, requested: float, allowed: float):
        self.requested = requested
        self.allowed = allowed
        super().__init__(f"macro area {requested:.4g} exceeds allowed {allowed:.4g}")


class ConfigError(MacroForgeError, ValueError):
    """A pipeline configuration is invalid."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


# =============================================================================
# Placement stages
# =============================================================================

class PrototypeError(MacroForgeError):
    """The mixed-size prototype could not be produced."""


class DivergenceError(PrototypeError):
    def __init__(self, iteration: int, objective: float):
        self.iteration = iteration
        self.objective = objective
        super().__init__(
            f"prototype diverged at iteration {iteration} (objective {objective:.6g})"
        )


class MissingInstanceError(PrototypeError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"prototype file has no position for '{name}'")


class NonFiniteObjectiveError(MacroForgeError):
    """ABPlace produced a NaN or infinite objective or gradient."""

    def __init__(self, iteration: int, value: float, detail: str = ""):
        self.iteration = iteration
        self.value = value
        super().__init__(
            f"non-finite ABPlace objective at iteration {iteration}: {value} {detail}".strip()
        )


class RelocationError(MacroForgeError):
    """Macro relocating cannot make progress."""


class AllBannedError(RelocationError):
    """Every group-corner entry of the preference matrix is banned."""


class StuckError(RelocationError):
    def __init__(self, remaining_groups: list[int]):
        self.remaining_groups = remaining_groups
        super().__init__(
            f"no feasible corner assignment for any of {len(remaining_groups)} remaining groups"
        )


class PipelineError(MacroForgeError):
    """Failure of the outer placement loop."""

    def __init__(self, message: str, iteration: Optional[int] = None):
        self.iteration = iteration
        prefix = f"iteration {iteration}: " if iteration is not None else ""
        super().__init__(prefix + message)


class CapExceededError(PipelineError):
    pass


class UnresolvedPinError(MacroForgeError):
    def __init__(self, net: str):
        self.net = net
        super().__init__(f"net '{net}' has a pin without a position")
