"""
Pipeline configuration.

One flat pydantic model holds every tunable of a run. Config files mirror
it field for field; anything left out takes the default.
"""

import json
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.errors import ConfigError
from src.netlist import read_json_model
from src.packing import MutationConfig
from src.prototyper import DensitySchedule, PrototypeSettings
from src.relocator import CostWeights, RelocateSettings
from src.abplace import OptimizerSettings, default_gamma


class PipelineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # Schedules
    td_init: float = 0.92
    td_finish: float = 0.5
    schedule_steps: int = Field(default=10, ge=1)
    beta_init: float = 0.9
    beta_finish: float = 0.5
    gamma: Optional[float] = None

    # ABPlace
    abplace_lambda: float = Field(default=0.02, ge=0)
    abplace_max_iters: int = Field(default=500, ge=0)
    abplace_tol: float = Field(default=1e-6, gt=0)

    # Relocating
    mutation_p: float = 2.0 / 3.0
    alpha1: float = Field(default=5.0, ge=0)
    alpha2: float = Field(default=0.5, ge=0)
    alpha3: float = Field(default=4.0, ge=0)
    alpha4: float = Field(default=1.0, ge=0)
    w1: float = Field(default=0.4, ge=0)
    w2: float = Field(default=0.4, ge=0)
    w3: float = Field(default=1.0, ge=0)
    w4: float = Field(default=1.6, ge=0)
    w5: float = Field(default=1.6, ge=0)
    w6: float = Field(default=1.6, ge=0)
    w7: float = Field(default=1.0, ge=0)
    n_total: int = Field(default=100, ge=0)
    n_eps: int = Field(default=20, ge=1)
    n_pop: int = Field(default=5, ge=1)
    n_min_fraction: float = Field(default=0.1, gt=0, le=1)
    tournament_size: int = Field(default=2, ge=1)
    normalize_preference: bool = False
    halo: float = Field(default=0.0, ge=0)
    io_depth_fraction: float = Field(default=0.05, ge=0, le=0.5)
    io_width_fraction: float = Field(default=0.05, ge=0, le=1)
    notch_threshold: Optional[float] = Field(default=None, ge=0)

    # Connectivity
    d_max: int = Field(default=3, ge=0)
    net_degree_cap: int = Field(default=64, ge=2)
    footprint_tol: float = Field(default=0.05, ge=0)
    signature_threshold: float = Field(default=0.9, ge=-1, le=1)
    target_cluster_count: Optional[int] = Field(default=None, ge=1)

    # Prototyping
    prototype: str = "internal"
    proto_bins: int = Field(default=128, ge=2)
    proto_max_iters: int = Field(default=500, ge=1)
    proto_tol: float = Field(default=1e-5, gt=0)
    final_cell_prototype: bool = True

    # Run control
    max_outer_iterations: int = Field(default=20, ge=1)
    seed: int = 1

    # Ablation switches
    use_abplace: bool = True
    use_ellipse: bool = True
    use_macro_groups: bool = True
    shrink_ellipse: bool = True
    dynamic_density: bool = True
    io_keepout: bool = True

    @field_validator("td_init", "td_finish", "beta_init", "beta_finish")
    @classmethod
    def _open_unit(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("must lie in (0, 1)")
        return value

    @field_validator("mutation_p")
    @classmethod
    def _probability(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("must lie in (0, 1)")
        return value

    @field_validator("gamma")
    @classmethod
    def _gamma(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.0 < value <= 1.0:
            raise ValueError("must lie in (0, 1]")
        return value

    @field_validator("prototype")
    @classmethod
    def _prototype_mode(cls, value: str) -> str:
        if value != "internal" and not (value.startswith("file:") and len(value) > 5):
            raise ValueError("expected 'internal' or 'file:<path>'")
        return value

    @model_validator(mode="after")
    def _ordered_endpoints(self) -> "PipelineConfig":
        if self.td_finish > self.td_init:
            raise ValueError("td_finish must not exceed td_init")
        if self.beta_finish > self.beta_init:
            raise ValueError("beta_finish must not exceed beta_init")
        return self

    # -------------------------------------------------------------------------
    # Stage settings
    # -------------------------------------------------------------------------

    @property
    def resolved_gamma(self) -> float:
        if not self.shrink_ellipse:
            return 1.0
        if self.gamma is not None:
            return self.gamma
        return default_gamma(self.beta_init, self.beta_finish, self.schedule_steps)

    @property
    def prototype_file(self) -> Optional[str]:
        return self.prototype[5:] if self.prototype.startswith("file:") else None

    def density_schedule(self) -> DensitySchedule:
        if not self.dynamic_density:
            return DensitySchedule.constant(self.td_init)
        return DensitySchedule(td_init=self.td_init, td_finish=self.td_finish, steps=self.schedule_steps)

    def prototype_settings(self) -> PrototypeSettings:
        return PrototypeSettings(
            bins=self.proto_bins,
            max_iters=self.proto_max_iters,
            tol=self.proto_tol,
            net_degree_cap=self.net_degree_cap,
        )

    def optimizer_settings(self) -> OptimizerSettings:
        return OptimizerSettings(max_iters=self.abplace_max_iters, tol=self.abplace_tol)

    def cost_weights(self) -> CostWeights:
        return CostWeights(
            w=(self.w1, self.w2, self.w3, self.w4, self.w5, self.w6, self.w7),
            alpha=(self.alpha1, self.alpha2, self.alpha3, self.alpha4),
        )

    def relocate_settings(self) -> RelocateSettings:
        return RelocateSettings(
            n_eps=self.n_eps,
            n_total=self.n_total,
            n_pop=self.n_pop,
            tournament_size=self.tournament_size,
            n_min_fraction=self.n_min_fraction,
            mutation_p=self.mutation_p,
            normalize_preference=self.normalize_preference,
        )

    def mutation_config(self) -> MutationConfig:
        return MutationConfig(self.mutation_p)


def _config_error(path: str, location: str, message: str) -> ConfigError:
    return ConfigError(f"{path}: {message}", field=location)


def load_config(path: Union[str, Path, None] = None, **overrides) -> PipelineConfig:
    """
    Read a JSON config file (or start from defaults) and apply overrides.

    Overrides with a value of None are ignored, so CLI options that were not
    given leave the file value alone.
    """
    config = _read_config(path) if path else PipelineConfig()
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return config
    try:
        return PipelineConfig.model_validate({**config.model_dump(), **updates})
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigError(first["msg"], field=location) from e


class TunedConfigFile(BaseModel):
    """A tune result document; only its best configuration matters here."""

    model_config = ConfigDict(extra="ignore")

    best_config: PipelineConfig


def _read_config(path: Union[str, Path]) -> PipelineConfig:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError):
        payload = None
    if isinstance(payload, dict) and "best_config" in payload:
        return read_json_model(path, TunedConfigFile, make_error=_config_error).best_config
    return read_json_model(path, PipelineConfig, make_error=_config_error)
