from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from rvrp.core.config import settings
from rvrp.errors import ParameterError


class NoiseKind(str, Enum):
    gaussian = "gaussian"
    laplace = "laplace"
    uniform = "uniform"
    none = "none"


_ALIASES = {"circular_uniform": NoiseKind.uniform}


class NoiseSpec(BaseModel):
    """
    Planar position noise. ``scale`` is the standard deviation for
    gaussian, the per-axis scale b for laplace and the radius for uniform.
    """

    model_config = ConfigDict(frozen=True)

    kind: NoiseKind = NoiseKind.none
    scale: float = Field(0.0, ge=0.0)

    @model_validator(mode="after")
    def scale_validator(self) -> Self:
        if self.kind == NoiseKind.none and self.scale != 0.0:
            object.__setattr__(self, "scale", 0.0)
        return self

    @classmethod
    def parse(cls, text: str) -> "NoiseSpec":
        """Parse ``gaussian:100``, ``laplace:70.71``, ``uniform:200`` or ``none``."""
        name, _, value = text.strip().partition(":")
        name = name.strip().lower()
        try:
            kind = _ALIASES.get(name) or NoiseKind(name)
        except ValueError:
            raise ParameterError(f"unknown noise kind '{name}'")
        if kind == NoiseKind.none:
            return cls(kind=kind)
        try:
            scale = float(value) if value else settings.NOISE_DEFAULTS[kind.value]
        except ValueError:
            raise ParameterError(f"invalid noise scale '{value}'")
        if scale < 0 or not np.isfinite(scale):
            raise ParameterError(f"noise scale must be non-negative, got {scale}")
        return cls(kind=kind, scale=scale)

    @property
    def axis_std(self) -> float:
        """Per-axis standard deviation of the noise in meters."""
        if self.kind == NoiseKind.gaussian:
            return self.scale
        if self.kind == NoiseKind.laplace:
            return self.scale * np.sqrt(2.0)
        if self.kind == NoiseKind.uniform:
            return self.scale / 2.0
        return 0.0

    def __str__(self) -> str:
        if self.kind == NoiseKind.none:
            return "none"
        return f"{self.kind.value}:{self.scale:g}"


class PositionBelief(BaseModel):
    """Discrete probability mass of a robot's true node given its report."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    robot_id: int
    nodes: np.ndarray
    probs: np.ndarray

    @model_validator(mode="after")
    def mass_validator(self) -> Self:
        if len(self.nodes) == 0 or len(self.nodes) != len(self.probs):
            raise ValueError("belief support must be non-empty and aligned")
        if np.any(self.probs <= 0):
            raise ValueError("belief probabilities must be strictly positive")
        if abs(float(self.probs.sum()) - 1.0) > 1e-12:
            raise ValueError("belief probabilities must sum to one")
        return self

    @property
    def support_size(self) -> int:
        return len(self.nodes)

    @classmethod
    def point_mass(cls, robot_id: int, node: int) -> "PositionBelief":
        return cls(
            robot_id=robot_id,
            nodes=np.array([node], dtype=np.int64),
            probs=np.array([1.0]),
        )
