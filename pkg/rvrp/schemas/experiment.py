import math

from pydantic import BaseModel, Field, field_validator, model_validator
from typing_extensions import Self

from rvrp.core.config import settings
from rvrp.errors import ParameterError
from rvrp.schemas.noise import NoiseSpec
from rvrp.schemas.report import SolverMethod

SERIES_PRESETS: dict[str, dict[str, int | list[int]]] = {
    "A": {"n_robots": 16, "n_goals": 4, "caps": list(range(4, 17, 2)), "sweep_cap": 8},
    "B": {"n_robots": 100, "n_goals": 10, "caps": list(range(10, 101, 10)), "sweep_cap": 50},
}


class ExperimentConfig(BaseModel):
    series: str = "A"
    rows: int = Field(settings.GRID_ROWS, ge=2)
    cols: int = Field(settings.GRID_COLS, ge=2)
    spacing: float = Field(settings.GRID_SPACING, gt=0)
    n_robots: int = Field(16, gt=0)
    n_goals: int = Field(4, gt=0)
    caps: list[int] = Field(default_factory=lambda: list(range(4, 17, 2)))
    noises: list[NoiseSpec] = Field(
        default_factory=lambda: [NoiseSpec.parse("gaussian:100")]
    )
    iterations: int = Field(settings.ITERATIONS, ge=1)
    speed_mean: float = Field(settings.SPEED_MEAN, gt=0)
    speed_std: float = Field(settings.SPEED_STD, ge=0)
    p_min: float = Field(settings.P_MIN, ge=0, lt=1)
    seed: int = settings.SEED
    methods: list[SolverMethod] = Field(
        default_factory=lambda: [
            SolverMethod.hungarian_only,
            SolverMethod.greedy,
            SolverMethod.random,
            SolverMethod.true_oracle,
        ]
    )

    @field_validator("noises", mode="before")
    def noises_validator(cls, v):
        if isinstance(v, str):
            v = [x for x in v.split(",") if x]
        return [NoiseSpec.parse(x) if isinstance(x, str) else x for x in v]

    @field_validator("caps", mode="before")
    def caps_validator(cls, v):
        if isinstance(v, str):
            try:
                return [int(x) for x in v.split(",") if x.strip()]
            except ValueError:
                raise ParameterError(f"deployment caps must be integers, got {v!r}") from None
        return v

    @field_validator("methods", mode="before")
    def methods_validator(cls, v):
        if isinstance(v, str):
            v = [x.strip() for x in v.split(",") if x.strip()]
        known = [m.value for m in SolverMethod]
        for method in v:
            if isinstance(method, str) and method not in known:
                raise ParameterError(f"unknown method {method!r}, expected one of {known}")
        return v

    @model_validator(mode="after")
    def sizes_validator(self) -> Self:
        if not self.caps:
            raise ParameterError("at least one deployment cap is required")
        for cap in self.caps:
            if not self.n_goals <= cap <= self.n_robots:
                raise ParameterError(
                    f"deployment cap must satisfy M <= N_d <= N, got M={self.n_goals}, "
                    f"N_d={cap}, N={self.n_robots}"
                )
        if self.n_robots + self.n_goals > self.rows * self.cols:
            raise ParameterError(
                f"N + M = {self.n_robots + self.n_goals} exceeds the {self.rows * self.cols} grid nodes"
            )
        if not self.noises:
            raise ParameterError("at least one noise model is required")
        return self

    @classmethod
    def preset(cls, series: str, **overrides) -> "ExperimentConfig":
        preset = SERIES_PRESETS[series.upper()]
        values = {
            "series": series.upper(),
            "n_robots": preset["n_robots"],
            "n_goals": preset["n_goals"],
            "caps": preset["caps"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class TrialOutcome(BaseModel):
    method: str
    noise: str
    deployment_cap: int
    realized_wait_per_goal: list[float]
    normalized: float
    expected_J: float
    normalized_expected: float

    @property
    def mean_wait(self) -> float:
        if not self.realized_wait_per_goal:
            return math.nan
        return sum(self.realized_wait_per_goal) / len(self.realized_wait_per_goal)


class SeriesRow(BaseModel):
    series: str
    noise_kind: str
    noise_scale: float
    N: int
    M: int
    N_d: int
    method: str
    mean_norm_wait: float
    ci_low: float
    ci_high: float
    mean_wait_s: float
    iterations: int
    mean_norm_expected: float

    @staticmethod
    def csv_header() -> list[str]:
        return list(SeriesRow.model_fields)

    def csv_row(self) -> list[str]:
        return [
            v if isinstance(v, str) else f"{v:.9g}"
            for v in self.model_dump().values()
        ]
