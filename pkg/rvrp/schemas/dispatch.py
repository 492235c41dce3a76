from enum import Enum

from pydantic import BaseModel, Field, field_validator


class Policy(str, Enum):
    redundant = "redundant"
    non_redundant = "non_redundant"
    noise_free = "noise_free"


class RequestEvent(BaseModel):
    request_time: float = Field(..., ge=0)
    pickup: int = Field(..., ge=0)
    dropoff: int = Field(..., ge=0)


class RequestTrace(BaseModel):
    events: list[RequestEvent] = Field(default_factory=list)

    @field_validator("events", mode="after")
    def sort_validator(cls, v: list[RequestEvent]) -> list[RequestEvent]:
        return sorted(v, key=lambda e: e.request_time)

    def __len__(self) -> int:
        return len(self.events)


class VehicleStatus(str, Enum):
    idle = "idle"
    assigned = "assigned"
    occupied = "occupied"


class Vehicle(BaseModel):
    vehicle_id: int
    status: VehicleStatus = VehicleStatus.idle
    node: int
    busy_until: float = 0.0
    request: int | None = None
    # node where an assigned vehicle is released once its request is served
    release_node: int | None = None
    # path of a re-routed vehicle and the time it left ``route[0]``
    route: list[int] = Field(default_factory=list)
    route_start: float = 0.0


class ServedRequest(BaseModel):
    request: int
    request_time: float
    wait: float = Field(..., ge=0)
    batch_index: int
    vehicles_assigned: int = Field(..., ge=1)


class BatchRecord(BaseModel):
    index: int
    time: float
    fleet_size: int
    occupation_ratio: float = Field(..., ge=0, le=1)
    served: int
    dropped: int
    pending: int
    mean_wait: float | None = None


class DispatchStats(BaseModel):
    policy: Policy
    n_requests: int = 0
    served: list[ServedRequest] = Field(default_factory=list)
    dropped: int = 0
    pending: int = 0
    batches: list[BatchRecord] = Field(default_factory=list)

    @staticmethod
    def csv_header() -> list[str]:
        return ["request_time_s", "wait_s", "policy", "batch_index"]

    def csv_rows(self) -> list[list[str]]:
        return [
            [f"{s.request_time:.3f}", f"{s.wait:.3f}", self.policy.value, str(s.batch_index)]
            for s in self.served
        ]


class SegmentSummary(BaseModel):
    start: float
    end: float
    served: int
    mean_wait: float | None
    mean_redundancy: float | None


class DispatchSummary(BaseModel):
    policy: Policy
    empty: bool = False
    n_requests: int = 0
    n_served: int = 0
    n_dropped: int = 0
    drop_rate: float = 0.0
    mean: float | None = None
    std: float | None = None
    median: float | None = None
    p95: float | None = None
    mean_redundancy: float | None = None
    relative_to_noise_free: float | None = None
    segments: list[SegmentSummary] = Field(default_factory=list)
    batch_points: list[tuple[float, float]] = Field(default_factory=list)

    def flat(self) -> dict[str, str]:
        """Scalar fields as a flat key=value mapping."""
        values = self.model_dump(exclude={"segments", "batch_points"}, mode="json")
        return {k: _text(v) for k, v in values.items()}


def _text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)
