from enum import Enum

from pydantic import BaseModel, Field

from rvrp.schemas.instance import Assignment


class SolverMethod(str, Enum):
    greedy = "greedy"
    optimal = "optimal"
    slice_greedy = "slice_greedy"
    random = "random"
    hungarian_only = "hungarian_only"
    true_oracle = "true_oracle"


class BoundCertificate(BaseModel):
    holds: bool
    lhs: float
    rhs: float


class SolverReport(BaseModel):
    method: SolverMethod
    A: Assignment = Assignment()
    O: Assignment = Assignment()
    cost_J: float
    J0: float
    objective_calls: int = 0
    wall_time: float = 0.0
    instance_key: str = ""
    certificate: BoundCertificate | None = None

    @property
    def normalized(self) -> float:
        return self.cost_J / self.J0 if self.J0 > 0 else 1.0

    @staticmethod
    def csv_header() -> list[str]:
        return [
            "method",
            "J0",
            "J",
            "normalized",
            "objective_calls",
            "redundant_edges",
            "bound_holds",
        ]

    def csv_row(self) -> list[str]:
        edges = " ".join(f"{i}:{j}" for i, j in self.A)
        holds = "" if self.certificate is None else str(self.certificate.holds).lower()
        return [
            self.method.value,
            f"{self.J0:.9g}",
            f"{self.cost_J:.9g}",
            f"{self.normalized:.9g}",
            str(self.objective_calls),
            edges,
            holds,
        ]
