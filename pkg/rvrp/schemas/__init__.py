from rvrp.schemas.graph import TransportGraph, TravelTimeTable
from rvrp.schemas.noise import NoiseKind, NoiseSpec, PositionBelief
from rvrp.schemas.instance import (
    Assignment,
    AssignmentInstance,
    GroundTruth,
    Edge,
    InstanceRecord,
)
from rvrp.schemas.report import SolverMethod, SolverReport, BoundCertificate
