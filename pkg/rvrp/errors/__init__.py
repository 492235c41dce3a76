from rvrp.errors.base import BaseErrors
from rvrp.errors.input import (
    InputErrors,
    ParameterError,
    ParseError,
    GraphValidationError,
    DegenerateBeliefError,
    ConstraintError,
    InstanceMismatchError,
)
from rvrp.errors.guard import GuardErrors, SizeGuardError
