from rvrp.errors.base import BaseErrors


class InputErrors(BaseErrors):
    """
    Invalid input supplied by the caller; exit code 1
    """

    def __init__(self, detail: str):
        super().__init__(1, detail)


class ParameterError(InputErrors):
    pass


class ParseError(InputErrors):
    def __init__(self, path: str, line_number: int, reason: str):
        super().__init__(f"{path}:{line_number}: {reason}")
        self.line_number = line_number


class GraphValidationError(InputErrors):
    def __init__(self, detail: str, pair: tuple[int, int] | None = None):
        super().__init__(detail)
        self.pair = pair


class DegenerateBeliefError(InputErrors):
    pass


class ConstraintError(InputErrors):
    pass


class InstanceMismatchError(InputErrors):
    pass
