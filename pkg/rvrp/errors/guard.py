from rvrp.errors.base import BaseErrors


class GuardErrors(BaseErrors):
    """
    A computation refused because its size exceeds a configured guard; exit code 2
    """

    def __init__(self, detail: str):
        super().__init__(2, detail)


class SizeGuardError(GuardErrors):
    def __init__(self, what: str, estimate: float, limit: float):
        super().__init__(
            f"{what} refused: estimated size {estimate:.3g} exceeds limit {limit:.3g}"
        )
        self.estimate = estimate
        self.limit = limit
