class PreconditionError(ValueError):
    """An input violates the hypothesis under which a bound is claimed."""

    def __init__(self, message: str, stage: str = "precondition"):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
