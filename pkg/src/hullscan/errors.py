"""Exception types shared across the pipeline."""


class ValidationError(ValueError):
    """Raised when an input value or configuration violates a documented contract."""


class NoShipError(RuntimeError):
    """Raised when the ship segmenter finds no pixel above threshold."""


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
