class ConfigMismatchError(ValueError):
    """Sketches built under different configurations were compared."""


class NoClosedFormError(ValueError):
    """No closed-form collision probability is known for the requested alpha."""


class DatasetFormatError(ValueError):
    """A dataset line could not be parsed or violates the format rules."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
