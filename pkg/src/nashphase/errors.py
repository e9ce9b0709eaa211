"""Exception hierarchy shared by all nashphase modules."""


class NashphaseError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class SizeLimitExceeded(NashphaseError):
    pass


class ParseError(NashphaseError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EdgeAbsent(NashphaseError):
    pass


class DegreeTooLarge(NashphaseError):
    pass


class InvalidParam(NashphaseError, ValueError):
    pass


class EmptyHistogram(NashphaseError, ValueError):
    pass
