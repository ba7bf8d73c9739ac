"""Exception hierarchy."""


class FracDelayError(Exception):
    pass


class ConfigError(FracDelayError, ValueError):
    """Invalid problem or run configuration.

    ``problems`` holds every violation found, not just the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NonConvergenceError(FracDelayError, ArithmeticError):
    pass


class SeriesOverflowError(FracDelayError, OverflowError):
    """A series term left the double range.

    ``epoch`` is the delay epoch j = floor(t/T) that produced it.
    """

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class MeshMismatchError(FracDelayError, ValueError):
    pass
