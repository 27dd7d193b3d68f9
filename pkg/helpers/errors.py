class ContractViolationError(ValueError):
    """A caller broke an operation's precondition."""


class InvalidSizeError(ContractViolationError):
    pass


class InvalidAliasingError(ContractViolationError):
    pass


class CoverageError(ContractViolationError):
    """The behaviour policy gives zero probability to an action the target needs."""


class MissingContextError(ContractViolationError):
    pass


class NumericalError(ArithmeticError):
    pass


class NoFixedPointError(NumericalError):
    pass


class InfiniteVarianceError(NumericalError):
    pass


class DivergenceError(NumericalError):
    def __init__(self, step: int, message: str = "learner state became non-finite"):
        self.step = step
        super().__init__(f"{message} at step {step}")


class AllDivergedError(RuntimeError):
    pass


class ConfigError(ValueError):
    def __init__(self, path: str, line: int | None, message: str):
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"{location}: {message}")
