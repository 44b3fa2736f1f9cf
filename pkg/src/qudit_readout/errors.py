class QuditReadoutError(Exception):
    """Base class for library errors."""


class InvalidArgumentError(QuditReadoutError, ValueError):
    pass


class UnsupportedOperatorError(QuditReadoutError, NotImplementedError):
    """Stevens operator with no built-in definition; pass a raw matrix instead."""


class SingularEvaluationError(QuditReadoutError, ArithmeticError):
    """A response function was evaluated exactly on an undamped pole."""


class ResonantDenominatorError(SingularEvaluationError):
    def __init__(self, pair, detuning):
        self.pair = pair
        self.detuning = detuning
        super().__init__(
            f"resonant denominator for pair {pair}: detuning {detuning:.3e} GHz"
        )


class NonDispersiveError(QuditReadoutError):
    """Dressed states cannot be labelled by bare states."""


class NoWorkingPointError(QuditReadoutError):
    pass


class UnclassifiableError(QuditReadoutError):
    """Phase signs that match no S=1 state."""


class ConfigError(QuditReadoutError):
    def __init__(self, message, line=None, source=None):
        self.message = message
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DispersiveRegimeWarning(UserWarning):
    """A spin transition is too close to the cavity for perturbation theory."""


class DegeneracyWarning(UserWarning):
    pass
