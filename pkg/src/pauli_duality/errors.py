class PauliDualityError(Exception):
    pass


class NonCommutingTerms(PauliDualityError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"terms {i} and {j} anticommute")


class LengthMismatch(PauliDualityError):
    pass


class DimensionMismatch(PauliDualityError):
    pass


class IndexOutOfRange(PauliDualityError):
    pass


class TooLarge(PauliDualityError):
    def __init__(self, n, limit):
        self.n, self.limit = n, limit
        super().__init__(f"n={n} exceeds dense-oracle guard {limit}")


class InvalidSize(PauliDualityError):
    def __init__(self, name, L, reason=""):
        self.name, self.L = name, L
        msg = f"invalid size L={L} for model {name}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class XBlockNonZero(PauliDualityError):
    pass


class PatternMismatch(PauliDualityError):
    pass


class BadTopology(PauliDualityError):
    pass


class NotApplicable(PauliDualityError):
    pass


class NonFinite(PauliDualityError):
    pass


class UnsupportedClassification(PauliDualityError):
    pass


class TemperatureOutOfRange(PauliDualityError):
    pass


class NotUnitary(PauliDualityError):
    pass


class NotPrimitive(PauliDualityError):
    pass


class MismatchReport(PauliDualityError):
    pass


class ParseError(PauliDualityError):
    pass
