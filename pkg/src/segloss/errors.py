"""Exception and warning types raised across segloss."""


class SegLossError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(SegLossError, ValueError):
    pass


class ValueOutOfRange(SegLossError, ValueError):
    def __init__(self, index, value, message=None):
        self.index = index
        self.value = value
        super().__init__(message or f"value {value!r} at index {index} is outside [0, 1]")


class InvalidEpsilon(SegLossError, ValueError):
    pass


class InvalidThreshold(SegLossError, ValueError):
    pass


class ShapeMismatch(SegLossError, ValueError):
    pass


class UnknownLoss(SegLossError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown loss"


class UnknownParam(SegLossError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown parameter"


class ParamOutOfRange(SegLossError, ValueError):
    pass


class EmptySource(SegLossError, ValueError):
    pass


class MalformedHeader(SegLossError, ValueError):
    pass


class UnexpectedEof(SegLossError, ValueError):
    pass


class UnsupportedMaxval(SegLossError, ValueError):
    pass


class RaggedRows(SegLossError, ValueError):
    pass


class NotADirectory(SegLossError, NotADirectoryError):
    pass


class IoError(SegLossError, OSError):
    pass
