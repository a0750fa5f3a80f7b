"""Error taxonomy shared by every module.

Each class name is what the CLI prints on a domain error, so keep them
stable.
"""


class BaseCryptError(Exception):
    """Root of all domain errors."""

    #: index of the pipeline step (or segment) that failed, when known
    step = None
    #: index of the segment that failed in segmented mode, when known
    segment = None

    def with_step(self, index):
        self.step = index
        return self


# alphabet
class DuplicateGlyph(BaseCryptError):
    pass


class ReservedGlyph(BaseCryptError):
    pass


class RadixTooSmall(BaseCryptError):
    pass


class RadixOutOfRange(BaseCryptError):
    pass


class UnknownGlyph(BaseCryptError):
    pass


class SurjectiveParse(BaseCryptError):
    pass


class ValueOutOfRange(BaseCryptError):
    pass


# numeric
class DivisionByZero(BaseCryptError, ZeroDivisionError):
    pass


class ZeroToNegativePower(BaseCryptError, ZeroDivisionError):
    pass


class BudgetExceeded(BaseCryptError):
    pass


# baseconv
class EmptyInput(BaseCryptError):
    pass


class MalformedNumeral(BaseCryptError):
    pass


# remap
class RadixMismatch(BaseCryptError):
    pass


# exprlang
class ExprSyntaxError(BaseCryptError):
    pass


class NonIntegerExponent(BaseCryptError):
    pass


class NotAutoInvertible(BaseCryptError):
    pass


# pipeline
class NonTerminatingAtDigitStep(BaseCryptError):
    pass


class NotInvertible(BaseCryptError):
    pass


class AlphabetMismatch(BaseCryptError):
    pass


class PrecisionMismatch(BaseCryptError):
    pass


class SegmentLengthMismatch(BaseCryptError):
    pass


class ExternalStepNotExecutable(BaseCryptError):
    pass


class InexactRoot(BaseCryptError):
    pass


# file formats
class FormatError(BaseCryptError):
    """A pipeline, schedule, envelope or space file is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
