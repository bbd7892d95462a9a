"""Domain errors raised by the gemcat library.

Every error corresponds to a violated precondition or invariant of one of
the public operations; the CLI maps them to exit code 1.
"""


class GemError(Exception):
    """Base class for all domain errors."""


class OddOrder(GemError):
    pass


class FixedPoint(GemError):
    pass


class NotInvolution(GemError):
    pass


class Disconnected(GemError):
    pass


class InvalidVertex(GemError):
    pass


class InvalidColour(GemError):
    pass


class EmptyColourSet(GemError):
    pass


class NotADipole(GemError):
    pass


class WouldCreateLoop(GemError):
    pass


class SharedVertex(GemError):
    pass


class LoopCreated(GemError):
    pass


class NotRhoPair(GemError):
    pass


class NoAdmissiblePairing(GemError):
    pass


class NotAFlipConfiguration(GemError):
    pass


class StuckNotContracted(GemError):
    pass


class ReductionStalled(GemError):
    """No move of the reduction schedule makes progress; the input is not a
    gem of a closed manifold."""


class NotContracted(GemError):
    pass


class NonBipartite(GemError):
    pass


class NotSimplyConnectedCertificate(GemError):
    pass


class OrderTooLarge(GemError):
    pass


class NotAManifoldGem(GemError):
    pass


class NoBoundary(GemError):
    pass


class NotPure(GemError):
    pass


class NotClosed(GemError):
    pass


class DimensionMismatch(GemError):
    pass


class ConflictingLabels(GemError):
    pass


class FormatError(GemError):
    """Malformed input file; carries a line number when available. The CLI
    maps this one to exit code 2."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
