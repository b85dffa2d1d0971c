"""Exception types raised by the codec."""


class CodecError(Exception):
    """Base class for all encode/decode failures."""


class BadMagic(CodecError):
    """Input does not start with the container magic or has a bad version."""


class TruncatedStream(CodecError):
    """Input ended before the fixed header could be read."""


class CorruptStream(CodecError):
    """Decoded state became inconsistent (bad counts, bounds, or closure)."""


class OutOfBoundsWalk(CorruptStream):
    """A decoded contour stepped outside the image lattice."""


class UnclosedContour(CorruptStream):
    """A decoded contour did not enclose a fillable region."""
