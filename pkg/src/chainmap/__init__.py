"""Lossless contour codec for multi-label semantic maps."""

from .codec import CodecConfig, EncodeStats, decode_map, encode_map
from .errors import (BadMagic, CodecError, CorruptStream, OutOfBoundsWalk,
                     TruncatedStream, UnclosedContour)
from .imageio import PgmImage, from_label_map, to_label_map
from .lattice import LabelMap

__version__ = "0.1.0"

__all__ = [
    "BadMagic",
    "CodecConfig",
    "CodecError",
    "CorruptStream",
    "EncodeStats",
    "LabelMap",
    "OutOfBoundsWalk",
    "PgmImage",
    "TruncatedStream",
    "UnclosedContour",
    "decode_map",
    "encode_map",
    "from_label_map",
    "to_label_map",
    "__version__",
]
