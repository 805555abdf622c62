"""Fault model: deterministic streams and bit-flip injection"""

from efid.fault.model import (
    BitRange,
    FaultSpec,
    FlipModel,
    RELIABLE_SPEC,
    flip_probability,
    hamming_distance,
    inject_word,
    to_signed16,
    to_signed32,
)
from efid.fault.rng import RNG_ALGORITHM_ID, RngStream, derive_stream

__all__ = [
    'BitRange',
    'FaultSpec',
    'FlipModel',
    'RELIABLE_SPEC',
    'flip_probability',
    'hamming_distance',
    'inject_word',
    'to_signed16',
    'to_signed32',
    'RNG_ALGORITHM_ID',
    'RngStream',
    'derive_stream',
]
