"""
4-bit ADPCM audio kernel

IMA-style step table with one leak so decoder state damaged by injected
errors recovers: the predictor decays toward silence. The Q8 step index
adapts with a single elastic add and is clamped back into the table.
Decoder stages map onto the regions:

    quantization    code -> dequantized difference magnitude
    reconstruction  predictor +/- difference, saturated to 16 bits
    predictor       leaky prediction of the next sample
    step_size       Q8 step-index adaptation

All region arithmetic is 16-bit. The step-table index is address arithmetic
and is clamped into the table, so this kernel never hard-fails.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from efid.alu.context import FidelityContext
from efid.codecs.bitstream import Bitstream, CodecId
from efid.codecs.media import PcmAudio
from efid.utils.exceptions import DecodeFailure, DimensionError, FailureKind
from efid.utils.logger import get_logger

logger = get_logger(__name__)

REGIONS = ("quantization", "step_size", "predictor", "reconstruction")

STEP_TABLE = (
    7, 8, 9, 10, 11, 12, 13, 14, 16, 17,
    19, 21, 23, 25, 28, 31, 34, 37, 41, 45,
    50, 55, 60, 66, 73, 80, 88, 97, 107, 118,
    130, 143, 157, 173, 190, 209, 230, 253, 279, 307,
    337, 371, 408, 449, 494, 544, 598, 658, 724, 796,
    876, 963, 1060, 1166, 1282, 1411, 1552, 1707, 1878, 2066,
    2272, 2499, 2749, 3024, 3327, 3660, 4026, 4428, 4871, 5358,
    5894, 6484, 7132, 7845, 8630, 9493, 10442, 11487, 12635, 13899,
    15289, 16818, 18500, 20350, 22385, 24623, 27086, 29794, 32767,
)
INDEX_TABLE = (-1, -1, -1, -1, 2, 4, 6, 8)

INDEX_FRAC_BITS = 8
INDEX_MAX = len(STEP_TABLE) - 1
INDEX_Q_MAX = INDEX_MAX << INDEX_FRAC_BITS
PREDICTOR_LEAK_SHIFT = 4

_ADAPT_Q = tuple(step << INDEX_FRAC_BITS for step in INDEX_TABLE)


@dataclass
class AdpcmState:
    predictor: int = 0
    index_q: int = 0

    @property
    def step(self) -> int:
        index = self.index_q >> INDEX_FRAC_BITS
        return STEP_TABLE[min(max(index, 0), INDEX_MAX)]


def decode_sample(code: int, state: AdpcmState, ctx: FidelityContext) -> int:
    """
    Run one codeword through the decoder stages, updating state in place

    Returns:
        The reconstructed sample
    """
    step = state.step

    ctx.enter_region("quantization")
    diffq = ctx.shr16(step, 3)
    if code & 4:
        diffq = ctx.add16(diffq, step)
    if code & 2:
        diffq = ctx.add16(diffq, ctx.shr16(step, 1))
    if code & 1:
        diffq = ctx.add16(diffq, ctx.shr16(step, 2))
    ctx.exit_region()

    ctx.enter_region("reconstruction")
    if code & 8:
        sample = ctx.sat_sub16(state.predictor, diffq)
    else:
        sample = ctx.sat_add16(state.predictor, diffq)
    ctx.exit_region()

    ctx.enter_region("predictor")
    state.predictor = ctx.sub16(sample, ctx.shr16(sample, PREDICTOR_LEAK_SHIFT))
    ctx.exit_region()

    ctx.enter_region("step_size")
    index_q = ctx.add16(state.index_q, _ADAPT_Q[code & 7])
    ctx.exit_region()
    state.index_q = min(max(index_q, 0), INDEX_Q_MAX)

    return sample


def quantize_difference(diff: int, step: int) -> int:
    """Choose the 4-bit code for a prediction error"""
    code = 0
    if diff < 0:
        code = 8
        diff = -diff
    if diff >= step:
        code |= 4
        diff -= step
    half = step >> 1
    if diff >= half:
        code |= 2
        diff -= half
    if diff >= step >> 2:
        code |= 1
    return code


def adpcm_encode(audio: PcmAudio) -> Bitstream:
    """
    Encode PCM audio to 4-bit codewords, two per byte (low nibble first)

    The encoder tracks the decoder's state through a reliable context so
    the two stay in lockstep.
    """
    if len(audio) == 0:
        raise DimensionError("Cannot encode empty audio")

    ctx = FidelityContext.reliable()
    state = AdpcmState()
    codes: List[int] = []
    for sample in audio.samples.tolist():
        code = quantize_difference(sample - state.predictor, state.step)
        decode_sample(code, state, ctx)
        codes.append(code)

    if len(codes) % 2:
        codes.append(0)
    payload = bytes(codes[i] | (codes[i + 1] << 4) for i in range(0, len(codes), 2))

    logger.debug("adpcm_encoded", samples=len(audio), payload_bytes=len(payload))
    return Bitstream(
        codec=CodecId.ADPCM,
        payload=payload,
        sample_rate=audio.sample_rate,
        sample_count=len(audio),
    )


def adpcm_decode(bitstream: Bitstream, ctx: FidelityContext) -> PcmAudio:
    """
    Decode ADPCM codewords under a fidelity context

    Raises:
        DecodeFailure: StreamExhausted if the payload is shorter than the
            header's sample count requires
    """
    bitstream.require(CodecId.ADPCM)
    payload = bitstream.payload
    count = bitstream.sample_count
    state = AdpcmState()
    out = np.empty(count, dtype=np.int16)

    for i in range(count):
        byte_index = i >> 1
        if byte_index >= len(payload):
            raise DecodeFailure(
                FailureKind.STREAM_EXHAUSTED, ctx.active_region, f"sample {i} of {count}"
            )
        byte = payload[byte_index]
        code = (byte >> 4) if i & 1 else (byte & 0x0F)
        out[i] = decode_sample(code, state, ctx)

    return PcmAudio(out, bitstream.sample_rate)
