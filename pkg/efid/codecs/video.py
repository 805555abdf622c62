"""
Mini motion-compensated video kernel

Frame 0 is intra coded (prediction = mid-grey), every later frame is
predicted from the previous reconstructed frame with one integer motion
vector per 16x16 macroblock. Residual blocks (4 Y, 1 Cb, 1 Cr per
macroblock) are coded with the mini-JPEG transform and entropy tables.

Decoder regions:

    huffman_decode       motion-vector and DC magnitudes, coefficient
                         dequantization; code parsing is reliable
    motion_compensation  reference block addresses (bounds-checked)
    idct                 residual inverse DCT with RECON_FRAC_BITS
                         fractional bits, saturated to [-256, 256)
    reconstruction       prediction + residual, then a saturation table

A prefix longer than MAX_GOLOMB_PREFIX zeros is an invalid code.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from efid.alu.context import FidelityContext
from efid.codecs.bitstream import BitReader, BitWriter, Bitstream, CodecId
from efid.codecs.entropy import CHROMA_TABLES, LUMA_TABLES, decode_block, encode_block
from efid.codecs.jpeg import MACROBLOCK, check_dimensions
from efid.codecs.media import ImageYCbCr, VideoSeq
from efid.codecs.transform import (
    CHROMA_QUANT,
    LUMA_QUANT,
    dequantize_zigzag,
    forward_dct,
    idct_8x8,
    quantize,
    scaled_quant_table,
    to_zigzag,
)
from efid.utils.exceptions import DecodeFailure, FailureKind
from efid.utils.logger import get_logger

logger = get_logger(__name__)

REGIONS = ("huffman_decode", "motion_compensation", "idct", "reconstruction")

SEARCH_RANGE = 7
MV_LIMIT = 15
INTRA_PREDICTION = 128
MAX_GOLOMB_PREFIX = 16

RECON_FRAC_BITS = 3
RESIDUAL_MIN = -256 << RECON_FRAC_BITS
RESIDUAL_MAX = (256 << RECON_FRAC_BITS) - 1
RECON_TABLE_MIN = -256
RECON_TABLE_MAX = 511
_RECON_TABLE = [min(max(v, 0), 255) for v in range(RECON_TABLE_MIN, RECON_TABLE_MAX + 1)]

# (plane, row offset, col offset) of the six blocks in a macroblock;
# chroma offsets are in chroma samples
BLOCK_LAYOUT = ((0, 0, 0), (0, 0, 8), (0, 8, 0), (0, 8, 8), (1, 0, 0), (2, 0, 0))

MotionVector = Tuple[int, int]


def write_signed_golomb(writer: BitWriter, value: int) -> None:
    """Signed Exp-Golomb code"""
    mapped = 2 * value - 1 if value > 0 else -2 * value
    length = (mapped + 1).bit_length()
    writer.write(0, length - 1)
    writer.write(mapped + 1, length)


def read_signed_golomb(reader: BitReader, ctx: FidelityContext) -> int:
    """
    Decode a signed Exp-Golomb code

    Prefix and suffix bits are parsed reliably; the magnitude is one
    elastic add and odd code numbers are positive.
    """
    zeros = 0
    while reader.read_bit() == 0:
        zeros += 1
        if zeros > MAX_GOLOMB_PREFIX:
            raise DecodeFailure(FailureKind.INVALID_CODE, reader.location, f"Golomb prefix {zeros}")
    value = 1
    for _ in range(zeros):
        value = (value << 1) | reader.read_bit()
    code_num = value - 1
    magnitude = ctx.add(code_num >> 1, code_num & 1)
    return magnitude if code_num & 1 else -magnitude


def _quant_tables(quality: int) -> Tuple[List[int], List[int]]:
    return scaled_quant_table(LUMA_QUANT, quality), scaled_quant_table(CHROMA_QUANT, quality)


def _reconstruct_block(
    prediction: List[int], natural: Optional[List[int]], ctx: FidelityContext
) -> List[int]:
    """Add a decoded residual to its prediction"""
    if natural is None:
        return prediction
    with ctx.region("idct"):
        spatial = idct_8x8(natural, ctx, RECON_FRAC_BITS)
    residual = [min(max(v, RESIDUAL_MIN), RESIDUAL_MAX) for v in spatial]
    with ctx.region("reconstruction"):
        add = ctx.add
        offset = -RECON_TABLE_MIN
        size = len(_RECON_TABLE)
        out = []
        for p, r in zip(prediction, residual):
            index = (add(p << RECON_FRAC_BITS, r) >> RECON_FRAC_BITS) + offset
            if not 0 <= index < size:
                raise DecodeFailure(
                    FailureKind.INDEX_OUT_OF_RANGE, "reconstruction", f"sample {index - offset}"
                )
            out.append(_RECON_TABLE[index])
    return out


def _block_predictions(
    reference: Optional[Sequence[np.ndarray]], top: int, left: int, mv: MotionVector
) -> List[List[int]]:
    """Six prediction blocks, flattened; `reference` None means intra"""
    if reference is None:
        return [[INTRA_PREDICTION] * 64 for _ in BLOCK_LAYOUT]
    mvx, mvy = mv
    return _slice_predictions(
        reference, top + mvy, left + mvx, (top >> 1) + (mvy >> 1), (left >> 1) + (mvx >> 1)
    )


def _store_blocks(planes: Sequence[np.ndarray], top: int, left: int, blocks: Sequence[List[int]]) -> None:
    for (plane, dy, dx), samples in zip(BLOCK_LAYOUT, blocks):
        row, col = (top, left) if plane == 0 else (top >> 1, left >> 1)
        planes[plane][row + dy:row + dy + 8, col + dx:col + dx + 8] = np.asarray(
            samples, dtype=np.uint8
        ).reshape(8, 8)


def estimate_motion(current: np.ndarray, reference: np.ndarray, top: int, left: int) -> MotionVector:
    """
    Full search within +/-SEARCH_RANGE for the lowest-SAD in-frame vector

    Ties prefer shorter vectors, then raster order.
    """
    height, width = reference.shape
    target = current[top:top + MACROBLOCK, left:left + MACROBLOCK].astype(np.int32)
    best = None
    for mvy in range(-SEARCH_RANGE, SEARCH_RANGE + 1):
        row = top + mvy
        if row < 0 or row + MACROBLOCK > height:
            continue
        for mvx in range(-SEARCH_RANGE, SEARCH_RANGE + 1):
            col = left + mvx
            if col < 0 or col + MACROBLOCK > width:
                continue
            candidate = reference[row:row + MACROBLOCK, col:col + MACROBLOCK].astype(np.int32)
            sad = int(np.abs(target - candidate).sum())
            key = (sad, abs(mvx) + abs(mvy), mvy, mvx)
            if best is None or key < best:
                best = key
    return best[3], best[2]


def mini_video_encode(video: VideoSeq, quality: int) -> Bitstream:
    """Reliable closed-loop encode: motion search runs on reconstructed frames"""
    check_dimensions(video.width, video.height)
    luma_quant, chroma_quant = _quant_tables(quality)
    ctx = FidelityContext.reliable()
    writer = BitWriter()
    reference: Optional[List[np.ndarray]] = None
    nonzero_vectors = 0

    for frame in video.frames:
        current = [plane.astype(np.int32) for plane in frame.planes()]
        recon = [np.empty_like(plane) for plane in frame.planes()]
        for top in range(0, video.height, MACROBLOCK):
            for left in range(0, video.width, MACROBLOCK):
                mv = (0, 0)
                if reference is not None:
                    mv = estimate_motion(current[0], reference[0], top, left)
                    write_signed_golomb(writer, mv[0])
                    write_signed_golomb(writer, mv[1])
                    nonzero_vectors += mv != (0, 0)
                predictions = _block_predictions(reference, top, left, mv)

                residuals = []
                for (plane, dy, dx), prediction in zip(BLOCK_LAYOUT, predictions):
                    row, col = (top, left) if plane == 0 else (top >> 1, left >> 1)
                    block = current[plane][row + dy:row + dy + 8, col + dx:col + dx + 8]
                    residuals.append(block - np.asarray(prediction, dtype=np.int32).reshape(8, 8))
                coeffs = forward_dct(np.stack(residuals))
                quantized = np.concatenate(
                    [quantize(coeffs[:4], luma_quant), quantize(coeffs[4:], chroma_quant)]
                )
                zigzags = [to_zigzag(block) for block in quantized]

                cbp = 0
                for index, zigzag in enumerate(zigzags):
                    if any(zigzag):
                        cbp |= 32 >> index
                writer.write(cbp, 6)

                blocks = []
                for index, (zigzag, prediction) in enumerate(zip(zigzags, predictions)):
                    natural = None
                    if cbp & (32 >> index):
                        tables = LUMA_TABLES if index < 4 else CHROMA_TABLES
                        quant = luma_quant if index < 4 else chroma_quant
                        encode_block(writer, zigzag, 0, tables)
                        natural = dequantize_zigzag(zigzag, quant, ctx)
                    blocks.append(_reconstruct_block(prediction, natural, ctx))
                _store_blocks(recon, top, left, blocks)
        reference = [plane.astype(np.uint8) for plane in recon]

    payload = writer.getvalue()
    logger.debug(
        "mini_video_encoded",
        frames=len(video),
        quality=quality,
        nonzero_vectors=nonzero_vectors,
        payload_bytes=len(payload),
    )
    return Bitstream(
        codec=CodecId.MINI_VIDEO,
        payload=payload,
        quality=quality,
        width=video.width,
        height=video.height,
        frame_count=len(video),
        fps=video.fps,
    )


def _compensate(
    ctx: FidelityContext, top: int, left: int, mv: MotionVector, width: int, height: int
) -> Tuple[int, int, int, int]:
    """Elastic reference addresses for luma and chroma, bounds-checked"""
    mvx, mvy = mv
    with ctx.region("motion_compensation"):
        luma_col = ctx.add(left, mvx)
        luma_row = ctx.add(top, mvy)
        chroma_col = ctx.add(left >> 1, ctx.shr(mvx, 1))
        chroma_row = ctx.add(top >> 1, ctx.shr(mvy, 1))
    if not (0 <= luma_col <= width - MACROBLOCK and 0 <= luma_row <= height - MACROBLOCK):
        raise DecodeFailure(
            FailureKind.INDEX_OUT_OF_RANGE, "motion_compensation", f"luma ({luma_col}, {luma_row})"
        )
    half = MACROBLOCK // 2
    if not (0 <= chroma_col <= width // 2 - half and 0 <= chroma_row <= height // 2 - half):
        raise DecodeFailure(
            FailureKind.INDEX_OUT_OF_RANGE,
            "motion_compensation",
            f"chroma ({chroma_col}, {chroma_row})",
        )
    return luma_row, luma_col, chroma_row, chroma_col


def mini_video_decode(
    bitstream: Bitstream,
    ctx: FidelityContext,
    motion_vectors: Optional[List[MotionVector]] = None,
) -> VideoSeq:
    """
    Decode a mini-video bitstream under a fidelity context

    Args:
        bitstream: Encoded clip
        ctx: Fidelity context
        motion_vectors: If given, receives every decoded vector in order

    Raises:
        DecodeFailure: on invalid codes, out-of-frame references, vectors
            beyond the limit, exhausted payload or out-of-table samples
    """
    bitstream.require(CodecId.MINI_VIDEO)
    width, height = bitstream.width, bitstream.height
    check_dimensions(width, height)
    luma_quant, chroma_quant = _quant_tables(bitstream.quality)
    reader = BitReader(bitstream.payload, "huffman_decode")
    reference: Optional[List[np.ndarray]] = None
    frames = []

    for _ in range(bitstream.frame_count):
        recon = [
            np.empty((height, width), dtype=np.uint8),
            np.empty((height // 2, width // 2), dtype=np.uint8),
            np.empty((height // 2, width // 2), dtype=np.uint8),
        ]
        for top in range(0, height, MACROBLOCK):
            for left in range(0, width, MACROBLOCK):
                mv = (0, 0)
                naturals: List[Optional[List[int]]] = []
                with ctx.region("huffman_decode"):
                    if reference is not None:
                        mvx = read_signed_golomb(reader, ctx)
                        mvy = read_signed_golomb(reader, ctx)
                        if abs(mvx) > MV_LIMIT or abs(mvy) > MV_LIMIT:
                            raise DecodeFailure(
                                FailureKind.LIMIT_EXCEEDED, "huffman_decode", f"vector ({mvx}, {mvy})"
                            )
                        mv = (mvx, mvy)
                    cbp = reader.read_bits(6)
                    for index in range(len(BLOCK_LAYOUT)):
                        if cbp & (32 >> index):
                            tables = LUMA_TABLES if index < 4 else CHROMA_TABLES
                            quant = luma_quant if index < 4 else chroma_quant
                            zigzag, _ = decode_block(reader, ctx, tables, 0)
                            naturals.append(dequantize_zigzag(zigzag, quant, ctx))
                        else:
                            naturals.append(None)

                if reference is None:
                    predictions = _block_predictions(None, top, left, mv)
                else:
                    if motion_vectors is not None:
                        motion_vectors.append(mv)
                    luma_row, luma_col, chroma_row, chroma_col = _compensate(
                        ctx, top, left, mv, width, height
                    )
                    predictions = _slice_predictions(
                        reference, luma_row, luma_col, chroma_row, chroma_col
                    )

                blocks = [
                    _reconstruct_block(prediction, natural, ctx)
                    for prediction, natural in zip(predictions, naturals)
                ]
                _store_blocks(recon, top, left, blocks)

        frames.append(ImageYCbCr(*recon))
        reference = recon

    return VideoSeq(tuple(frames), fps=bitstream.fps)


def _slice_predictions(
    reference: Sequence[np.ndarray], luma_row: int, luma_col: int, chroma_row: int, chroma_col: int
) -> List[List[int]]:
    predictions = []
    for plane, dy, dx in BLOCK_LAYOUT:
        row, col = (luma_row, luma_col) if plane == 0 else (chroma_row, chroma_col)
        block = reference[plane][row + dy:row + dy + 8, col + dx:col + dx + 8]
        predictions.append(block.ravel().tolist())
    return predictions


def count_nonzero_vectors(bitstream: Bitstream) -> int:
    """Number of nonzero motion vectors in a reliably decoded clip"""
    vectors: List[MotionVector] = []
    mini_video_decode(bitstream, FidelityContext.reliable(), vectors)
    return sum(1 for mv in vectors if mv != (0, 0))
