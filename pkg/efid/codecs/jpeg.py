"""
Mini-JPEG image kernel

The reliable encoder codes Y at full resolution and the 4:2:0 chroma planes
decimated by a further 2x2 box filter. The decoder runs four regions:

    entropy_decode  DC magnitude reconstruction; code parsing is reliable
    dequantize      coefficient x quantization table
    idct            integer inverse DCT butterflies
    upsample        fancy (triangle) 2x chroma interpolation

The level shift, clamps and upsample descale are reliable integer math.
"""
from typing import List, Sequence, Tuple

import numpy as np

from efid.alu.context import FidelityContext
from efid.codecs.bitstream import BitReader, BitWriter, Bitstream, CodecId
from efid.codecs.entropy import CHROMA_TABLES, LUMA_TABLES, HuffmanTable, decode_block, encode_block
from efid.codecs.media import ImageYCbCr
from efid.codecs.transform import (
    BLOCK,
    CHROMA_QUANT,
    LUMA_QUANT,
    dequantize_zigzag,
    forward_dct,
    idct_8x8,
    pad_to_blocks,
    quantize,
    scaled_quant_table,
    to_blocks,
    to_zigzag,
)
from efid.utils.exceptions import DecodeFailure, DimensionError, FailureKind
from efid.utils.logger import get_logger

logger = get_logger(__name__)

REGIONS = ("entropy_decode", "dequantize", "idct", "upsample")

MACROBLOCK = 16

# upsampled samples are read through this table; anything outside it aborts
UPSAMPLE_TABLE_MIN = -256
UPSAMPLE_TABLE_MAX = 511
_UPSAMPLE_TABLE = [min(max(v, 0), 255) for v in range(UPSAMPLE_TABLE_MIN, UPSAMPLE_TABLE_MAX + 1)]


def check_dimensions(width: int, height: int) -> None:
    if width <= 0 or height <= 0 or width % MACROBLOCK or height % MACROBLOCK:
        raise DimensionError(
            f"Dimensions must be positive multiples of {MACROBLOCK}, got {width}x{height}"
        )


def decimate_chroma(plane: np.ndarray) -> np.ndarray:
    """2x2 box-filter decimation with rounding"""
    p = plane.astype(np.int32)
    total = p[0::2, 0::2] + p[1::2, 0::2] + p[0::2, 1::2] + p[1::2, 1::2]
    return ((total + 2) >> 2).astype(np.uint8)


def _coded_dimensions(width: int, height: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(rows, cols) of the coded Y plane and of each coded chroma plane"""
    return (height, width), (height // 4, width // 4)


def _encode_plane(
    writer: BitWriter,
    plane: np.ndarray,
    quant: Sequence[int],
    tables: Tuple[HuffmanTable, HuffmanTable],
) -> None:
    blocks = to_blocks(pad_to_blocks(plane).astype(np.int64) - 128)
    coeffs = quantize(forward_dct(blocks), quant)
    prev_dc = 0
    for block in coeffs:
        prev_dc = encode_block(writer, to_zigzag(block), prev_dc, tables)


def mini_jpeg_encode(image: ImageYCbCr, quality: int) -> Bitstream:
    """Reliable mini-JPEG encode"""
    check_dimensions(image.width, image.height)
    luma_quant = scaled_quant_table(LUMA_QUANT, quality)
    chroma_quant = scaled_quant_table(CHROMA_QUANT, quality)

    writer = BitWriter()
    _encode_plane(writer, image.y, luma_quant, LUMA_TABLES)
    _encode_plane(writer, decimate_chroma(image.cb), chroma_quant, CHROMA_TABLES)
    _encode_plane(writer, decimate_chroma(image.cr), chroma_quant, CHROMA_TABLES)
    payload = writer.getvalue()

    logger.debug(
        "mini_jpeg_encoded",
        width=image.width,
        height=image.height,
        quality=quality,
        payload_bytes=len(payload),
    )
    return Bitstream(
        codec=CodecId.MINI_JPEG,
        payload=payload,
        quality=quality,
        width=image.width,
        height=image.height,
        frame_count=1,
    )


def _decode_plane(
    reader: BitReader,
    ctx: FidelityContext,
    rows: int,
    cols: int,
    quant: Sequence[int],
    tables: Tuple[HuffmanTable, HuffmanTable],
) -> np.ndarray:
    padded_rows = rows + (-rows % BLOCK)
    padded_cols = cols + (-cols % BLOCK)
    plane = np.empty((padded_rows, padded_cols), dtype=np.uint8)
    prev_dc = 0
    for top in range(0, padded_rows, BLOCK):
        for left in range(0, padded_cols, BLOCK):
            with ctx.region("entropy_decode"):
                zigzag, prev_dc = decode_block(reader, ctx, tables, prev_dc)
            with ctx.region("dequantize"):
                natural = dequantize_zigzag(zigzag, quant, ctx)
            with ctx.region("idct"):
                spatial = idct_8x8(natural, ctx)
            pixels = [min(max(s + 128, 0), 255) for s in spatial]
            plane[top:top + BLOCK, left:left + BLOCK] = np.asarray(pixels, dtype=np.uint8).reshape(
                BLOCK, BLOCK
            )
    return plane[:rows, :cols]


def upsample_h2v2(plane: np.ndarray, ctx: FidelityContext) -> np.ndarray:
    """
    Fancy 2x2 chroma upsampling (3/4, 1/4 triangle filter)

    Raises:
        DecodeFailure: IndexOutOfRange when a corrupted sample falls outside
            the saturation table
    """
    rows, cols = plane.shape
    src: List[List[int]] = plane.astype(np.int32).tolist()
    out = np.empty((rows * 2, cols * 2), dtype=np.uint8)
    add, mul = ctx.add, ctx.mul
    table = _UPSAMPLE_TABLE
    offset = -UPSAMPLE_TABLE_MIN
    size = len(table)

    def lookup(value: int) -> int:
        index = value + offset
        if not 0 <= index < size:
            raise DecodeFailure(FailureKind.INDEX_OUT_OF_RANGE, "upsample", f"sample {value}")
        return table[index]

    with ctx.region("upsample"):
        for r in range(rows):
            near = src[r]
            for half, far_row in ((0, max(r - 1, 0)), (1, min(r + 1, rows - 1))):
                far = src[far_row]
                colsum = [add(mul(3, near[c]), far[c]) for c in range(cols)]
                line = []
                for c in range(cols):
                    this = mul(3, colsum[c])
                    left = colsum[c - 1] if c > 0 else colsum[c]
                    right = colsum[c + 1] if c < cols - 1 else colsum[c]
                    line.append(lookup(add(add(this, left), 8) >> 4))
                    line.append(lookup(add(add(this, right), 7) >> 4))
                out[2 * r + half] = line
    return out


def mini_jpeg_decode(bitstream: Bitstream, ctx: FidelityContext) -> ImageYCbCr:
    """
    Decode a mini-JPEG bitstream under a fidelity context

    Raises:
        DecodeFailure: on invalid codes, coefficient overruns, exhausted
            payload or out-of-table upsampled samples
    """
    bitstream.require(CodecId.MINI_JPEG)
    check_dimensions(bitstream.width, bitstream.height)
    luma_quant = scaled_quant_table(LUMA_QUANT, bitstream.quality)
    chroma_quant = scaled_quant_table(CHROMA_QUANT, bitstream.quality)
    (y_rows, y_cols), (c_rows, c_cols) = _coded_dimensions(bitstream.width, bitstream.height)

    reader = BitReader(bitstream.payload, "entropy_decode")
    y = _decode_plane(reader, ctx, y_rows, y_cols, luma_quant, LUMA_TABLES)
    cb = _decode_plane(reader, ctx, c_rows, c_cols, chroma_quant, CHROMA_TABLES)
    cr = _decode_plane(reader, ctx, c_rows, c_cols, chroma_quant, CHROMA_TABLES)

    return ImageYCbCr(y, upsample_h2v2(cb, ctx), upsample_h2v2(cr, ctx))
