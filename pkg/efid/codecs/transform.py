"""
Fixed-point 8x8 transforms, quantization tables and block helpers

The forward DCT is reliable numpy integer math (basis scaled by 2**11). The
inverse DCT is the Chen-Wang integer butterfly with every butterfly add,
subtract, multiply and shift routed through the fidelity context. Pass
descales and the all-zero shortcuts are plain integer shifts.
"""
from typing import List, Sequence

import numpy as np

from efid.alu.context import FidelityContext
from efid.codecs.entropy import AC_LIMIT, COEF_LIMIT
from efid.fault.model import to_signed32
from efid.utils.exceptions import ConfigurationError

BLOCK = 8
DCT_SCALE_BITS = 11

ZIGZAG = (
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
)

LUMA_QUANT = (
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
)

CHROMA_QUANT = (
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
)

# 2048 * sqrt(2) * cos(k * pi / 16)
W1 = 2841
W2 = 2676
W3 = 2408
W5 = 1609
W6 = 1108
W7 = 565
W1PW7 = W1 + W7
W1MW7 = W1 - W7
W2PW6 = W2 + W6
W2MW6 = W2 - W6
W3PW5 = W3 + W5
W3MW5 = W3 - W5
R2 = 181  # 256 / sqrt(2)


def _dct_basis() -> np.ndarray:
    u = np.arange(BLOCK).reshape(-1, 1)
    x = np.arange(BLOCK).reshape(1, -1)
    scale = np.where(u == 0, 1 / np.sqrt(2), 1.0) / 2
    basis = scale * np.cos((2 * x + 1) * u * np.pi / 16)
    return np.round(basis * (1 << DCT_SCALE_BITS)).astype(np.int64)


DCT_BASIS = _dct_basis()


def scaled_quant_table(base: Sequence[int], quality: int) -> List[int]:
    """Scale a base quantization table by the IJG quality formula"""
    if not 1 <= quality <= 100:
        raise ConfigurationError(f"Quality must be in [1, 100], got {quality}")
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    return [min(max((q * scale + 50) // 100, 1), 255) for q in base]


def to_blocks(plane: np.ndarray) -> np.ndarray:
    """Split a plane whose sides are multiples of 8 into raster-ordered 8x8 blocks"""
    height, width = plane.shape
    return (
        plane.reshape(height // BLOCK, BLOCK, width // BLOCK, BLOCK)
        .swapaxes(1, 2)
        .reshape(-1, BLOCK, BLOCK)
    )


def from_blocks(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    """Inverse of to_blocks"""
    return (
        blocks.reshape(height // BLOCK, width // BLOCK, BLOCK, BLOCK)
        .swapaxes(1, 2)
        .reshape(height, width)
    )


def pad_to_blocks(plane: np.ndarray) -> np.ndarray:
    """Pad a plane to multiples of 8 by edge replication"""
    height, width = plane.shape
    pad_h = -height % BLOCK
    pad_w = -width % BLOCK
    if not pad_h and not pad_w:
        return plane
    return np.pad(plane, ((0, pad_h), (0, pad_w)), mode="edge")


def forward_dct(blocks: np.ndarray) -> np.ndarray:
    """
    Fixed-point 2-D DCT of level-shifted blocks

    Args:
        blocks: (N, 8, 8) integer samples already centred on zero

    Returns:
        (N, 8, 8) int64 coefficients
    """
    x = blocks.astype(np.int64)
    product = DCT_BASIS @ x @ DCT_BASIS.T
    return (product + (1 << (2 * DCT_SCALE_BITS - 1))) >> (2 * DCT_SCALE_BITS)


def quantize(coeffs: np.ndarray, table: Sequence[int]) -> np.ndarray:
    """Round-half-away quantization, clipped to the entropy coder's ranges"""
    q = np.asarray(table, dtype=np.int64).reshape(BLOCK, BLOCK)
    magnitude = (np.abs(coeffs) + q // 2) // q
    quantized = np.sign(coeffs) * magnitude
    quantized = np.clip(quantized, -AC_LIMIT, AC_LIMIT)
    dc = np.sign(coeffs[:, 0, 0]) * ((np.abs(coeffs[:, 0, 0]) + q[0, 0] // 2) // q[0, 0])
    quantized[:, 0, 0] = np.clip(dc, -COEF_LIMIT, COEF_LIMIT)
    return quantized


def to_zigzag(block: np.ndarray) -> List[int]:
    flat = block.reshape(-1).tolist()
    return [flat[i] for i in ZIGZAG]


def dequantize_zigzag(zigzag: Sequence[int], table: Sequence[int], ctx: FidelityContext) -> List[int]:
    """Dequantize nonzero zigzag coefficients into natural order"""
    natural = [0] * 64
    mul = ctx.mul
    for k, value in enumerate(zigzag):
        if value:
            index = ZIGZAG[k]
            natural[index] = mul(value, table[index])
    return natural


def idct_8x8(coeffs: Sequence[int], ctx: FidelityContext, frac_bits: int = 0) -> List[int]:
    """
    Integer inverse DCT of one block in natural order

    Args:
        frac_bits: fractional bits kept in the output, at most 6

    Returns:
        64 spatial samples scaled by 2**frac_bits, not yet level-shifted
        or clamped
    """
    if not 0 <= frac_bits <= 6:
        raise ConfigurationError(f"frac_bits must be in [0, 6], got {frac_bits}")
    col_shift = 14 - frac_bits
    dc_shift = 6 - frac_bits
    add, sub, mul, shl, shr = ctx.add, ctx.sub, ctx.mul, ctx.shl, ctx.shr
    blk = list(coeffs)

    for row in range(0, 64, 8):
        if not (blk[row + 1] or blk[row + 2] or blk[row + 3] or blk[row + 4]
                or blk[row + 5] or blk[row + 6] or blk[row + 7]):
            dc = to_signed32(blk[row] << 3)
            blk[row:row + 8] = [dc] * 8
            continue

        x0 = add(shl(blk[row], 11), 128)
        x1 = shl(blk[row + 4], 11)
        x2 = blk[row + 6]
        x3 = blk[row + 2]
        x4 = blk[row + 1]
        x5 = blk[row + 7]
        x6 = blk[row + 5]
        x7 = blk[row + 3]

        x8 = mul(W7, add(x4, x5))
        x4 = add(x8, mul(W1MW7, x4))
        x5 = sub(x8, mul(W1PW7, x5))
        x8 = mul(W3, add(x6, x7))
        x6 = sub(x8, mul(W3MW5, x6))
        x7 = sub(x8, mul(W3PW5, x7))

        x8 = add(x0, x1)
        x0 = sub(x0, x1)
        x1 = mul(W6, add(x3, x2))
        x2 = sub(x1, mul(W2PW6, x2))
        x3 = add(x1, mul(W2MW6, x3))
        x1 = add(x4, x6)
        x4 = sub(x4, x6)
        x6 = add(x5, x7)
        x5 = sub(x5, x7)

        x7 = add(x8, x3)
        x8 = sub(x8, x3)
        x3 = add(x0, x2)
        x0 = sub(x0, x2)
        x2 = shr(add(mul(R2, add(x4, x5)), 128), 8)
        x4 = shr(add(mul(R2, sub(x4, x5)), 128), 8)

        blk[row] = add(x7, x1) >> 8
        blk[row + 1] = add(x3, x2) >> 8
        blk[row + 2] = add(x0, x4) >> 8
        blk[row + 3] = add(x8, x6) >> 8
        blk[row + 4] = sub(x8, x6) >> 8
        blk[row + 5] = sub(x0, x4) >> 8
        blk[row + 6] = sub(x3, x2) >> 8
        blk[row + 7] = sub(x7, x1) >> 8

    for col in range(8):
        if not (blk[8 + col] or blk[16 + col] or blk[24 + col] or blk[32 + col]
                or blk[40 + col] or blk[48 + col] or blk[56 + col]):
            value = add(blk[col], 32) >> dc_shift
            for row in range(0, 64, 8):
                blk[row + col] = value
            continue

        y0 = add(shl(blk[col], 8), 8192)
        y1 = shl(blk[32 + col], 8)
        y2 = blk[48 + col]
        y3 = blk[16 + col]
        y4 = blk[8 + col]
        y5 = blk[56 + col]
        y6 = blk[40 + col]
        y7 = blk[24 + col]

        y8 = add(mul(W7, add(y4, y5)), 4)
        y4 = shr(add(y8, mul(W1MW7, y4)), 3)
        y5 = shr(sub(y8, mul(W1PW7, y5)), 3)
        y8 = add(mul(W3, add(y6, y7)), 4)
        y6 = shr(sub(y8, mul(W3MW5, y6)), 3)
        y7 = shr(sub(y8, mul(W3PW5, y7)), 3)

        y8 = add(y0, y1)
        y0 = sub(y0, y1)
        y1 = add(mul(W6, add(y3, y2)), 4)
        y2 = shr(sub(y1, mul(W2PW6, y2)), 3)
        y3 = shr(add(y1, mul(W2MW6, y3)), 3)
        y1 = add(y4, y6)
        y4 = sub(y4, y6)
        y6 = add(y5, y7)
        y5 = sub(y5, y7)

        y7 = add(y8, y3)
        y8 = sub(y8, y3)
        y3 = add(y0, y2)
        y0 = sub(y0, y2)
        y2 = shr(add(mul(R2, add(y4, y5)), 128), 8)
        y4 = shr(add(mul(R2, sub(y4, y5)), 128), 8)

        blk[col] = add(y7, y1) >> col_shift
        blk[8 + col] = add(y3, y2) >> col_shift
        blk[16 + col] = add(y0, y4) >> col_shift
        blk[24 + col] = add(y8, y6) >> col_shift
        blk[32 + col] = sub(y8, y6) >> col_shift
        blk[40 + col] = sub(y0, y4) >> col_shift
        blk[48 + col] = sub(y3, y2) >> col_shift
        blk[56 + col] = sub(y7, y1) >> col_shift

    return blk
