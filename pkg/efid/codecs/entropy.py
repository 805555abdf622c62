"""
Canonical Huffman coding of 8x8 coefficient blocks

Baseline DC/AC tables (luma and chroma) with run-length + magnitude-category
symbols. Encoding is reliable. Decoding parses codewords, sign-extends
magnitude bits and tracks the coefficient index on reliable integers; only
DC magnitude reconstruction (prediction plus differential) runs through
the active fidelity region.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from efid.alu.context import FidelityContext
from efid.codecs.bitstream import BitReader, BitWriter
from efid.utils.exceptions import DecodeFailure, FailureKind

COEF_LIMIT = 2047
AC_LIMIT = 1023
MAX_CODE_LENGTH = 16
EOB = 0x00
ZRL = 0xF0

DC_LUMA_BITS = (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0)
DC_LUMA_VALUES = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)
DC_CHROMA_BITS = (0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0)
DC_CHROMA_VALUES = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)
AC_LUMA_BITS = (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7D)
AC_LUMA_VALUES = (
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08, 0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7,
    0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5,
    0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
    0xF9, 0xFA,
)
AC_CHROMA_BITS = (0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77)
AC_CHROMA_VALUES = (
    0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41, 0x51, 0x07, 0x61, 0x71,
    0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91, 0xA1, 0xB1, 0xC1, 0x09, 0x23, 0x33, 0x52, 0xF0,
    0x15, 0x62, 0x72, 0xD1, 0x0A, 0x16, 0x24, 0x34, 0xE1, 0x25, 0xF1, 0x17, 0x18, 0x19, 0x1A, 0x26,
    0x27, 0x28, 0x29, 0x2A, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48,
    0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68,
    0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
    0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5,
    0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3,
    0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA,
    0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
    0xF9, 0xFA,
)


@dataclass(frozen=True)
class HuffmanTable:
    """Canonical code built from per-length counts and symbol order"""

    name: str
    bits: Tuple[int, ...]
    values: Tuple[int, ...]
    codes: Dict[int, Tuple[int, int]] = field(init=False, repr=False)
    mincode: Tuple[int, ...] = field(init=False, repr=False)
    maxcode: Tuple[int, ...] = field(init=False, repr=False)
    valptr: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        codes: Dict[int, Tuple[int, int]] = {}
        mincode = [0] * (MAX_CODE_LENGTH + 1)
        maxcode = [-1] * (MAX_CODE_LENGTH + 1)
        valptr = [0] * (MAX_CODE_LENGTH + 1)
        code = 0
        k = 0
        for length in range(1, MAX_CODE_LENGTH + 1):
            count = self.bits[length - 1]
            if count:
                valptr[length] = k
                mincode[length] = code
                for _ in range(count):
                    codes[self.values[k]] = (code, length)
                    k += 1
                    code += 1
                maxcode[length] = code - 1
            code <<= 1
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "mincode", tuple(mincode))
        object.__setattr__(self, "maxcode", tuple(maxcode))
        object.__setattr__(self, "valptr", tuple(valptr))


DC_LUMA = HuffmanTable("dc_luma", DC_LUMA_BITS, DC_LUMA_VALUES)
DC_CHROMA = HuffmanTable("dc_chroma", DC_CHROMA_BITS, DC_CHROMA_VALUES)
AC_LUMA = HuffmanTable("ac_luma", AC_LUMA_BITS, AC_LUMA_VALUES)
AC_CHROMA = HuffmanTable("ac_chroma", AC_CHROMA_BITS, AC_CHROMA_VALUES)

LUMA_TABLES = (DC_LUMA, AC_LUMA)
CHROMA_TABLES = (DC_CHROMA, AC_CHROMA)


def category(value: int) -> int:
    """Magnitude category (bit length of |value|)"""
    return abs(value).bit_length()


def magnitude_bits(value: int, size: int) -> int:
    """Additional bits for a value of the given category"""
    return value if value >= 0 else value + (1 << size) - 1


def encode_block(
    writer: BitWriter,
    zigzag: Sequence[int],
    prev_dc: int,
    tables: Tuple[HuffmanTable, HuffmanTable],
) -> int:
    """
    Entropy-code one block of zigzag-ordered coefficients

    Returns:
        The block's DC value, the predictor for the next block
    """
    dc_table, ac_table = tables
    dc = zigzag[0]
    diff = dc - prev_dc
    size = category(diff)
    writer.write_code(*dc_table.codes[size])
    writer.write(magnitude_bits(diff, size), size)

    last = 0
    for k in range(63, 0, -1):
        if zigzag[k]:
            last = k
            break

    run = 0
    for k in range(1, last + 1):
        value = zigzag[k]
        if value == 0:
            run += 1
            continue
        while run > 15:
            writer.write_code(*ac_table.codes[ZRL])
            run -= 16
        size = category(value)
        writer.write_code(*ac_table.codes[(run << 4) | size])
        writer.write(magnitude_bits(value, size), size)
        run = 0
    if last < 63:
        writer.write_code(*ac_table.codes[EOB])
    return dc


def decode_symbol(reader: BitReader, table: HuffmanTable, ctx: FidelityContext) -> int:
    """Decode one Huffman symbol; code bits are never elastic"""
    code = 0
    maxcode = table.maxcode
    for length in range(1, MAX_CODE_LENGTH + 1):
        code = (code << 1) | reader.read_bit()
        if code <= maxcode[length]:
            return table.values[table.valptr[length] + code - table.mincode[length]]
    raise DecodeFailure(
        FailureKind.INVALID_CODE, reader.location, f"{table.name} code longer than 16 bits"
    )


def receive_extend(reader: BitReader, size: int) -> int:
    """Read `size` magnitude bits and sign-extend them"""
    if size == 0:
        return 0
    raw = reader.read_bits(size)
    if raw < (1 << (size - 1)):
        return raw - (1 << size) + 1
    return raw


def decode_block(
    reader: BitReader,
    ctx: FidelityContext,
    tables: Tuple[HuffmanTable, HuffmanTable],
    prev_dc: int,
) -> Tuple[List[int], int]:
    """
    Decode one block into zigzag-ordered coefficients

    Returns:
        (coefficients, dc) where dc is the predictor for the next block
    """
    dc_table, ac_table = tables
    location = reader.location
    coeffs = [0] * 64

    size = decode_symbol(reader, dc_table, ctx)
    if size > 11:
        raise DecodeFailure(FailureKind.INVALID_CODE, location, f"DC category {size}")
    dc = ctx.add(prev_dc, receive_extend(reader, size))
    if abs(dc) > COEF_LIMIT:
        raise DecodeFailure(FailureKind.LIMIT_EXCEEDED, location, f"DC {dc}")
    coeffs[0] = dc

    k = 1
    while k < 64:
        symbol = decode_symbol(reader, ac_table, ctx)
        run = symbol >> 4
        size = symbol & 15
        if size == 0:
            if run == 15:
                k += 16
                continue
            break
        k += run
        if not 1 <= k <= 63:
            raise DecodeFailure(FailureKind.INDEX_OUT_OF_RANGE, location, f"coefficient {k}")
        value = receive_extend(reader, size)
        if abs(value) > COEF_LIMIT:
            raise DecodeFailure(FailureKind.LIMIT_EXCEEDED, location, f"AC {value}")
        coeffs[k] = value
        k += 1
    return coeffs, dc
