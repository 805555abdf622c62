"""
Bitstream container and bit-level readers/writers

Header layout (little-endian, 28 bytes):

    magic "EFC1" | version u8 | codec u8 | quality u8 | flags u8 |
    sample_rate u32 | sample_count u32 | width u16 | height u16 |
    frame_count u16 | fps u16 | payload_len u32
"""
import struct
from dataclasses import dataclass
from enum import IntEnum

from efid.utils.exceptions import BitstreamError, DecodeFailure, FailureKind

MAGIC = b"EFC1"
VERSION = 1

_HEADER = struct.Struct("<4sBBBBIIHHHHI")
HEADER_SIZE = _HEADER.size


class CodecId(IntEnum):
    ADPCM = 1
    MINI_JPEG = 2
    MINI_VIDEO = 3


@dataclass(frozen=True)
class Bitstream:
    """Header fields plus entropy-coded payload"""

    codec: CodecId
    payload: bytes
    quality: int = 0
    flags: int = 0
    sample_rate: int = 0
    sample_count: int = 0
    width: int = 0
    height: int = 0
    frame_count: int = 0
    fps: int = 0
    version: int = VERSION
    payload_len: int = -1

    def __post_init__(self):
        if self.payload_len < 0:
            object.__setattr__(self, "payload_len", len(self.payload))

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(
            MAGIC,
            self.version,
            int(self.codec),
            self.quality,
            self.flags,
            self.sample_rate,
            self.sample_count,
            self.width,
            self.height,
            self.frame_count,
            self.fps,
            self.payload_len,
        )
        return header + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstream":
        """
        Parse and verify a serialized bitstream

        A payload shorter than the header declares is kept as-is; decoders
        report it as StreamExhausted when they run past its end.
        """
        if len(data) < HEADER_SIZE:
            raise BitstreamError(f"Bitstream too short for header: {len(data)} bytes")
        (
            magic,
            version,
            codec,
            quality,
            flags,
            sample_rate,
            sample_count,
            width,
            height,
            frame_count,
            fps,
            payload_len,
        ) = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise BitstreamError(f"Bad magic {magic!r}, expected {MAGIC!r}")
        if version != VERSION:
            raise BitstreamError(f"Unsupported bitstream version {version}")
        try:
            codec_id = CodecId(codec)
        except ValueError:
            raise BitstreamError(f"Unknown codec id {codec}") from None
        return cls(
            codec=codec_id,
            payload=bytes(data[HEADER_SIZE:HEADER_SIZE + payload_len]),
            quality=quality,
            flags=flags,
            sample_rate=sample_rate,
            sample_count=sample_count,
            width=width,
            height=height,
            frame_count=frame_count,
            fps=fps,
            version=version,
            payload_len=payload_len,
        )

    def require(self, codec: CodecId) -> None:
        """Verify the header before decoding"""
        if self.version != VERSION:
            raise BitstreamError(f"Unsupported bitstream version {self.version}")
        if self.codec != codec:
            raise BitstreamError(f"Bitstream holds {self.codec.name}, expected {codec.name}")


class BitWriter:
    """MSB-first bit packer"""

    def __init__(self):
        self._bytes = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | (value & ((1 << nbits) - 1))
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            self._bytes.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def write_code(self, code: int, length: int) -> None:
        self.write(code, length)

    def getvalue(self) -> bytes:
        """Bytes written so far, the last one zero-padded"""
        if self._nbits:
            return bytes(self._bytes) + bytes([(self._acc << (8 - self._nbits)) & 0xFF])
        return bytes(self._bytes)


class BitReader:
    """MSB-first bit reader that reports exhaustion as a decode failure"""

    def __init__(self, data: bytes, location: str):
        self._data = data
        self._limit = len(data) * 8
        self._pos = 0
        self.location = location

    @property
    def position(self) -> int:
        return self._pos

    def read_bit(self) -> int:
        pos = self._pos
        if pos >= self._limit:
            raise DecodeFailure(FailureKind.STREAM_EXHAUSTED, self.location, f"bit {pos}")
        self._pos = pos + 1
        return (self._data[pos >> 3] >> (7 - (pos & 7))) & 1

    def read_bits(self, nbits: int) -> int:
        value = 0
        for _ in range(nbits):
            value = (value << 1) | self.read_bit()
        return value
