"""
Unit Tests for the Bitstream Container (efid/codecs/bitstream.py)

Tests header serialization, verification and MSB-first bit packing
"""

import pytest

from efid.codecs.bitstream import HEADER_SIZE, MAGIC, BitReader, BitWriter, Bitstream, CodecId
from efid.utils.exceptions import BitstreamError, DecodeFailure, FailureKind


@pytest.fixture
def sample_bitstream():
    return Bitstream(
        codec=CodecId.MINI_VIDEO,
        payload=b"\x12\x34\x56",
        quality=75,
        width=32,
        height=48,
        frame_count=8,
        fps=15,
    )


class TestHeader:
    """Test the 28-byte little-endian header"""

    def test_header_layout(self, sample_bitstream):
        """Test header size, magic and payload placement"""
        data = sample_bitstream.to_bytes()

        assert HEADER_SIZE == 28
        assert data[:4] == MAGIC
        assert data[4] == 1
        assert data[5] == int(CodecId.MINI_VIDEO)
        assert data[-3:] == b"\x12\x34\x56"
        assert len(data) == HEADER_SIZE + 3

    def test_parse_restores_fields(self, sample_bitstream):
        """Test that parsing recovers every header field"""
        parsed = Bitstream.from_bytes(sample_bitstream.to_bytes())

        assert parsed == sample_bitstream
        assert parsed.payload_len == 3

    def test_bad_magic(self, sample_bitstream):
        """Test that a wrong magic is rejected"""
        data = b"JPEG" + sample_bitstream.to_bytes()[4:]

        with pytest.raises(BitstreamError, match="magic"):
            Bitstream.from_bytes(data)

    def test_bad_version(self, sample_bitstream):
        """Test that an unknown version is rejected"""
        data = bytearray(sample_bitstream.to_bytes())
        data[4] = 9

        with pytest.raises(BitstreamError, match="version"):
            Bitstream.from_bytes(bytes(data))

    def test_unknown_codec(self, sample_bitstream):
        """Test that an unknown codec id is rejected"""
        data = bytearray(sample_bitstream.to_bytes())
        data[5] = 77

        with pytest.raises(BitstreamError, match="codec"):
            Bitstream.from_bytes(bytes(data))

    def test_short_input(self):
        """Test that fewer bytes than a header are rejected"""
        with pytest.raises(BitstreamError):
            Bitstream.from_bytes(MAGIC + b"\x01")

    def test_truncated_payload_kept(self, sample_bitstream):
        """Test that a short payload parses and keeps its declared length"""
        parsed = Bitstream.from_bytes(sample_bitstream.to_bytes()[:-2])

        assert parsed.payload == b"\x12"
        assert parsed.payload_len == 3

    def test_require_checks_codec(self, sample_bitstream):
        """Test that decoding with the wrong kernel is rejected"""
        with pytest.raises(BitstreamError):
            sample_bitstream.require(CodecId.ADPCM)


class TestBitPacking:
    """Test BitWriter/BitReader"""

    def test_msb_first_with_zero_padding(self):
        """Test packing order and final-byte padding"""
        writer = BitWriter()
        writer.write(0b101, 3)
        writer.write(0b1, 1)
        writer.write(0b11, 2)

        assert writer.getvalue() == bytes([0b10111100])

    def test_reader_reads_back_fields(self):
        """Test reading mixed-width fields"""
        writer = BitWriter()
        for value, width in ((5, 3), (0, 1), (1023, 10), (2, 2)):
            writer.write(value, width)
        reader = BitReader(writer.getvalue(), "entropy_decode")

        assert [reader.read_bits(w) for w in (3, 1, 10, 2)] == [5, 0, 1023, 2]
        assert reader.position == 16

    def test_reader_exhaustion_is_decode_failure(self):
        """Test that reading past the end reports StreamExhausted at the reader's region"""
        reader = BitReader(b"\xff", "huffman_decode")
        reader.read_bits(8)

        with pytest.raises(DecodeFailure) as exc_info:
            reader.read_bit()

        assert exc_info.value.kind is FailureKind.STREAM_EXHAUSTED
        assert exc_info.value.location == "huffman_decode"
