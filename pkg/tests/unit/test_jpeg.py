"""
Unit Tests for the Mini-JPEG Kernel (efid/codecs/jpeg.py)
"""

from dataclasses import replace

import numpy as np
import pytest

from efid.codecs.jpeg import REGIONS, check_dimensions, decimate_chroma, mini_jpeg_decode, mini_jpeg_encode, upsample_h2v2
from efid.codecs.media import ImageYCbCr
from efid.corpus.generators import STANDARD_IMAGE, generate
from efid.fault.model import FaultSpec
from efid.metrics.quality import psnr
from efid.utils.exceptions import DecodeFailure, DimensionError, FailureKind


class TestHelpers:
    """Test chroma resampling and dimension checks"""

    def test_decimate_rounds(self):
        """Test 2x2 box averaging with rounding"""
        plane = np.array([[0, 1], [1, 1]], dtype=np.uint8)

        assert decimate_chroma(plane).tolist() == [[1]]

    def test_upsample_constant_plane(self, reliable_ctx):
        """Test that a flat plane upsamples to the same value"""
        out = upsample_h2v2(np.full((4, 4), 77, dtype=np.uint8), reliable_ctx)

        assert out.shape == (8, 8)
        assert np.all(out == 77)

    def test_upsample_out_of_table(self, make_ctx):
        """Test that a corrupted sample beyond the table aborts at upsample"""
        ctx = make_ctx({"upsample": FaultSpec(rate=1.0, bits="16-31")})

        with pytest.raises(DecodeFailure) as exc_info:
            upsample_h2v2(np.full((8, 8), 100, dtype=np.uint8), ctx)

        assert exc_info.value.kind is FailureKind.INDEX_OUT_OF_RANGE
        assert exc_info.value.location == "upsample"

    @pytest.mark.parametrize("width,height", [(30, 32), (32, 8), (0, 16)])
    def test_bad_dimensions(self, width, height):
        """Test that sides must be positive multiples of 16"""
        with pytest.raises(DimensionError):
            check_dimensions(width, height)


class TestMiniJpeg:
    """Test encode and decode"""

    def test_reliable_quality(self, small_image, reliable_ctx):
        """Test that a reliable decode reconstructs the image well"""
        bitstream = mini_jpeg_encode(small_image, 75)

        decoded = mini_jpeg_decode(bitstream, reliable_ctx)

        assert (decoded.width, decoded.height) == (32, 32)
        assert psnr(small_image, decoded).value > 25.0

    def test_higher_quality_is_better(self, small_image, reliable_ctx):
        """Test that quality 95 beats quality 20"""
        low = mini_jpeg_decode(mini_jpeg_encode(small_image, 20), reliable_ctx)
        high = mini_jpeg_decode(mini_jpeg_encode(small_image, 95), reliable_ctx)

        assert psnr(small_image, high).value > psnr(small_image, low).value

    def test_header_fields(self, small_image):
        """Test quality and dimensions in the header"""
        bitstream = mini_jpeg_encode(small_image, 60)

        assert bitstream.quality == 60
        assert (bitstream.width, bitstream.height, bitstream.frame_count) == (32, 32, 1)

    def test_odd_macroblock_size_rejected(self):
        """Test that a 16x18 image cannot be encoded"""
        image = ImageYCbCr(
            np.zeros((18, 16), dtype=np.uint8),
            np.zeros((9, 8), dtype=np.uint8),
            np.zeros((9, 8), dtype=np.uint8),
        )

        with pytest.raises(DimensionError):
            mini_jpeg_encode(image, 75)

    def test_entropy_faults_fail_at_entropy_decode(self, small_image, make_ctx):
        """Test that a fully unreliable entropy decoder aborts in that region"""
        bitstream = mini_jpeg_encode(small_image, 75)
        ctx = make_ctx({"entropy_decode": FaultSpec(rate=1.0, bits="0-31")})

        with pytest.raises(DecodeFailure) as exc_info:
            mini_jpeg_decode(bitstream, ctx)

        assert exc_info.value.location == "entropy_decode"

    @pytest.mark.parametrize("region", ["dequantize", "idct"])
    def test_dataflow_faults_never_abort(self, small_image, reliable_ctx, make_ctx, region):
        """Test that dequantize and idct faults degrade without failing"""
        bitstream = mini_jpeg_encode(small_image, 75)
        ctx = make_ctx({region: FaultSpec(rate=1.0, bits="0-31")})

        decoded = mini_jpeg_decode(bitstream, ctx)

        assert decoded != mini_jpeg_decode(bitstream, reliable_ctx)
        assert ctx.op_counts[region] > 0

    def test_truncated_payload(self, small_image, reliable_ctx):
        """Test that an empty payload reports StreamExhausted"""
        bitstream = replace(mini_jpeg_encode(small_image, 75), payload=b"")

        with pytest.raises(DecodeFailure) as exc_info:
            mini_jpeg_decode(bitstream, reliable_ctx)

        assert exc_info.value.kind is FailureKind.STREAM_EXHAUSTED
        assert exc_info.value.location == "entropy_decode"


    def test_every_region_spends_elastic_ops(self, small_image, make_ctx):
        """Test a decode touches each region and nothing runs elastic outside them"""
        bitstream = mini_jpeg_encode(small_image, 75)
        ctx = make_ctx({name: FaultSpec(rate=0.0) for name in REGIONS})

        mini_jpeg_decode(bitstream, ctx)

        assert set(ctx.op_counts) == set(REGIONS)
        assert "reliable" not in ctx.op_counts

    def test_entropy_ops_are_dc_reconstruction_only(self, make_ctx):
        """Test the standard image spends one entropy op per block"""
        bitstream = mini_jpeg_encode(generate(STANDARD_IMAGE), 75)
        ctx = make_ctx({name: FaultSpec(rate=0.0) for name in REGIONS})

        mini_jpeg_decode(bitstream, ctx)

        # 64 luma blocks, 4 per chroma plane
        assert ctx.op_counts["entropy_decode"] == 72

    def test_frozen_standard_image_baseline(self, reliable_ctx):
        """Test the reliable PSNR and payload size of the standard image"""
        image = generate(STANDARD_IMAGE)
        bitstream = mini_jpeg_encode(image, 75)

        decoded = mini_jpeg_decode(bitstream, reliable_ctx)

        assert psnr(image, decoded).value == pytest.approx(46.171843103055, abs=1e-6)
        assert len(bitstream.payload) == 368
