"""
Unit Tests for the Synthetic Corpus (efid/corpus/generators.py, efid/corpus/io.py)

Tests seeded determinism, generator shapes, spec validation and the
WAV / PGM / PPM export path
"""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.io import wavfile

from efid.codecs.media import ImageYCbCr, VideoSeq
from efid.corpus.generators import (
    AUDIO_PEAK,
    STANDARD_AUDIO,
    STANDARD_IMAGE,
    STANDARD_VIDEO,
    CorpusKind,
    CorpusSpec,
    gen_audio,
    gen_image,
    generate,
    standard_corpus,
)
from efid.corpus.io import read_image, read_video, read_wav, write_image, write_video, write_wav
from efid.utils.exceptions import DimensionError


class TestCorpusSpec:
    """Test spec validation"""

    def test_picture_sides_must_be_macroblock_multiples(self):
        """Test that a 30-pixel-wide image is rejected"""
        with pytest.raises(ValidationError):
            CorpusSpec(kind=CorpusKind.IMAGE_PLASMA, seed=1, width=30, height=32)

    def test_video_needs_eight_frames(self):
        """Test the minimum clip length"""
        with pytest.raises(ValidationError):
            CorpusSpec(kind=CorpusKind.VIDEO_MOVING_BLOCKS, seed=1, width=32, height=32, frames=4)

    def test_audio_ignores_picture_fields(self):
        """Test that picture dimensions do not constrain audio"""
        spec = CorpusSpec(kind=CorpusKind.AUDIO_SINE_MIX, seed=1, width=30)

        assert spec.kind.media == "audio"

    def test_standard_corpus(self):
        """Test the pinned standard entries"""
        corpus = standard_corpus()

        assert set(corpus) == {"audio", "image", "video"}
        assert corpus["video"] == STANDARD_VIDEO
        assert corpus["video"].frames >= 8


class TestGenerators:
    """Test generated media"""

    def test_same_seed_same_output(self, small_audio_spec, small_image_spec, small_video_spec):
        """Test that generation is a pure function of the spec"""
        for spec in (small_audio_spec, small_image_spec, small_video_spec):
            assert generate(spec) == generate(spec)

    def test_different_seed_differs(self, small_image_spec):
        """Test that the seed changes the texture"""
        other = small_image_spec.model_copy(update={"seed": small_image_spec.seed + 1})

        assert generate(small_image_spec) != generate(other)

    def test_audio_shape_and_peak(self, small_audio_spec):
        """Test sample count and normalization"""
        audio = gen_audio(small_audio_spec)

        assert len(audio) == 800
        assert audio.sample_rate == 8000
        assert int(np.max(np.abs(audio.samples.astype(np.int32)))) == AUDIO_PEAK

    def test_image_shape(self, small_image_spec):
        """Test 4:2:0 plane shapes"""
        image = gen_image(small_image_spec)

        assert image.y.shape == (32, 32)
        assert image.cb.shape == (16, 16)

    def test_gradient_is_seed_independent(self):
        """Test that the plain gradient has no random component"""
        a = generate(CorpusSpec(kind=CorpusKind.IMAGE_GRADIENT, seed=1, width=32, height=32))
        b = generate(CorpusSpec(kind=CorpusKind.IMAGE_GRADIENT, seed=2, width=32, height=32))

        assert a == b

    def test_frozen_first_samples(self, small_audio):
        """Test the leading samples of the seeded standard inputs"""
        standard_audio = generate(STANDARD_AUDIO)
        standard_image = generate(STANDARD_IMAGE)
        gradient = generate(CorpusSpec(kind=CorpusKind.IMAGE_GRADIENT, seed=0, width=64, height=64))

        assert standard_audio.samples[:8].tolist() == [-3925, -8924, -467, 6349, -7517, -17278, -3234, 9257]
        assert small_audio.samples[:8].tolist() == [-4020, -9139, -478, 6501, -7698, -17694, -3312, 9480]
        assert standard_image.y[0, :8].tolist() == [42, 44, 46, 48, 49, 51, 52, 53]
        assert standard_image.cb[0, :2].tolist() == [83, 84]
        assert standard_image.cr[0, :2].tolist() == [148, 147]
        assert gradient.y[0, :8].tolist() == [32, 34, 35, 37, 38, 40, 41, 43]

    def test_video_moves(self, small_video):
        """Test frame count and that the content changes over time"""
        assert len(small_video) == 8
        assert any(a != b for a, b in zip(small_video.frames, small_video.frames[1:]))

    def test_wrong_media_rejected(self, small_audio_spec):
        """Test that an audio spec cannot produce an image"""
        with pytest.raises(DimensionError):
            gen_image(small_audio_spec)


class TestCorpusIo:
    """Test media export and import"""

    def test_wav_roundtrip(self, tmp_path, small_audio):
        """Test that WAV export is lossless"""
        path = write_wav(tmp_path / "audio.wav", small_audio)

        assert read_wav(path) == small_audio

    def test_stereo_wav_rejected(self, tmp_path):
        """Test that only mono input is accepted"""
        path = tmp_path / "stereo.wav"
        wavfile.write(str(path), 8000, np.zeros((100, 2), dtype=np.int16))

        with pytest.raises(DimensionError):
            read_wav(path)

    def test_pgm_keeps_luma(self, tmp_path, small_image):
        """Test that a PGM carries luma exactly and neutral chroma"""
        image = read_image(write_image(tmp_path / "image.pgm", small_image))

        assert np.array_equal(image.y, small_image.y)
        assert np.all(image.cb == 128)

    def test_ppm_grey_roundtrip(self, tmp_path):
        """Test that a grey image survives the RGB conversion within one level"""
        y = np.random.default_rng(8).integers(0, 256, size=(16, 16)).astype(np.uint8)
        grey = ImageYCbCr(y, np.full((8, 8), 128, np.uint8), np.full((8, 8), 128, np.uint8))

        image = read_image(write_image(tmp_path / "grey.ppm", grey))

        assert np.max(np.abs(image.y.astype(int) - y.astype(int))) <= 1
        assert np.max(np.abs(image.cb.astype(int) - 128)) <= 1

    def test_video_directory(self, tmp_path, small_video):
        """Test numbered frame files and read-back frame count"""
        directory = write_video(tmp_path / "clip", small_video)

        assert (directory / "frame_0000.ppm").exists()
        assert (directory / "frame_0007.ppm").exists()
        restored = read_video(directory, fps=small_video.fps)
        assert isinstance(restored, VideoSeq)
        assert len(restored) == 8

    def test_empty_video_directory(self, tmp_path):
        """Test that a directory without frames is rejected"""
        with pytest.raises(DimensionError):
            read_video(tmp_path)

    def test_failed_video_write_leaves_nothing(self, tmp_path, small_video, monkeypatch):
        """Test that a frame error mid-clip leaves no directory and no staging files"""
        calls = []

        def failing(image, grayscale=False):
            calls.append(image)
            if len(calls) == 3:
                raise OSError("disk full")
            return b"P6\n1 1\n255\n\x00\x00\x00"

        monkeypatch.setattr("efid.corpus.io.image_to_bytes", failing)

        with pytest.raises(OSError):
            write_video(tmp_path / "clip", small_video)

        assert list(tmp_path.iterdir()) == []

    def test_video_rewrite_replaces_directory(self, tmp_path, small_video):
        """Test that rewriting a clip drops frames left from a longer one"""
        stale = tmp_path / "clip" / "frame_0011.ppm"
        stale.parent.mkdir()
        stale.write_bytes(b"stale")

        directory = write_video(tmp_path / "clip", small_video)

        assert sorted(p.name for p in directory.iterdir()) == [f"frame_{i:04d}.ppm" for i in range(8)]
        assert [p.name for p in tmp_path.iterdir()] == ["clip"]
