"""
Shared Test Fixtures for the efid Test Suite

This module provides centralized test fixtures used across all test files:
- Environment variable fixtures
- Small synthetic corpora (fast enough for pure-Python decoders)
- Reliable and injected fidelity contexts
- Frozen sweep results for report and golden tests
"""

import pytest

from efid.alu.context import FidelityContext
from efid.corpus.generators import CorpusKind, CorpusSpec, generate
from efid.fault.model import BitRange, FaultSpec
from efid.fault.rng import derive_stream
from efid.metrics.quality import Metric
from efid.sweep.runner import prepare
from efid.sweep.schemas import KernelId, SweepResult, SweepRow
from efid.utils.exceptions import FailureKind


# ============================================================================
# Test Isolation - Cache Reset
# ============================================================================

@pytest.fixture(autouse=True)
def reset_caches():
    """
    Clear the per-process bitstream cache around each test

    Tests patch settings and encoders; a memoized bitstream from an earlier
    test must not leak into a later one.
    """
    prepare.cache_clear()
    yield
    prepare.cache_clear()


# ============================================================================
# Configuration Fixtures
# ============================================================================

@pytest.fixture
def test_env_vars(monkeypatch):
    """Set test environment variables"""
    monkeypatch.setenv("APP_NAME", "efid-test")
    monkeypatch.setenv("APP_VERSION", "1.0.0-test")
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("EFID_THREADS", "2")
    monkeypatch.setenv("DEFAULT_TRIALS", "50")
    monkeypatch.setenv("DEFAULT_SEED", "11")
    yield


# ============================================================================
# Corpus Fixtures
# ============================================================================

@pytest.fixture
def small_audio_spec():
    """0.1 s of 8 kHz audio"""
    return CorpusSpec(kind=CorpusKind.AUDIO_SINE_MIX, seed=1001, sample_rate=8000, duration=0.1)


@pytest.fixture
def small_image_spec():
    """32x32 textured image"""
    return CorpusSpec(kind=CorpusKind.IMAGE_PLASMA, seed=1002, width=32, height=32)


@pytest.fixture
def small_video_spec():
    """32x32, 8-frame clip with moving rectangles"""
    return CorpusSpec(kind=CorpusKind.VIDEO_MOVING_BLOCKS, seed=1003, width=32, height=32, frames=8)


@pytest.fixture
def small_audio(small_audio_spec):
    return generate(small_audio_spec)


@pytest.fixture
def small_image(small_image_spec):
    return generate(small_image_spec)


@pytest.fixture
def small_video(small_video_spec):
    return generate(small_video_spec)


# ============================================================================
# Fidelity Context Fixtures
# ============================================================================

@pytest.fixture
def reliable_ctx():
    """Context with no unreliable region"""
    return FidelityContext.reliable()


@pytest.fixture
def always_flip_spec():
    """Every op in the region flips exactly one of bits 0-7"""
    return FaultSpec(rate=1.0, bits=BitRange(lo=0, hi=7))


@pytest.fixture
def make_ctx():
    """Factory: context for a region table and trial index"""

    def _make(regions, seed=7, trial=0):
        return FidelityContext(regions, derive_stream(seed, [trial]))

    return _make


# ============================================================================
# Sweep Result Fixtures
# ============================================================================

@pytest.fixture
def frozen_sweep_result():
    """Hand-built two-row bit-range result with one all-failure row"""
    return SweepResult(
        kernel=KernelId.MINI_JPEG,
        target="all",
        swept_param="bits",
        metric=Metric.PSNR,
        master_seed=7,
        rows=[
            SweepRow(
                value=0.0,
                trials=4,
                successes=4,
                mean_quality_db=31.25,
                std_quality_db=0.5,
                failures={},
            ),
            SweepRow(
                value=31.0,
                trials=4,
                successes=0,
                mean_quality_db=None,
                std_quality_db=None,
                failures={FailureKind.INVALID_CODE: 3, FailureKind.INDEX_OUT_OF_RANGE: 1},
            ),
        ],
        config={"kernel": "mini_jpeg", "mode": "bits"},
    )
