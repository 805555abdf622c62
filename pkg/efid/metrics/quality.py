"""
Reference-vs-decoded quality metrics

PSNR (8-bit peak, pooled MSE over planes and frames) for images and video;
segmented SNR with per-segment clamping for audio.
"""
from enum import Enum
from typing import Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from efid.codecs.media import ImageYCbCr, PcmAudio, VideoSeq
from efid.utils.exceptions import MetricError

PEAK = 255.0
PSNR_MAX_DB = 99.0
SNR_SEG_MIN_DB = -10.0
SNR_SEG_MAX_DB = 35.0
DEFAULT_SEGMENT_LEN = 256

Picture = Union[ImageYCbCr, VideoSeq, np.ndarray]


class Metric(str, Enum):
    PSNR = "PSNR"
    SNR_SEG = "SNRseg"
    SNR = "SNR"


class QualityScore(BaseModel):
    """A quality value in dB and whether a clamp was applied"""

    model_config = ConfigDict(frozen=True)

    metric: Metric
    value: float
    clamped: bool = False


def mse(ref: Sequence[float], test: Sequence[float]) -> float:
    """
    Mean squared error

    Raises:
        MetricError: on length mismatch or empty input
    """
    r = np.asarray(ref, dtype=np.float64).ravel()
    t = np.asarray(test, dtype=np.float64).ravel()
    if r.size != t.size:
        raise MetricError(f"Length mismatch: {r.size} vs {t.size}")
    if r.size == 0:
        raise MetricError("Cannot compute MSE of empty sequences")
    return float(np.mean(np.square(r - t)))


def _flatten_picture(picture: Picture) -> np.ndarray:
    if isinstance(picture, VideoSeq):
        return np.concatenate([_flatten_picture(frame) for frame in picture.frames])
    if isinstance(picture, ImageYCbCr):
        return np.concatenate([plane.ravel() for plane in picture.planes()]).astype(np.float64)
    return np.asarray(picture, dtype=np.float64).ravel()


def _shape_of(picture: Picture) -> tuple:
    if isinstance(picture, VideoSeq):
        return ("video", len(picture), picture.width, picture.height)
    if isinstance(picture, ImageYCbCr):
        return ("image", picture.width, picture.height)
    return ("array",) + np.shape(picture)


def psnr(ref: Picture, test: Picture) -> QualityScore:
    """
    Peak signal-to-noise ratio over all planes (and frames)

    Raises:
        MetricError: if shapes or frame counts differ
    """
    if _shape_of(ref) != _shape_of(test):
        raise MetricError(f"Shape mismatch: {_shape_of(ref)} vs {_shape_of(test)}")
    error = mse(_flatten_picture(ref), _flatten_picture(test))
    if error == 0.0:
        return QualityScore(metric=Metric.PSNR, value=PSNR_MAX_DB, clamped=True)
    value = 10.0 * np.log10(PEAK * PEAK / error)
    if value > PSNR_MAX_DB:
        return QualityScore(metric=Metric.PSNR, value=PSNR_MAX_DB, clamped=True)
    return QualityScore(metric=Metric.PSNR, value=float(value))


def _samples(audio: Union[PcmAudio, Sequence[int]]) -> np.ndarray:
    if isinstance(audio, PcmAudio):
        return audio.samples.astype(np.float64)
    return np.asarray(audio, dtype=np.float64).ravel()


def snr_seg(
    ref: Union[PcmAudio, Sequence[int]],
    test: Union[PcmAudio, Sequence[int]],
    segment_len: int = DEFAULT_SEGMENT_LEN,
) -> QualityScore:
    """
    Segmented SNR

    Each full segment scores 10*log10(sum(ref^2) / sum((ref - test)^2)),
    clamped to [-10, 35] dB. Error-free segments score 35, silent reference
    segments are skipped, a trailing partial segment is discarded.

    Raises:
        MetricError: on length mismatch, input shorter than one segment, or
            when every segment is skipped
    """
    r = _samples(ref)
    t = _samples(test)
    if r.size != t.size:
        raise MetricError(f"Length mismatch: {r.size} vs {t.size}")
    if segment_len <= 0:
        raise MetricError(f"Segment length must be positive, got {segment_len}")
    segments = r.size // segment_len
    if segments == 0:
        raise MetricError(f"Need at least {segment_len} samples, got {r.size}")

    usable = segments * segment_len
    r_seg = r[:usable].reshape(segments, segment_len)
    t_seg = t[:usable].reshape(segments, segment_len)
    signal = np.sum(np.square(r_seg), axis=1)
    noise = np.sum(np.square(r_seg - t_seg), axis=1)

    scored = signal > 0
    if not scored.any():
        raise MetricError("Every segment of the reference is silent")
    signal = signal[scored]
    noise = noise[scored]

    with np.errstate(divide="ignore"):
        raw = np.where(noise > 0, 10.0 * np.log10(signal / np.where(noise > 0, noise, 1.0)), np.inf)
    clipped = np.clip(raw, SNR_SEG_MIN_DB, SNR_SEG_MAX_DB)
    return QualityScore(
        metric=Metric.SNR_SEG,
        value=float(np.mean(clipped)),
        clamped=bool(np.any(clipped != raw)),
    )


def snr(ref: Union[PcmAudio, Sequence[int]], test: Union[PcmAudio, Sequence[int]]) -> QualityScore:
    """Global (unsegmented) SNR, unclamped except for the error-free case"""
    r = _samples(ref)
    t = _samples(test)
    if r.size != t.size:
        raise MetricError(f"Length mismatch: {r.size} vs {t.size}")
    signal = float(np.sum(np.square(r)))
    noise = float(np.sum(np.square(r - t)))
    if signal == 0.0:
        raise MetricError("Reference signal is silent")
    if noise == 0.0:
        return QualityScore(metric=Metric.SNR, value=PSNR_MAX_DB, clamped=True)
    return QualityScore(metric=Metric.SNR, value=float(10.0 * np.log10(signal / noise)))
