"""
Deterministic synthetic corpus

Every generator is a pure function of its CorpusSpec: randomness comes only
from a stream derived from the spec's seed.
"""
from enum import Enum
from typing import Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from efid.codecs.media import ImageYCbCr, PcmAudio, VideoSeq
from efid.fault.rng import derive_stream
from efid.utils.exceptions import DimensionError

FULL_SCALE = 32767
PEAK_FRACTION = 0.7
AUDIO_PEAK = int(PEAK_FRACTION * FULL_SCALE)
MIN_VIDEO_FRAMES = 8


class CorpusKind(str, Enum):
    AUDIO_SINE_MIX = "audio_sine_mix"
    IMAGE_GRADIENT = "image_gradient"
    IMAGE_PLASMA = "image_plasma"
    VIDEO_MOVING_BLOCKS = "video_moving_blocks"

    @property
    def media(self) -> str:
        return self.value.split("_", 1)[0]


class CorpusSpec(BaseModel):
    """Parameters fully determining one synthetic input"""

    model_config = ConfigDict(frozen=True)

    kind: CorpusKind
    seed: int = Field(..., ge=0, le=2**64 - 1)
    sample_rate: int = Field(8000, gt=0)
    duration: float = Field(0.5, gt=0)
    width: int = Field(64, gt=0)
    height: int = Field(64, gt=0)
    frames: int = Field(16, gt=0)
    fps: int = Field(15, gt=0)

    @model_validator(mode="after")
    def _check_dimensions(self) -> "CorpusSpec":
        if self.kind.media in ("image", "video") and (self.width % 16 or self.height % 16):
            raise ValueError(
                f"image dimensions must be multiples of 16, got {self.width}x{self.height}"
            )
        if self.kind is CorpusKind.VIDEO_MOVING_BLOCKS and self.frames < MIN_VIDEO_FRAMES:
            raise ValueError(f"video needs at least {MIN_VIDEO_FRAMES} frames, got {self.frames}")
        return self


STANDARD_AUDIO = CorpusSpec(kind=CorpusKind.AUDIO_SINE_MIX, seed=1001, sample_rate=8000, duration=0.5)
STANDARD_IMAGE = CorpusSpec(kind=CorpusKind.IMAGE_PLASMA, seed=1002, width=64, height=64)
STANDARD_VIDEO = CorpusSpec(
    kind=CorpusKind.VIDEO_MOVING_BLOCKS, seed=1003, width=128, height=128, frames=16, fps=15
)


def standard_corpus() -> Dict[str, CorpusSpec]:
    """The version-pinned corpus acceptance runs refer to"""
    return {"audio": STANDARD_AUDIO, "image": STANDARD_IMAGE, "video": STANDARD_VIDEO}


def _require(spec: CorpusSpec, media: str) -> None:
    if spec.kind.media != media:
        raise DimensionError(f"Corpus kind {spec.kind.value} does not produce {media}")


def gen_audio(spec: CorpusSpec) -> PcmAudio:
    """Three seeded sinusoids in 200-3000 Hz plus faint noise, peak 0.7 full scale"""
    _require(spec, "audio")
    rng = derive_stream(spec.seed, ["corpus", spec.kind.value]).generator()
    count = int(round(spec.duration * spec.sample_rate))
    if count <= 0:
        raise DimensionError(f"Duration {spec.duration}s yields no samples")

    t = np.arange(count) / spec.sample_rate
    freqs = rng.uniform(200.0, 3000.0, size=3)
    phases = rng.uniform(0.0, 2 * np.pi, size=3)
    weights = rng.uniform(0.5, 1.0, size=3)
    signal = np.sum(weights[:, None] * np.sin(2 * np.pi * freqs[:, None] * t + phases[:, None]), axis=0)
    signal += rng.normal(0.0, 0.02, size=count)

    peak = float(np.max(np.abs(signal)))
    samples = np.round(signal / peak * AUDIO_PEAK) if peak > 0 else np.zeros(count)
    return PcmAudio(np.clip(samples, -AUDIO_PEAK, AUDIO_PEAK).astype(np.int16), spec.sample_rate)


def _plasma(rng: np.random.Generator, height: int, width: int, waves: int = 4) -> np.ndarray:
    """Smooth texture in [-1, 1] from a few seeded plane waves"""
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    texture = np.zeros((height, width))
    for _ in range(waves):
        fx, fy = rng.uniform(-0.25, 0.25, size=2)
        phase = rng.uniform(0.0, 2 * np.pi)
        texture += np.sin(fx * x + fy * y + phase)
    return texture / waves


def _to_plane(values: np.ndarray) -> np.ndarray:
    return np.clip(np.round(values), 0, 255).astype(np.uint8)


def _gradient_planes(height: int, width: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    luma = 32 + 192 * (x + y) / max(width + height - 2, 1)
    cy, cx = np.mgrid[0:height // 2, 0:width // 2].astype(np.float64)
    cb = 96 + 64 * cx / max(width // 2 - 1, 1)
    cr = 160 - 64 * cy / max(height // 2 - 1, 1)
    return luma, cb, cr


def _image_planes(spec: CorpusSpec, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    luma, cb, cr = _gradient_planes(spec.height, spec.width)
    if spec.kind in (CorpusKind.IMAGE_PLASMA, CorpusKind.VIDEO_MOVING_BLOCKS):
        luma = luma + 48 * _plasma(rng, spec.height, spec.width)
        cb = cb + 24 * _plasma(rng, spec.height // 2, spec.width // 2)
        cr = cr + 24 * _plasma(rng, spec.height // 2, spec.width // 2)
    return luma, cb, cr


def gen_image(spec: CorpusSpec) -> ImageYCbCr:
    """Smooth gradient, plus seeded plasma texture for image_plasma"""
    _require(spec, "image")
    rng = derive_stream(spec.seed, ["corpus", spec.kind.value]).generator()
    luma, cb, cr = _image_planes(spec, rng)
    return ImageYCbCr(_to_plane(luma), _to_plane(cb), _to_plane(cr))


def gen_video(spec: CorpusSpec) -> VideoSeq:
    """Static textured background with two seeded rectangles moving and bouncing"""
    _require(spec, "video")
    rng = derive_stream(spec.seed, ["corpus", spec.kind.value]).generator()
    luma, cb, cr = _image_planes(spec, rng)

    blocks = []
    for _ in range(2):
        size_h, size_w = (int(v) for v in rng.integers(12, max(13, min(spec.height, spec.width) // 3), size=2))
        size_h = min(size_h, spec.height - 1)
        size_w = min(size_w, spec.width - 1)
        top = float(rng.integers(0, spec.height - size_h))
        left = float(rng.integers(0, spec.width - size_w))
        velocity = rng.integers(1, 4, size=2) * rng.choice([-1, 1], size=2)
        color = rng.integers(0, 256, size=3)
        blocks.append([top, left, size_h, size_w, int(velocity[0]), int(velocity[1]), color])

    frames = []
    for _ in range(spec.frames):
        y_plane, cb_plane, cr_plane = luma.copy(), cb.copy(), cr.copy()
        for top, left, size_h, size_w, _, _, color in blocks:
            r, c = int(top), int(left)
            y_plane[r:r + size_h, c:c + size_w] = color[0]
            cb_plane[r // 2:(r + size_h) // 2, c // 2:(c + size_w) // 2] = color[1]
            cr_plane[r // 2:(r + size_h) // 2, c // 2:(c + size_w) // 2] = color[2]
        frames.append(ImageYCbCr(_to_plane(y_plane), _to_plane(cb_plane), _to_plane(cr_plane)))

        for block in blocks:
            top, left, size_h, size_w, vy, vx, _ = block
            top, vy = _bounce(top + vy, vy, spec.height - size_h)
            left, vx = _bounce(left + vx, vx, spec.width - size_w)
            block[0], block[1], block[4], block[5] = top, left, vy, vx

    return VideoSeq(tuple(frames), fps=spec.fps)


def _bounce(position: float, velocity: int, limit: int) -> Tuple[float, int]:
    if position < 0:
        return -position, -velocity
    if position > limit:
        return 2 * limit - position, -velocity
    return position, velocity


def generate(spec: CorpusSpec):
    """Dispatch on the spec's kind"""
    media = spec.kind.media
    if media == "audio":
        return gen_audio(spec)
    if media == "image":
        return gen_image(spec)
    return gen_video(spec)
