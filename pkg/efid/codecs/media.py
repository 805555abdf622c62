"""
Media containers shared by codecs, metrics and the corpus
"""
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from efid.utils.exceptions import DimensionError


@dataclass(frozen=True, eq=False)
class PcmAudio:
    """Signed 16-bit mono PCM"""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 1:
            raise DimensionError(f"Audio samples must be 1-D, got shape {samples.shape}")
        if samples.size and (samples.min() < -32768 or samples.max() > 32767):
            raise DimensionError("Audio samples exceed the signed 16-bit range")
        if self.sample_rate <= 0:
            raise DimensionError(f"Sample rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples.astype(np.int16))

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PcmAudio):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(
            self.samples, other.samples
        )


def _as_plane(plane: np.ndarray, name: str) -> np.ndarray:
    plane = np.asarray(plane)
    if plane.ndim != 2:
        raise DimensionError(f"Plane {name} must be 2-D, got shape {plane.shape}")
    if plane.size and (plane.min() < 0 or plane.max() > 255):
        raise DimensionError(f"Plane {name} samples exceed [0, 255]")
    return plane.astype(np.uint8)


@dataclass(frozen=True, eq=False)
class ImageYCbCr:
    """8-bit YCbCr image with 4:2:0 chroma"""

    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray

    def __post_init__(self):
        y = _as_plane(self.y, "Y")
        cb = _as_plane(self.cb, "Cb")
        cr = _as_plane(self.cr, "Cr")
        height, width = y.shape
        if height % 2 or width % 2:
            raise DimensionError(f"Image dimensions must be even, got {width}x{height}")
        chroma_shape = (height // 2, width // 2)
        if cb.shape != chroma_shape or cr.shape != chroma_shape:
            raise DimensionError(
                f"Chroma planes must be {chroma_shape}, got {cb.shape} and {cr.shape}"
            )
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "cb", cb)
        object.__setattr__(self, "cr", cr)

    @property
    def width(self) -> int:
        return int(self.y.shape[1])

    @property
    def height(self) -> int:
        return int(self.y.shape[0])

    def planes(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.y, self.cb, self.cr

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ImageYCbCr):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.planes(), other.planes()))


@dataclass(frozen=True, eq=False)
class VideoSeq:
    """Sequence of equally sized frames"""

    frames: Tuple[ImageYCbCr, ...] = field(default_factory=tuple)
    fps: int = 15

    def __post_init__(self):
        frames: Sequence[ImageYCbCr] = tuple(self.frames)
        if not frames:
            raise DimensionError("A video needs at least one frame")
        size = (frames[0].width, frames[0].height)
        for index, frame in enumerate(frames):
            if (frame.width, frame.height) != size:
                raise DimensionError(
                    f"Frame {index} is {frame.width}x{frame.height}, expected {size[0]}x{size[1]}"
                )
        if self.fps <= 0:
            raise DimensionError(f"fps must be positive, got {self.fps}")
        object.__setattr__(self, "frames", tuple(frames))

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VideoSeq):
            return NotImplemented
        return self.fps == other.fps and len(self) == len(other) and all(
            a == b for a, b in zip(self.frames, other.frames)
        )
