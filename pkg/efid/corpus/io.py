"""
Corpus export and import for inspection

Audio as 16-bit PCM WAV, images as PGM (luma only) or PPM (RGB), video as a
directory of numbered PPM frames.
"""
import io
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image
from scipy.io import wavfile

from efid.codecs.jpeg import decimate_chroma
from efid.codecs.media import ImageYCbCr, PcmAudio, VideoSeq
from efid.utils.exceptions import DimensionError
from efid.utils.files import atomic_write_bytes, atomic_write_dir
from efid.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

FRAME_PATTERN = "frame_{:04d}.ppm"


def audio_to_wav_bytes(audio: PcmAudio) -> bytes:
    buffer = io.BytesIO()
    wavfile.write(buffer, audio.sample_rate, audio.samples)
    return buffer.getvalue()


def write_wav(path: PathLike, audio: PcmAudio) -> Path:
    return atomic_write_bytes(path, audio_to_wav_bytes(audio))


def read_wav(path: PathLike) -> PcmAudio:
    """Read a mono 16-bit WAV file"""
    sample_rate, samples = wavfile.read(str(path))
    if samples.ndim != 1:
        raise DimensionError(f"Expected mono audio, got {samples.shape[1]} channels")
    if samples.dtype != np.int16:
        raise DimensionError(f"Expected 16-bit PCM, got {samples.dtype}")
    return PcmAudio(samples, int(sample_rate))


def image_to_rgb(image: ImageYCbCr) -> Image.Image:
    """Nearest-neighbour chroma upsampling, then YCbCr -> RGB"""
    cb = np.repeat(np.repeat(image.cb, 2, axis=0), 2, axis=1)
    cr = np.repeat(np.repeat(image.cr, 2, axis=0), 2, axis=1)
    planes = [Image.fromarray(p) for p in (image.y, cb, cr)]
    return Image.merge("YCbCr", planes).convert("RGB")


def image_to_bytes(image: ImageYCbCr, grayscale: bool = False) -> bytes:
    """PGM (grayscale) or PPM encoding of an image"""
    picture = Image.fromarray(image.y) if grayscale else image_to_rgb(image)
    buffer = io.BytesIO()
    picture.save(buffer, format="PPM")
    return buffer.getvalue()


def write_image(path: PathLike, image: ImageYCbCr) -> Path:
    """Write `.pgm` as luma only, anything else as RGB PPM"""
    grayscale = Path(path).suffix.lower() == ".pgm"
    return atomic_write_bytes(path, image_to_bytes(image, grayscale))


def read_image(path: PathLike) -> ImageYCbCr:
    """Read a PGM/PPM file back into 4:2:0 YCbCr"""
    with Image.open(str(path)) as picture:
        if picture.mode == "L":
            y = np.asarray(picture, dtype=np.uint8)
            height, width = y.shape
            neutral = np.full((height // 2, width // 2), 128, dtype=np.uint8)
            return ImageYCbCr(y, neutral, neutral.copy())
        ycbcr = picture.convert("RGB").convert("YCbCr")
        y, cb, cr = (np.asarray(p, dtype=np.uint8) for p in ycbcr.split())
    if y.shape[0] % 2 or y.shape[1] % 2:
        raise DimensionError(f"Image dimensions must be even, got {y.shape[1]}x{y.shape[0]}")
    return ImageYCbCr(y, decimate_chroma(cb), decimate_chroma(cr))


def write_video(directory: PathLike, video: VideoSeq) -> Path:
    """Write each frame as a numbered PPM; the directory appears complete or not at all"""

    def populate(staging: Path) -> None:
        for index, frame in enumerate(video.frames):
            (staging / FRAME_PATTERN.format(index)).write_bytes(image_to_bytes(frame))

    target = atomic_write_dir(directory, populate)
    logger.info("video_written", directory=str(target), frames=len(video))
    return target


def read_video(directory: PathLike, fps: int = 15) -> VideoSeq:
    """Read numbered PPM frames from a directory"""
    paths = sorted(Path(directory).glob("frame_*.ppm"))
    if not paths:
        raise DimensionError(f"No frame_*.ppm files in {directory}")
    return VideoSeq(tuple(read_image(p) for p in paths), fps=fps)
