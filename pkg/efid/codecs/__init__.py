"""Codec kernels: reliable encoders and fidelity-region decoders"""

from efid.codecs.adpcm import adpcm_decode, adpcm_encode
from efid.codecs.bitstream import Bitstream, CodecId
from efid.codecs.jpeg import mini_jpeg_decode, mini_jpeg_encode
from efid.codecs.media import ImageYCbCr, PcmAudio, VideoSeq
from efid.codecs.video import mini_video_decode, mini_video_encode

__all__ = [
    'adpcm_decode',
    'adpcm_encode',
    'Bitstream',
    'CodecId',
    'mini_jpeg_decode',
    'mini_jpeg_encode',
    'ImageYCbCr',
    'PcmAudio',
    'VideoSeq',
    'mini_video_decode',
    'mini_video_encode',
]
