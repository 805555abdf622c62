"""Synthetic corpus generation and export"""

from efid.corpus.generators import (
    STANDARD_AUDIO,
    STANDARD_IMAGE,
    STANDARD_VIDEO,
    CorpusKind,
    CorpusSpec,
    gen_audio,
    gen_image,
    gen_video,
    generate,
    standard_corpus,
)

__all__ = [
    'STANDARD_AUDIO',
    'STANDARD_IMAGE',
    'STANDARD_VIDEO',
    'CorpusKind',
    'CorpusSpec',
    'gen_audio',
    'gen_image',
    'gen_video',
    'generate',
    'standard_corpus',
]
