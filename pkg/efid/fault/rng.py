"""
Deterministic random streams for fault injection

Streams are keyed by (master seed, label path) through numpy's SeedSequence
and drive a counter-based Philox generator, so a stream's output depends only
on its key and never on scheduling, host or the order trials run in.
"""
import hashlib
from typing import List, Sequence, Tuple, Union

import numpy as np

from efid.utils.exceptions import UsageError

RNG_ALGORITHM_ID = "numpy-philox4x64/seedseq/blake2b-labels/v1"

MAX_SEED = 2**64 - 1

Label = Union[str, int]

_BLOCK_WORDS = 4096


def _label_key(label: Label) -> int:
    """Map one label to a non-negative integer spawn key"""
    if isinstance(label, bool):
        return int(label)
    if isinstance(label, int):
        if label < 0:
            raise UsageError(f"Stream labels must be non-negative integers, got {label}")
        return label
    if isinstance(label, str):
        digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    raise UsageError(f"Unsupported stream label type: {type(label).__name__}")


class RngStream:
    """A deterministic stream of 64-bit draws"""

    def __init__(self, master_seed: int, labels: Sequence[Label] = ()):
        """
        Initialize a stream

        Args:
            master_seed: 64-bit master seed
            labels: Label path distinguishing this stream from its siblings
        """
        if not 0 <= master_seed <= MAX_SEED:
            raise UsageError(f"Master seed must fit in 64 bits, got {master_seed}")
        self.master_seed = master_seed
        self.labels: Tuple[Label, ...] = tuple(labels)
        self._seed_sequence = np.random.SeedSequence(
            entropy=master_seed,
            spawn_key=tuple(_label_key(label) for label in self.labels),
        )
        self._bit_generator = np.random.Philox(self._seed_sequence)
        self._buffer: List[int] = []
        self._position = 0
        self.draws = 0

    def next_word(self) -> int:
        """Return the next raw 64-bit draw"""
        if self._position >= len(self._buffer):
            self._buffer = self._bit_generator.random_raw(_BLOCK_WORDS).tolist()
            self._position = 0
        word = self._buffer[self._position]
        self._position += 1
        self.draws += 1
        return word

    def words(self, count: int) -> List[int]:
        """Return the next `count` draws"""
        return [self.next_word() for _ in range(count)]

    def generator(self) -> np.random.Generator:
        """
        Bulk generator keyed like this stream

        Independent of how many words have been consumed; used for corpus
        synthesis where numpy distributions are more convenient than raw words.
        """
        return np.random.Generator(np.random.Philox(self._seed_sequence))

    def child(self, *labels: Label) -> "RngStream":
        """Derive a stream one level further down the label path"""
        return derive_stream(self.master_seed, self.labels + labels)

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, labels={list(self.labels)!r})"


def derive_stream(master_seed: int, labels: Sequence[Label] = ()) -> RngStream:
    """
    Derive the stream for a (master seed, label path) key

    Args:
        master_seed: 64-bit master seed
        labels: Label path, e.g. ["trial", 0]

    Returns:
        A fresh RngStream positioned at its first draw
    """
    return RngStream(master_seed, labels)
