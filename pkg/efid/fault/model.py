"""
Bit-flip fault model for 32-bit datapath results

Values on the simulated bus are Python ints kept in signed 32-bit range
(wrap-around on overflow). A FaultSpec says how often an elastic result is
hit and which bits may flip; `inject_word` applies it using exactly one
64-bit draw from an RngStream per call.
"""
from enum import Enum
from functools import lru_cache
from typing import Any, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from efid.fault.rng import RngStream
from efid.utils.exceptions import UsageError

WORD_BITS = 32
MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF
_SIGN32 = 0x80000000
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15

Word32 = int


def to_signed32(value: int) -> Word32:
    """Wrap an int into signed 32-bit range"""
    value &= MASK32
    return value - 0x100000000 if value & _SIGN32 else value


def to_signed16(value: int) -> int:
    """Wrap an int into signed 16-bit range"""
    value &= 0xFFFF
    return value - 0x10000 if value & 0x8000 else value


def hamming_distance(a: int, b: int) -> int:
    """Number of differing bits between two 32-bit words"""
    return bin((a ^ b) & MASK32).count("1")


def splitmix64(state: int) -> int:
    """One SplitMix64 output for the given state"""
    z = (state + _GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class FlipModel(str, Enum):
    """How an injection event chooses the bits it flips"""

    SINGLE = "single"
    PER_BIT = "perbit"


class BitRange(BaseModel):
    """Inclusive range of bit positions eligible for flips (0 = LSB)"""

    model_config = ConfigDict(frozen=True)

    lo: int = Field(..., ge=0, le=WORD_BITS - 1)
    hi: int = Field(..., ge=0, le=WORD_BITS - 1)

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, str):
            return cls._split(data)
        if isinstance(data, (list, tuple)) and len(data) == 2:
            return {"lo": data[0], "hi": data[1]}
        return data

    @model_validator(mode="after")
    def _ordered(self) -> "BitRange":
        if self.lo > self.hi:
            raise ValueError(f"bit range lo ({self.lo}) exceeds hi ({self.hi})")
        return self

    @staticmethod
    def _split(text: str) -> dict:
        parts = text.strip().split("-")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"bit range must look like 'lo-hi', got {text!r}")
        return {"lo": int(parts[0]), "hi": int(parts[1])}

    @classmethod
    def parse(cls, text: str) -> "BitRange":
        """Parse the 'lo-hi' config form"""
        return cls.model_validate(text)

    @classmethod
    def lsb(cls, count: int) -> "BitRange":
        """The `count` least significant bits"""
        return cls(lo=0, hi=count - 1)

    @classmethod
    def msb(cls, count: int) -> "BitRange":
        """The `count` most significant bits"""
        return cls(lo=WORD_BITS - count, hi=WORD_BITS - 1)

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    @property
    def mask(self) -> int:
        return ((1 << self.width) - 1) << self.lo

    def contains(self, bit: int) -> bool:
        return self.lo <= bit <= self.hi

    def __str__(self) -> str:
        return f"{self.lo}-{self.hi}"


class FaultSpec(BaseModel):
    """Unreliability of one elastic unit: event rate, eligible bits, flip model"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    rate: float = Field(..., ge=0.0, le=1.0)
    bits: BitRange = Field(default_factory=lambda: BitRange(lo=0, hi=WORD_BITS - 1))
    model: FlipModel = FlipModel.SINGLE

    @property
    def range(self) -> BitRange:
        return self.bits

    @property
    def is_reliable(self) -> bool:
        return self.rate == 0.0

    def to_config(self) -> dict:
        """Serialize to the experiment-config form"""
        return {"rate": self.rate, "bits": str(self.bits), "model": self.model.value}


RELIABLE_SPEC = FaultSpec(rate=0.0)


class InjectionPlan(NamedTuple):
    """A FaultSpec reduced to the integers the hot path needs"""

    kind: int
    threshold: int
    lo: int
    width: int


_RELIABLE = 0
_SINGLE = 1
_PER_BIT = 2

RELIABLE_PLAN = InjectionPlan(_RELIABLE, 0, 0, 1)


@lru_cache(maxsize=1024)
def compile_spec(spec: FaultSpec) -> InjectionPlan:
    """Reduce a FaultSpec to an InjectionPlan"""
    if spec.rate == 0.0:
        return RELIABLE_PLAN
    if spec.model is FlipModel.SINGLE:
        # event gate on the upper 32 bits of the draw
        return InjectionPlan(_SINGLE, int(spec.rate * 2**32), spec.bits.lo, spec.bits.width)
    return InjectionPlan(_PER_BIT, int(spec.rate * 2**64), spec.bits.lo, spec.bits.width)


def apply_plan(value: Word32, plan: InjectionPlan, word: int) -> Word32:
    """
    Apply a compiled plan to a value using one 64-bit draw

    SingleBitUniform: the upper half of the draw gates the event, the lower
    half picks the bit by multiply-shift. PerBitIndependent: bit i of the
    range uses the i-th SplitMix64 output seeded by the draw.
    """
    kind = plan.kind
    if kind == _RELIABLE:
        return value
    if kind == _SINGLE:
        if (word >> 32) < plan.threshold:
            bit = plan.lo + (((word & MASK32) * plan.width) >> 32)
            return to_signed32(value ^ (1 << bit))
        return value
    flips = 0
    state = word
    threshold = plan.threshold
    for offset in range(plan.width):
        state = (state + _GOLDEN_GAMMA) & MASK64
        if splitmix64(state) < threshold:
            flips |= 1 << (plan.lo + offset)
    return to_signed32(value ^ flips) if flips else value


def inject_word(value: Word32, spec: FaultSpec, rng: RngStream) -> Word32:
    """
    Pass one bus value through a fault spec

    Args:
        value: Exact 32-bit result
        spec: Fault spec of the unit producing it
        rng: Stream supplying the draw (exactly one word is consumed)

    Returns:
        The value with zero or more in-range bits flipped
    """
    return apply_plan(to_signed32(value), compile_spec(spec), rng.next_word())


def flip_probability(spec: FaultSpec, bit: int) -> float:
    """
    Marginal probability that one injection call flips `bit`

    Args:
        spec: Fault spec
        bit: Bit index 0..31

    Returns:
        rate / width (single-bit model) or rate (per-bit model) inside the
        range, 0 outside it
    """
    if not 0 <= bit < WORD_BITS:
        raise UsageError(f"bit index must be in [0, 31], got {bit}")
    if not spec.bits.contains(bit):
        return 0.0
    if spec.model is FlipModel.SINGLE:
        return spec.rate / spec.bits.width
    return spec.rate
