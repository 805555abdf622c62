"""
Sweep Schemas

Trial configuration, per-trial outcomes and aggregated sweep rows
"""
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from efid.alu.context import RELIABLE_REGION
from efid.codecs import adpcm, jpeg, video
from efid.config import settings
from efid.corpus.generators import CorpusSpec
from efid.fault.model import FaultSpec
from efid.metrics.quality import Metric, QualityScore
from efid.utils.exceptions import FailureKind

ALL_TARGET = "all"


class KernelId(str, Enum):
    ADPCM = "adpcm"
    MINI_JPEG = "mini_jpeg"
    MINI_VIDEO = "mini_video"


KERNEL_REGIONS: Dict[KernelId, Tuple[str, ...]] = {
    KernelId.ADPCM: adpcm.REGIONS,
    KernelId.MINI_JPEG: jpeg.REGIONS,
    KernelId.MINI_VIDEO: video.REGIONS,
}

# regions kept reliable by default when an error-rate sweep targets "all"
DEFAULT_PINNED: Dict[KernelId, Tuple[str, ...]] = {
    KernelId.ADPCM: (),
    KernelId.MINI_JPEG: ("entropy_decode",),
    KernelId.MINI_VIDEO: ("motion_compensation",),
}

KERNEL_MEDIA: Dict[KernelId, str] = {
    KernelId.ADPCM: "audio",
    KernelId.MINI_JPEG: "image",
    KernelId.MINI_VIDEO: "video",
}

KERNEL_METRIC: Dict[KernelId, Metric] = {
    KernelId.ADPCM: Metric.SNR_SEG,
    KernelId.MINI_JPEG: Metric.PSNR,
    KernelId.MINI_VIDEO: Metric.PSNR,
}

KNOWN_REGIONS = frozenset(name for names in KERNEL_REGIONS.values() for name in names)


def check_region_name(name: str) -> str:
    """Reject names no kernel defines"""
    if name != RELIABLE_REGION and name not in KNOWN_REGIONS:
        raise ValueError(
            f"unknown region {name!r}; known regions: {', '.join(sorted(KNOWN_REGIONS))}"
        )
    return name


class TrialConfig(BaseModel):
    """Everything that determines one trial's outcome"""

    model_config = ConfigDict(frozen=True)

    kernel: KernelId = Field(..., description="Codec kernel under test")
    corpus: CorpusSpec = Field(..., description="Synthetic input to encode and decode")
    regions: Dict[str, FaultSpec] = Field(
        default_factory=dict, description="Region name -> fault spec; unmapped regions are reliable"
    )
    master_seed: int = Field(..., ge=0, le=2**64 - 1, description="Master seed of the sweep")
    trial_index: int = Field(..., ge=0, description="Index keying this trial's fault stream")
    quality: int = Field(settings.DEFAULT_QUALITY, ge=1, le=100, description="Encoder quality")

    @model_validator(mode="after")
    def _consistent(self) -> "TrialConfig":
        expected = KERNEL_MEDIA[self.kernel]
        if self.corpus.kind.media != expected:
            raise ValueError(
                f"kernel {self.kernel.value} needs {expected} input, got {self.corpus.kind.value}"
            )
        for name in self.regions:
            check_region_name(name)
        return self


class TrialResult(BaseModel):
    """Outcome of one trial: a quality score or a detected failure"""

    model_config = ConfigDict(frozen=True)

    trial_index: int
    score: Optional[QualityScore] = None
    failure_kind: Optional[FailureKind] = None
    failure_location: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "TrialResult":
        if (self.score is None) == (self.failure_kind is None):
            raise ValueError("a trial result holds exactly one of score or failure")
        return self

    @property
    def success(self) -> bool:
        return self.score is not None


class SweepRow(BaseModel):
    """Aggregate over all trials at one swept value"""

    value: float = Field(..., description="Swept value (bit-range hi or error rate)")
    trials: int = Field(..., ge=1)
    successes: int = Field(..., ge=0)
    mean_quality_db: Optional[float] = Field(None, description="Mean over successful trials")
    std_quality_db: Optional[float] = Field(None, description="Population std over successful trials")
    failures: Dict[FailureKind, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _consistent(self) -> "SweepRow":
        if self.successes > self.trials:
            raise ValueError("successes exceed trials")
        if (self.mean_quality_db is None) != (self.successes == 0):
            raise ValueError("mean quality is present exactly when a trial succeeded")
        if sum(self.failures.values()) != self.trials - self.successes:
            raise ValueError("failure histogram does not account for every failed trial")
        return self

    @property
    def success_fraction(self) -> float:
        return self.successes / self.trials

    def failure_count(self, kind: FailureKind) -> int:
        return self.failures.get(kind, 0)


class SweepResult(BaseModel):
    """Rows of one sweep plus what is needed to replay it"""

    kernel: Optional[KernelId] = None
    target: str = ALL_TARGET
    swept_param: str = Field(..., description="'bits' (row value = range hi) or 'rate'")
    metric: Optional[Metric] = None
    rows: List[SweepRow] = Field(default_factory=list)
    master_seed: Optional[int] = None
    config: Dict[str, Any] = Field(default_factory=dict)
