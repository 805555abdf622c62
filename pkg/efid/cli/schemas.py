"""
Experiment configuration schemas for the command line

An experiment config file is JSON matching ExperimentConfig; command-line
flags override its values. Everything is validated before any work starts.
"""
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from efid.config import settings
from efid.corpus.generators import CorpusSpec
from efid.fault.model import BitRange, FaultSpec, FlipModel
from efid.sweep.runner import STANDARD_INPUTS
from efid.sweep.schemas import ALL_TARGET, KERNEL_MEDIA, KernelId, check_region_name

DEFAULT_RATES = [0.0, 0.01, 0.02, 0.04, 0.07, 0.10]


class SweepSettings(BaseModel):
    """Which protocol to run and its parameters"""

    model_config = ConfigDict(extra="forbid")

    mode: Literal["bits", "rate"] = Field("bits", description="'bits' grows the flip range, 'rate' varies the rate")
    target: str = Field(ALL_TARGET, description="Region name or 'all'")
    rate: float = Field(0.04, ge=0, le=1, description="Rate of a bits sweep")
    rates: List[float] = Field(default_factory=lambda: list(DEFAULT_RATES), min_length=1)
    bits: Optional[BitRange] = Field(None, description="Flip range of a rate sweep (default 0-7)")
    bit_points: Optional[List[int]] = Field(None, description="Range upper bounds of a bits sweep")
    pinned_reliable: Optional[List[str]] = None
    model: FlipModel = FlipModel.SINGLE

    @field_validator("target")
    @classmethod
    def _known_target(cls, target: str) -> str:
        return target if target == ALL_TARGET else check_region_name(target)

    @field_validator("rates")
    @classmethod
    def _rates_in_range(cls, rates: List[float]) -> List[float]:
        for rate in rates:
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"rates must lie in [0, 1], got {rate}")
        return rates

    @field_validator("pinned_reliable")
    @classmethod
    def _known_pinned(cls, names: Optional[List[str]]) -> Optional[List[str]]:
        return None if names is None else [check_region_name(n) for n in names]


class ExperimentConfig(BaseModel):
    """One experiment: kernel, input, fault regions, protocol and outputs"""

    model_config = ConfigDict(extra="forbid")

    kernel: KernelId
    corpus: Optional[CorpusSpec] = Field(None, description="Defaults to the kernel's standard input")
    regions: Dict[str, FaultSpec] = Field(default_factory=dict, description="Region table for decode")
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    seed: int = Field(settings.DEFAULT_SEED, ge=0, le=2**64 - 1)
    trials: int = Field(settings.DEFAULT_TRIALS, ge=1)
    quality: int = Field(settings.DEFAULT_QUALITY, ge=1, le=100)
    workers: Optional[int] = Field(None, ge=1)
    csv: Optional[Path] = None
    svg: Optional[Path] = None

    @field_validator("regions")
    @classmethod
    def _known_regions(cls, regions: Dict[str, FaultSpec]) -> Dict[str, FaultSpec]:
        for name in regions:
            check_region_name(name)
        return regions

    @model_validator(mode="after")
    def _corpus_matches_kernel(self) -> "ExperimentConfig":
        if self.corpus is not None and self.corpus.kind.media != KERNEL_MEDIA[self.kernel]:
            raise ValueError(
                f"kernel {self.kernel.value} needs {KERNEL_MEDIA[self.kernel]} input, "
                f"got {self.corpus.kind.value}"
            )
        return self

    @property
    def resolved_corpus(self) -> CorpusSpec:
        return self.corpus or STANDARD_INPUTS[self.kernel]
