"""
Sweep Manifest Loader

A YAML manifest lists sweep panels (kernel, protocol, targets) sharing one
trial count, seed and corpus. Running a manifest writes one CSV, one SVG and
their metadata sidecars per (panel, target).
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from efid.config import settings
from efid.corpus.generators import CorpusSpec
from efid.fault.model import BitRange, FlipModel
from efid.fault.rng import RNG_ALGORITHM_ID
from efid.sweep.report import plot_svg, summarize_csv
from efid.sweep.runner import STANDARD_INPUTS, bit_range_sweep, error_rate_sweep
from efid.sweep.schemas import ALL_TARGET, KERNEL_MEDIA, KernelId, SweepResult, check_region_name
from efid.utils.exceptions import ManifestLoadError
from efid.utils.files import atomic_write_bytes, write_metadata
from efid.utils.logger import get_logger

logger = get_logger(__name__)


class ManifestPanel(BaseModel):
    """One sweep protocol applied to a kernel, per target"""

    name: str = Field(..., pattern=r"^[a-z0-9_]+$")
    kernel: KernelId
    mode: Literal["bits", "rate"]
    targets: List[str] = Field(default_factory=lambda: [ALL_TARGET], min_length=1)
    rate: float = Field(0.04, ge=0, le=1, description="Rate of a bits sweep")
    rates: List[float] = Field(default_factory=lambda: [0.0, 0.01, 0.02, 0.04, 0.07, 0.10])
    bits: BitRange = Field(default_factory=lambda: BitRange(lo=0, hi=7), description="Range of a rate sweep")
    bit_points: Optional[List[int]] = None
    pinned_reliable: Optional[List[str]] = None
    model: FlipModel = FlipModel.SINGLE

    @field_validator("targets")
    @classmethod
    def _known_targets(cls, targets: List[str]) -> List[str]:
        return [t if t == ALL_TARGET else check_region_name(t) for t in targets]


class SweepManifest(BaseModel):
    """A set of panels run with shared trial count, seed and corpus"""

    version: int = 1
    profile: str = "ci"
    trials: int = Field(settings.CI_TRIALS, ge=1)
    seed: int = Field(settings.DEFAULT_SEED, ge=0)
    quality: int = Field(settings.DEFAULT_QUALITY, ge=1, le=100)
    corpus: Dict[str, CorpusSpec] = Field(default_factory=dict)
    panels: List[ManifestPanel] = Field(..., min_length=1)

    def corpus_for(self, kernel: KernelId) -> CorpusSpec:
        return self.corpus.get(KERNEL_MEDIA[kernel], STANDARD_INPUTS[kernel])


class ManifestLoader:
    """Loads and validates a sweep manifest"""

    def __init__(self, manifest_path: Optional[Union[str, Path]] = None):
        """
        Initialize manifest loader

        Args:
            manifest_path: Path to the YAML manifest.
                           Defaults to settings.MANIFEST_PATH
        """
        self.manifest_path = Path(manifest_path or settings.MANIFEST_PATH)

    def load(self) -> SweepManifest:
        """
        Load the manifest

        Raises:
            ManifestLoadError: If the file is missing, not YAML, or invalid
        """
        logger.info("loading_manifest", path=str(self.manifest_path))
        if not self.manifest_path.exists():
            raise ManifestLoadError(f"Manifest file not found: {self.manifest_path}")
        try:
            with open(self.manifest_path, "r", encoding="utf-8") as f:
                document = yaml.safe_load(f)
        except yaml.YAMLError as e:
            logger.error("yaml_parse_error", error=str(e))
            raise ManifestLoadError(f"Failed to parse YAML: {e}")

        if not isinstance(document, dict) or "panels" not in document:
            raise ManifestLoadError("Manifest must be a mapping with a 'panels' list")
        try:
            manifest = SweepManifest.model_validate(document)
        except ValidationError as e:
            logger.error("manifest_validation_error", error=str(e))
            raise ManifestLoadError(f"Invalid manifest {self.manifest_path}: {e}")

        logger.info("manifest_loaded", panels=len(manifest.panels), trials=manifest.trials)
        return manifest


def run_panel(
    manifest: SweepManifest, panel: ManifestPanel, target: str, workers: Optional[int] = None
) -> SweepResult:
    corpus = manifest.corpus_for(panel.kernel)
    if panel.mode == "bits":
        return bit_range_sweep(
            panel.kernel,
            target,
            panel.rate,
            manifest.trials,
            corpus=corpus,
            quality=manifest.quality,
            master_seed=manifest.seed,
            model=panel.model,
            bit_points=panel.bit_points,
            workers=workers,
        )
    return error_rate_sweep(
        panel.kernel,
        panel.rates,
        panel.bits,
        manifest.trials,
        panel.pinned_reliable,
        target=target,
        corpus=corpus,
        quality=manifest.quality,
        master_seed=manifest.seed,
        model=panel.model,
        workers=workers,
    )


def result_metadata(result: SweepResult) -> Dict[str, Any]:
    """Replay stamp written next to every sweep artifact"""
    return {
        "format_version": settings.FORMAT_VERSION,
        "rng_algorithm": RNG_ALGORITHM_ID,
        "master_seed": result.master_seed,
        "config": result.config,
    }


def write_result(result: SweepResult, csv_path: Optional[Path], svg_path: Optional[Path]) -> List[Path]:
    """Write CSV and/or SVG artifacts with their sidecars"""
    written = []
    metadata = result_metadata(result)
    if csv_path is not None:
        written.append(atomic_write_bytes(csv_path, summarize_csv(result)))
        write_metadata(csv_path, metadata)
    if svg_path is not None:
        written.append(atomic_write_bytes(svg_path, plot_svg(result)))
        write_metadata(svg_path, metadata)
    return written


def run_manifest(
    manifest: SweepManifest, outdir: Union[str, Path], workers: Optional[int] = None
) -> List[Path]:
    """Run every (panel, target) and write its artifacts under outdir"""
    outdir = Path(outdir)
    written: List[Path] = []
    for panel in manifest.panels:
        for target in panel.targets:
            result = run_panel(manifest, panel, target, workers)
            stem = f"{panel.name}_{target}"
            written += write_result(result, outdir / f"{stem}.csv", outdir / f"{stem}.svg")
            logger.info("panel_written", panel=panel.name, target=target)
    return written
