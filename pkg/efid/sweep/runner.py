"""
Monte-Carlo trial execution and the two sweep protocols

Each trial encodes reliably, decodes under a fidelity context seeded by
derive_stream(master_seed, [trial_index]) and scores against the original
input. Trials run in a process pool; results are reduced in trial order, so
output does not depend on the worker count.
"""
import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from efid.alu.context import FidelityContext
from efid.codecs.adpcm import adpcm_decode, adpcm_encode
from efid.codecs.bitstream import Bitstream
from efid.codecs.jpeg import mini_jpeg_decode, mini_jpeg_encode
from efid.codecs.video import mini_video_decode, mini_video_encode
from efid.config import settings
from efid.corpus.generators import STANDARD_AUDIO, STANDARD_IMAGE, STANDARD_VIDEO, CorpusSpec, generate
from efid.fault.model import BitRange, FaultSpec, FlipModel
from efid.fault.rng import derive_stream
from efid.metrics.quality import psnr, snr_seg
from efid.sweep.schemas import (
    ALL_TARGET,
    DEFAULT_PINNED,
    KERNEL_METRIC,
    KERNEL_REGIONS,
    KNOWN_REGIONS,
    KernelId,
    SweepResult,
    SweepRow,
    TrialConfig,
    TrialResult,
)
from efid.utils.exceptions import ConfigurationError, DecodeFailure, FailureKind
from efid.utils.logger import get_logger, init_worker, sweep_context

logger = get_logger(__name__)

WORD_BITS = 32

STANDARD_INPUTS: Dict[KernelId, CorpusSpec] = {
    KernelId.ADPCM: STANDARD_AUDIO,
    KernelId.MINI_JPEG: STANDARD_IMAGE,
    KernelId.MINI_VIDEO: STANDARD_VIDEO,
}


@lru_cache(maxsize=16)
def prepare(kernel: KernelId, corpus: CorpusSpec, quality: int) -> Tuple[Any, Bitstream]:
    """Reference input and its reliable encoding, memoized per process"""
    reference = generate(corpus)
    if kernel is KernelId.ADPCM:
        bitstream = adpcm_encode(reference)
    elif kernel is KernelId.MINI_JPEG:
        bitstream = mini_jpeg_encode(reference, quality)
    else:
        bitstream = mini_video_encode(reference, quality)
    logger.debug("trial_input_prepared", kernel=kernel.value, payload_bytes=len(bitstream.payload))
    return reference, bitstream


def decode(kernel: KernelId, bitstream: Bitstream, ctx: FidelityContext):
    if kernel is KernelId.ADPCM:
        return adpcm_decode(bitstream, ctx)
    if kernel is KernelId.MINI_JPEG:
        return mini_jpeg_decode(bitstream, ctx)
    return mini_video_decode(bitstream, ctx)


def score(kernel: KernelId, reference, decoded):
    if kernel is KernelId.ADPCM:
        return snr_seg(reference, decoded, settings.SNR_SEGMENT_LEN)
    return psnr(reference, decoded)


def run_trial(cfg: TrialConfig) -> TrialResult:
    """
    Run one trial

    Decode failures are outcomes, not errors: they come back as a
    TrialResult carrying the failure kind and region.
    """
    reference, bitstream = prepare(cfg.kernel, cfg.corpus, cfg.quality)
    ctx = FidelityContext(cfg.regions, derive_stream(cfg.master_seed, [cfg.trial_index]))
    try:
        decoded = decode(cfg.kernel, bitstream, ctx)
    except DecodeFailure as e:
        return TrialResult(
            trial_index=cfg.trial_index, failure_kind=e.kind, failure_location=e.location
        )
    return TrialResult(trial_index=cfg.trial_index, score=score(cfg.kernel, reference, decoded))


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is not None:
        if workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {workers}")
        return workers
    return settings.EFID_THREADS or os.cpu_count() or 1


def run_trials(configs: Sequence[TrialConfig], workers: Optional[int] = None) -> List[TrialResult]:
    """Run trials, returning results in input order"""
    count = resolve_workers(workers)
    if count == 1 or len(configs) <= 1:
        return [run_trial(cfg) for cfg in configs]
    count = min(count, len(configs))
    chunksize = max(1, len(configs) // (count * 8))
    with ProcessPoolExecutor(max_workers=count, initializer=init_worker, initargs=(settings.LOG_LEVEL,)) as pool:
        return list(pool.map(run_trial, configs, chunksize=chunksize))


def aggregate(value: float, results: Iterable[TrialResult]) -> SweepRow:
    """Reduce one row's trial results"""
    results = list(results)
    qualities = [r.score.value for r in results if r.score is not None]
    failures: Dict[FailureKind, int] = {}
    for r in results:
        if r.failure_kind is not None:
            failures[r.failure_kind] = failures.get(r.failure_kind, 0) + 1
    mean = std = None
    if qualities:
        mean = float(np.mean(qualities))
        std = float(np.std(qualities))
    return SweepRow(
        value=value,
        trials=len(results),
        successes=len(qualities),
        mean_quality_db=mean,
        std_quality_db=std,
        failures=failures,
    )


def resolve_regions(
    kernel: KernelId,
    target: str,
    spec: FaultSpec,
    pinned_reliable: Iterable[str] = (),
) -> Dict[str, FaultSpec]:
    """
    Region table for a sweep target

    "all" maps every region of the kernel except the pinned ones; any other
    target maps exactly that region.

    Raises:
        ConfigurationError: if the target names no known region
    """
    pinned = set(pinned_reliable)
    for name in pinned:
        if name not in KNOWN_REGIONS:
            raise ConfigurationError(f"Unknown pinned region: {name!r}")
    if target == ALL_TARGET:
        return {name: spec for name in KERNEL_REGIONS[kernel] if name not in pinned}
    if target not in KNOWN_REGIONS:
        raise ConfigurationError(
            f"Unknown region: {target!r} (known: {', '.join(sorted(KNOWN_REGIONS))})"
        )
    return {} if target in pinned else {target: spec}


def _sweep(
    kernel: KernelId,
    target: str,
    swept_param: str,
    tables: Sequence[Tuple[float, Dict[str, FaultSpec]]],
    trials: int,
    corpus: CorpusSpec,
    quality: int,
    master_seed: int,
    workers: Optional[int],
    config: Dict[str, Any],
) -> SweepResult:
    if trials < 1:
        raise ConfigurationError(f"trials must be at least 1, got {trials}")
    configs = [
        TrialConfig(
            kernel=kernel,
            corpus=corpus,
            regions=regions,
            master_seed=master_seed,
            trial_index=index,
            quality=quality,
        )
        for _, regions in tables
        for index in range(trials)
    ]
    with sweep_context(kernel=kernel.value, target=target, swept_param=swept_param):
        logger.info("sweep_started", rows=len(tables), trials=trials)
        results = run_trials(configs, workers)

        rows = []
        for position, (value, _) in enumerate(tables):
            row = aggregate(value, results[position * trials:(position + 1) * trials])
            logger.info(
                "sweep_row_done",
                value=value,
                success_fraction=row.success_fraction,
                mean_quality_db=row.mean_quality_db,
            )
            rows.append(row)

    return SweepResult(
        kernel=kernel,
        target=target,
        swept_param=swept_param,
        metric=KERNEL_METRIC[kernel],
        rows=rows,
        master_seed=master_seed,
        config={
            "kernel": kernel.value,
            "target": target,
            "trials": trials,
            "quality": quality,
            "corpus": corpus.model_dump(mode="json"),
            **config,
        },
    )


def bit_range_sweep(
    kernel: KernelId,
    target: str = ALL_TARGET,
    rate: float = 0.04,
    trials: Optional[int] = None,
    *,
    corpus: Optional[CorpusSpec] = None,
    quality: Optional[int] = None,
    master_seed: Optional[int] = None,
    model: FlipModel = FlipModel.SINGLE,
    bit_points: Optional[Sequence[int]] = None,
    workers: Optional[int] = None,
) -> SweepResult:
    """
    Grow the flip range from [0,0] to [0,31] at a fixed rate

    Args:
        kernel: Kernel under test
        target: One region name or "all" (every region of the kernel)
        rate: Event rate applied in the targeted regions
        trials: Trials per row (default settings.DEFAULT_TRIALS)
        corpus: Input spec (default the kernel's standard corpus entry)
        quality: Encoder quality
        master_seed: Master seed (default settings.DEFAULT_SEED)
        model: Flip model
        bit_points: Range upper bounds to visit (default 0..31)
        workers: Process count

    Returns:
        One row per range, row value = range hi
    """
    points = list(range(WORD_BITS)) if bit_points is None else sorted(set(bit_points))
    for hi in points:
        if not 0 <= hi < WORD_BITS:
            raise ConfigurationError(f"bit range upper bound must be in [0, 31], got {hi}")
    tables = [
        (float(hi), resolve_regions(kernel, target, FaultSpec(rate=rate, bits=BitRange(lo=0, hi=hi), model=model)))
        for hi in points
    ]
    return _sweep(
        kernel,
        target,
        "bits",
        tables,
        settings.DEFAULT_TRIALS if trials is None else trials,
        corpus or STANDARD_INPUTS[kernel],
        quality or settings.DEFAULT_QUALITY,
        settings.DEFAULT_SEED if master_seed is None else master_seed,
        workers,
        {"mode": "bits", "rate": rate, "model": model.value, "bit_points": points},
    )


def error_rate_sweep(
    kernel: KernelId,
    rates: Sequence[float],
    bits: Optional[BitRange] = None,
    trials: Optional[int] = None,
    pinned_reliable: Optional[Iterable[str]] = None,
    *,
    target: str = ALL_TARGET,
    corpus: Optional[CorpusSpec] = None,
    quality: Optional[int] = None,
    master_seed: Optional[int] = None,
    model: FlipModel = FlipModel.SINGLE,
    workers: Optional[int] = None,
) -> SweepResult:
    """
    Vary the event rate with a fixed flip range (default bits 0-7)

    Pinned regions stay reliable; when targeting "all" without an explicit
    pinned set, the kernel's sensitive regions are pinned.

    Returns:
        One row per rate, in the order given
    """
    if not rates:
        raise ConfigurationError("error_rate_sweep needs at least one rate")
    for rate in rates:
        if not 0.0 <= rate <= 1.0:
            raise ConfigurationError(f"rates must lie in [0, 1], got {rate}")
    bits = bits or BitRange(lo=0, hi=7)
    if pinned_reliable is None:
        pinned = list(DEFAULT_PINNED[kernel]) if target == ALL_TARGET else []
    else:
        pinned = list(pinned_reliable)
    tables = [
        (float(rate), resolve_regions(kernel, target, FaultSpec(rate=rate, bits=bits, model=model), pinned))
        for rate in rates
    ]
    return _sweep(
        kernel,
        target,
        "rate",
        tables,
        settings.DEFAULT_TRIALS if trials is None else trials,
        corpus or STANDARD_INPUTS[kernel],
        quality or settings.DEFAULT_QUALITY,
        settings.DEFAULT_SEED if master_seed is None else master_seed,
        workers,
        {"mode": "rate", "bits": str(bits), "model": model.value, "pinned_reliable": sorted(pinned)},
    )


def region_sweep(
    kernel: KernelId,
    rate: float = 0.04,
    trials: Optional[int] = None,
    **kwargs: Any,
) -> Dict[str, SweepResult]:
    """Bit-range sweeps for "all" and for each region of the kernel on its own"""
    targets = (ALL_TARGET,) + KERNEL_REGIONS[kernel]
    return {target: bit_range_sweep(kernel, target, rate, trials, **kwargs) for target in targets}


def fixed_config_trials(
    kernel: KernelId,
    regions: Dict[str, FaultSpec],
    trials: Optional[int] = None,
    *,
    corpus: Optional[CorpusSpec] = None,
    quality: Optional[int] = None,
    master_seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> SweepRow:
    """Aggregate trials of one explicit region table (e.g. a per-function mix)"""
    result = _sweep(
        kernel,
        "custom",
        "config",
        [(0.0, regions)],
        settings.DEFAULT_TRIALS if trials is None else trials,
        corpus or STANDARD_INPUTS[kernel],
        quality or settings.DEFAULT_QUALITY,
        settings.DEFAULT_SEED if master_seed is None else master_seed,
        workers,
        {"regions": {name: spec.to_config() for name, spec in regions.items()}},
    )
    return result.rows[0]
