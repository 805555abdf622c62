"""
Command handlers

Each handler takes its argument vector and returns an exit code:
0 on success, 1 on a configuration error, 2 on a runtime failure.
Messages go to stderr, results to stdout; files are written atomically and
stamped with a `<file>.meta.json` sidecar so every run can be replayed.
"""
import argparse
import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from efid.alu.context import FidelityContext
from efid.cli.schemas import ExperimentConfig
from efid.codecs.adpcm import adpcm_encode
from efid.codecs.bitstream import Bitstream, CodecId
from efid.codecs.jpeg import mini_jpeg_encode
from efid.codecs.media import ImageYCbCr, PcmAudio
from efid.codecs.video import mini_video_encode
from efid.config import settings
from efid.corpus.generators import CorpusKind, CorpusSpec, generate, standard_corpus
from efid.corpus.io import read_image, read_video, read_wav, write_image, write_video, write_wav
from efid.fault.model import FaultSpec
from efid.fault.rng import RNG_ALGORITHM_ID, derive_stream
from efid.power.model import PowerParams, calibrate_alu_share, energy_savings, normalized_power
from efid.power.workloads import BUNDLED_WORKLOADS, bundled_calibration_set, load_workload
from efid.sweep.manifest import ManifestLoader, run_manifest, write_result
from efid.sweep.report import plot_svg, read_csv, summarize_csv
from efid.sweep.runner import bit_range_sweep, decode, error_rate_sweep, score
from efid.sweep.schemas import ALL_TARGET, KERNEL_MEDIA, KERNEL_REGIONS, KernelId
from efid.utils.exceptions import (
    ConfigurationError,
    DecodeFailure,
    EFIDException,
    ManifestLoadError,
    WorkloadLoadError,
)
from efid.utils.files import atomic_write_bytes, write_metadata
from efid.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

CODEC_KERNELS: Dict[CodecId, KernelId] = {
    CodecId.ADPCM: KernelId.ADPCM,
    CodecId.MINI_JPEG: KernelId.MINI_JPEG,
    CodecId.MINI_VIDEO: KernelId.MINI_VIDEO,
}

Handler = Callable[[Sequence[str]], int]


class ArgumentParser(argparse.ArgumentParser):
    """argparse with flag errors raised instead of exiting"""

    def error(self, message: str):
        raise ConfigurationError(f"{self.prog}: {message}")


def command(handler: Callable[[Sequence[str]], int]) -> Handler:
    """Map exceptions raised by a handler to exit codes"""

    @functools.wraps(handler)
    def wrapper(argv: Sequence[str]) -> int:
        try:
            return handler(list(argv))
        except SystemExit as e:
            # --help
            return int(e.code or 0)
        except (ConfigurationError, ValidationError, ManifestLoadError, WorkloadLoadError) as e:
            logger.error("configuration_error", command=handler.__name__, error=str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        except DecodeFailure as e:
            logger.error("decode_failed", kind=e.kind.value, location=e.location)
            print(f"decode failed: {e}", file=sys.stderr)
            return EXIT_RUNTIME
        except (EFIDException, OSError) as e:
            logger.error("command_failed", command=handler.__name__, error=str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_RUNTIME

    return wrapper


def stamp(seed: Optional[int], config: Dict[str, Any]) -> Dict[str, Any]:
    """Metadata that lets a run be replayed exactly"""
    return {
        "format_version": settings.FORMAT_VERSION,
        "rng_algorithm": RNG_ALGORITHM_ID,
        "master_seed": seed,
        "config": config,
    }


def read_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Parse a JSON experiment config; no path means an empty config"""
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except OSError as e:
        raise ConfigurationError(f"Cannot read config {path}: {e}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid JSON in config {path}: {e}")
    if not isinstance(document, dict):
        raise ConfigurationError(f"Config {path} must be a JSON object")
    return document


def override(document: Dict[str, Any], **values: Any) -> Dict[str, Any]:
    """Apply flag values on top of file values; unset flags leave the file alone"""
    for key, value in values.items():
        if value is not None:
            document[key] = value
    return document


def parse_float_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ConfigurationError(f"Expected comma-separated numbers, got {text!r}")


def parse_int_list(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ConfigurationError(f"Expected comma-separated integers, got {text!r}")


def add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", choices=[k.value for k in CorpusKind], help="Synthetic input kind")
    parser.add_argument("--corpus-seed", type=int, help="Seed of the synthetic input")
    parser.add_argument("--sample-rate", type=int)
    parser.add_argument("--duration", type=float, help="Audio length in seconds")
    parser.add_argument("--width", type=int)
    parser.add_argument("--height", type=int)
    parser.add_argument("--frames", type=int)
    parser.add_argument("--fps", type=int)


def corpus_from_flags(args: argparse.Namespace) -> Optional[CorpusSpec]:
    """A CorpusSpec from flags; None when no corpus flag is set"""
    fields = override(
        {},
        kind=args.kind,
        seed=args.corpus_seed,
        sample_rate=args.sample_rate,
        duration=args.duration,
        width=args.width,
        height=args.height,
        frames=args.frames,
        fps=args.fps,
    )
    if not fields:
        return None
    if "kind" not in fields:
        raise ConfigurationError("--kind is required when describing a synthetic input")
    return CorpusSpec.model_validate(fields)


def read_media(kernel: KernelId, path: str, fps: Optional[int] = None):
    media = KERNEL_MEDIA[kernel]
    if media == "audio":
        return read_wav(path)
    if media == "image":
        return read_image(path)
    return read_video(path, fps or 15)


def write_media(path: Path, decoded) -> Path:
    if isinstance(decoded, PcmAudio):
        return write_wav(path, decoded)
    if isinstance(decoded, ImageYCbCr):
        return write_image(path, decoded)
    return write_video(path, decoded)


def encode_media(kernel: KernelId, media, quality: int) -> Bitstream:
    if kernel is KernelId.ADPCM:
        return adpcm_encode(media)
    if kernel is KernelId.MINI_JPEG:
        return mini_jpeg_encode(media, quality)
    return mini_video_encode(media, quality)


@command
def cmd_gen_corpus(argv: Sequence[str]) -> int:
    """Generate a synthetic input, or the whole standard corpus"""
    parser = ArgumentParser(prog="efid gen-corpus", description=cmd_gen_corpus.__doc__)
    add_corpus_flags(parser)
    parser.add_argument("--out", help="Output file (.wav, .pgm, .ppm) or frame directory for video")
    parser.add_argument("--standard", action="store_true", help="Write the standard corpus into --outdir")
    parser.add_argument("--outdir", help="Directory for --standard")
    args = parser.parse_args(argv)

    if args.standard:
        if not args.outdir:
            raise ConfigurationError("--standard needs --outdir")
        outdir = Path(args.outdir)
        targets = {"audio": outdir / "audio.wav", "image": outdir / "image.ppm", "video": outdir / "video"}
        specs = standard_corpus()
    else:
        spec = corpus_from_flags(args)
        if spec is None or not args.out:
            raise ConfigurationError("gen-corpus needs --kind and --out (or --standard --outdir)")
        specs = {spec.kind.media: spec}
        targets = {spec.kind.media: Path(args.out)}

    for media, spec in specs.items():
        path = targets[media]
        write_media(path, generate(spec))
        write_metadata(path, stamp(spec.seed, {"corpus": spec.model_dump(mode="json")}))
        logger.info("corpus_written", kind=spec.kind.value, path=str(path))
        print(path)
    return EXIT_OK


@command
def cmd_encode(argv: Sequence[str]) -> int:
    """Encode an input file or a synthetic input into a bitstream file"""
    parser = ArgumentParser(prog="efid encode", description=cmd_encode.__doc__)
    parser.add_argument("--kernel", required=True, choices=[k.value for k in KernelId])
    parser.add_argument("--input", help="WAV, PGM/PPM, or frame directory; omit to synthesize")
    add_corpus_flags(parser)
    parser.add_argument("--quality", type=int, default=settings.DEFAULT_QUALITY)
    parser.add_argument("--out", required=True, help="Bitstream output path")
    args = parser.parse_args(argv)

    kernel = KernelId(args.kernel)
    if not 1 <= args.quality <= 100:
        raise ConfigurationError(f"--quality must be in [1, 100], got {args.quality}")
    if args.input:
        media = read_media(kernel, args.input, args.fps)
        source: Dict[str, Any] = {"input": str(args.input)}
        seed = None
    else:
        config = ExperimentConfig(kernel=kernel, corpus=corpus_from_flags(args))
        media = generate(config.resolved_corpus)
        source = {"corpus": config.resolved_corpus.model_dump(mode="json")}
        seed = config.resolved_corpus.seed

    bitstream = encode_media(kernel, media, args.quality)
    out = Path(args.out)
    atomic_write_bytes(out, bitstream.to_bytes())
    write_metadata(out, stamp(seed, {"kernel": kernel.value, "quality": args.quality, **source}))
    logger.info("bitstream_written", kernel=kernel.value, path=str(out), payload_bytes=bitstream.payload_len)
    print(out)
    return EXIT_OK


@command
def cmd_decode(argv: Sequence[str]) -> int:
    """Decode a bitstream file under a fault configuration"""
    parser = ArgumentParser(prog="efid decode", description=cmd_decode.__doc__)
    parser.add_argument("--input", required=True, help="Bitstream file")
    parser.add_argument("--out", required=True, help="Decoded output (.wav, .pgm/.ppm, or frame directory)")
    parser.add_argument("--config", help="JSON experiment config supplying the region table")
    parser.add_argument("--region", help="Region to inject into, or 'all'")
    parser.add_argument("--rate", type=float)
    parser.add_argument("--bits", help="Flip range lo-hi")
    parser.add_argument("--model", choices=["single", "perbit"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trial-index", type=int, default=0)
    parser.add_argument("--reference", help="Original input; prints the quality score when given")
    args = parser.parse_args(argv)

    with open(args.input, "rb") as handle:
        bitstream = Bitstream.from_bytes(handle.read())
    kernel = CODEC_KERNELS[bitstream.codec]

    document = override(read_config_file(args.config), kernel=kernel.value, seed=args.seed)
    if args.region is not None:
        spec = FaultSpec.model_validate(override({}, rate=args.rate, bits=args.bits, model=args.model))
        names = KERNEL_REGIONS[kernel] if args.region == ALL_TARGET else (args.region,)
        document["regions"] = {name: spec.to_config() for name in names}
    config = ExperimentConfig.model_validate(document)
    regions = config.regions
    if args.trial_index < 0:
        raise ConfigurationError(f"--trial-index must be non-negative, got {args.trial_index}")

    ctx = FidelityContext(regions, derive_stream(config.seed, [args.trial_index]))
    decoded = decode(kernel, bitstream, ctx)
    out = Path(args.out)
    write_media(out, decoded)
    resolved = {
        "kernel": kernel.value,
        "input": str(args.input),
        "trial_index": args.trial_index,
        "regions": {name: s.to_config() for name, s in regions.items()},
    }
    write_metadata(out, stamp(config.seed, resolved))
    logger.info("decode_done", kernel=kernel.value, op_counts=ctx.op_counts)

    if args.reference:
        quality = score(kernel, read_media(kernel, args.reference, bitstream.fps), decoded)
        print(f"{quality.metric.value} {quality.value:.6f}")
    else:
        print(out)
    return EXIT_OK


@command
def cmd_sweep(argv: Sequence[str]) -> int:
    """Run a bit-range or error-rate sweep, or every panel of a manifest"""
    parser = ArgumentParser(prog="efid sweep", description=cmd_sweep.__doc__)
    parser.add_argument("--manifest", help="YAML sweep manifest; runs all panels")
    parser.add_argument("--outdir", help="Output directory for --manifest")
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--kernel", choices=[k.value for k in KernelId])
    parser.add_argument("--mode", choices=["bits", "rate"])
    parser.add_argument("--region", help="Region name or 'all'")
    parser.add_argument("--rate", type=float, help="Rate of a bits sweep")
    parser.add_argument("--rates", help="Comma-separated rates of a rate sweep")
    parser.add_argument("--bits", help="Flip range lo-hi of a rate sweep")
    parser.add_argument("--bit-points", help="Comma-separated range upper bounds of a bits sweep")
    parser.add_argument("--pinned", help="Comma-separated regions kept reliable")
    parser.add_argument("--model", choices=["single", "perbit"])
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--quality", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--csv", help="CSV output path; stdout when omitted")
    parser.add_argument("--svg", help="SVG plot output path")
    args = parser.parse_args(argv)

    if args.manifest:
        if not args.outdir:
            raise ConfigurationError("--manifest needs --outdir")
        manifest = ManifestLoader(args.manifest).load()
        for path in run_manifest(manifest, args.outdir, args.workers):
            print(path)
        return EXIT_OK

    document = override(
        read_config_file(args.config),
        kernel=args.kernel,
        trials=args.trials,
        seed=args.seed,
        quality=args.quality,
        workers=args.workers,
        csv=args.csv,
        svg=args.svg,
    )
    override(
        document.setdefault("sweep", {}),
        mode=args.mode,
        target=args.region,
        rate=args.rate,
        rates=parse_float_list(args.rates),
        bits=args.bits,
        bit_points=parse_int_list(args.bit_points),
        pinned_reliable=None if args.pinned is None else [p for p in args.pinned.split(",") if p],
        model=args.model,
    )
    if "kernel" not in document:
        raise ConfigurationError("sweep needs --kernel (or a config file naming one)")
    config = ExperimentConfig.model_validate(document)
    sweep = config.sweep

    if sweep.mode == "bits":
        result = bit_range_sweep(
            config.kernel,
            sweep.target,
            sweep.rate,
            config.trials,
            corpus=config.resolved_corpus,
            quality=config.quality,
            master_seed=config.seed,
            model=sweep.model,
            bit_points=sweep.bit_points,
            workers=config.workers,
        )
    else:
        result = error_rate_sweep(
            config.kernel,
            sweep.rates,
            sweep.bits,
            config.trials,
            sweep.pinned_reliable,
            target=sweep.target,
            corpus=config.resolved_corpus,
            quality=config.quality,
            master_seed=config.seed,
            model=sweep.model,
            workers=config.workers,
        )

    write_result(result, config.csv, config.svg)
    if config.csv is None:
        sys.stdout.write(summarize_csv(result).decode("utf-8"))
    return EXIT_OK


@command
def cmd_power(argv: Sequence[str]) -> int:
    """Print normalized power for workload mixes"""
    parser = ArgumentParser(prog="efid power", description=cmd_power.__doc__)
    parser.add_argument(
        "--workload", action="append", help="Workload file or bundled name (repeatable; default all bundled)"
    )
    parser.add_argument("--alpha", type=float, help="Elastic share of dynamic power")
    parser.add_argument("--curve", choices=["linear", "exponential"])
    parser.add_argument("--k", type=float, help="Exponential curve steepness")
    parser.add_argument("--v-crit", type=float)
    parser.add_argument("--eps-max", type=float)
    parser.add_argument("--calibrate", action="store_true", help="Fit alpha to the bundled reference values")
    parser.add_argument("--out", help="Also write a JSON report here")
    args = parser.parse_args(argv)

    overrides = override({}, alu_share=args.alpha, curve=args.curve, k=args.k, v_crit=args.v_crit, eps_max=args.eps_max)
    params = PowerParams.model_validate(overrides) if overrides else None

    report: Dict[str, Any] = {"workloads": []}
    if args.calibrate:
        mixes, targets = bundled_calibration_set(params)
        fitted = calibrate_alu_share(mixes, targets, params)
        params = (params or PowerParams()).model_copy(update={"alu_share": fitted})
        report["calibrated_alu_share"] = fitted
        print(f"alu_share\t{fitted:.4f}")

    for name in args.workload or list(BUNDLED_WORKLOADS):
        workload = load_workload(name, params)
        power = normalized_power(workload.mix, workload.params)
        report["workloads"].append(
            {
                "name": workload.name,
                "normalized_power": power,
                "energy_savings": energy_savings(workload.mix, workload.params),
                "reference_power": workload.reference_power,
                "params": workload.params.model_dump(mode="json"),
            }
        )
        print(f"{workload.name}\t{power:.4f}")

    if args.out:
        out = Path(args.out)
        atomic_write_bytes(out, (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8"))
        write_metadata(out, stamp(None, {"workloads": args.workload or list(BUNDLED_WORKLOADS), **overrides}))
    return EXIT_OK


@command
def cmd_plot(argv: Sequence[str]) -> int:
    """Render a sweep CSV as an SVG plot"""
    parser = ArgumentParser(prog="efid plot", description=cmd_plot.__doc__)
    parser.add_argument("--csv", required=True, help="Sweep CSV")
    parser.add_argument("--svg", required=True, help="SVG output path")
    parser.add_argument("--title")
    args = parser.parse_args(argv)

    with open(args.csv, "rb") as handle:
        result = read_csv(handle.read())
    out = Path(args.svg)
    atomic_write_bytes(out, plot_svg(result, args.title))
    write_metadata(out, stamp(result.master_seed, {"source_csv": str(args.csv), "title": args.title}))
    print(out)
    return EXIT_OK


COMMANDS: Dict[str, Handler] = {
    "gen-corpus": cmd_gen_corpus,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "sweep": cmd_sweep,
    "power": cmd_power,
    "plot": cmd_plot,
}
