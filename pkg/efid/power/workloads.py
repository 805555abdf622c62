"""
Workload mix loader

Workload files are JSON validated against a schema before being turned into
pydantic models.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema
from pydantic import ValidationError

from efid.config import settings
from efid.power.model import PowerParams, WorkloadMix
from efid.utils.exceptions import WorkloadLoadError
from efid.utils.logger import get_logger

logger = get_logger(__name__)

WORKLOAD_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["regions"],
    "properties": {
        "name": {"type": "string"},
        "note": {"type": "string"},
        "reference_power": {"type": "number", "minimum": 0, "maximum": 1},
        "regions": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "fraction", "rate"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "fraction": {"type": "number", "minimum": 0, "maximum": 1},
                    "rate": {"type": "number", "minimum": 0, "maximum": 1},
                    "bits": {"type": "string", "pattern": "^[0-9]+-[0-9]+$"},
                },
                "additionalProperties": False,
            },
        },
        "params": {"type": "object"},
    },
    "additionalProperties": False,
}

BUNDLED_WORKLOADS = ("g721_decode", "jpeg_decode", "h263_decode")

# alternate stems accepted for the bundled mixes
WORKLOAD_ALIASES = {
    "table2_g721": "g721_decode",
    "table2_jpeg": "jpeg_decode",
    "table2_h263": "h263_decode",
}


class Workload:
    """A loaded workload file"""

    def __init__(self, path: Path, mix: WorkloadMix, params: PowerParams, document: Dict[str, Any]):
        self.path = path
        self.mix = mix
        self.params = params
        self.document = document

    @property
    def name(self) -> str:
        return self.mix.name or self.path.stem

    @property
    def reference_power(self) -> Optional[float]:
        return self.document.get("reference_power")


def resolve_workload_path(name_or_path: Union[str, Path]) -> Path:
    """Accept a file path, or the stem (or alias stem) of a bundled workload"""
    path = Path(name_or_path)
    if path.exists():
        return path
    stem = WORKLOAD_ALIASES.get(path.stem, path.stem)
    bundled = Path(settings.WORKLOAD_DIR) / f"{stem}.json"
    if bundled.exists():
        return bundled
    raise WorkloadLoadError(f"Workload file not found: {name_or_path}")


def load_workload(name_or_path: Union[str, Path], params: Optional[PowerParams] = None) -> Workload:
    """
    Load and validate a workload file

    Args:
        name_or_path: File path or bundled workload stem
        params: Overrides the file's own params block when given

    Raises:
        WorkloadLoadError: if the file is unreadable or invalid
    """
    path = resolve_workload_path(name_or_path)
    try:
        with open(path, "r") as handle:
            document = json.load(handle)
        jsonschema.validate(document, WORKLOAD_SCHEMA)
        mix = WorkloadMix(regions=document["regions"], name=document.get("name", path.stem))
        resolved = params or PowerParams(**document.get("params", {}))
    except json.JSONDecodeError as e:
        logger.error("workload_parse_error", path=str(path), error=str(e))
        raise WorkloadLoadError(f"Invalid JSON in {path}: {e}")
    except jsonschema.ValidationError as e:
        logger.error("workload_schema_error", path=str(path), error=e.message)
        raise WorkloadLoadError(f"Invalid workload {path}: {e.message}")
    except ValidationError as e:
        logger.error("workload_validation_error", path=str(path), error=str(e))
        raise WorkloadLoadError(f"Invalid workload {path}: {e}")

    logger.debug("workload_loaded", path=str(path), regions=len(mix.regions))
    return Workload(path, mix, resolved, document)


def load_bundled_workloads(params: Optional[PowerParams] = None) -> List[Workload]:
    return [load_workload(name, params) for name in BUNDLED_WORKLOADS]


def bundled_calibration_set(params: Optional[PowerParams] = None) -> Tuple[List[WorkloadMix], List[float]]:
    """Mixes and reference powers of the bundled workloads"""
    workloads = load_bundled_workloads(params)
    return [w.mix for w in workloads], [float(w.reference_power) for w in workloads]
