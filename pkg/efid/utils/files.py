"""
Atomic output writes

Outputs are written to a temp file (or temp directory) next to the
destination and renamed into place, so a failed command never leaves a
partial output behind.
"""
import json
import os
import shutil
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Union

from efid.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    """
    Write bytes to path via temp file + rename

    Args:
        path: Destination path (parent directories are created)
        data: File contents

    Returns:
        The destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug("file_written", path=str(target), size=len(data))
    return target


def atomic_write_dir(path: PathLike, populate: Callable[[Path], None]) -> Path:
    """
    Build a directory in a sibling staging directory, then rename it into place

    An existing directory at `path` is replaced as a whole.

    Args:
        path: Destination directory
        populate: Called with the staging directory to write its contents

    Returns:
        The destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{target.name}.", dir=target.parent))
    staging.chmod(0o755)
    try:
        populate(staging)
        if target.exists():
            retired = staging.with_name(f"{staging.name}.old")
            os.replace(target, retired)
            os.replace(staging, target)
            shutil.rmtree(retired)
        else:
            os.replace(staging, target)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    logger.debug("directory_written", path=str(target))
    return target

def write_metadata(path: PathLike, metadata: Dict[str, Any]) -> Path:
    """Write the `<file>.meta.json` sidecar describing how `path` was produced"""
    sidecar = Path(f"{path}.meta.json")
    payload = json.dumps(metadata, indent=2, sort_keys=True) + "\n"
    return atomic_write_bytes(sidecar, payload.encode("utf-8"))
