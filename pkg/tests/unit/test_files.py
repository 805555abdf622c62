"""
Unit Tests for Atomic Writes (efid/utils/files.py)
"""

import json
from unittest.mock import patch

import pytest

from efid.utils.files import atomic_write_bytes, atomic_write_dir, write_metadata


class TestAtomicWrite:
    """Test temp file + rename writes"""

    def test_writes_and_creates_parents(self, tmp_path):
        """Test that missing parent directories are created"""
        target = tmp_path / "a" / "b" / "out.bin"

        result = atomic_write_bytes(target, b"\x00\x01payload")

        assert result == target
        assert target.read_bytes() == b"\x00\x01payload"

    def test_replaces_existing_file(self, tmp_path):
        """Test that an existing file is replaced whole"""
        target = tmp_path / "out.txt"
        target.write_bytes(b"old contents that are longer")

        atomic_write_bytes(target, b"new")

        assert target.read_bytes() == b"new"

    def test_failed_write_leaves_no_partial_file(self, tmp_path):
        """Test that a failing rename leaves neither target nor temp file"""
        target = tmp_path / "out.txt"

        with patch('efid.utils.files.os.replace', side_effect=OSError("disk full")):
            with pytest.raises(OSError):
                atomic_write_bytes(target, b"data")

        assert list(tmp_path.iterdir()) == []


class TestAtomicWriteDir:
    """Test staging directory + rename writes"""

    def test_populates_and_renames(self, tmp_path):
        """Test that the populated staging directory becomes the target"""
        target = tmp_path / "out"

        result = atomic_write_dir(target, lambda staging: (staging / "a.txt").write_bytes(b"a"))

        assert result == target
        assert (target / "a.txt").read_bytes() == b"a"
        assert [p.name for p in tmp_path.iterdir()] == ["out"]

    def test_failed_populate_keeps_old_directory(self, tmp_path):
        """Test that an error while populating leaves the previous directory intact"""
        target = tmp_path / "out"
        target.mkdir()
        (target / "old.txt").write_bytes(b"old")

        def populate(staging):
            (staging / "new.txt").write_bytes(b"new")
            raise OSError("disk full")

        with pytest.raises(OSError):
            atomic_write_dir(target, populate)

        assert [p.name for p in tmp_path.iterdir()] == ["out"]
        assert [p.name for p in target.iterdir()] == ["old.txt"]

class TestWriteMetadata:
    """Test metadata sidecars"""

    def test_sidecar_next_to_file(self, tmp_path):
        """Test that the sidecar is <file>.meta.json with sorted JSON"""
        target = tmp_path / "sweep.csv"

        sidecar = write_metadata(target, {"master_seed": 7, "config": {"b": 1, "a": 2}})

        assert sidecar.name == "sweep.csv.meta.json"
        assert json.loads(sidecar.read_text()) == {"master_seed": 7, "config": {"a": 2, "b": 1}}
        assert sidecar.read_text().index('"a"') < sidecar.read_text().index('"b"')
