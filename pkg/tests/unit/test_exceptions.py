"""
Unit Tests for Custom Exceptions (efid/utils/exceptions.py)

Tests exception hierarchy and the decode failure payload
"""

import pytest

from efid.utils.exceptions import (
    BitstreamError,
    ConfigurationError,
    DecodeFailure,
    DimensionError,
    EFIDException,
    FailureKind,
    ManifestLoadError,
    MetricError,
    PowerModelError,
    ReportError,
    UsageError,
    WorkloadLoadError,
)


class TestBaseException:
    """Test EFIDException base class"""

    def test_efid_exception_instantiation(self):
        """Test that EFIDException can be instantiated"""
        exc = EFIDException("Test error message")

        assert isinstance(exc, Exception)
        assert str(exc) == "Test error message"

    @pytest.mark.parametrize(
        "exc_class",
        [
            ConfigurationError,
            UsageError,
            DimensionError,
            BitstreamError,
            MetricError,
            PowerModelError,
            WorkloadLoadError,
            ManifestLoadError,
            ReportError,
        ],
    )
    def test_subclasses_caught_as_base(self, exc_class):
        """Test that every package error is catchable as EFIDException"""
        with pytest.raises(EFIDException) as exc_info:
            raise exc_class("boom")

        assert str(exc_info.value) == "boom"


class TestDecodeFailure:
    """Test DecodeFailure payload"""

    def test_carries_kind_and_location(self):
        """Test that kind and location are kept as attributes"""
        exc = DecodeFailure(FailureKind.INVALID_CODE, "entropy_decode")

        assert exc.kind is FailureKind.INVALID_CODE
        assert exc.location == "entropy_decode"
        assert str(exc) == "InvalidCode in entropy_decode"

    def test_detail_appended_to_message(self):
        """Test that detail text follows the location"""
        exc = DecodeFailure(FailureKind.LIMIT_EXCEEDED, "huffman_decode", "|mv| = 40")

        assert str(exc) == "LimitExceeded in huffman_decode: |mv| = 40"
        assert isinstance(exc, EFIDException)

    def test_failure_kind_values(self):
        """Test the four failure categories and their report names"""
        assert {k.value for k in FailureKind} == {
            "InvalidCode",
            "IndexOutOfRange",
            "StreamExhausted",
            "LimitExceeded",
        }
