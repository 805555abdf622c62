"""
Unit Tests for Experiment Config Schemas (efid/cli/schemas.py)

Tests Pydantic model validation, defaults, and edge cases
"""

import pytest
from pydantic import ValidationError

from efid.cli.schemas import DEFAULT_RATES, ExperimentConfig, SweepSettings
from efid.corpus.generators import CorpusKind, CorpusSpec
from efid.fault.model import FlipModel
from efid.sweep.runner import STANDARD_INPUTS
from efid.sweep.schemas import KernelId


class TestSweepSettings:
    """Test SweepSettings schema"""

    def test_defaults(self):
        """Test a bits sweep over every region by default"""
        sweep = SweepSettings()

        assert sweep.mode == "bits"
        assert sweep.target == "all"
        assert sweep.rates == DEFAULT_RATES
        assert sweep.bits is None
        assert sweep.model is FlipModel.SINGLE

    def test_bits_from_string(self):
        """Test the 'lo-hi' form"""
        sweep = SweepSettings(mode="rate", bits="0-15", model="perbit")

        assert (sweep.bits.lo, sweep.bits.hi) == (0, 15)
        assert sweep.model is FlipModel.PER_BIT

    def test_unknown_target(self):
        """Test that the offending region name appears in the error"""
        with pytest.raises(ValidationError, match="bogus_region"):
            SweepSettings(target="bogus_region")

    def test_rates_out_of_range(self):
        """Test rate bounds"""
        with pytest.raises(ValidationError):
            SweepSettings(rates=[0.1, 1.2])

    def test_empty_rates(self):
        """Test that at least one rate is needed"""
        with pytest.raises(ValidationError):
            SweepSettings(rates=[])

    def test_unknown_pinned(self):
        """Test pinned region names"""
        with pytest.raises(ValidationError):
            SweepSettings(pinned_reliable=["nowhere"])

    def test_extra_field_forbidden(self):
        """Test that misspelled keys are not silently ignored"""
        with pytest.raises(ValidationError):
            SweepSettings(mdoe="rate")

    def test_bad_bit_range(self):
        """Test lo above hi"""
        with pytest.raises(ValidationError):
            SweepSettings(bits="9-3")


class TestExperimentConfig:
    """Test ExperimentConfig schema"""

    def test_minimal(self):
        """Test defaults with only a kernel"""
        config = ExperimentConfig(kernel="adpcm")

        assert config.kernel is KernelId.ADPCM
        assert config.regions == {}
        assert config.trials >= 1
        assert config.resolved_corpus == STANDARD_INPUTS[KernelId.ADPCM]

    def test_full_document(self):
        """Test a complete JSON-style document"""
        config = ExperimentConfig.model_validate(
            {
                "kernel": "mini_jpeg",
                "corpus": {"kind": "image_gradient", "seed": 4, "width": 32, "height": 32},
                "regions": {"idct": {"rate": 0.04, "bits": "0-7", "model": "single"}},
                "sweep": {"mode": "rate", "rates": [0, 0.02]},
                "trials": 300,
                "seed": 9,
                "csv": "out/r.csv",
            }
        )

        assert config.regions["idct"].rate == 0.04
        assert config.resolved_corpus.kind is CorpusKind.IMAGE_GRADIENT
        assert config.csv.name == "r.csv"
        assert config.svg is None

    def test_unknown_region(self):
        """Test that region tables only name known regions"""
        with pytest.raises(ValidationError, match="motion_estimation"):
            ExperimentConfig(kernel="mini_video", regions={"motion_estimation": {"rate": 0.1}})

    def test_corpus_media_mismatch(self):
        """Test that an audio kernel rejects an image corpus"""
        with pytest.raises(ValidationError, match="needs audio"):
            ExperimentConfig(
                kernel="adpcm", corpus=CorpusSpec(kind=CorpusKind.IMAGE_PLASMA, seed=1, width=32, height=32)
            )

    @pytest.mark.parametrize(
        "field,value",
        [("trials", 0), ("quality", 101), ("seed", -1), ("workers", 0), ("kernel", "mp3")],
    )
    def test_invalid_values(self, field, value):
        """Test rejected scalar values"""
        document = {"kernel": "adpcm", field: value}

        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate(document)

    def test_rate_above_one(self):
        """Test fault spec bounds inside the region table"""
        with pytest.raises(ValidationError):
            ExperimentConfig(kernel="adpcm", regions={"predictor": {"rate": 1.5}})
