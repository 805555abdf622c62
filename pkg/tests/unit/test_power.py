"""
Unit Tests for the Power Model (efid/power/model.py)

Tests the voltage/error curves, per-workload normalized power for the
bundled workloads and the alu_share calibration
"""

import pytest
from pydantic import ValidationError

from efid.power.model import (
    CALIBRATED_ALU_SHARE,
    PowerParams,
    RegionLoad,
    VoltageCurve,
    WorkloadMix,
    calibrate_alu_share,
    dynamic_power_saving,
    energy_savings,
    error_rate_at_voltage,
    normalized_power,
    region_voltages,
    voltage_for_error_rate,
)
from efid.power.workloads import bundled_calibration_set, load_bundled_workloads
from efid.utils.exceptions import PowerModelError

PARAMS = PowerParams()


def mix(*regions):
    return WorkloadMix(regions=[RegionLoad(name=n, fraction=f, rate=r) for n, f, r in regions])


class TestVoltageCurve:
    """Test error rate <-> voltage"""

    @pytest.mark.parametrize("curve", list(VoltageCurve))
    def test_endpoints(self, curve):
        """Test zero errors at rated voltage and eps_max at the critical point"""
        params = PowerParams(curve=curve)

        assert error_rate_at_voltage(1.0, params) == pytest.approx(0.0)
        assert error_rate_at_voltage(0.7, params) == pytest.approx(0.5)

    @pytest.mark.parametrize("curve", list(VoltageCurve))
    @pytest.mark.parametrize("eps", [0.0, 0.01, 0.04, 0.2, 0.5])
    def test_inverse(self, curve, eps):
        """Test that voltage_for_error_rate inverts the curve"""
        params = PowerParams(curve=curve)

        assert error_rate_at_voltage(voltage_for_error_rate(eps, params), params) == pytest.approx(eps)

    def test_monotonic(self):
        """Test that higher tolerated rates allow lower voltages"""
        voltages = [voltage_for_error_rate(eps, PARAMS) for eps in (0.0, 0.02, 0.04, 0.1)]

        assert voltages == sorted(voltages, reverse=True)

    def test_linear_midpoint(self):
        """Test the linear curve halfway down"""
        params = PowerParams(curve=VoltageCurve.LINEAR)

        assert voltage_for_error_rate(0.25, params) == pytest.approx(0.85)
        assert dynamic_power_saving(0.25, params) == pytest.approx(1 - 0.85 ** 2)

    def test_out_of_range(self):
        """Test rejected voltages and rates"""
        with pytest.raises(PowerModelError):
            error_rate_at_voltage(0.5, PARAMS)
        with pytest.raises(PowerModelError):
            voltage_for_error_rate(0.6, PARAMS)

    def test_params_validation(self):
        """Test that the critical point must sit below the rated point"""
        with pytest.raises(ValidationError):
            PowerParams(v_rated=0.7, v_crit=0.9)


class TestNormalizedPower:
    """Test power of workload mixes"""

    def test_reliable_mix_is_unity(self):
        """Test that all-zero rates give normalized power 1"""
        assert normalized_power(mix(("a", 0.5, 0.0), ("b", 0.3, 0.0)), PARAMS) == pytest.approx(1.0)

    def test_bounds(self):
        """Test the floor of 1 - alu_share"""
        full = mix(("a", 1.0, 0.5))

        assert normalized_power(full, PARAMS) == pytest.approx(1 - CALIBRATED_ALU_SHARE * (1 - 0.49))
        assert normalized_power(full, PARAMS) >= 1 - CALIBRATED_ALU_SHARE

    def test_energy_equals_power_saving(self):
        """Test energy savings at unchanged run time"""
        m = mix(("a", 0.6, 0.04))

        assert energy_savings(m, PARAMS) == pytest.approx(1 - normalized_power(m, PARAMS))

    def test_rate_above_ceiling(self):
        """Test that a region cannot tolerate more than eps_max"""
        with pytest.raises(ValidationError):
            mix(("a", 0.5, 1.5))
        with pytest.raises(PowerModelError):
            normalized_power(mix(("a", 0.5, 0.8)), PARAMS)

    def test_fractions_cannot_exceed_one(self):
        """Test the instruction-share constraint"""
        with pytest.raises(ValidationError):
            mix(("a", 0.7, 0.0), ("b", 0.4, 0.0))

    def test_region_voltages(self):
        """Test that reliable regions run at nominal voltage"""
        voltages = region_voltages(mix(("a", 0.2, 0.0), ("b", 0.2, 0.04)), PARAMS)

        assert voltages["a"] == pytest.approx(1.0)
        assert voltages["b"] < 1.0


class TestBundledWorkloads:
    """Test the three shipped workloads"""

    def test_powers_near_reference(self):
        """Test each workload within 0.03 of its reference power"""
        for workload in load_bundled_workloads():
            power = normalized_power(workload.mix, workload.params)
            assert power == pytest.approx(workload.reference_power, abs=0.03)

    def test_audio_uses_most_power(self):
        """Test the ordering audio > image > video"""
        powers = [normalized_power(w.mix, w.params) for w in load_bundled_workloads()]

        assert powers[0] > powers[1] > powers[2]

    def test_calibration(self):
        """Test that the fitted share is close to the shipped constant"""
        mixes, targets = bundled_calibration_set()

        assert calibrate_alu_share(mixes, targets) == pytest.approx(CALIBRATED_ALU_SHARE, abs=0.02)

    def test_typical_share_overshoots_references(self):
        """Test that a 0.40 share leaves every bundled mix near 0.92, above its reference"""
        for workload in load_bundled_workloads():
            params = workload.params.model_copy(update={"alu_share": 0.40})
            power = normalized_power(workload.mix, params)
            assert power == pytest.approx(0.92, abs=0.01)
            assert power > workload.reference_power

    def test_calibration_needs_matching_targets(self):
        """Test calibration input validation"""
        mixes, _ = bundled_calibration_set()

        with pytest.raises(PowerModelError):
            calibrate_alu_share(mixes, [0.9])

    def test_calibration_needs_savings(self):
        """Test that reliable-only mixes cannot be calibrated"""
        with pytest.raises(PowerModelError):
            calibrate_alu_share([mix(("a", 0.5, 0.0))], [0.9])
