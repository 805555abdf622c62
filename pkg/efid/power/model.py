"""
Error-rate / voltage / power model

Between the rated and critical supply points timing errors appear at a rate
given by a one-parameter curve. Elastic instructions run their units at the
voltage matching their tolerated error rate; dynamic power of that share
scales with the square of the voltage. Everything else runs at nominal.

The default alu_share of 0.61 is fitted, not measured, and sits above the
0.35-0.45 share usually expected for integer units. The bundled mixes have
weighted savings of about 0.19-0.20, so a share in that range predicts
normalized power near 0.92 instead of the 0.87-0.89 reference values. The
fit absorbs whatever the curve and the per-region splits leave out; pass
--alpha to the power command to use a share from that range instead.
"""
import math
from enum import Enum
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from efid.utils.exceptions import PowerModelError

# closed-form least-squares fit of alu_share to the three bundled workloads
CALIBRATED_ALU_SHARE = 0.61
EXPONENTIAL_K = 4.0
_TOLERANCE = 1e-12


class VoltageCurve(str, Enum):
    LINEAR = "linear"
    EXPONENTIAL = "exponential"


class PowerParams(BaseModel):
    """Supply points, error ceiling and the elastic share of dynamic power"""

    model_config = ConfigDict(frozen=True)

    v_rated: float = Field(1.0, gt=0)
    v_crit: float = Field(0.7, gt=0)
    eps_max: float = Field(0.5, gt=0, le=1)
    alu_share: float = Field(CALIBRATED_ALU_SHARE, ge=0, le=1)
    curve: VoltageCurve = VoltageCurve.EXPONENTIAL
    k: float = Field(EXPONENTIAL_K, gt=0)

    @model_validator(mode="after")
    def _ordered_voltages(self) -> "PowerParams":
        if not self.v_crit < self.v_rated:
            raise ValueError(f"v_crit ({self.v_crit}) must be below v_rated ({self.v_rated})")
        return self


class RegionLoad(BaseModel):
    """Share of dynamic instructions in one region and the error rate it tolerates"""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    fraction: float = Field(..., ge=0, le=1)
    rate: float = Field(..., ge=0, le=1)
    bits: Optional[str] = None


class WorkloadMix(BaseModel):
    """Per-region instruction fractions; the remainder runs reliably"""

    model_config = ConfigDict(frozen=True)

    regions: List[RegionLoad]
    name: str = ""

    @model_validator(mode="after")
    def _fractions_fit(self) -> "WorkloadMix":
        total = sum(region.fraction for region in self.regions)
        if total > 1.0 + 1e-9:
            raise ValueError(f"instruction fractions sum to {total:.6f}, exceeding 1")
        names = [region.name for region in self.regions]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate region names in workload: {names}")
        return self

    @property
    def elastic_fraction(self) -> float:
        return sum(region.fraction for region in self.regions if region.rate > 0)


def _span(params: PowerParams) -> float:
    return params.v_rated - params.v_crit


def error_rate_at_voltage(v: float, params: PowerParams) -> float:
    """
    Error probability at supply voltage `v`

    Raises:
        PowerModelError: if v lies outside [v_crit, v_rated]
    """
    if not params.v_crit - _TOLERANCE <= v <= params.v_rated + _TOLERANCE:
        raise PowerModelError(
            f"Voltage {v} outside [{params.v_crit}, {params.v_rated}]"
        )
    x = min(max((params.v_rated - v) / _span(params), 0.0), 1.0)
    if params.curve is VoltageCurve.LINEAR:
        return params.eps_max * x
    return params.eps_max * math.expm1(params.k * x) / math.expm1(params.k)


def voltage_for_error_rate(eps: float, params: PowerParams) -> float:
    """
    Lowest voltage whose error rate does not exceed `eps`

    Raises:
        PowerModelError: if eps lies outside [0, eps_max]
    """
    if not 0.0 <= eps <= params.eps_max:
        raise PowerModelError(f"Error rate {eps} outside [0, {params.eps_max}]")
    ratio = eps / params.eps_max
    if params.curve is VoltageCurve.LINEAR:
        x = ratio
    else:
        x = math.log1p(ratio * math.expm1(params.k)) / params.k
    return params.v_rated - x * _span(params)


def dynamic_power_saving(eps: float, params: PowerParams) -> float:
    """1 - (v / v_rated)^2 for the voltage tolerating `eps`"""
    v = voltage_for_error_rate(eps, params)
    return 1.0 - (v / params.v_rated) ** 2


def weighted_saving(mix: WorkloadMix, params: PowerParams) -> float:
    """Sum of fraction x dynamic saving over the mix's regions"""
    total = 0.0
    for region in mix.regions:
        if region.rate > params.eps_max:
            raise PowerModelError(
                f"Region {region.name!r} tolerates rate {region.rate} above eps_max {params.eps_max}"
            )
        total += region.fraction * dynamic_power_saving(region.rate, params)
    return total


def normalized_power(mix: WorkloadMix, params: PowerParams) -> float:
    """Processor power relative to fully reliable operation, in [1 - alu_share, 1]"""
    return 1.0 - params.alu_share * weighted_saving(mix, params)


def energy_savings(mix: WorkloadMix, params: PowerParams) -> float:
    """Run time is unchanged by injection, so energy savings equal power savings"""
    return 1.0 - normalized_power(mix, params)


def region_voltages(mix: WorkloadMix, params: PowerParams) -> Dict[str, float]:
    return {region.name: voltage_for_error_rate(region.rate, params) for region in mix.regions}


def calibrate_alu_share(
    mixes: Sequence[WorkloadMix],
    targets: Sequence[float],
    params: Optional[PowerParams] = None,
) -> float:
    """
    Least-squares alu_share matching each mix's normalized power to its target

    Returns:
        The fitted share, clipped to [0, 1]
    """
    if len(mixes) != len(targets) or not mixes:
        raise PowerModelError("Calibration needs one target per mix and at least one mix")
    params = params or PowerParams()
    savings = [weighted_saving(mix, params) for mix in mixes]
    denominator = sum(s * s for s in savings)
    if denominator == 0.0:
        raise PowerModelError("Calibration mixes carry no elastic savings")
    numerator = sum(s * (1.0 - t) for s, t in zip(savings, targets))
    return min(max(numerator / denominator, 0.0), 1.0)
