"""Power model"""

from efid.power.model import (
    CALIBRATED_ALU_SHARE,
    PowerParams,
    RegionLoad,
    VoltageCurve,
    WorkloadMix,
    calibrate_alu_share,
    energy_savings,
    error_rate_at_voltage,
    normalized_power,
    voltage_for_error_rate,
)
from efid.power.workloads import load_workload

__all__ = [
    'CALIBRATED_ALU_SHARE',
    'PowerParams',
    'RegionLoad',
    'VoltageCurve',
    'WorkloadMix',
    'calibrate_alu_share',
    'energy_savings',
    'error_rate_at_voltage',
    'normalized_power',
    'voltage_for_error_rate',
    'load_workload',
]
