"""Sweep protocols, aggregation and reporting"""

from efid.sweep.report import plot_svg, read_csv, summarize_csv
from efid.sweep.runner import bit_range_sweep, error_rate_sweep, region_sweep, run_trial
from efid.sweep.schemas import KernelId, SweepResult, SweepRow, TrialConfig, TrialResult

__all__ = [
    'plot_svg',
    'read_csv',
    'summarize_csv',
    'bit_range_sweep',
    'error_rate_sweep',
    'region_sweep',
    'run_trial',
    'KernelId',
    'SweepResult',
    'SweepRow',
    'TrialConfig',
    'TrialResult',
]
