"""Command-line surface"""

from efid.cli.commands import (
    COMMANDS,
    cmd_decode,
    cmd_encode,
    cmd_gen_corpus,
    cmd_plot,
    cmd_power,
    cmd_sweep,
)
from efid.cli.schemas import ExperimentConfig, SweepSettings

__all__ = [
    'COMMANDS',
    'cmd_decode',
    'cmd_encode',
    'cmd_gen_corpus',
    'cmd_plot',
    'cmd_power',
    'cmd_sweep',
    'ExperimentConfig',
    'SweepSettings',
]
