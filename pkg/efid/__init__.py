"""Elastic fidelity simulator: fault-injected codec kernels, sweeps and power estimates"""

__version__ = "1.0.0"
