"""Elastic ALU: fidelity regions and error-injected arithmetic"""

from efid.alu.context import RELIABLE_REGION, FidelityContext

__all__ = ['RELIABLE_REGION', 'FidelityContext']
