"""QAP instance I/O and objective evaluation."""

from src.qap.objective import brute_force, cost, cost_linear, objective, swap_delta, swap_delta_array
from src.qap.qaplib import parse_qaplib, serialize_qaplib

__all__ = [
    "brute_force",
    "cost",
    "cost_linear",
    "objective",
    "parse_qaplib",
    "serialize_qaplib",
    "swap_delta",
    "swap_delta_array",
]
