"""QAP Bench - quadratic assignment solvers with a replicated benchmark harness."""

__version__ = "0.1.0"
