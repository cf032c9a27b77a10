"""Competition harness for constrained Horn clause solvers."""

__version__ = "0.1.0"
