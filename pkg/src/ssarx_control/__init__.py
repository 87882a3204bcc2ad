"""SSARX data-driven predictive control: identification, control and benchmarks."""

__version__ = "0.1.0"
