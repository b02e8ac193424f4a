"""dillbench: proof-nets of differential linear logic and their relational models."""

__version__ = "0.1.0"
