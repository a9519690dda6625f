"""Fractional-Laplacian wave models: spectra, real-space synthesis and nonlocality diagnostics."""

__version__ = "0.1.0"

from .model import Family, WaveModel, validate_model  # noqa: E402

__all__ = ["Family", "WaveModel", "validate_model", "__version__"]
