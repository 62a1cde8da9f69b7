"""Exact arithmetic for fractional-weight modular forms, minimal-model characters
and the monic modular linear differential equations they satisfy."""

from .qseries import Phase, PhasedSeries, QSeries

__all__ = ["Phase", "PhasedSeries", "QSeries"]
__version__ = "0.1.0"
