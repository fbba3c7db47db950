"""Finite-truncation numerics for orbit frames, shift-invariant subspaces and Blaschke products.

Modules: ``numerics`` (dense linear algebra), ``hardy`` (H^2 and Blaschke
products), ``shiftspace`` (shift-invariant subspaces), ``frames`` (frame
bounds, orbit frames, boundedness probe) and ``scenarios``/``cli``
(report-producing experiment runner).
"""

from . import frames, hardy, numerics, shiftspace

__version__ = "0.1.0"

__all__ = ["frames", "hardy", "numerics", "shiftspace", "__version__"]
