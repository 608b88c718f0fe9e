"""Moment-polynomial conjectures for L-function families, their direct
numerical verification, and random-matrix cross checks."""

from .precision import PrecisionContext, ctx_for

__version__ = "0.1.0"
__all__ = ["PrecisionContext", "ctx_for", "__version__"]
