"""Phase-space toolkit for Gaussian covariance matrices and their entanglement."""

from gaussent.version import __version__

__all__ = ["__version__"]
