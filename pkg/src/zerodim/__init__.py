"""Executable finite models of zero-dimensional, ultranormal and
ultraparacompact spaces and frames."""

from .errors import AlgebraMismatch, InvalidInstance, InvariantBreach

__version__ = "0.1.0"

__all__ = ["AlgebraMismatch", "InvalidInstance", "InvariantBreach", "__version__"]
