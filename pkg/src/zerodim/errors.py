"""Exception types shared across the package."""

from __future__ import annotations


class InvalidInstance(ValueError):
    """Input violates a structural invariant.

    ``code`` is a short machine-readable name (e.g. ``not_distributive``) and
    ``witness`` carries whatever elements demonstrate the violation.
    """

    def __init__(self, code: str, message: str = "", witness=None):
        self.code = code
        self.witness = witness
        super().__init__(f"{code}: {message}" if message else code)


class AlgebraMismatch(ValueError):
    """Elements from two different algebras were combined."""


class InvariantBreach(RuntimeError):
    """An internal consistency check failed; always a bug."""
