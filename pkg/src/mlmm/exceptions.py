"""Exception hierarchy for the mlmm package."""

from __future__ import annotations


class MlmmError(Exception):
    """Base class for all domain errors raised by this package."""


class ModelParseError(MlmmError):
    """A maturity-model document could not be decoded at all."""


class ModelValidationError(MlmmError):
    """A decoded maturity-model document violates a structural rule.

    Carries the full diagnostic list so callers can report every
    offending field, not just the first one.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        detail = f"{first.path}: {first.message}" if first else "invalid model"
        extra = len(self.diagnostics) - 1
        if extra > 0:
            detail += f" (and {extra} more problem{'s' if extra != 1 else ''})"
        super().__init__(detail)


class IngestError(MlmmError):
    """Response records could not be bound into a usable sheet."""


class ScoringError(MlmmError):
    """Scoring preconditions are not met (coverage, empty sheet, mismatch)."""


class UndefinedKappaError(MlmmError):
    """Chance agreement is 1, leaving the kappa ratio undefined."""
