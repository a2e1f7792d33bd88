"""Input validation helpers shared across the package.

Structural problems in user-supplied documents are reported as
:class:`Diagnostic` values so a caller can surface all of them at once;
programming errors (wrong argument types, malformed arrays) raise
``ValueError`` immediately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ERROR = "error"
WARNING = "warning"

RATING_MIN = 0
RATING_MAX = 4


@dataclass(frozen=True)
class Diagnostic:
    """One problem found while checking a document.

    severity is ``"error"`` (the offending item is unusable) or
    ``"warning"`` (the item was repaired or skipped). path locates the
    offending field, e.g. ``"levels[0].statements[3].csf"`` or ``"line 12"``.
    """

    severity: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.path}: {self.message}"


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diagnostics)


def error_count(diagnostics: Iterable[Diagnostic]) -> int:
    return sum(1 for d in diagnostics if d.severity == ERROR)


def check_rating(value: int, where: str = "rating") -> int:
    """Validate a single ordinal rating and return it as a plain int."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{where} must be an integer, got {value!r}")
    value = int(value)
    if not RATING_MIN <= value <= RATING_MAX:
        raise ValueError(
            f"{where} must be in {RATING_MIN}..{RATING_MAX}, got {value}"
        )
    return value


def check_rating_matrix(
    X,
    n_statements: int | None = None,
    min_raters: int = 1,
) -> np.ndarray:
    """Coerce ``X`` to a validated integer rating matrix.

    Rows are statements in model order, columns are raters. Every cell
    must be an integral value in 0..4; NaN and fractional values are
    rejected rather than rounded.
    """
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"rating matrix must be 2-dimensional, got shape {X.shape}")
    n_rows, n_cols = X.shape
    if n_rows == 0 or n_cols == 0:
        raise ValueError("rating matrix must not be empty")
    if n_statements is not None and n_rows != n_statements:
        raise ValueError(
            f"rating matrix has {n_rows} rows, model defines {n_statements} statements"
        )
    if n_cols < min_raters:
        raise ValueError(f"rating matrix needs at least {min_raters} rater column(s)")
    if X.dtype.kind == "f":
        if not np.all(np.isfinite(X)):
            raise ValueError("rating matrix contains NaN or infinite values")
        rounded = np.rint(X)
        if not np.array_equal(rounded, X):
            raise ValueError("rating matrix contains non-integral values")
        X = rounded.astype(np.int64)
    elif X.dtype.kind in ("i", "u"):
        X = X.astype(np.int64)
    else:
        raise ValueError(f"rating matrix has unsupported dtype {X.dtype}")
    if X.min() < RATING_MIN or X.max() > RATING_MAX:
        raise ValueError(
            f"ratings must be in {RATING_MIN}..{RATING_MAX}, "
            f"found values in {X.min()}..{X.max()}"
        )
    return X


def check_kappa(value: float, where: str = "kappa") -> float:
    """Validate a kappa coefficient: a finite float in [-1, 1]."""
    value = float(value)
    if not -1.0 <= value <= 1.0:
        raise ValueError(f"{where} must lie in [-1, 1], got {value}")
    return value


def format_diagnostics(diagnostics: Sequence[Diagnostic]) -> str:
    return "\n".join(str(d) for d in diagnostics)
