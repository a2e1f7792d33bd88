"""scikit-learn style wrapper around the scoring pipeline.

MaturityAssessor treats the questionnaire as a feature-free estimation
problem: X is an integer matrix of shape (n_statements, n_raters) whose
rows follow the model's canonical statement order. fit consolidates the
matrix and stores the assessment; transform returns consolidated
ratings and predict returns per-statement achievement flags, both
computed statelessly from the given X.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .model import MaturityModel, default_mlmm
from .scoring import AggregationPolicy, aggregate_matrix, assess, is_achieved
from .validation import check_rating_matrix


class MaturityAssessor(TransformerMixin, BaseEstimator):
    """Assess a rating matrix against a staged maturity model.

    Parameters
    ----------
    model : MaturityModel or None
        Model to assess against; None means the built-in default.
    aggregation : str
        Consolidation policy, "median" or "mean".

    Attributes (after fit)
    ----------------------
    consolidated_ : ndarray of shape (n_statements,)
        One consolidated rating per statement.
    achieved_ : ndarray of bool, shape (n_statements,)
        Achievement flag per statement.
    nas_ : dict
        Number of achieved statements per level.
    result_ : AssessmentResult
        The full assessment.
    maturity_level_ : int
    maturity_name_ : str
    n_features_in_ : int
        Number of rater columns seen in fit.
    """

    def __init__(self, model: MaturityModel | None = None, aggregation: str = "median"):
        self.model = model
        self.aggregation = aggregation

    def _resolved_model(self) -> MaturityModel:
        return self.model if self.model is not None else default_mlmm()

    def _consolidate(self, X):
        model = self._resolved_model()
        X = check_rating_matrix(X, n_statements=model.total_statements())
        aggregated = aggregate_matrix(
            X, model, AggregationPolicy(method=self.aggregation)
        )
        flat = [
            st.rating for number in (2, 3, 4, 5) for st in aggregated.ratings_for(number)
        ]
        return X, model, aggregated, np.asarray(flat, dtype=np.int64)

    def fit(self, X, y=None):
        """Consolidate X and store the assessment. y is ignored."""
        X, model, aggregated, consolidated = self._consolidate(X)
        self.consolidated_ = consolidated
        self.achieved_ = np.asarray([is_achieved(int(r)) for r in consolidated])
        self.result_ = assess(aggregated, model)
        self.nas_ = {lr.number: lr.nas for lr in self.result_.levels}
        self.maturity_level_ = self.result_.maturity_level
        self.maturity_name_ = self.result_.maturity_name
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        """Consolidated rating per statement, shape (n_statements, 1)."""
        _, _, _, consolidated = self._consolidate(X)
        return consolidated.reshape(-1, 1)

    def predict(self, X) -> np.ndarray:
        """Boolean achievement flag per statement."""
        _, _, _, consolidated = self._consolidate(X)
        return np.asarray([is_achieved(int(r)) for r in consolidated])
