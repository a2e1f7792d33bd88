"""Questionnaire scoring: consolidation, achievement counts, level verdicts.

The scoring pipeline runs in three steps. Per-rater ratings for each
statement are consolidated into one rating (majority-zero rule first,
then a median or mean policy over the non-zero ratings). The number of
achieved statements (NAS) at each level is compared against a pass
threshold of 80% of the level's statement count, rounded half up. The
overall maturity level is the highest level reachable through an
unbroken chain of passed levels starting at level 2.

Ratings use a five-point ordinal scale:

    0  Inapplicable          (does not apply; counts as achieved)
    1  Unachieved
    2  Partially Achieved
    3  Largely Achieved
    4  Completely Achieved
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exceptions import ScoringError
from .model import ASSESSED_LEVELS, MaturityModel
from .validation import check_rating_matrix

LIKERT_ANCHORS = {
    0: "Inapplicable",
    1: "Unachieved",
    2: "Partially Achieved",
    3: "Largely Achieved",
    4: "Completely Achieved",
}

AGGREGATION_METHODS = ("median", "mean")

_PCT_BANDS = ((80.0, 4), (66.7, 3), (33.3, 2), (0.0, 1))


def pct_to_rating(achievement: float | None) -> int:
    """Map a percent-achievement figure onto the ordinal scale.

    ``None`` means the statement does not apply and maps to 0. The
    bands are half-open: [80, 100] -> 4, [66.7, 80) -> 3,
    [33.3, 66.7) -> 2, [0, 33.3) -> 1.
    """
    if achievement is None:
        return 0
    achievement = float(achievement)
    if math.isnan(achievement) or math.isinf(achievement):
        raise ValueError("achievement percentage must be finite")
    if not 0.0 <= achievement <= 100.0:
        raise ValueError(f"achievement percentage must be in [0, 100], got {achievement}")
    for cut, rating in _PCT_BANDS:
        if achievement >= cut:
            return rating
    raise AssertionError("unreachable")


def is_achieved(rating: int) -> bool:
    """A statement counts as achieved when rated 3 or above, or marked 0.

    Inapplicable statements are deliberately counted as achieved so that
    a statement outside an institution's remit cannot block a level.
    """
    if not 0 <= rating <= 4:
        raise ValueError(f"rating must be in 0..4, got {rating}")
    return rating >= 3 or rating == 0


def pass_threshold(tns: int) -> int:
    """Number of achieved statements required to pass a level.

    80% of the level's total number of statements, rounded half up.
    Computed in exact integer arithmetic.
    """
    if tns < 0:
        raise ValueError(f"statement count must be non-negative, got {tns}")
    return (8 * tns + 5) // 10


def _lower_median(values: Sequence[int]) -> int:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


@dataclass(frozen=True)
class AggregationPolicy:
    """How per-rater ratings for one statement become one rating.

    method "median" takes the lower median of the non-zero ratings
    (conservative on ties); "mean" takes their mean rounded half up.
    Either way, a statement rated 0 by a strict majority of raters is
    consolidated to 0 before non-zero ratings are considered.
    """

    method: str = "median"

    def __post_init__(self) -> None:
        if self.method not in AGGREGATION_METHODS:
            raise ValueError(
                f"aggregation method must be one of {AGGREGATION_METHODS}, "
                f"got {self.method!r}"
            )


def consolidate(ratings: Sequence[int], policy: AggregationPolicy) -> int:
    """Consolidate one statement's per-rater ratings into a single rating."""
    if len(ratings) == 0:
        raise ValueError("cannot consolidate an empty rating list")
    zeros = sum(1 for r in ratings if r == 0)
    if 2 * zeros > len(ratings):
        return 0
    nonzero = [r for r in ratings if r != 0]
    if policy.method == "median":
        return _lower_median(nonzero)
    total, count = sum(nonzero), len(nonzero)
    return (2 * total + count) // (2 * count)


@dataclass(frozen=True)
class ResponseSheet:
    """Complete per-rater ratings bound to a model.

    entries maps (rater_id, level, statement_id) to a rating. Binding
    guarantees every key references a real statement; completeness per
    rater is checked again at aggregation time.
    """

    institution: str
    raters: tuple[str, ...]
    entries: Mapping[tuple[str, int, int], int]
    model: MaturityModel

    def rating(self, rater: str, level: int, statement_id: int) -> int:
        return self.entries[(rater, level, statement_id)]

    def rater_aliases(self) -> tuple[str, ...]:
        """Stable anonymized labels R1..Rk in rater order."""
        return tuple(f"R{i}" for i in range(1, len(self.raters) + 1))

    def missing_keys(self) -> list[tuple[str, int, int]]:
        missing = []
        for rater in self.raters:
            for level, sid in self.model.statement_keys():
                if (rater, level, sid) not in self.entries:
                    missing.append((rater, level, sid))
        return missing

    def to_matrix(self) -> np.ndarray:
        """Ratings as an array of shape (n_statements, n_raters)."""
        missing = self.missing_keys()
        if missing:
            raise ScoringError(_describe_missing(missing))
        keys = self.model.statement_keys()
        out = np.empty((len(keys), len(self.raters)), dtype=np.int64)
        for i, (level, sid) in enumerate(keys):
            for j, rater in enumerate(self.raters):
                out[i, j] = self.entries[(rater, level, sid)]
        return out


def _describe_missing(missing: list[tuple[str, int, int]], cap: int = 8) -> str:
    shown = ", ".join(
        f"({rater!r}, level {lv}, statement {sid})" for rater, lv, sid in missing[:cap]
    )
    rest = len(missing) - cap
    tail = f" and {rest} more" if rest > 0 else ""
    return f"sheet is missing {len(missing)} rating(s): {shown}{tail}"


@dataclass(frozen=True)
class StatementRating:
    """Consolidated rating for one statement, with the rater multiset kept."""

    statement_id: int
    rating: int
    rater_ratings: tuple[int, ...]


@dataclass(frozen=True)
class AggregatedRatings:
    """One consolidated rating per model statement, grouped by level."""

    institution: str
    policy: AggregationPolicy
    levels: Mapping[int, tuple[StatementRating, ...]]

    def ratings_for(self, level: int) -> tuple[StatementRating, ...]:
        if level not in self.levels:
            raise ScoringError(f"no aggregated ratings for level {level}")
        return self.levels[level]


def aggregate_matrix(
    matrix,
    model: MaturityModel,
    policy: AggregationPolicy | None = None,
    institution: str = "",
) -> AggregatedRatings:
    """Consolidate a (n_statements, n_raters) rating matrix.

    Rows follow the model's canonical statement order. The result is
    independent of the column (rater) order: each statement keeps its
    ratings as a sorted multiset.
    """
    policy = policy or AggregationPolicy()
    matrix = check_rating_matrix(matrix, n_statements=model.total_statements())
    keys = model.statement_keys()
    by_level: dict[int, list[StatementRating]] = {n: [] for n in ASSESSED_LEVELS}
    for i, (level, sid) in enumerate(keys):
        row = tuple(sorted(int(r) for r in matrix[i]))
        by_level[level].append(
            StatementRating(
                statement_id=sid,
                rating=consolidate(row, policy),
                rater_ratings=row,
            )
        )
    return AggregatedRatings(
        institution=institution,
        policy=policy,
        levels={n: tuple(sts) for n, sts in by_level.items()},
    )


def aggregate_ratings(
    sheet: ResponseSheet,
    policy: AggregationPolicy | None = None,
) -> AggregatedRatings:
    """Consolidate a bound response sheet.

    Raises ScoringError when the sheet has no raters or any rater is
    missing any statement.
    """
    if not sheet.raters:
        raise ScoringError("sheet has no raters")
    return aggregate_matrix(
        sheet.to_matrix(), sheet.model, policy, institution=sheet.institution
    )


def nas(aggregated: AggregatedRatings, level: int) -> int:
    """Number of achieved statements at a level."""
    return sum(1 for st in aggregated.ratings_for(level) if is_achieved(st.rating))


@dataclass(frozen=True)
class LevelResult:
    """Verdict for one assessed level."""

    number: int
    name: str
    tns: int
    nas: int
    pt: int
    passed: bool
    attainment_label: str
    inapplicable: int


@dataclass(frozen=True)
class AssessmentResult:
    """Full verdict: per-level results plus the overall maturity level.

    entry_level_name is the name of level 1, kept so reports can draw
    the whole ladder without the model at hand.
    """

    institution: str
    aggregation: str
    entry_level_name: str
    levels: tuple[LevelResult, ...]
    maturity_level: int
    maturity_name: str

    def level(self, number: int) -> LevelResult:
        for lr in self.levels:
            if lr.number == number:
                return lr
        raise KeyError(f"no result for level {number}")


def assess(aggregated: AggregatedRatings, model: MaturityModel) -> AssessmentResult:
    """Determine the maturity level from consolidated ratings.

    A level passes when NAS >= pass_threshold(TNS). The maturity level
    is the largest j such that every level 2..j passed; level 1
    otherwise. Gaps do not help: a passed level above a failed one is
    not counted.
    """
    expected = {lv.number: lv for lv in model.assessed_levels()}
    if set(aggregated.levels) != set(expected):
        raise ScoringError(
            f"aggregated levels {sorted(aggregated.levels)} do not match "
            f"model levels {sorted(expected)}"
        )
    results = []
    for number in ASSESSED_LEVELS:
        lv = expected[number]
        sts = aggregated.ratings_for(number)
        got = sorted(st.statement_id for st in sts)
        want = sorted(st.id for st in lv.statements)
        if got != want:
            raise ScoringError(
                f"statement ids at level {number} do not match the model"
            )
        tns = len(lv.statements)
        level_nas = sum(1 for st in sts if is_achieved(st.rating))
        pt = pass_threshold(tns)
        results.append(
            LevelResult(
                number=number,
                name=lv.name,
                tns=tns,
                nas=level_nas,
                pt=pt,
                passed=level_nas >= pt,
                attainment_label=LIKERT_ANCHORS[
                    _lower_median([st.rating for st in sts])
                ],
                inapplicable=sum(1 for st in sts if st.rating == 0),
            )
        )
    maturity = 1
    for lr in results:
        if not lr.passed:
            break
        maturity = lr.number
    return AssessmentResult(
        institution=aggregated.institution,
        aggregation=aggregated.policy.method,
        entry_level_name=model.level(1).name,
        levels=tuple(results),
        maturity_level=maturity,
        maturity_name=model.level(maturity).name,
    )
