import random
from fractions import Fraction

import numpy as np
import pytest

from mlmm import (
    AggregationPolicy,
    ScoringError,
    aggregate_matrix,
    aggregate_ratings,
    assess,
    consolidate,
    default_mlmm,
    is_achieved,
    nas,
    pass_threshold,
    pct_to_rating,
)
from mlmm.scoring import LIKERT_ANCHORS, ResponseSheet

MEDIAN = AggregationPolicy("median")
MEAN = AggregationPolicy("mean")


def test_pass_threshold_ladder_counts() -> None:
    assert tuple(pass_threshold(t) for t in (18, 20, 20, 17)) == (14, 16, 16, 14)
    assert pass_threshold(0) == 0


def test_pass_threshold_matches_fraction_oracle() -> None:
    # Independent oracle: exact 0.8*t + 0.5, floored.
    for t in range(0, 401):
        expected = int(Fraction(4 * t, 5) + Fraction(1, 2))
        assert pass_threshold(t) == expected, t


def test_pass_threshold_bounds() -> None:
    for t in range(0, 200):
        assert pass_threshold(t) <= t
    # 80% rounded half up only drops below the count from 3 statements on;
    # at 1 and 2 the threshold equals the count.
    assert pass_threshold(1) == 1
    assert pass_threshold(2) == 2
    for t in range(3, 200):
        assert pass_threshold(t) < t
    with pytest.raises(ValueError):
        pass_threshold(-1)


def test_pct_to_rating_bands() -> None:
    assert pct_to_rating(None) == 0
    assert pct_to_rating(100.0) == 4
    assert pct_to_rating(80.0) == 4
    assert pct_to_rating(79.95) == 3
    assert pct_to_rating(66.7) == 3
    assert pct_to_rating(66.65) == 2
    assert pct_to_rating(33.3) == 2
    assert pct_to_rating(33.25) == 1
    assert pct_to_rating(0.0) == 1


def test_pct_to_rating_rejects_out_of_domain() -> None:
    for bad in (-0.1, 100.1, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            pct_to_rating(bad)


def test_is_achieved_predicate() -> None:
    assert [is_achieved(r) for r in range(5)] == [True, False, False, True, True]
    with pytest.raises(ValueError):
        is_achieved(5)
    with pytest.raises(ValueError):
        is_achieved(-1)


def test_likert_anchors_cover_scale() -> None:
    assert sorted(LIKERT_ANCHORS) == [0, 1, 2, 3, 4]
    assert LIKERT_ANCHORS[3] == "Largely Achieved"


def test_consolidate_median_takes_lower_median() -> None:
    assert consolidate([2, 3, 4], MEDIAN) == 3
    assert consolidate([3, 4], MEDIAN) == 3
    assert consolidate([1, 2, 3, 4], MEDIAN) == 2
    assert consolidate([4], MEDIAN) == 4


def test_consolidate_majority_zero_rule() -> None:
    assert consolidate([0, 0, 0, 3], MEDIAN) == 0
    assert consolidate([0], MEDIAN) == 0
    # Exactly half zero is not a strict majority; zeros then drop out.
    assert consolidate([0, 0, 3, 3], MEDIAN) == 3
    assert consolidate([0, 3, 3], MEDIAN) == 3
    assert consolidate([0, 0, 0, 3], MEAN) == 0


def test_consolidate_mean_rounds_half_up() -> None:
    assert consolidate([3, 4], MEAN) == 4
    assert consolidate([2, 3], MEAN) == 3
    assert consolidate([1, 1, 2], MEAN) == 1
    assert consolidate([1, 2, 2], MEAN) == 2
    assert consolidate([0, 3, 4], MEAN) == 4


def test_consolidate_rejects_empty() -> None:
    with pytest.raises(ValueError):
        consolidate([], MEDIAN)


def test_aggregation_policy_rejects_unknown_method() -> None:
    with pytest.raises(ValueError):
        AggregationPolicy("mode")


def test_single_rater_aggregation_is_identity() -> None:
    model = default_mlmm()
    rng = random.Random(4)
    for policy in (MEDIAN, MEAN):
        ratings = [rng.randint(0, 4) for _ in range(model.total_statements())]
        agg = aggregate_matrix(np.array(ratings).reshape(-1, 1), model, policy)
        flat = [st.rating for lv in (2, 3, 4, 5) for st in agg.ratings_for(lv)]
        assert flat == ratings


def test_aggregation_ignores_rater_order() -> None:
    model = default_mlmm()
    rng = random.Random(9)
    for policy in (MEDIAN, MEAN):
        for _ in range(25):
            k = rng.randint(2, 6)
            matrix = np.array(
                [[rng.randint(0, 4) for _ in range(k)] for _ in range(75)]
            )
            perm = list(range(k))
            rng.shuffle(perm)
            a = aggregate_matrix(matrix, model, policy)
            b = aggregate_matrix(matrix[:, perm], model, policy)
            assert a == b


def test_aggregate_matrix_rejects_wrong_shape() -> None:
    model = default_mlmm()
    with pytest.raises(ValueError):
        aggregate_matrix(np.zeros((10, 2), dtype=int), model, MEDIAN)
    with pytest.raises(ValueError):
        aggregate_matrix(np.full((75, 2), 5), model, MEDIAN)


def _sheet_from_matrix(matrix, model, raters=None):
    n = matrix.shape[1]
    raters = raters or tuple(f"rater{i}" for i in range(1, n + 1))
    entries = {}
    for i, (level, sid) in enumerate(model.statement_keys()):
        for j, rater in enumerate(raters):
            entries[(rater, level, sid)] = int(matrix[i, j])
    return ResponseSheet(
        institution="t", raters=tuple(raters), entries=entries, model=model
    )


def test_aggregate_ratings_requires_complete_sheet() -> None:
    model = default_mlmm()
    rng = random.Random(1)
    matrix = np.array([[rng.randint(0, 4) for _ in range(2)] for _ in range(75)])
    sheet = _sheet_from_matrix(matrix, model)
    entries = dict(sheet.entries)
    del entries[("rater1", 3, 5)]
    broken = ResponseSheet(
        institution="t", raters=sheet.raters, entries=entries, model=model
    )
    with pytest.raises(ScoringError, match="missing"):
        aggregate_ratings(broken, MEDIAN)


def test_aggregate_ratings_rejects_no_raters() -> None:
    model = default_mlmm()
    empty = ResponseSheet(institution="t", raters=(), entries={}, model=model)
    with pytest.raises(ScoringError):
        aggregate_ratings(empty, MEDIAN)


def _assess_vector(ratings, model, policy=MEDIAN):
    agg = aggregate_matrix(np.array(ratings).reshape(-1, 1), model, policy)
    return assess(agg, model), agg


def _vector_with_nas(model, nas_by_level):
    # k achieved statements (rated 3) then unachieved (rated 2) per level.
    out = []
    for lv in model.assessed_levels():
        k = nas_by_level[lv.number]
        out.extend([3] * k + [2] * (len(lv.statements) - k))
    return out


def test_nas_counts_achieved_statements() -> None:
    model = default_mlmm()
    vector = _vector_with_nas(model, {2: 14, 3: 15, 4: 1, 5: 1})
    _, agg = _assess_vector(vector, model)
    assert [nas(agg, lv) for lv in (2, 3, 4, 5)] == [14, 15, 1, 1]
    with pytest.raises(ScoringError):
        nas(agg, 7)


def test_nas_counts_inapplicable_as_achieved() -> None:
    model = default_mlmm()
    vector = _vector_with_nas(model, {2: 14, 3: 15, 4: 1, 5: 1})
    vector[14] = 0  # a previously unachieved level-2 statement
    _, agg = _assess_vector(vector, model)
    assert nas(agg, 2) == 15


def test_assess_stops_at_first_failed_level() -> None:
    model = default_mlmm()
    result, _ = _assess_vector(_vector_with_nas(model, {2: 14, 3: 15, 4: 1, 5: 1}), model)
    assert result.maturity_level == 2
    assert result.maturity_name == "Established"
    assert [lr.passed for lr in result.levels] == [True, False, False, False]
    assert result.entry_level_name == "Preliminary"


def test_assess_passed_levels_above_a_gap_do_not_count() -> None:
    model = default_mlmm()
    result, _ = _assess_vector(
        _vector_with_nas(model, {2: 14, 3: 15, 4: 16, 5: 14}), model
    )
    # Levels 4 and 5 pass but level 3 does not: the chain stops at 2.
    assert [lr.passed for lr in result.levels] == [True, False, True, True]
    assert result.maturity_level == 2


def test_assess_full_ladder() -> None:
    model = default_mlmm()
    result, _ = _assess_vector(_vector_with_nas(model, {2: 18, 3: 20, 4: 20, 5: 17}), model)
    assert result.maturity_level == 5
    assert result.maturity_name == "Continuous Improvement"
    result, _ = _assess_vector(_vector_with_nas(model, {2: 14, 3: 16, 4: 16, 5: 14}), model)
    assert result.maturity_level == 5


def test_assess_level_one_when_level_two_fails() -> None:
    model = default_mlmm()
    result, _ = _assess_vector(_vector_with_nas(model, {2: 13, 3: 20, 4: 20, 5: 17}), model)
    assert result.maturity_level == 1
    assert result.maturity_name == "Preliminary"


def test_assess_records_threshold_and_attainment() -> None:
    model = default_mlmm()
    result, _ = _assess_vector(_vector_with_nas(model, {2: 14, 3: 15, 4: 1, 5: 1}), model)
    lr = result.level(2)
    assert (lr.tns, lr.pt, lr.nas) == (18, 14, 14)
    assert lr.attainment_label == "Largely Achieved"
    assert result.level(4).attainment_label == "Partially Achieved"
    with pytest.raises(KeyError):
        result.level(1)


def test_assess_invariants_on_random_vectors() -> None:
    model = default_mlmm()
    rng = random.Random(77)
    for _ in range(300):
        ratings = [rng.randint(0, 4) for _ in range(75)]
        result, agg = _assess_vector(ratings, model)
        chain = 1
        for lr in result.levels:
            assert lr.passed == (lr.nas >= lr.pt)
            assert lr.nas == nas(agg, lr.number)
            assert 0 <= lr.nas <= lr.tns
        for lr in result.levels:
            if not lr.passed:
                break
            chain = lr.number
        assert result.maturity_level == chain
        assert (result.maturity_level == 1) == (not result.level(2).passed)


def test_assess_is_deterministic() -> None:
    model = default_mlmm()
    rng = random.Random(5)
    matrix = np.array([[rng.randint(0, 4) for _ in range(4)] for _ in range(75)])
    a = assess(aggregate_matrix(matrix, model, MEDIAN), model)
    b = assess(aggregate_matrix(matrix, model, MEDIAN), model)
    assert a == b


def test_assess_rejects_mismatched_levels() -> None:
    model = default_mlmm()
    _, agg = _assess_vector(_vector_with_nas(model, {2: 14, 3: 15, 4: 1, 5: 1}), model)
    import dataclasses

    broken = dataclasses.replace(agg, levels={2: agg.ratings_for(2)})
    with pytest.raises(ScoringError):
        assess(broken, model)
