"""Deterministic builder for the two bundled response fixtures.

Each fixture is constructed from a target vector of consolidated
ratings, one per statement. Most statements are unanimous: every rater
gives the target rating. Controlled disagreement is added as
single-rater deviations of one scale step (never to 0), which leave the
lower median, and therefore every consolidated rating and NAS count,
untouched. Deviation quotas per rater shape the pairwise kappa spread:
two raters with small quotas form the most agreeing pair, two with
large quotas the least agreeing pair.

University A additionally has one statement consolidated to 0: five of
its eight raters mark it inapplicable (majority-zero rule) and the rest
rate it 2.

The script verifies every property the fixtures are meant to exhibit
and refuses to write files otherwise. Rerunning it reproduces the
checked-in CSVs byte for byte.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mlmm.ingest import bind_sheet, parse_responses
from mlmm.metrics import pairwise_kappa_matrix
from mlmm.model import default_mlmm
from mlmm.scoring import AggregationPolicy, aggregate_ratings, assess

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Target consolidated ratings per level. Achieved = rating >= 3 or == 0.
TARGETS_A = {
    2: [3, 3, 2, 3, 3, 0, 3, 3, 2, 3, 3, 3, 2, 3, 3, 3, 2, 3],          # NAS 14
    3: [3, 3, 2, 3, 4, 3, 2, 3, 3, 2, 3, 3, 3, 2, 3, 3, 2, 3, 3, 3],    # NAS 15
    4: [2, 1, 2, 1, 2, 3, 1, 2, 1, 2, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1],    # NAS 1
    5: [2, 1, 2, 1, 3, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1],             # NAS 1
}
TARGETS_B = {
    2: [3, 3, 3, 3, 4, 3, 3, 3, 3, 2, 3, 3, 3, 3, 3, 3, 3, 3],          # NAS 17
    3: [2, 1, 3, 2, 1, 2, 1, 2, 2, 1, 3, 2, 1, 2, 1, 2, 2, 1, 2, 1],    # NAS 2
    4: [2, 1] * 10,                                                      # NAS 0
    5: [2, 1] * 8 + [2],                                                 # NAS 0
}

# Per-rater single-deviation quotas, tuned so the pairwise Cohen kappas
# of the first two raters land near the top of the intended range and
# those of the last two near the bottom.
QUOTAS_A = (3, 4, 6, 7, 9, 10, 13, 14)
QUOTAS_B = (4, 6, 7, 7, 8, 8, 9, 12, 13)

SEED_A = 11
SEED_B = 7

EXPECTED_NAS = {"a": (14, 15, 1, 1), "b": (17, 2, 0, 0)}


def flatten(targets: dict[int, list[int]]) -> list[tuple[int, int, int]]:
    """(level, statement_id, target rating) in model order."""
    out = []
    for level in (2, 3, 4, 5):
        for i, c in enumerate(targets[level], start=1):
            out.append((level, i, c))
    return out


def build_matrix(
    targets: dict[int, list[int]],
    n_raters: int,
    quotas: tuple[int, ...],
    seed: int,
) -> list[list[int]]:
    """Rows are statements in model order, columns raters."""
    assert len(quotas) == n_raters
    flat = flatten(targets)
    matrix = []
    zero_rows = []
    for level, sid, c in flat:
        if c == 0:
            # Majority marks the statement inapplicable, the rest rate 2.
            n_zero = n_raters // 2 + 1
            matrix.append([0] * n_zero + [2] * (n_raters - n_zero))
            zero_rows.append(len(matrix) - 1)
        else:
            matrix.append([c] * n_raters)
    eligible = [i for i in range(len(flat)) if i not in zero_rows]
    assert sum(quotas) <= len(eligible), "more deviations than statements"

    rng = random.Random(seed)
    order = eligible[:]
    rng.shuffle(order)
    pos = 0
    for rater, quota in enumerate(quotas):
        for _ in range(quota):
            row = order[pos]
            pos += 1
            c = flat[row][2]
            if c == 4:
                dev = 3
            elif c == 1:
                dev = 2
            else:
                dev = c + rng.choice((-1, 1))
            matrix[row][rater] = dev
    return matrix


def to_csv(matrix: list[list[int]], targets: dict[int, list[int]], prefix: str) -> str:
    flat = flatten(targets)
    lines = ["rater_id,level,statement_id,rating"]
    n_raters = len(matrix[0])
    for rater in range(n_raters):
        for row, (level, sid, _) in enumerate(flat):
            lines.append(f"{prefix}{rater + 1},{level},{sid},{matrix[row][rater]}")
    return "\n".join(lines) + "\n"


def verify(name: str, csv_text: str, targets: dict[int, list[int]]) -> None:
    model = default_mlmm()
    records, diags = parse_responses(csv_text, "csv")
    assert not diags, diags
    sheet, bind_diags = bind_sheet(records, model, mode="strict", institution=name)
    assert not bind_diags, bind_diags

    aggregated = aggregate_ratings(sheet, AggregationPolicy("median"))
    for level in (2, 3, 4, 5):
        got = [st.rating for st in aggregated.ratings_for(level)]
        assert got == targets[level], (name, level, got, targets[level])

    result = assess(aggregated, model)
    nas_vector = tuple(lr.nas for lr in result.levels)
    assert nas_vector == EXPECTED_NAS[name[-1]], (name, nas_vector)
    assert result.maturity_level == 2, (name, result.maturity_level)

    agreement = pairwise_kappa_matrix(sheet)
    assert not agreement.undefined_pairs()
    lo, hi = agreement.min_kappa, agreement.max_kappa
    assert 0.44 <= lo < 0.62, (name, "min", lo)
    assert hi >= 0.78, (name, "max", hi)
    assert agreement.overall_band == "moderate", (name, agreement.overall_band)
    print(
        f"{name}: NAS {nas_vector}, level {result.maturity_level}, "
        f"kappa min {lo:.4f} max {hi:.4f} fleiss {agreement.fleiss.value:.4f}, "
        f"band {agreement.overall_band}"
    )


def main() -> int:
    FIXTURES.mkdir(exist_ok=True)
    for name, targets, n_raters, quotas, seed, prefix in (
        ("university_a", TARGETS_A, 8, QUOTAS_A, SEED_A, "a"),
        ("university_b", TARGETS_B, 9, QUOTAS_B, SEED_B, "b"),
    ):
        matrix = build_matrix(targets, n_raters, quotas, seed)
        csv_text = to_csv(matrix, targets, prefix)
        verify(name, csv_text, targets)
        (FIXTURES / f"{name}.csv").write_text(csv_text, encoding="utf-8")
        print(f"wrote fixtures/{name}.csv")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
