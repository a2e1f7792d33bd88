"""Inter-rater agreement statistics.

Cohen's kappa for rater pairs, Fleiss' kappa for the full panel, and a
four-band qualitative classification. Both coefficients correct raw
agreement for the agreement expected by chance:

    kappa = (p_o - p_e) / (1 - p_e)

where p_o is observed agreement and p_e chance agreement from the
marginal rating distributions. Perfect agreement is reported as 1.0
even when chance agreement is also perfect; chance agreement of 1 with
imperfect observed agreement leaves the ratio undefined and raises
UndefinedKappaError.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .exceptions import UndefinedKappaError
from .scoring import ResponseSheet
from .validation import check_kappa

AGREEMENT_BANDS = ("poor", "moderate", "substantial", "excellent")

# Band cut points: below 0.44 poor, then moderate, 0.62 substantial,
# 0.78 and above excellent.
_BAND_CUTS = (0.44, 0.62, 0.78)


@dataclass(frozen=True)
class KappaValue:
    """A kappa coefficient together with its agreement components."""

    value: float
    p_observed: float
    p_expected: float


def cohen_kappa(ratings_a: Sequence, ratings_b: Sequence) -> KappaValue:
    """Cohen's kappa between two raters over the same items.

    Items may be rated with any hashable labels; only equality matters,
    so the result is invariant under relabeling. Raises
    UndefinedKappaError when both raters each used a single category
    (chance agreement 1) yet disagree somewhere.
    """
    a = list(ratings_a)
    b = list(ratings_b)
    if len(a) != len(b):
        raise ValueError(f"rating vectors differ in length: {len(a)} vs {len(b)}")
    n = len(a)
    if n == 0:
        raise ValueError("rating vectors must not be empty")
    matches = sum(1 for x, y in zip(a, b) if x == y)
    counts_a = Counter(a)
    counts_b = Counter(b)
    pe_num = sum(counts_a[cat] * counts_b.get(cat, 0) for cat in counts_a)
    if pe_num == n * n:
        if matches == n:
            return KappaValue(value=1.0, p_observed=1.0, p_expected=1.0)
        raise UndefinedKappaError(
            "chance agreement is 1 but observed agreement is not; kappa undefined"
        )
    p_o = matches / n
    p_e = pe_num / (n * n)
    return KappaValue(value=(p_o - p_e) / (1.0 - p_e), p_observed=p_o, p_expected=p_e)


def fleiss_kappa(table) -> KappaValue:
    """Fleiss' kappa from an items-by-categories count table.

    ``table[i][c]`` is the number of raters who put item i into
    category c; every row must sum to the same rater count n >= 2.
    """
    counts = np.asarray(table)
    if counts.ndim != 2 or counts.size == 0:
        raise ValueError("count table must be a non-empty 2-d array")
    if counts.dtype.kind == "f":
        if not np.all(np.isfinite(counts)) or not np.array_equal(
            np.rint(counts), counts
        ):
            raise ValueError("count table must hold integral values")
        counts = counts.astype(np.int64)
    elif counts.dtype.kind in ("i", "u"):
        counts = counts.astype(np.int64)
    else:
        raise ValueError(f"count table has unsupported dtype {counts.dtype}")
    if counts.min() < 0:
        raise ValueError("count table must be non-negative")
    row_sums = counts.sum(axis=1)
    n = int(row_sums[0])
    if not np.all(row_sums == n):
        raise ValueError("every item must be rated by the same number of raters")
    if n < 2:
        raise ValueError(f"need at least 2 ratings per item, got {n}")
    n_items = counts.shape[0]

    # Integer numerators keep the degeneracy checks exact.
    sum_sq = int((counts.astype(object) ** 2).sum())
    col_sums = counts.sum(axis=0)
    pe_num = int((col_sums.astype(object) ** 2).sum())
    total = n_items * n

    p_bar = (sum_sq - total) / (total * (n - 1))
    p_e = pe_num / (total * total)
    if pe_num == total * total:
        if sum_sq - total == total * (n - 1):
            return KappaValue(value=1.0, p_observed=1.0, p_expected=1.0)
        raise UndefinedKappaError(
            "chance agreement is 1 but observed agreement is not; kappa undefined"
        )
    return KappaValue(
        value=(p_bar - p_e) / (1.0 - p_e), p_observed=p_bar, p_expected=p_e
    )


def classify_agreement(kappa: float) -> str:
    """Qualitative band for a kappa coefficient.

    Bands: poor below 0.44, moderate in [0.44, 0.62), substantial in
    [0.62, 0.78), excellent at 0.78 and above.
    """
    kappa = check_kappa(kappa)
    if kappa < _BAND_CUTS[0]:
        return "poor"
    if kappa < _BAND_CUTS[1]:
        return "moderate"
    if kappa < _BAND_CUTS[2]:
        return "substantial"
    return "excellent"


@dataclass(frozen=True)
class PairwiseKappa:
    """Cohen's kappa for one rater pair; kappa is None when undefined."""

    rater_a: str
    rater_b: str
    kappa: KappaValue | None


@dataclass(frozen=True)
class AgreementReport:
    """Panel-level agreement summary.

    min_kappa/max_kappa and the overall band are taken over the defined
    pairwise Cohen kappas only; the Fleiss coefficient is reported
    alongside but never enters the band rule. The overall band is the
    band of the weakest pair.
    """

    raters: tuple[str, ...]
    pairwise: tuple[PairwiseKappa, ...]
    fleiss: KappaValue
    min_kappa: float
    max_kappa: float
    overall_band: str

    def undefined_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(
            (pk.rater_a, pk.rater_b) for pk in self.pairwise if pk.kappa is None
        )

    def kappa_between(self, rater_a: str, rater_b: str) -> KappaValue | None:
        wanted = {rater_a, rater_b}
        for pk in self.pairwise:
            if {pk.rater_a, pk.rater_b} == wanted:
                return pk.kappa
        raise KeyError(f"no such rater pair: {rater_a!r}, {rater_b!r}")


def pairwise_kappa_matrix(sheet: ResponseSheet) -> AgreementReport:
    """Agreement report over a complete response sheet.

    Raters are reported under their anonymized aliases. Rater pairs
    with degenerate marginals are kept in the pairwise list with a None
    kappa and excluded from the minimum and maximum.
    """
    if len(sheet.raters) < 2:
        raise ValueError(
            f"agreement needs at least 2 raters, sheet has {len(sheet.raters)}"
        )
    matrix = sheet.to_matrix()
    aliases = sheet.rater_aliases()
    pairs = []
    defined: list[float] = []
    for i, j in combinations(range(len(aliases)), 2):
        try:
            kv = cohen_kappa(matrix[:, i], matrix[:, j])
            defined.append(kv.value)
        except UndefinedKappaError:
            kv = None
        pairs.append(PairwiseKappa(rater_a=aliases[i], rater_b=aliases[j], kappa=kv))
    if not defined:
        raise UndefinedKappaError("kappa is undefined for every rater pair")
    counts = np.zeros((matrix.shape[0], 5), dtype=np.int64)
    for i, row in enumerate(matrix):
        counts[i] = np.bincount(row, minlength=5)
    fleiss = fleiss_kappa(counts)
    lo, hi = min(defined), max(defined)
    return AgreementReport(
        raters=aliases,
        pairwise=tuple(pairs),
        fleiss=fleiss,
        min_kappa=lo,
        max_kappa=hi,
        overall_band=classify_agreement(lo),
    )
