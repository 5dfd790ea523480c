"""Cross-run summaries and the Wilcoxon rank-sum test.

Small samples (``n + m <= 12``) get an exact two-sided p-value from the full
null distribution of the rank sum; larger ones use the normal approximation
with midranks, tie-corrected variance and a 0.5 continuity correction.
"""

import dataclasses
import enum
import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .exceptions import DegenerateSampleError

__all__ = [
    "SampleSet",
    "TestMethod",
    "TestResult",
    "aggregate",
    "ranksum",
    "exact_ranksum_p",
    "normal_ranksum_p",
    "EXACT_LIMIT",
    "ALPHA",
]

EXACT_LIMIT = 12
ALPHA = 0.05
CONTINUITY = 0.5


@dataclasses.dataclass(frozen=True)
class SampleSet:
    """Final best fitness of each run of one algorithm."""

    values: Sequence[float]
    label: str = ""

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("a sample needs at least one value")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("sample values must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


class TestMethod(enum.Enum):
    __test__ = False

    EXACT = "exact"
    NORMAL_APPROX = "normal_approx"


@dataclasses.dataclass(frozen=True)
class TestResult:
    __test__ = False

    p_value: float
    method: TestMethod

    @property
    def significant(self):
        return self.p_value < ALPHA


def _as_sample(s):
    return s if isinstance(s, SampleSet) else SampleSet(s)


def aggregate(sample):
    """Return ``(mean, std)`` with the n-1 denominator.

    Raises
    ------
    DegenerateSampleError
        For a single value, whose sample deviation is undefined.
    """
    values = np.asarray(_as_sample(sample).values)
    if values.shape[0] < 2:
        raise DegenerateSampleError("standard deviation needs at least two runs")
    return float(np.mean(values)), float(np.std(values, ddof=1))


def _doubled_ranks(a, b):
    # midranks times two are integers, so the exact path stays in integer arithmetic
    ranks = rankdata(np.concatenate([a, b]), method="average")
    return [int(round(2 * r)) for r in ranks]


def exact_ranksum_p(a, b):
    """Exact two-sided p-value as a :class:`~fractions.Fraction`.

    Counts, over every way of choosing ``len(a)`` of the pooled midranks, how
    many rank sums are at most and at least the observed one.
    """
    n = len(a)
    ranks = _doubled_ranks(np.asarray(a, float), np.asarray(b, float))
    observed = sum(ranks[:n])
    # counts[k][s]: number of k-subsets of the ranks seen so far with sum s
    counts = [dict() for _ in range(n + 1)]
    counts[0][0] = 1
    for r in ranks:
        for k in range(min(n, len(ranks)) - 1, -1, -1):
            row = counts[k]
            if not row:
                continue
            nxt = counts[k + 1]
            for s, c in row.items():
                nxt[s + r] = nxt.get(s + r, 0) + c
    dist = counts[n]
    total = sum(dist.values())
    lower = sum(c for s, c in dist.items() if s <= observed)
    upper = sum(c for s, c in dist.items() if s >= observed)
    return min(Fraction(1), 2 * Fraction(min(lower, upper), total))


def normal_ranksum_p(a, b):
    """Two-sided p-value from the tie-corrected normal approximation."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    n, m = a.shape[0], b.shape[0]
    big_n = n + m
    ranks = rankdata(np.concatenate([a, b]), method="average")
    w = float(np.sum(ranks[:n]))
    mean = n * (big_n + 1) / 2.0
    _, ties = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(ties.astype(float) ** 3 - ties))
    var = n * m / 12.0 * ((big_n + 1) - tie_term / (big_n * (big_n - 1))) if big_n > 1 else 0.0
    if var <= 0.0:
        return 1.0
    z = max(0.0, abs(w - mean) - CONTINUITY) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def ranksum(a, b):
    """Two-sided Wilcoxon rank-sum test of ``a`` against ``b``.

    Examples
    --------
    >>> ranksum([1, 2, 3], [10, 11, 12]).p_value
    0.1
    """
    a = _as_sample(a).values
    b = _as_sample(b).values
    if len(a) + len(b) <= EXACT_LIMIT:
        return TestResult(float(exact_ranksum_p(a, b)), TestMethod.EXACT)
    return TestResult(normal_ranksum_p(a, b), TestMethod.NORMAL_APPROX)
