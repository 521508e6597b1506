"""Depth-rank two-sample scale tests with random tie-breaking.

Depths of both samples are taken with respect to the pooled sample; the
tests then depend only on the ranks of those depths, so under the null
(and with seeded random tie-breaking) every statistic has the classical
two-sample rank null distribution.  P-values come from uniform rank
splits (valid by that distribution-freeness), label permutations that
re-break ties per resample, or exact enumeration for small samples.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .depth import DepthKind, as_data_matrix, depth_profile
from .seeding import derived_rng

__all__ = [
    "TwoSampleStat",
    "PValueMethod",
    "DepthRanks",
    "joint_depth_ranks",
    "ks_two_sample",
    "cvm_two_sample",
    "ad_two_sample",
    "rank_statistic",
    "null_rank_table",
    "exact_null_distribution",
    "TwoSampleReport",
    "two_sample_test",
    "ddplot_points",
]


class TwoSampleStat(str, Enum):
    KS = "ks"
    CVM = "cvm"
    AD = "ad"


class PValueMethod(str, Enum):
    PERMUTATION = "permutation"
    RANK_TABLE = "rank_table"
    EXACT = "exact"


@dataclass(frozen=True)
class DepthRanks:
    """Ranks of each sample's pooled depths after random tie-breaking.

    ``first`` and ``second`` partition {1, ..., n + m}; tied depth blocks
    were shuffled with the seeded generator before ranking.
    """

    first: np.ndarray
    second: np.ndarray
    tie_seed: int

    def __post_init__(self) -> None:
        total = self.first.size + self.second.size
        merged = np.concatenate([self.first, self.second])
        if not np.array_equal(np.sort(merged), np.arange(1, total + 1)):
            raise ValueError("ranks must partition 1..n+m without repeats")

    @property
    def n(self) -> int:
        return self.first.size

    @property
    def m(self) -> int:
        return self.second.size


def _tie_broken_ranks(values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Ascending 1-based ranks; tied blocks resolved by a uniform shuffle."""
    jitter = rng.random(values.size)
    order = np.lexsort((jitter, values))
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(1, values.size + 1)
    return ranks


def joint_depth_ranks(x, y, kind: DepthKind = DepthKind(),
                      tie_seed: int = 0) -> DepthRanks:
    """Depths of the pooled sample, ranked with seeded random tie-breaking."""
    a = as_data_matrix(x, "first sample")
    b = as_data_matrix(y, "second sample")
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"dimension mismatch: samples have d={a.shape[1]} and d={b.shape[1]}"
        )
    pooled = np.vstack([a, b])
    depths = depth_profile(pooled, pooled, kind)
    ranks = _tie_broken_ranks(depths, derived_rng(tie_seed, 0x7E1))
    return DepthRanks(ranks[:a.shape[0]], ranks[a.shape[0]:], tie_seed)


def _ecdf_differences(first_ranks: np.ndarray, n: int, m: int) -> np.ndarray:
    """F_n - G_m evaluated after each rank j = 1..n+m."""
    total = n + m
    marks = np.zeros(total)
    marks[first_ranks - 1] = 1.0
    cum_first = np.cumsum(marks) / n
    cum_second = np.cumsum(1.0 - marks) / m
    return cum_first - cum_second


def ks_two_sample(ranks: DepthRanks) -> float:
    """Largest ecdf gap between the two rank-induced samples."""
    return float(np.abs(_ecdf_differences(ranks.first, ranks.n, ranks.m)).max())


def cvm_two_sample(ranks: DepthRanks) -> float:
    """Summed squared ecdf gaps, weighted by nm/(n+m)^2."""
    n, m = ranks.n, ranks.m
    diff = _ecdf_differences(ranks.first, n, m)
    return float(n * m / (n + m) ** 2 * np.sum(diff ** 2))


def ad_two_sample(ranks: DepthRanks) -> float:
    """Variance-weighted squared ecdf gaps; the singular top term is excluded."""
    n, m = ranks.n, ranks.m
    total = n + m
    if total < 2:
        raise ValueError("two-sample AD needs n + m >= 2")
    diff = _ecdf_differences(ranks.first, n, m)[:-1]
    j = np.arange(1, total)
    return float(n * m / total ** 2 * np.sum(diff ** 2 / (j * (total - j))))


_STAT_FUNCS = {
    TwoSampleStat.KS: ks_two_sample,
    TwoSampleStat.CVM: cvm_two_sample,
    TwoSampleStat.AD: ad_two_sample,
}


def rank_statistic(stat: TwoSampleStat, ranks: DepthRanks) -> float:
    return _STAT_FUNCS[stat](ranks)


def _stats_for_splits(stat: TwoSampleStat, first_masks: np.ndarray,
                      n: int, m: int) -> np.ndarray:
    """Statistic for each row of a (B, n+m) boolean first-sample mask."""
    total = n + m
    cum_first = np.cumsum(first_masks, axis=1) / n
    cum_second = np.cumsum(~first_masks, axis=1) / m
    diff = cum_first - cum_second
    if stat == TwoSampleStat.KS:
        return np.abs(diff).max(axis=1)
    if stat == TwoSampleStat.CVM:
        return n * m / total ** 2 * np.sum(diff ** 2, axis=1)
    j = np.arange(1, total)
    return n * m / total ** 2 * np.sum(diff[:, :-1] ** 2 / (j * (total - j)), axis=1)


def null_rank_table(stat: TwoSampleStat, n: int, m: int,
                    replicates: int = 100_000, seed: int = 0) -> np.ndarray:
    """Sorted statistic values over uniformly random rank splits."""
    rng = derived_rng(seed, 0x2A11)
    total = n + m
    out = np.empty(replicates)
    chunk = max(1, int(20_000_000 // max(total, 1)))
    for start in range(0, replicates, chunk):
        stop = min(start + chunk, replicates)
        keys = rng.random((stop - start, total))
        # The n smallest keys per row mark the first sample.
        order = np.argsort(keys, axis=1, kind="stable")
        masks = np.zeros((stop - start, total), dtype=bool)
        np.put_along_axis(masks, order[:, :n], True, axis=1)
        out[start:stop] = _stats_for_splits(stat, masks, n, m)
    out.sort()
    return out


def exact_null_distribution(stat: TwoSampleStat, n: int, m: int,
                            limit: int = 1_000_000):
    """Statistic value for every one of the C(n+m, n) rank splits."""
    total = n + m
    count = math.comb(total, n)
    if count > limit:
        raise ValueError(
            f"exact enumeration needs {count} splits (> {limit}); "
            "use the permutation or rank-table method"
        )
    masks = np.zeros((count, total), dtype=bool)
    for row, subset in enumerate(combinations(range(total), n)):
        masks[row, list(subset)] = True
    return _stats_for_splits(stat, masks, n, m)


@dataclass(frozen=True)
class TwoSampleReport:
    statistics: dict[TwoSampleStat, float]
    p_values: dict[TwoSampleStat, float]
    method: PValueMethod
    replicates: int
    n: int
    m: int
    depth: DepthKind
    seed: int
    seconds: float

    def reject(self, level: float = 0.05) -> dict[TwoSampleStat, bool]:
        return {k: p <= level for k, p in self.p_values.items()}

    def to_text(self) -> str:
        lines = [
            f"n={self.n}",
            f"m={self.m}",
            f"depth={self.depth.label()}",
            f"pvalue_method={self.method.value}",
            f"replicates={self.replicates}",
            f"seed={self.seed}",
            f"seconds={self.seconds:.3f}",
        ]
        for kind in self.statistics:
            lines.append(f"{kind.value}: observed={self.statistics[kind]:.6f} "
                         f"p={self.p_values[kind]:.6g}")
        return "\n".join(lines)


def _permutation_pvalues(depths: np.ndarray, n: int, observed: dict,
                         replicates: int, seed: int) -> dict:
    """Label-permutation null; ties are re-broken on every resample."""
    total = depths.size
    rng = derived_rng(seed, 0x9E2)
    counts = {k: 0 for k in observed}
    for _ in range(replicates):
        ranks = _tie_broken_ranks(depths, rng)
        labels = rng.permutation(total)
        first = ranks[labels[:n]]
        mask = np.zeros((1, total), dtype=bool)
        mask[0, first - 1] = True
        for kind in observed:
            value = _stats_for_splits(kind, mask, n, total - n)[0]
            if value >= observed[kind] - 1e-12:
                counts[kind] += 1
    return {k: (1 + c) / (replicates + 1) for k, c in counts.items()}


def two_sample_test(x, y, kind: DepthKind = DepthKind(),
                    stats: tuple[TwoSampleStat, ...] = tuple(TwoSampleStat),
                    method: PValueMethod = PValueMethod.RANK_TABLE,
                    replicates: int = 100_000,
                    seed: int = 0) -> TwoSampleReport:
    """Depth-rank two-sample test of equal distributions (scale-sensitive)."""
    t0 = time.perf_counter()
    a = as_data_matrix(x, "first sample")
    b = as_data_matrix(y, "second sample")
    if a.shape[1] != b.shape[1]:
        raise ValueError("dimension mismatch between samples")
    n, m = a.shape[0], b.shape[0]
    ranks = joint_depth_ranks(a, b, kind, tie_seed=seed)
    observed = {s: rank_statistic(s, ranks) for s in stats}

    if method == PValueMethod.EXACT:
        p_values = {}
        for s in stats:
            dist = exact_null_distribution(s, n, m)
            p_values[s] = float(np.mean(dist >= observed[s] - 1e-12))
        used = math.comb(n + m, n)
    elif method == PValueMethod.RANK_TABLE:
        p_values = {}
        for s in stats:
            table = null_rank_table(s, n, m, replicates, seed)
            n_ge = table.size - int(np.searchsorted(table, observed[s] - 1e-12))
            p_values[s] = (1 + n_ge) / (table.size + 1)
        used = replicates
    elif method == PValueMethod.PERMUTATION:
        pooled = np.vstack([a, b])
        depths = depth_profile(pooled, pooled, kind)
        p_values = _permutation_pvalues(depths, n, observed, replicates, seed)
        used = replicates
    else:
        raise ValueError(f"unknown p-value method {method!r}")

    return TwoSampleReport(
        statistics=observed,
        p_values=p_values,
        method=method,
        replicates=used,
        n=n,
        m=m,
        depth=kind,
        seed=seed,
        seconds=time.perf_counter() - t0,
    )


def ddplot_points(x, y, kind: DepthKind = DepthKind()) -> np.ndarray:
    """Depth-depth coordinates of every pooled point: (depth wrt x, depth wrt y).

    Purely descriptive output for plotting; identical samples put every
    point on the diagonal.
    """
    a = as_data_matrix(x, "first sample")
    b = as_data_matrix(y, "second sample")
    if a.shape[1] != b.shape[1]:
        raise ValueError("dimension mismatch between samples")
    pooled = np.vstack([a, b])
    dx = depth_profile(pooled, a, kind)
    dy = depth_profile(pooled, b, kind)
    return np.column_stack([dx, dy])
