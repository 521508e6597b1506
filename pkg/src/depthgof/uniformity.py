"""Uniformity test statistics on [0, 1] samples and their Monte Carlo nulls.

The four statistics (Kolmogorov-Smirnov, Cramer-von Mises, Anderson-
Darling, Greenwood) are the downstream consumers of the depth-rank
transform.  Critical values come from Monte Carlo tables of iid U[0,1]
statistics; because the transformed data are (approximately) uniform
under any continuous null, one table per (statistic, n) is reusable
across null distributions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .seeding import derived_rng

__all__ = [
    "StatKind",
    "NullTable",
    "ks_statistic",
    "cvm_statistic",
    "ad_statistic",
    "greenwood_statistic",
    "compute_statistic",
    "mc_null_table",
    "mc_pvalue",
    "critical_value",
]

CACHE_ENV_VAR = "DEPTHGOF_CACHE_DIR"


class StatKind(str, Enum):
    KS = "ks"
    CVM = "cvm"
    AD = "ad"
    GREENWOOD = "greenwood"


def _sorted_unit_sample(u, allow_single: bool = True) -> np.ndarray:
    a = np.asarray(u, dtype=np.float64).reshape(-1)
    if a.size < 1:
        raise ValueError("empty sample")
    if np.any(a < 0.0) or np.any(a > 1.0) or not np.all(np.isfinite(a)):
        raise ValueError("sample entries must lie in [0, 1]")
    return np.sort(a)


def ks_statistic(u) -> float:
    """sup-distance between the sample ecdf and the uniform cdf."""
    g = _sorted_unit_sample(u)
    n = g.size
    j = np.arange(1, n + 1)
    return float(np.maximum(j / n - g, g - (j - 1) / n).max())


def cvm_statistic(u) -> float:
    """Integrated squared ecdf-uniform distance, 1/(12n) + sum((2j-1)/(2n) - G(j))^2."""
    g = _sorted_unit_sample(u)
    n = g.size
    j = np.arange(1, n + 1)
    return float(1.0 / (12 * n) + np.sum(((2 * j - 1) / (2 * n) - g) ** 2))


def ad_statistic(u, eps: float = 1e-12, paper_form: bool = False) -> float:
    """Anderson-Darling statistic with log clamping at ``eps``.

    Entries are clamped into [eps, 1 - eps] before taking logs, so inputs
    containing exact 0 or 1 (as rank-transformed values can) stay finite.
    ``paper_form`` switches to an audit-only variant that differences the
    logs of the upper order statistics instead of using log(1 - G).
    """
    g = _sorted_unit_sample(u)
    g = np.clip(g, eps, 1.0 - eps)
    n = g.size
    j = np.arange(1, n + 1)
    if paper_form:
        return float(-n - np.sum(((2 * j - 1) / n) * (np.log(g) - np.log(g[::-1]))))
    return float(-n - np.mean((2 * j - 1) * (np.log(g) + np.log1p(-g[::-1]))))


def greenwood_statistic(u, classical: bool = False) -> float:
    """Normalized sum of squared spacings.

    Default: n spacings G(1)-0, ..., G(n)-G(n-1), scaled by n (the sum
    stops at the top order statistic).  ``classical``: all n+1 spacings
    including 1 - G(n), scaled by n+1.
    """
    g = _sorted_unit_sample(u)
    n = g.size
    if classical:
        sp = np.diff(np.concatenate([[0.0], g, [1.0]]))
        return float((n + 1) * np.sum(sp ** 2))
    sp = np.diff(np.concatenate([[0.0], g]))
    return float(n * np.sum(sp ** 2))


def compute_statistic(kind: StatKind, u, ad_eps: float = 1e-12) -> float:
    if kind == StatKind.KS:
        return ks_statistic(u)
    if kind == StatKind.CVM:
        return cvm_statistic(u)
    if kind == StatKind.AD:
        return ad_statistic(u, eps=ad_eps)
    if kind == StatKind.GREENWOOD:
        return greenwood_statistic(u)
    raise ValueError(f"unknown statistic {kind!r}")


def _batch_statistics(kind: StatKind, sorted_rows: np.ndarray) -> np.ndarray:
    """Statistic per row of a (B, n) matrix of row-sorted unit samples."""
    n = sorted_rows.shape[1]
    j = np.arange(1, n + 1)
    if kind == StatKind.KS:
        return np.maximum(j / n - sorted_rows, sorted_rows - (j - 1) / n).max(axis=1)
    if kind == StatKind.CVM:
        return 1.0 / (12 * n) + np.sum(((2 * j - 1) / (2 * n) - sorted_rows) ** 2, axis=1)
    if kind == StatKind.AD:
        g = np.clip(sorted_rows, 1e-12, 1.0 - 1e-12)
        return -n - np.mean((2 * j - 1) * (np.log(g) + np.log1p(-g[:, ::-1])), axis=1)
    if kind == StatKind.GREENWOOD:
        padded = np.concatenate([np.zeros((sorted_rows.shape[0], 1)), sorted_rows], axis=1)
        return n * np.sum(np.diff(padded, axis=1) ** 2, axis=1)
    raise ValueError(f"unknown statistic {kind!r}")


@dataclass(frozen=True)
class NullTable:
    """Sorted Monte Carlo null distribution of one statistic at one sample size."""

    stat: StatKind
    n: int
    replicates: int
    seed: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.replicates < 1000:
            raise ValueError("null tables require at least 1000 replicates")
        if self.values.shape != (self.replicates,):
            raise ValueError("value count does not match replicate count")

    def save_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# {self.stat.value},{self.n},{self.replicates},{self.seed}\n")
            for v in self.values:
                fh.write(repr(float(v)) + "\n")

    @staticmethod
    def load_csv(path) -> "NullTable":
        with open(path) as fh:
            header = fh.readline()
            if not header.startswith("# "):
                raise ValueError(f"{path}: missing null-table header")
            stat, n, b, seed = header[2:].strip().split(",")
            values = np.array([float(line) for line in fh])
        return NullTable(StatKind(stat), int(n), int(b), int(seed), values)


def mc_null_table(stat: StatKind, n: int, replicates: int = 100_000,
                  seed: int = 0) -> NullTable:
    """Simulate the null distribution of ``stat`` for iid U[0,1] samples of size n."""
    if replicates < 1000:
        raise ValueError("null tables require at least 1000 replicates")
    rng = derived_rng(seed, 0x7AB1E, n)
    out = np.empty(replicates)
    # Chunk generation to bound the (B, n) working set.
    chunk = max(1, int(20_000_000 // max(n, 1)))
    for start in range(0, replicates, chunk):
        stop = min(start + chunk, replicates)
        rows = np.sort(rng.random((stop - start, n)), axis=1)
        out[start:stop] = _batch_statistics(stat, rows)
    out.sort()
    return NullTable(stat, n, replicates, seed, out)


_memory_cache: dict[tuple, NullTable] = {}


def cached_null_table(stat: StatKind, n: int, replicates: int = 100_000,
                      seed: int = 0) -> NullTable:
    """Null table memoized in memory and, when configured, on disk.

    The disk cache directory comes from the DEPTHGOF_CACHE_DIR environment
    variable; without it only the in-process cache is used.
    """
    key = (stat, n, replicates, seed)
    if key in _memory_cache:
        return _memory_cache[key]
    cache_dir = os.environ.get(CACHE_ENV_VAR)
    path = None
    if cache_dir:
        path = Path(cache_dir) / f"null_{stat.value}_n{n}_B{replicates}_s{seed}.csv"
        if path.exists():
            table = NullTable.load_csv(path)
            _memory_cache[key] = table
            return table
    table = mc_null_table(stat, n, replicates, seed)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        table.save_csv(path)
    _memory_cache[key] = table
    return table


def mc_pvalue(table: NullTable, observed: float) -> float:
    """(1 + #{null values >= observed}) / (replicates + 1)."""
    b = table.replicates
    n_ge = b - int(np.searchsorted(table.values, observed, side="left"))
    return (1 + n_ge) / (b + 1)


def critical_value(table: NullTable, level: float) -> float:
    """Threshold c with: mc_pvalue(observed) <= level iff observed > c."""
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    b = table.replicates
    k = int(np.floor(level * (b + 1) - 1))
    if k < 0:
        return float("inf")
    k = min(k, b - 1)
    return float(table.values[b - 1 - k])
