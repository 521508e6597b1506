"""Half-space and zonoid depth of points with respect to a reference sample.

Half-space depth is computed exactly in one and two dimensions (angular
sweep) and by a seeded random-direction approximation in any dimension.
Zonoid depth is computed exactly in any dimension through a small linear
program.  The module also provides the empirical depth-rank transform that
maps data points to [0, 1] values via the reference sample's depths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lp import maximize_homogeneous
from .seeding import derived_rng

__all__ = [
    "DepthKind",
    "as_data_matrix",
    "halfspace_depth_1d",
    "halfspace_depth_2d_exact",
    "halfspace_depth_approx",
    "zonoid_depth",
    "depth_profile",
    "rank_transform",
]

HALFSPACE = "halfspace"
ZONOID = "zonoid"


def as_data_matrix(a, name: str = "data") -> np.ndarray:
    """Validate and return a finite (n, d) float matrix with n, d >= 1."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be a nonempty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _as_point(x, d: int) -> np.ndarray:
    p = np.asarray(x, dtype=np.float64).reshape(-1)
    if p.shape != (d,):
        raise ValueError(f"query point has dimension {p.size}, expected {d}")
    if not np.all(np.isfinite(p)):
        raise ValueError("query point contains non-finite entries")
    return p


@dataclass(frozen=True)
class DepthKind:
    """Depth family plus evaluation strategy.

    ``exact`` half-space depth is limited to d <= 2; the approximate
    strategy (``directions`` seeded random directions plus the 2d axis
    directions) applies to half-space depth in any dimension.  Zonoid
    depth is always exact (the LP solves the defining program).
    """

    family: str = HALFSPACE
    strategy: str = "exact"
    directions: int = 10_000
    direction_seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in (HALFSPACE, ZONOID):
            raise ValueError(f"unknown depth family {self.family!r}")
        if self.strategy not in ("exact", "approx"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.family == ZONOID and self.strategy != "exact":
            raise ValueError("zonoid depth is always exact; approximate not supported")
        if self.strategy == "approx" and self.directions < 1:
            raise ValueError("direction count must be >= 1")

    def validate_dimension(self, d: int) -> None:
        if self.family == HALFSPACE and self.strategy == "exact" and d > 2:
            raise ValueError(
                f"exact half-space depth supports d <= 2, got d={d}; "
                "use the approximate strategy"
            )

    def label(self) -> str:
        if self.family == ZONOID:
            return "zonoid"
        return "halfspace" if self.strategy == "exact" else f"halfspace~{self.directions}"


def halfspace_depth_1d(x: float, ref) -> float:
    """Empirical half-space depth on the line: min of the two closed-side counts."""
    w = as_data_matrix(ref, "reference")
    if w.shape[1] != 1:
        raise ValueError("reference must be one-dimensional")
    v = np.sort(w[:, 0])
    n = v.size
    left = int(np.searchsorted(v, x, side="right"))
    right = n - int(np.searchsorted(v, x, side="left"))
    return min(left, right) / n


def _halfspace_2d_single(x: np.ndarray, ref: np.ndarray) -> float:
    v = ref - x
    nonzero = (v[:, 0] != 0.0) | (v[:, 1] != 0.0)
    n = ref.shape[0]
    coincident = n - int(np.count_nonzero(nonzero))
    k = n - coincident
    if k == 0:
        return 1.0
    ang = np.sort(np.arctan2(v[nonzero, 1], v[nonzero, 0]))
    doubled = np.concatenate([ang, ang + 2.0 * np.pi])
    # Largest number of direction angles inside a half-open arc [a, a + pi);
    # the minimizing closed half-plane is the complement of the best open arc.
    # The end of the arc is backed off by a hair so that exactly antipodal
    # offsets (whose atan2 values differ from a + pi only by roundoff) stay
    # outside the open arc, as they must.
    inside = np.searchsorted(doubled, ang + (np.pi - 1e-12), side="left") - np.arange(k)
    return (coincident + k - int(inside.max())) / n


def halfspace_depth_2d_exact(x, ref) -> float:
    """Exact planar half-space depth by an angular sweep over the reference points."""
    w = as_data_matrix(ref, "reference")
    if w.shape[1] != 2:
        raise ValueError("reference must be two-dimensional")
    return _halfspace_2d_single(_as_point(x, 2), w)


def _direction_matrix(d: int, count: int, seed: int) -> np.ndarray:
    axes = np.vstack([np.eye(d), -np.eye(d)])
    rng = derived_rng(seed, 0xD1)
    g = rng.standard_normal((count, d))
    norms = np.linalg.norm(g, axis=1)
    # Regenerate the (measure-zero) zero draws rather than dividing by 0.
    while np.any(norms < 1e-300):
        bad = norms < 1e-300
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return np.vstack([axes, g / norms[:, None]])


def _halfspace_approx_profiles(ref: np.ndarray, query_sets, directions: int,
                               seed: int) -> list[np.ndarray]:
    """Approximate depths of several query sets sharing one direction set."""
    n, d = ref.shape
    dirs = _direction_matrix(d, directions, seed)
    best = [np.full(q.shape[0], n, dtype=np.int64) for q in query_sets]
    chunk = max(1, int(2_000_000 // max(n, 1)))
    rows = np.arange(n, dtype=np.int64)
    for start in range(0, dirs.shape[0], chunk):
        block = dirs[start:start + chunk]
        raw_ref = ref @ block.T
        order = np.argsort(raw_ref, axis=0, kind="stable")
        proj_ref = np.take_along_axis(raw_ref, order, axis=0)
        proj_q = [None if q is ref else q @ block.T for q in query_sets]
        # For the reference's own profile the one-sided counts along a
        # direction are rank + 1 and n - rank, so the whole chunk reduces
        # to the argsort above; columns with tied projections fall back to
        # searchsorted, which counts whole tie blocks on both sides.
        ranks = np.empty_like(order)
        np.put_along_axis(ranks, order, rows[:, None], axis=0)
        tied = np.any(proj_ref[1:] == proj_ref[:-1], axis=0)
        per_col = np.minimum(ranks + 1, n - ranks)
        if tied.any():
            per_col[:, tied] = n  # tied columns are handled by the fallback
        counts = per_col.min(axis=1)
        for qi, pq in enumerate(proj_q):
            if pq is None:
                np.minimum(best[qi], counts, out=best[qi])
        for k in range(block.shape[0]):
            col = proj_ref[:, k]
            for qi, pq in enumerate(proj_q):
                if pq is None:
                    if not tied[k]:
                        continue
                    t = raw_ref[:, k]
                else:
                    t = pq[:, k]
                below = np.searchsorted(col, t, side="right")
                above = n - np.searchsorted(col, t, side="left")
                np.minimum(best[qi], np.minimum(below, above), out=best[qi])
    return [b / n for b in best]


def halfspace_depth_approx(x, ref, directions: int = 10_000, seed: int = 0) -> float:
    """Upper bound on half-space depth from seeded random directions.

    The 2d axis-aligned directions are always included, so any point
    outside the reference bounding box gets depth 0.  Deterministic for a
    given seed, and never below the exact depth (the minimum runs over a
    subset of all directions).
    """
    if directions < 1:
        raise ValueError("direction count must be >= 1")
    w = as_data_matrix(ref, "reference")
    p = _as_point(x, w.shape[1])
    return float(_halfspace_approx_profiles(w, [p[None, :]], directions, seed)[0][0])


def zonoid_depth(y, ref) -> float:
    """Exact empirical zonoid depth via a linear program.

    A point has depth alpha iff it is an average of the reference points
    under weights bounded by 1/(N*alpha).  Centering the reference at the
    query reduces this to maximizing the total weight nu in [0,1]^N
    subject to sum(nu_i * (W_i - y)) = 0; the depth is that total / N.
    Points outside the convex hull get 0 (only nu = 0 is feasible).
    """
    w = as_data_matrix(ref, "reference")
    p = _as_point(y, w.shape[1])
    n = w.shape[0]
    centered = np.ascontiguousarray((w - p).T)
    total = maximize_homogeneous(centered, np.ones(n), np.ones(n))
    depth = total / n
    if depth < 1e-9:
        return 0.0
    return min(depth, 1.0)


def _profile_one_set(points: np.ndarray, ref: np.ndarray, kind: DepthKind) -> np.ndarray:
    n, d = ref.shape
    if kind.family == ZONOID:
        return np.array([zonoid_depth(p, ref) for p in points])
    if kind.strategy == "approx":
        return _halfspace_approx_profiles(ref, [points], kind.directions,
                                          kind.direction_seed)[0]
    if d == 1:
        col = np.sort(ref[:, 0])
        t = points[:, 0]
        below = np.searchsorted(col, t, side="right")
        above = n - np.searchsorted(col, t, side="left")
        return np.minimum(below, above) / n
    return np.array([_halfspace_2d_single(p, ref) for p in points])


def depth_profile(points, ref, kind: DepthKind = DepthKind()) -> np.ndarray:
    """Depth of every row of ``points`` with respect to ``ref``.

    Batch evaluation shares work across queries (sorted projections per
    direction); results are identical to a per-point loop.
    """
    q = as_data_matrix(points, "points")
    w = as_data_matrix(ref, "reference")
    if q.shape[1] != w.shape[1]:
        raise ValueError(
            f"dimension mismatch: points have d={q.shape[1]}, reference d={w.shape[1]}"
        )
    kind.validate_dimension(w.shape[1])
    return _profile_one_set(q, w, kind)


def rank_transform(data, ref, kind: DepthKind = DepthKind()) -> np.ndarray:
    """Fraction of reference points whose depth is at most each data point's depth.

    Both depths are taken with respect to ``ref``.  Ties count (the
    inequality is non-strict), so every output is a multiple of 1/N and
    lies in [0, 1].  Under the null these values are approximately
    uniform, which is what the one-sample tests exploit.
    """
    x = as_data_matrix(data, "data")
    w = as_data_matrix(ref, "reference")
    if x.shape[1] != w.shape[1]:
        raise ValueError(
            f"dimension mismatch: data have d={x.shape[1]}, reference d={w.shape[1]}"
        )
    kind.validate_dimension(w.shape[1])
    if kind.family == HALFSPACE and kind.strategy == "approx":
        depths_ref, depths_x = _halfspace_approx_profiles(
            w, [w, x], kind.directions, kind.direction_seed)
    else:
        depths_ref = _profile_one_set(w, w, kind)
        depths_x = _profile_one_set(x, w, kind)
    return transform_from_depths(depths_ref, depths_x)


def transform_from_depths(depths_ref: np.ndarray, depths_data: np.ndarray) -> np.ndarray:
    """Rank transform from precomputed depth vectors."""
    s = np.sort(np.asarray(depths_ref, dtype=np.float64))
    return np.searchsorted(s, np.asarray(depths_data, dtype=np.float64),
                           side="right") / s.size
