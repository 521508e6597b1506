"""Dense bounded-variable simplex solver for small linear programs.

Solves the homogeneous-right-hand-side problem

    maximize    c @ x
    subject to  A @ x = 0,   0 <= x <= u,

which is the shape needed by the zonoid depth evaluation (the data are
centered at the query point, so the right-hand side is always zero and
``x = 0`` is a basic feasible starting point).  The constraint count is
the data dimension, so the basis stays tiny while the variable count can
reach several thousand.

Pivoting uses Dantzig pricing and switches permanently to Bland's rule
after a run of degenerate steps, which guarantees termination.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["SingularBasisError", "maximize_homogeneous"]

# Feasibility / optimality tolerance for the simplex pivoting.
TOLERANCE = 1e-9

_OPTIMAL = 0
_ITERATION_LIMIT = 1
_SINGULAR = 2

_DEGENERATE_LIMIT = 200
_PRICING_BLOCK = 128


class SingularBasisError(RuntimeError):
    """Raised when a simplex basis cannot be factorized."""


@njit(cache=True)
def _solve_square(M, rhs):
    """Gaussian elimination with partial pivoting; returns (ok, solution)."""
    m = M.shape[0]
    a = M.copy()
    x = rhs.copy()
    for k in range(m):
        p = k
        for i in range(k + 1, m):
            if abs(a[i, k]) > abs(a[p, k]):
                p = i
        if abs(a[p, k]) < 1e-13:
            return False, x
        if p != k:
            for j in range(m):
                a[k, j], a[p, j] = a[p, j], a[k, j]
            x[k], x[p] = x[p], x[k]
        piv = a[k, k]
        for i in range(k + 1, m):
            f = a[i, k] / piv
            if f != 0.0:
                for j in range(k, m):
                    a[i, j] -= f * a[k, j]
                x[i] -= f * x[k]
    for k in range(m - 1, -1, -1):
        s = x[k]
        for j in range(k + 1, m):
            s -= a[k, j] * x[j]
        x[k] = s / a[k, k]
    return True, x


@njit(cache=True)
def _simplex_core(A, c, upper, tol, max_iter):  # noqa: C901 - one hot loop
    m, n = A.shape
    # Columns n..n+m-1 are artificial: identity column, zero cost, bounds [0, 0].
    basis = np.empty(m, np.int64)
    for i in range(m):
        basis[i] = n + i
    in_basis = np.zeros(n + m, np.bool_)
    for i in range(m):
        in_basis[n + i] = True
    at_upper = np.zeros(n, np.bool_)
    # S = A @ (values of nonbasic-at-upper variables); RHS seen by the basis is -S.
    S = np.zeros(m)
    B = np.empty((m, m))
    cB = np.empty(m)
    col = np.empty(m)
    bland = False
    degenerate_run = 0
    scan_start = 0

    for _ in range(max_iter):
        for k in range(m):
            j = basis[k]
            if j < n:
                for i in range(m):
                    B[i, k] = A[i, j]
                cB[k] = c[j]
            else:
                for i in range(m):
                    B[i, k] = 0.0
                B[j - n, k] = 1.0
                cB[k] = 0.0
        ok, y = _solve_square(B.T.copy(), cB.copy())
        if not ok:
            return _SINGULAR, 0.0
        ok, xB = _solve_square(B, -S)
        if not ok:
            return _SINGULAR, 0.0

        # Pricing over structural nonbasic columns.  Dantzig pricing scans
        # rotating blocks and stops at the first block with an eligible
        # column; Bland mode always takes the lowest eligible index.
        enter = -1
        best = tol
        if bland:
            for j in range(n):
                if in_basis[j]:
                    continue
                rj = c[j]
                for i in range(m):
                    rj -= A[i, j] * y[i]
                if (rj > tol and not at_upper[j]) or (rj < -tol and at_upper[j]):
                    enter = j
                    break
        else:
            scanned = 0
            start = scan_start
            while scanned < n:
                stop = start + _PRICING_BLOCK
                if stop > n:
                    stop = n
                for j in range(start, stop):
                    if in_basis[j]:
                        continue
                    rj = c[j]
                    for i in range(m):
                        rj -= A[i, j] * y[i]
                    eligible = (rj > tol and not at_upper[j]) or (rj < -tol and at_upper[j])
                    if eligible and abs(rj) > best:
                        best = abs(rj)
                        enter = j
                scanned += stop - start
                if enter != -1:
                    scan_start = start
                    break
                start = stop
                if start >= n:
                    start = 0
        if enter == -1:
            obj = 0.0
            for j in range(n):
                if at_upper[j] and not in_basis[j]:
                    obj += c[j] * upper[j]
            for k in range(m):
                if basis[k] < n:
                    obj += c[basis[k]] * xB[k]
            return _OPTIMAL, obj

        for i in range(m):
            col[i] = A[i, enter]
        ok, w = _solve_square(B, col.copy())
        if not ok:
            return _SINGULAR, 0.0

        # Entering variable moves by t >= 0: up from 0, or down from its upper bound.
        sign = -1.0 if at_upper[enter] else 1.0
        t_max = upper[enter]
        leave = -1
        for k in range(m):
            d = -sign * w[k]
            if abs(d) <= tol:
                continue
            jb = basis[k]
            hi = upper[jb] if jb < n else 0.0
            if d > 0.0:
                t = (hi - xB[k]) / d
            else:
                t = xB[k] / (-d)
            if t < 0.0:
                t = 0.0
            if t < t_max - 1e-12:
                t_max = t
                leave = k
            elif leave != -1 and t <= t_max + 1e-12 and bland and basis[k] < basis[leave]:
                leave = k

        if t_max <= 1e-12:
            degenerate_run += 1
            if degenerate_run > _DEGENERATE_LIMIT:
                bland = True
        else:
            degenerate_run = 0

        if leave == -1:
            # Bound flip: the entering variable traverses its whole range.
            was_upper = at_upper[enter]
            at_upper[enter] = not was_upper
            if was_upper:
                for i in range(m):
                    S[i] -= upper[enter] * A[i, enter]
            else:
                for i in range(m):
                    S[i] += upper[enter] * A[i, enter]
            continue

        jb = basis[leave]
        d_leave = -sign * w[leave]
        in_basis[jb] = False
        if jb < n and d_leave > 0.0:
            at_upper[jb] = True
            for i in range(m):
                S[i] += upper[jb] * A[i, jb]
        elif jb < n:
            at_upper[jb] = False
        if at_upper[enter]:
            at_upper[enter] = False
            for i in range(m):
                S[i] -= upper[enter] * A[i, enter]
        basis[leave] = enter
        in_basis[enter] = True

    return _ITERATION_LIMIT, 0.0


def maximize_homogeneous(A: np.ndarray, c: np.ndarray, upper: np.ndarray,
                         max_iter: int | None = None) -> float:
    """Maximize ``c @ x`` subject to ``A @ x = 0`` and ``0 <= x <= upper``.

    Parameters
    ----------
    A : (m, n) constraint matrix with m << n.
    c : (n,) objective coefficients.
    upper : (n,) finite upper bounds, all nonnegative.

    Returns
    -------
    The optimal objective value (``x = 0`` is always feasible, so the
    problem is never infeasible, and finite bounds rule out unboundedness).
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    upper = np.ascontiguousarray(upper, dtype=np.float64)
    if A.ndim != 2 or c.shape != (A.shape[1],) or upper.shape != (A.shape[1],):
        raise ValueError("inconsistent LP shapes")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(c)) and np.all(np.isfinite(upper))):
        raise ValueError("LP data must be finite")
    if np.any(upper < 0):
        raise ValueError("upper bounds must be nonnegative")
    m, n = A.shape
    if max_iter is None:
        max_iter = 200 * (n + m) + 1000
    code, obj = _simplex_core(A, c, upper, TOLERANCE, max_iter)
    if code == _SINGULAR:
        cond = float(np.linalg.cond(A @ A.T)) if m > 0 else float("inf")
        raise SingularBasisError(
            f"simplex basis numerically singular (constraint Gram condition ~{cond:.3e})"
        )
    if code == _ITERATION_LIMIT:
        raise RuntimeError(f"simplex did not converge within {max_iter} iterations")
    return float(obj)
