"""Dense symmetric eigensolver: Householder reduction + implicit-shift QL.

Eigenvalues only, no eigenvectors.  The reduction is vectorized with numpy
rank-2 updates (O(n^3) flops but O(n) Python steps); the QL iteration runs on
plain Python floats, which is faster than element-wise numpy at these sizes.
An off-diagonal element e_i is treated as negligible when
``|e_i| <= tol * (|d_i| + |d_{i+1}|)``; each eigenvalue gets at most
``max_sweeps`` QL sweeps before ``SolverFailureError`` is raised with the
offending index.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError, SolverFailureError

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 50


def householder_tridiagonal(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a symmetric matrix to tridiagonal form (diagonal, subdiagonal).

    The input is copied; symmetry is preserved exactly by the symmetric
    rank-2 update ``B -= v q^T + q v^T``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1 :, k]
        norm = math.sqrt(float(x @ x))
        if norm == 0.0:
            e[k] = 0.0
            continue
        alpha = -math.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= math.sqrt(float(v @ v))
        block = a[k + 1 :, k + 1 :]
        p = block @ v
        kappa = float(v @ p)
        q = 2.0 * p - (2.0 * kappa) * v
        block -= np.outer(v, q)
        block -= np.outer(q, v)
        e[k] = alpha
    if n > 1:
        e[n - 2] = a[n - 1, n - 2]
    d[:] = np.diagonal(a)
    return d, e


def ql_implicit_eigenvalues(
    d: np.ndarray,
    e: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix, ascending order."""
    n = len(d)
    if n == 0:
        return np.empty(0)
    dd = [float(v) for v in d]
    ee = [float(v) for v in e] + [0.0]
    fabs, hypot, copysign = math.fabs, math.hypot, math.copysign
    for low in range(n):
        sweeps = 0
        while True:
            m = low
            while m < n - 1:
                scale = fabs(dd[m]) + fabs(dd[m + 1])
                if fabs(ee[m]) <= tol * scale:
                    break
                m += 1
            if m == low:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise SolverFailureError(
                    f"QL iteration exceeded {max_sweeps} sweeps", index=low
                )
            g = (dd[low + 1] - dd[low]) / (2.0 * ee[low])
            r = hypot(g, 1.0)
            g = dd[m] - dd[low] + ee[low] / (g + copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, low - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    dd[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = dd[i + 1] - p
                r = (dd[i] - g) * s + 2.0 * c * b
                p = s * r
                dd[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            dd[low] -= p
            ee[low] = g
            ee[m] = 0.0
    out = np.array(dd)
    out.sort()
    return out


def symmetric_eigenvalues(
    a: np.ndarray, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS
) -> np.ndarray:
    """All eigenvalues of a dense symmetric matrix, ascending order."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError("matrix must be square")
    if tol <= 0.0:
        raise InvalidArgumentError("tol must be positive")
    n = a.shape[0]
    if n == 1:
        return np.array([float(a[0, 0])])
    d, e = householder_tridiagonal(a)
    return ql_implicit_eigenvalues(d, e, tol=tol, max_sweeps=max_sweeps)
