"""Symmetric tridiagonal eigensolvers: implicit-shift QL and Sturm bisection."""

import math

import numpy as np

from .errors import ConvergenceError


def tql_implicit(diag, offdiag, vectors=True, max_iter=60):
    """Eigen-pairs of the symmetric tridiagonal matrix T(diag, offdiag).

    Implicit Wilkinson-shifted QL sweeps with Givens rotations.  Eigenvalues
    come back in ascending order; eigenvectors are the columns of ``Z``.

    Parameters
    ----------
    diag : array_like, shape (n,)
    offdiag : array_like, shape (n-1,)
    vectors : bool
        Accumulate the rotations into an eigenvector matrix.
    max_iter : int
        Sweep budget per eigenvalue before giving up.

    Returns
    -------
    (ndarray, ndarray or None)
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = np.asarray(offdiag, dtype=float)
    Z = np.eye(n) if vectors else None

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= np.finfo(float).eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it >= max_iter:
                raise ConvergenceError(
                    f"QL iteration did not converge for eigenvalue {l} "
                    f"after {it} sweeps",
                    iterations=it,
                )
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Z is not None:
                    zi1 = Z[:, i + 1].copy()
                    Z[:, i + 1] = s * Z[:, i] + c * zi1
                    Z[:, i] = c * Z[:, i] - s * zi1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    d = d[order]
    if Z is not None:
        Z = Z[:, order]
    return d, Z


def sturm_count(diag, offdiag, x):
    """Number of eigenvalues strictly less than ``x``."""
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    for i in range(len(diag)):
        off2 = offdiag[i - 1] ** 2 if i > 0 else 0.0
        q = (diag[i] - x) - (off2 / q if i > 0 else 0.0)
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count


def bisection_eigenvalues(diag, offdiag, tol=None):
    """All eigenvalues by Sturm-sequence bisection (slow, independent path)."""
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    n = diag.size
    if n == 0:
        return np.zeros(0)
    # Gershgorin bracket
    rad = np.zeros(n)
    rad[:-1] += np.abs(offdiag)
    rad[1:] += np.abs(offdiag)
    lo = float(np.min(diag - rad)) - 1.0
    hi = float(np.max(diag + rad)) + 1.0
    if tol is None:
        tol = 4 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    out = np.empty(n)
    for k in range(n):
        a, b = lo, hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if mid in (a, b):
                break
            if sturm_count(diag, offdiag, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
    return out
