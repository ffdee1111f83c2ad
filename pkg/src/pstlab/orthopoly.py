"""Finite orthogonal polynomial sequences defined by three-term recurrences.

A finite OPS {P_0, ..., P_N} is fixed by recurrence coefficients
(a_0..a_{N-2}, b_0..b_{N-1}):

    a_n P_{n+1}(x) + b_n P_n(x) + a_{n-1} P_{n-1}(x) = x P_n(x),

with P_{-1} = 0, P_0 = 1 and the free constant a_{N-1} taken as 1.  The
monic companions p_n = a_0 ... a_{n-1} P_n obey

    x p_n(x) = p_{n+1}(x) + b_n p_n(x) + a_{n-1}^2 p_{n-1}(x).
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from . import _tridiag
from .errors import ValidationError


class Normalization(str, Enum):
    MONIC = "monic"
    ORTHONORMAL = "orthonormal"


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Off-diagonal ``a_n`` (length N-1) and diagonal ``b_n`` (length N)."""

    offdiag: tuple
    diag: tuple

    def __post_init__(self):
        off = tuple(float(v) for v in np.ravel(self.offdiag))
        dia = tuple(float(v) for v in np.ravel(self.diag))
        if len(dia) < 1:
            raise ValidationError("at least one diagonal entry is required")
        if len(off) != len(dia) - 1:
            raise ValidationError(
                f"offdiag must have length {len(dia) - 1}, got {len(off)}"
            )
        for i, v in enumerate(off + dia):
            if not math.isfinite(v):
                raise ValidationError(f"non-finite coefficient at position {i}")
        for i, v in enumerate(off):
            if v <= 0.0:
                raise ValidationError(f"offdiag[{i}] = {v!r} is not strictly positive")
        object.__setattr__(self, "offdiag", off)
        object.__setattr__(self, "diag", dia)

    @property
    def size(self):
        return len(self.diag)

    @classmethod
    def from_monic(cls, offdiag_sq, diag):
        """Build from monic data, i.e. the squared off-diagonal a_{n-1}^2."""
        sq = np.asarray(offdiag_sq, dtype=float)
        if np.any(sq <= 0):
            bad = int(np.flatnonzero(sq <= 0)[0])
            raise ValidationError(f"squared offdiag[{bad}] = {sq[bad]!r} is not positive")
        return cls(tuple(np.sqrt(sq)), tuple(diag))

    @property
    def offdiag_sq(self):
        return tuple(a * a for a in self.offdiag)

    def as_arrays(self):
        return np.array(self.offdiag), np.array(self.diag)


@dataclass(frozen=True)
class PolynomialTable:
    """``values[n, k] = P_n(nodes[k])`` for n = 0..N."""

    values: np.ndarray
    normalization: Normalization
    nodes: np.ndarray

    @property
    def degree(self):
        return self.values.shape[0] - 1


@dataclass(frozen=True)
class KrawtchoukParams:
    p: float
    M: int

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValidationError(f"Krawtchouk p must lie in (0, 1), got {self.p!r}")
        if int(self.M) != self.M or self.M < 1:
            raise ValidationError(f"Krawtchouk M must be a positive integer, got {self.M!r}")
        object.__setattr__(self, "M", int(self.M))


def evaluate_ops(coeffs, nodes, normalization=Normalization.ORTHONORMAL):
    """Evaluate P_0..P_N at ``nodes`` by forward recurrence.

    Returns a :class:`PolynomialTable` with ``N + 1`` rows.  For the
    orthonormal table P_N uses a_{N-1} = 1.
    """
    normalization = Normalization(normalization)
    x = np.asarray(nodes, dtype=float).ravel()
    a, b = coeffs.as_arrays()
    N = coeffs.size
    out = np.empty((N + 1, x.size))
    out[0] = 1.0
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    # a_{N-1} := 1 closes the recurrence at the top
    a_ext = np.append(a, 1.0)
    for n in range(N):
        if normalization is Normalization.MONIC:
            back = a_ext[n - 1] ** 2 if n > 0 else 0.0
            nxt = (x - b[n]) * cur - back * prev
        else:
            back = a_ext[n - 1] if n > 0 else 0.0
            nxt = ((x - b[n]) * cur - back * prev) / a_ext[n]
        prev, cur = cur, nxt
        out[n + 1] = cur
    return PolynomialTable(out, normalization, x)


def monic_to_orthonormal(table, coeffs):
    """Rescale a monic table: P_n = p_n / (a_0 ... a_{n-1})."""
    if table.normalization is Normalization.ORTHONORMAL:
        return table
    a = np.append(np.array(coeffs.offdiag), 1.0)
    norms = np.concatenate([[1.0], np.cumprod(a)])
    return PolynomialTable(table.values / norms[:, None], Normalization.ORTHONORMAL, table.nodes)


def pochhammer(a, j):
    """Rising factorial (a)_j, computed as an iterated product."""
    r = 1.0
    for i in range(j):
        r *= a + i
    return r


def krawtchouk_sum(n, x, p, M):
    """Monic Krawtchouk K_n(x; p, M) from the explicit hypergeometric sum.

    No range check on ``M`` or ``n``: each summand is a polynomial in M, so
    negative integer M is meaningful.
    """
    total = 0.0
    for j in range(n + 1):
        total += (
            pochhammer(-n, j) * pochhammer(-M + j, n - j) / math.factorial(j)
            * p ** (n - j) * pochhammer(-x, j)
        )
    return total


def krawtchouk_monic(params, n, x):
    """K_n(x; p, M) via the explicit sum (independent of the recurrence)."""
    if n < 0:
        raise ValidationError(f"degree must be non-negative, got {n}")
    return krawtchouk_sum(n, float(x), params.p, params.M)


def krawtchouk_recurrence(n, x, p, M):
    """Monic K_n(x; p, M) by the three-term recurrence, for any real M.

    Better conditioned than the sum for large degrees; used where
    cancellation in the sum would hurt.
    """
    x = np.asarray(x, dtype=float)
    q = p * (1.0 - p)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        prev, cur = cur, (x - (M * p + k * (1.0 - 2.0 * p))) * cur - k * (M + 1 - k) * q * prev
    return cur


def krawtchouk_coefficients(params):
    """Recurrence data of the Krawtchouk family on M + 1 nodes.

    b_n = M p + n (1 - 2p) and a_{n-1}^2 = n (M + 1 - n) p (1 - p); at
    p = 1/2 this is b_n = M/2, a_{n-1}^2 = n (M + 1 - n) / 4.
    """
    p, M = params.p, params.M
    n = np.arange(M + 1)
    diag = M * p + n * (1.0 - 2.0 * p)
    k = np.arange(1, M + 1)
    sq = k * (M + 1 - k) * p * (1.0 - p)
    return RecurrenceCoefficients.from_monic(sq, diag)


def truncated(coeffs, n):
    """Coefficients of the leading n x n block."""
    if not 1 <= n <= coeffs.size:
        raise ValidationError(f"truncation order {n} outside 1..{coeffs.size}")
    return RecurrenceCoefficients(coeffs.offdiag[: n - 1], coeffs.diag[:n])


def polynomial_zeros(coeffs, n):
    """Zeros of P_n, ascending: eigenvalues of the n x n truncation."""
    sub = truncated(coeffs, n)
    vals, _ = _tridiag.tql_implicit(sub.diag, sub.offdiag, vectors=False)
    return vals
