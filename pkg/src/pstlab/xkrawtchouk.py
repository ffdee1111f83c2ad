"""The X2-Krawtchouk family and its seven-diagonal quantum walk.

Members are indexed by the degree set S = {0, ..., N, N+3} and live on the
grid x = -1, 0, ..., N.  With the seed phi(x) = K_2(x - N - 1; p, -N - 2) and
K_n = K_n(. ; p, N):

    K^_n(x)     = [(N - x) phi(x) K_n(x + 1) + (x + 1) phi(x + 1) K_n(x)] / (N + 3 - n)
    K^_{N+3}(x) = sum_{j,k=0}^{2} (-2)_j (-2)_k (p-1)^{2-k} p^{2-j} / (j! k!)
                  * (-N-3)_{2-j} (-N-3)_{2-k} K_{N+k+j+1}(x + k + 1; p, N + k + j + 1)

They are orthogonal for w^(x) = w(x + 1; p, N + 1) / (phi(x) phi(x + 1)).
Multiplication by lam_x = -K_3(x - N; p, -N - 1) is seven-diagonal in the
orthonormalized basis; that matrix is the walk Hamiltonian H and evolution
follows exp(-itH).

Every construction step is checked numerically (orthogonality, band
profile, spectrum) before it is returned.

Internal row i = 0..N+1 carries the label s = degree_set(N)[i], which is also
the vertex label of the walk; the 1-based walk index is i + 1.  As
polynomials in x the members have degree s + 2.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import NumericalError, ValidationError
from .orthopoly import krawtchouk_recurrence, krawtchouk_sum, pochhammer
from .pst import gap_condition
from .walk import AmplitudeSeries

ORTHOGONALITY_TOL = 1e-6
BAND_TOL = 1e-8
BANDWIDTH = 3


def degree_set(N):
    return tuple(range(N + 1)) + (N + 3,)


def seed(x, N, p):
    """phi(x) = K_2(x - N - 1; p, -N - 2)."""
    return krawtchouk_sum(2, x - N - 1, p, -N - 2)


def eigenvalue_formula(x, N, p):
    """lam_x = -K_3(x - N; p, -N - 1)."""
    return -krawtchouk_sum(3, x - N, p, -N - 1)


def exceptional_weight(x, N, p):
    y = x + 1
    M = N + 1
    if not (0 <= y <= M and float(y).is_integer()):
        return 0.0
    y = int(y)
    binom = math.comb(M, y) * p ** y * (1 - p) ** (M - y)
    return binom / (seed(x, N, p) * seed(x + 1, N, p))


def member(index, x, N, p):
    """K^_index(x; p, N) at real ``x`` for ``index`` in the degree set."""
    x = np.asarray(x, dtype=float)
    if 0 <= index <= N:
        phi0 = np.vectorize(lambda s: seed(s, N, p))(x)
        phi1 = np.vectorize(lambda s: seed(s + 1, N, p))(x)
        kn1 = krawtchouk_recurrence(index, x + 1, p, N)
        kn0 = krawtchouk_recurrence(index, x, p, N)
        return ((N - x) * phi0 * kn1 + (x + 1) * phi1 * kn0) / (N + 3 - index)
    if index == N + 3:
        total = np.zeros_like(x)
        for k in range(3):
            for j in range(3):
                c = (
                    pochhammer(-2, j) * pochhammer(-2, k)
                    * (p - 1) ** (2 - k) * p ** (2 - j)
                    / (math.factorial(j) * math.factorial(k))
                    * pochhammer(-N - 3, 2 - j) * pochhammer(-N - 3, 2 - k)
                )
                deg = N + k + j + 1
                total = total + c * krawtchouk_recurrence(deg, x + k + 1, p, deg)
        return total
    raise ValidationError(f"index {index} not in the degree set {degree_set(N)}")


@dataclass(frozen=True)
class XKrawtchoukFamily:
    N: int
    p: float
    degree_set: tuple
    grid: np.ndarray
    weights_hat: np.ndarray
    values: np.ndarray
    norms: np.ndarray
    orthogonality_residual: float

    @property
    def size(self):
        return self.N + 2

    def eigenvector_table(self):
        """T[i, x] = sqrt(w^(x)) K^_{S_i}(x) / sqrt(h^_i)."""
        T = self.values * np.sqrt(self.weights_hat)[None, :] / np.sqrt(self.norms)[:, None]
        return XEigenvectorTable(T, self.degree_set)


@dataclass(frozen=True)
class XEigenvectorTable:
    entries: np.ndarray
    labels: tuple

    def row(self, n):
        """Row for the 1-based walk index n = 1..N+2."""
        if not 1 <= n <= self.entries.shape[0]:
            raise ValidationError(f"walk index {n} outside 1..{self.entries.shape[0]}")
        return self.entries[n - 1]


@dataclass(frozen=True)
class BandHamiltonian:
    size: int
    entries: np.ndarray
    spectrum_formula: np.ndarray
    off_band_mass: float
    last_row_support: tuple
    vertex_labels: tuple


def build_family(N, p):
    """Evaluate every X2-Krawtchouk member on the grid and verify orthogonality."""
    if int(N) != N or N < 1:
        raise ValidationError(f"N must be a positive integer, got {N!r}")
    if not 0 < p < 1:
        raise ValidationError(f"p must lie in (0, 1), got {p!r}")
    N = int(N)
    grid = np.arange(-1, N + 1)
    what = np.array([exceptional_weight(x, N, p) for x in grid])
    if np.any(what <= 0) or not np.all(np.isfinite(what)):
        bad = grid[~(what > 0)]
        raise ValidationError(f"exceptional weight not positive at x = {bad.tolist()}")
    labels = degree_set(N)
    values = np.array([member(s, grid.astype(float), N, p) for s in labels])
    G = (values * what) @ values.T
    h = np.diag(G).copy()
    if np.any(h <= 0):
        raise NumericalError("a family member vanishes on the grid")
    R = np.abs(G / np.sqrt(np.outer(h, h)) - np.eye(len(labels)))
    worst = np.unravel_index(np.argmax(R), R.shape)
    resid = float(R[worst])
    if resid > ORTHOGONALITY_TOL:
        raise NumericalError(
            f"X2-Krawtchouk orthogonality fails: residual {resid:.3e} for degrees "
            f"({labels[worst[0]]}, {labels[worst[1]]})"
        )
    return XKrawtchoukFamily(N, float(p), labels, grid, what, values, h, resid)


def build_band_hamiltonian(family):
    """Matrix of multiplication by lam_x in the orthonormal family basis."""
    T = family.eigenvector_table().entries
    lam = np.array([eigenvalue_formula(x, family.N, family.p) for x in family.grid])
    H = (T * lam) @ T.T
    H = 0.5 * (H + H.T)
    n = H.shape[0]
    i, j = np.indices(H.shape)
    off = float(np.max(np.abs(H[np.abs(i - j) > BANDWIDTH]), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(lam))))
    if off > BAND_TOL * scale:
        raise NumericalError(f"band structure violated: off-band entry {off:.3e}")
    support = tuple(int(k) for k in np.flatnonzero(np.abs(H[n - 1]) > 1e-10 * scale))
    return BandHamiltonian(n, H, lam, off, support, family.degree_set)


def x_amplitudes(ham, table, n, m, times):
    """c_nm(t) = sum_x T_n(x) T_m(x) exp(-i lam_x t), 1-based walk indices."""
    rn, rm = table.row(n), table.row(m)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    vals = np.exp(-1j * np.outer(t, ham.spectrum_formula)) @ (rn * rm)
    return AmplitudeSeries(t, vals, (n, m))


def return_magnitudes(ham, table, t):
    """|c_nn(t)| for every walk vertex."""
    T = table.entries
    phase = np.exp(-1j * t * ham.spectrum_formula)
    return np.abs((T * T) @ phase)


def perfect_return_time(ham, table, max_denominator=10_000, points=16384):
    """Smallest T > 0 at which every vertex returns with probability one.

    The candidate comes from rational reconstruction of the eigenvalue
    differences and is confirmed on the amplitudes.  When no rational
    candidate exists, min_n |c_nn| is maximized over a grid instead.
    Returns ``(T, min_n |c_nn(T)|)``.
    """
    lam = np.sort(ham.spectrum_formula)
    diffs = lam[1:] - lam[0]
    base = diffs[0]
    ratios = [Fraction(d / base).limit_denominator(max_denominator) for d in diffs]
    approx = np.array([float(r) for r in ratios])
    if np.max(np.abs(approx - diffs / base)) <= 1e-9 * np.max(diffs / base):
        L = 1
        for r in ratios:
            L = L * r.denominator // math.gcd(L, r.denominator)
        T = 2 * math.pi * L / base
        return T, float(np.min(return_magnitudes(ham, table, T)))
    horizon = 2 * math.pi * 99 / float(np.min(np.diff(lam)))
    t = np.linspace(0.0, horizon, points + 1)[1:]
    scores = [np.min(return_magnitudes(ham, table, s)) for s in t]
    k = int(np.argmax(scores))
    return float(t[k]), float(scores[k])


def endpoint_max_probability(ham, table, t_max, points=16384):
    """max |c_{1,N+2}(t)|^2 over a uniform grid on [0, t_max]."""
    n = table.entries.shape[0]
    t = np.linspace(0.0, t_max, points)
    series = x_amplitudes(ham, table, 1, n, t)
    probs = series.probabilities
    k = int(np.argmax(probs))
    return float(t[k]), float(probs[k])


def endpoint_gap_witness(ham):
    """Gap test on the walk spectrum.

    The band graph is not a path, so a witness here does not imply endpoint
    transfer; for N = 4, p = 1/2 the gaps are odd multiples of pi/t0 and
    there is still no PST.
    """
    return gap_condition(np.sort(ham.spectrum_formula))
