"""Perfect state transfer: gap test, endpoint certification, interior pairs, ESE.

Endpoint PST on a weighted path happens at t0 exactly when the chain is
mirror symmetric and every eigenvalue gap is an odd multiple of pi / t0.
Certification uses that criterion; a direct fidelity evaluation at t0 is
recomputed and must agree.  Refutations also carry a grid-search maximum of
the fidelity as supporting evidence.
"""

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import reduce
import math

import numpy as np

from .errors import NumericalError, ValidationError
from .orthopoly import Normalization, evaluate_ops
from .spectral import eigendecompose, mirror_symmetric
from .walk import fidelity_curve

DEFAULT_MAX_DENOMINATOR = 99
REFUTATION_POINTS = 4096
PST_FIDELITY = 1.0 - 1e-8


@dataclass(frozen=True)
class GapWitness:
    odd_integers: tuple
    base_time: float
    max_denominator: int


@dataclass(frozen=True)
class PSTReport:
    has_pst: bool
    transfer_time: float | None
    pair: tuple
    gap_condition: bool
    witness: GapWitness | None
    mirror_symmetric: bool
    fidelity_at_t0: float | None
    phase: float | None = None
    grid_max_fidelity: float | None = None
    grid_best_time: float | None = None
    zero_entry: bool | None = None
    tolerances: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["pair"] = list(self.pair)
        if self.witness is not None:
            d["witness"]["odd_integers"] = list(self.witness.odd_integers)
        return d


def _validate_spectrum(eigenvalues):
    x = np.asarray(eigenvalues, dtype=float).ravel()
    if x.size < 2:
        raise ValidationError("gap condition needs at least two eigenvalues")
    if np.any(np.diff(x) <= 0):
        raise ValidationError("eigenvalues must be strictly increasing")
    return x


def _primitive(ratios):
    """Smallest integer vector proportional to the rationals ``ratios``."""
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (r.denominator for r in ratios), 1)
    ints = [int(r * lcm) for r in ratios]
    g = reduce(math.gcd, ints)
    return [v // g for v in ints]


def gap_condition(eigenvalues, max_denominator=DEFAULT_MAX_DENOMINATOR, tol=None):
    """Look for odd integers o_k and t0 with t0 (l_k - l_{k-1}) = o_k pi.

    Gap ratios g_k / g_1 are reconstructed as fractions with denominators up
    to ``max_denominator``; integer spectra are handled exactly.  Returns the
    minimal :class:`GapWitness`, or None when no odd assignment exists.
    """
    x = _validate_spectrum(eigenvalues)
    gaps = np.diff(x)
    if tol is None:
        tol = 1e-9 * (x[-1] - x[0])
    if np.all(np.abs(x - np.round(x)) <= tol):
        ig = np.diff(np.round(x).astype(np.int64))
        if np.any(ig <= 0):
            return None
        ratios = [Fraction(int(v), int(ig[0])) for v in ig]
    else:
        ratios = [Fraction(g / gaps[0]).limit_denominator(max_denominator) for g in gaps]
    if any(r <= 0 for r in ratios):
        return None
    odd = _primitive(ratios)
    if any(v % 2 == 0 for v in odd):
        return None
    t0 = math.pi * odd[0] / gaps[0]
    resid = np.abs(gaps - np.array(odd) * math.pi / t0)
    if np.max(resid) > tol:
        return None
    return GapWitness(tuple(odd), t0, max_denominator)


def _refine_max(f, lo, hi, iters=80):
    """Golden-section maximization of ``f`` on [lo, hi]."""
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a < 1e-13 * max(1.0, abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def grid_max_fidelity(decomp, n, m, t_max, points=REFUTATION_POINTS, refine=8):
    """Largest |c_nm|^2 on a uniform grid over (0, t_max], locally refined.

    Returns ``(t_best, fidelity_best)``.  The ``refine`` best grid maxima are
    polished by golden-section search inside their grid cells.
    """
    t = np.linspace(0.0, t_max, points + 1)[1:]
    f = fidelity_curve(decomp, n, m, t)
    order = np.argsort(f)[::-1]
    step = t[1] - t[0] if t.size > 1 else t_max
    best_t, best_f = float(t[order[0]]), float(f[order[0]])
    fun = lambda s: float(fidelity_curve(decomp, n, m, [s])[0])
    for i in order[:refine]:
        lo = max(t[i] - step, 1e-12)
        hi = t[i] + step
        ts, fs = _refine_max(fun, lo, hi)
        if fs > best_f:
            best_t, best_f = ts, fs
    return best_t, best_f


def refutation_horizon(eigenvalues, max_denominator=DEFAULT_MAX_DENOMINATOR):
    gmin = float(np.min(np.diff(eigenvalues)))
    return 2 * math.pi * max_denominator / gmin


def _mirror_tol(J):
    return 1e-9 * max(1.0, float(np.max(np.abs(np.concatenate([J.offdiag, J.diag])))))


def certify_endpoint_pst(J, tol=None, max_denominator=DEFAULT_MAX_DENOMINATOR, decomp=None):
    """Decide endpoint PST for the chain J and report the evidence."""
    N = J.size
    mtol = _mirror_tol(J)
    mirror = mirror_symmetric(J, mtol)
    if N == 1:
        return PSTReport(False, None, (0, 0), False, None, mirror, None,
                         tolerances={"gap": tol, "mirror": mtol})
    d = decomp if decomp is not None else eigendecompose(J)
    span = d.eigenvalues[-1] - d.eigenvalues[0]
    gtol = 1e-9 * span if tol is None else tol
    witness = gap_condition(d.eigenvalues, max_denominator, gtol)
    fid = phase = t0 = None
    if witness is not None:
        t0 = witness.base_time
        V = d.eigenvectors
        c = np.sum(V[0] * V[N - 1] * np.exp(1j * t0 * d.eigenvalues))
        fid = float(abs(c) ** 2)
        phase = float(np.angle(c))
    has = witness is not None and mirror
    tols = {"gap": gtol, "mirror": mtol, "fidelity": PST_FIDELITY,
            "max_denominator": max_denominator}
    if has:
        if fid < PST_FIDELITY:
            raise NumericalError(
                f"gap condition and mirror symmetry hold but fidelity at t0 is {fid!r}"
            )
        return PSTReport(True, t0, (0, N - 1), True, witness, True, fid, phase,
                         tolerances=tols)
    horizon = refutation_horizon(d.eigenvalues, max_denominator)
    bt, bf = grid_max_fidelity(d, 0, N - 1, horizon)
    return PSTReport(False, t0, (0, N - 1), witness is not None, witness, mirror, fid,
                     phase if witness is not None else None, bf, bt, tolerances=tols)


def endpoint_polynomial_identity(J, report, tol=1e-8, decomp=None):
    """Check P_{N-1}(l_k) = (-1)^{N-1+k} for a certified chain."""
    if not report.has_pst:
        raise ValidationError("endpoint identity only applies to PST chains")
    d = decomp if decomp is not None else eigendecompose(J)
    N = J.size
    table = evaluate_ops(J.coeffs, d.eigenvalues, Normalization.ORTHONORMAL)
    expected = (-1.0) ** (N - 1 + np.arange(N))
    return bool(np.max(np.abs(table.values[N - 1] - expected)) <= tol)


def interior_pst(J, j, tol=None, max_denominator=DEFAULT_MAX_DENOMINATOR):
    """PST report for the mirror pair (j, N-1-j), 1 <= j <= N-2."""
    N = J.size
    if not 1 <= j <= N - 2:
        raise ValidationError(f"interior vertex {j} outside 1..{N - 2}")
    d = eigendecompose(J)
    k = N - 1 - j
    endpoint = certify_endpoint_pst(J, tol, max_denominator, decomp=d)
    zero_entry = bool(np.any(np.abs(d.eigenvectors[j]) <= 1e-10))
    V = d.eigenvectors
    fid = phase = None
    if endpoint.has_pst:
        t0 = endpoint.transfer_time
        c = np.sum(V[j] * V[k] * np.exp(1j * t0 * d.eigenvalues))
        fid, phase = float(abs(c) ** 2), float(np.angle(c))
    horizon = refutation_horizon(d.eigenvalues, max_denominator)
    bt, bf = grid_max_fidelity(d, j, k, horizon)
    if fid is not None and fid >= PST_FIDELITY:
        has, t = True, endpoint.transfer_time
    elif bf >= PST_FIDELITY:
        c = np.sum(V[j] * V[k] * np.exp(1j * bt * d.eigenvalues))
        has, t, fid, phase = True, bt, bf, float(np.angle(c))
    else:
        has, t = False, None
    return PSTReport(has, t, (j, k), endpoint.gap_condition, endpoint.witness,
                     endpoint.mirror_symmetric, fid, phase, bf, bt, zero_entry,
                     tolerances=endpoint.tolerances)


def ese_scan(J, report, grid=REFUTATION_POINTS, zero_tol=1e-8):
    """Zeros of c_00 before the transfer time, with |c_{0,N-1}| at each.

    Local minima of |c_00| on a uniform grid over (0, T0) are polished by
    golden-section search; a minimum counts as a zero when it is at most
    ``zero_tol``.  Returns a list of ``(t, last_magnitude)``.
    """
    if not report.has_pst or report.transfer_time is None:
        raise ValidationError("ESE is undefined without perfect state transfer")
    if grid < 64:
        raise ValidationError("ESE grid needs at least 64 points")
    T0 = report.transfer_time
    d = eigendecompose(J)
    V = d.eigenvectors
    N = J.size
    first = V[0] * V[0]
    last = V[0] * V[N - 1]

    def mag(t, coef=first):
        return float(abs(np.sum(coef * np.exp(1j * t * d.eigenvalues))))

    t = np.linspace(0.0, T0, grid + 1)
    vals = np.abs(np.exp(1j * np.outer(t, d.eigenvalues)) @ first)
    step = t[1] - t[0]
    found = []
    for i in range(1, grid):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            ts, neg = _refine_max(lambda s: -mag(s), t[i - 1], t[i + 1], iters=200)
            if -neg > zero_tol:
                continue
            if ts <= 1e-9 * T0 or ts >= T0 * (1 - 1e-9):
                continue
            if found and abs(found[-1][0] - ts) < step:
                continue
            found.append((float(ts), mag(ts, last)))
    return found


def has_ese(findings, threshold=PST_FIDELITY):
    return any(m < threshold for _, m in findings)
