"""Spectral surgery: delete eigenvalues with a Christoffel transform and rebuild.

Removing the nodes R from the spectral measure sum_k w_k delta_{l_k} gives
the measure with masses prod_{r in R} (l_k - l_r) w_k on the survivors.  Only
removals whose products are positive at every survivor are accepted.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SurgeryRefused, ValidationError
from .pst import certify_endpoint_pst
from .spectral import eigendecompose, jacobi_from_spectrum


@dataclass(frozen=True)
class SurgerySpec:
    remove: tuple
    source: object  # SpectralDecomposition

    def __post_init__(self):
        idx = tuple(int(i) for i in self.remove)
        N = self.source.size
        if len(set(idx)) != len(idx):
            raise ValidationError(f"duplicate removal indices in {idx}")
        for i in idx:
            if not 0 <= i < N:
                raise ValidationError(f"removal index {i} outside 0..{N - 1}")
        if len(idx) >= N:
            raise ValidationError("cannot remove every point of the spectrum")
        object.__setattr__(self, "remove", tuple(sorted(idx)))


def christoffel_transform(spec):
    """Survivor nodes and renormalized Christoffel weights.

    Raises :class:`SurgeryRefused` listing the surviving nodes where the
    product over removed nodes is not positive.
    """
    x = spec.source.eigenvalues
    w = spec.source.weights
    keep = np.setdiff1d(np.arange(x.size), spec.remove)
    nodes = x[keep]
    factor = np.ones(nodes.size)
    for r in spec.remove:
        factor *= nodes - x[r]
    bad = nodes[factor <= 0]
    if bad.size:
        raise SurgeryRefused(
            "Christoffel factor is not positive at surviving nodes "
            + ", ".join(f"{v:.17g}" for v in bad),
            offending_nodes=bad.tolist(),
        )
    new_w = factor * w[keep]
    return nodes, new_w / new_w.sum()


def surgery_chain(J, remove, tol=None):
    """Remove spectral points of J, rebuild the chain, and re-certify PST."""
    d = eigendecompose(J)
    nodes, weights = christoffel_transform(SurgerySpec(tuple(remove), d))
    new = jacobi_from_spectrum(nodes, weights)
    return new, certify_endpoint_pst(new, tol)
