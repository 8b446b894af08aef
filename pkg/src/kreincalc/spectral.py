"""Spectral measure of a normal operator on the coordinate Hilbert space.

A unitary Schur form is clustered into eigenvalues with orthogonal
eigenprojections (a finite resolution of the identity), over which bounded
functions integrate as finite sums. The augmented integral additionally
weights critical atoms by the two contraction Grams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cluster import cluster_points, match_point
from .errors import DomainMismatchError, NotNormalError
from .tol import DEFAULT_TOL, Tolerances


def _fro(M):
    return float(np.linalg.norm(M, "fro"))


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues of a normal matrix with their orthogonal projections."""

    dim: int
    points: tuple  # of (eigenvalue, projection ndarray)
    warnings: tuple = field(default=(), compare=False)

    @property
    def eigenvalues(self):
        return tuple(ev for ev, _ in self.points)

    def projection(self, value, radius=0.0):
        """Projection at the eigenvalue matching ``value`` (zero if none)."""
        idx = match_point(value, self.eigenvalues, radius)
        if idx is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.points[idx][1]

    def resolution_residual(self):
        """How far the projections are from a resolution of the identity."""
        total = sum((P for _, P in self.points), np.zeros((self.dim, self.dim), complex))
        resid = _fro(total - np.eye(self.dim))
        for i, (_, P) in enumerate(self.points):
            resid = max(resid, _fro(P @ P - P), _fro(P - P.conj().T))
            for j in range(i + 1, len(self.points)):
                resid = max(resid, _fro(P @ self.points[j][1]))
        return resid


def diagonalize(M, tol: Tolerances = DEFAULT_TOL) -> SpectralData:
    """Cluster the unitary Schur form of a normal matrix into spectral data.

    The strictly upper Schur block is zeroed when small (certifying
    normality numerically) and eigenvalues within the cluster radius are
    merged; clusters closer than three radii are flagged as ambiguous.
    """
    M = np.asarray(M, dtype=complex)
    r = M.shape[0]
    if r == 0:
        return SpectralData(0, ())
    scale = max(_fro(M), 1.0)
    comm = _fro(M @ M.conj().T - M.conj().T @ M)
    if comm > tol.norm * scale**2:
        raise NotNormalError(
            f"matrix is not normal: self-commutator {comm:.2e} > {tol.norm * scale**2:.2e}"
        )
    Tm, Q = scipy.linalg.schur(M, output="complex")
    upper = _fro(np.triu(Tm, 1))
    if upper > tol.norm * scale:
        raise NotNormalError(
            f"Schur form is not numerically diagonal: off-norm {upper:.2e}"
        )
    evals = np.diag(Tm)
    radius = tol.cluster_radius(np.max(np.abs(evals)))
    clusters = cluster_points(evals, radius)
    warnings = []
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            gap = abs(clusters[i][0] - clusters[j][0])
            if gap < 3 * radius:
                warnings.append(
                    f"clusters {clusters[i][0]:.6g} and {clusters[j][0]:.6g} "
                    f"are only {gap:.2e} apart"
                )
    points = []
    for center, members in clusters:
        V = Q[:, members]
        points.append((complex(center), V @ V.conj().T))
    return SpectralData(r, tuple(points), tuple(warnings))


def snap_eigenvalues(data: SpectralData, targets, radius) -> SpectralData:
    """Replace eigenvalues lying within ``radius`` of a target by the target.

    Coincidence of spectrum with critical points is structural, so matched
    clusters are pinned to the exact critical value.
    """
    points = []
    for ev, P in data.points:
        idx = match_point(ev, targets, radius)
        points.append((complex(targets[idx]) if idx is not None else ev, P))
    return SpectralData(data.dim, tuple(points), data.warnings)


def spectral_integral(data: SpectralData, h) -> np.ndarray:
    """Sum of h(eigenvalue) times eigenprojection.

    ``h`` may be a callable or a mapping keyed by the exact eigenvalues; a
    missing value raises.
    """
    out = np.zeros((data.dim, data.dim), dtype=complex)
    for ev, P in data.points:
        if callable(h):
            out += complex(h(ev)) * P
        else:
            if ev not in h:
                raise DomainMismatchError(f"integrand has no value at {ev}")
            out += complex(h[ev]) * P
    return out


def augmented_integral(
    data: SpectralData, values, pair_values, rr1, rr2
) -> np.ndarray:
    """Spectral integral with contraction-weighted critical atoms.

    ``values`` maps noncritical eigenvalues to scalars; ``pair_values`` maps
    critical eigenvalues to pairs (g1, g2) weighting R1 R1* and R2 R2* on the
    corresponding atom. Every eigenvalue must appear in exactly one mapping.
    """
    out = np.zeros((data.dim, data.dim), dtype=complex)
    for ev, P in data.points:
        if ev in pair_values:
            g1, g2 = pair_values[ev]
            out += complex(g1) * (rr1 @ P) + complex(g2) * (rr2 @ P)
        elif ev in values:
            out += complex(values[ev]) * P
        else:
            raise DomainMismatchError(f"integrand has no value at {ev}")
    return out
