"""Tolerance policy shared by all numerical decisions."""

from __future__ import annotations

from dataclasses import dataclass, replace, fields


@dataclass(frozen=True)
class Tolerances:
    """Collection of tolerance knobs with documented defaults.

    ``abs``      absolute floor (Gram invertibility, jet inversion, Hermitianity)
    ``rel``      relative normality test: ||NN*-N*N||_F <= rel * ||N||_F**2
    ``cluster``  base factor for zero/eigenvalue clustering; the effective
                 radius is cluster * (1 + largest magnitude in play)
    ``psd``      relative slack for positive-semidefiniteness checks
    ``rank``     relative eigenvalue cut for rank-revealing factorizations
    ``comm``     relative commutant-membership slack
    ``norm``     relative bound on the strictly-upper Schur block and the
                 self-commutator of operators required to be normal
    ``spec``     relative certification slack for eigenprojection identities
    ``ideal``    relative slack for the vanishing-projection (ideal) test
    ``cond``     largest acceptable condition number for interpolation solves
    ``boundary_factor``  region boundaries must clear critical spectral points
                 by boundary_factor * cluster radius
    """

    abs: float = 1e-12
    rel: float = 1e-9
    cluster: float = 1e-7
    psd: float = 1e-8
    rank: float = 1e-10
    comm: float = 1e-8
    norm: float = 1e-9
    spec: float = 1e-8
    ideal: float = 1e-9
    cond: float = 1e12
    boundary_factor: float = 10.0

    def scaled(self, factor: float) -> "Tolerances":
        """All thresholds multiplied by ``factor`` (cond divided)."""
        if factor <= 0:
            raise ValueError("tolerance scale must be positive")
        kw = {}
        for f in fields(self):
            if f.name == "cond":
                kw[f.name] = self.cond / factor
            elif f.name == "boundary_factor":
                kw[f.name] = self.boundary_factor
            else:
                kw[f.name] = getattr(self, f.name) * factor
        return replace(self, **kw)

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **kw)

    def cluster_radius(self, magnitude: float) -> float:
        return self.cluster * (1.0 + float(magnitude))

    def boundary_margin(self, magnitude: float) -> float:
        return self.boundary_factor * self.cluster_radius(magnitude)


DEFAULT_TOL = Tolerances()
