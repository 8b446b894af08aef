"""Instance files, parsing with validation, and seeded random generation.

Matrices are stored row-major as nested arrays of [re, im] pairs so fixtures
stay diffable. An instance provides the Gram matrix, either the normal
operator or its two commuting selfadjoint parts, optional definitizing
polynomials (searched when absent), and optional tolerance overrides.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .bipoly import RealPoly
from .errors import ValidationError
from .krein import DefinitizablePair, KreinSpace, split_normal
from .tol import DEFAULT_TOL, Tolerances

PROFILES = ("diagonal", "jordan", "pontryagin")


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]


def matrix_from_json(rows, name: str) -> np.ndarray:
    try:
        M = np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=complex
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix {name!r} is not an array of [re, im] pairs") from exc
    if M.ndim != 2:
        raise ValidationError(f"matrix {name!r} must be two-dimensional")
    return M


@dataclass
class Instance:
    """A parsed and validated problem instance."""

    label: str
    space: KreinSpace
    pair: DefinitizablePair
    searched: tuple = field(default=())

    @property
    def N(self) -> np.ndarray:
        return self.pair.N

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_json(), sort_keys=True).encode()
        ).hexdigest()[:16]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "J": matrix_to_json(self.space.J),
            "N": matrix_to_json(self.N),
            "p": self.pair.p.to_list(),
            "q": self.pair.q.to_list(),
        }

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), sort_keys=True, indent=1))


def parse_instance(source, tol_scale: float = 1.0) -> Instance:
    """Load and validate an instance from a path, JSON string, or dict.

    Validation order matches the failure messages callers branch on: Gram
    shape and Hermitianity, normality (or commuting selfadjoint parts), then
    the definitizing property of the supplied polynomials. Missing
    polynomials trigger the bounded search.
    """
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = dict(source)

    if "J" not in data:
        raise ValidationError("instance file lacks the Gram matrix 'J'")
    tol = DEFAULT_TOL
    if "tol" in data:
        tol = tol.with_overrides(**{k: float(v) for k, v in data["tol"].items()})
    if tol_scale != 1.0:
        tol = tol.scaled(tol_scale)
    space = KreinSpace(matrix_from_json(data["J"], "J"), tol)

    label = str(data.get("label", ""))
    p = RealPoly(data["p"]) if "p" in data else None
    q = RealPoly(data["q"]) if "q" in data else None

    if "N" in data:
        N = matrix_from_json(data["N"], "N")
        if N.shape != (space.n, space.n):
            raise ValidationError("operator N and Gram J disagree in size")
        A, B = split_normal(space, N)
    elif "A" in data and "B" in data:
        A = matrix_from_json(data["A"], "A")
        B = matrix_from_json(data["B"], "B")
        if A.shape != (space.n, space.n) or B.shape != (space.n, space.n):
            raise ValidationError("operators A, B and Gram J disagree in size")
    else:
        raise ValidationError("instance needs either 'N' or both 'A' and 'B'")

    searched = []
    pair = DefinitizablePair.from_normal(
        space, A + 1j * B, p=p, q=q, max_degree=6, label=label
    )
    if p is None:
        searched.append("p")
    if q is None:
        searched.append("q")
    return Instance(label, space, pair, tuple(searched))


# -- generation -------------------------------------------------------------


def _lattice(rng, size, lo=-4, hi=4, step=0.5):
    """Values on a step-lattice: spectral gaps are exactly 0 or >= step."""
    return rng.integers(lo, hi + 1, size=size) * step


def _krein_unitary(rng, J, strength=0.4):
    """exp(K) with JK skew-Hermitian: preserves the indefinite product."""
    n = J.shape[0]
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    skew = (M - M.conj().T) / 2.0
    K = np.linalg.solve(J, skew) * (strength / max(1.0, np.linalg.norm(skew, 2)))
    return scipy.linalg.expm(K)


def _even_definitizing(values, signs):
    """prod (z - v)^2 over negative-sign slots, always >= 0."""
    roots = sorted({float(v) for v, s in zip(values, signs) if s < 0})
    p = RealPoly([1.0])
    for r in roots:
        p = p * RealPoly([-r, 1.0]) * RealPoly([-r, 1.0])
    return p


def _cap_negative_values(rng, values, signs, distinct=2):
    """Redraw negative-sign slots from a small palette.

    Keeps the zero grid of the attached polynomials desk-sized: its
    interpolation system grows with the product of the degrees.
    """
    neg = np.flatnonzero(signs < 0)
    if neg.size > distinct:
        palette = _lattice(rng, distinct)
        values = np.array(values, dtype=float)
        values[neg] = rng.choice(palette, size=neg.size)
    return values


def generate(seed: int, n: int, profile: str, tol: Tolerances = DEFAULT_TOL) -> Instance:
    """Deterministic random instance of one of three construction profiles.

    diagonal    random real diagonal parts conjugated by a random J-unitary,
                random signature Gram
    jordan      one nilpotent 2-cell at the origin with a flip Gram,
                direct-summed with a random diagonal block
    pontryagin  signature (n-1, 1) diagonal construction

    The definitizing pair is attached from the construction, so generated
    instances always validate.
    """
    if profile not in PROFILES:
        raise ValidationError(f"unknown profile {profile!r}; choose from {PROFILES}")
    if n < 2 or n > 12:
        raise ValidationError("instance dimension must be between 2 and 12")
    rng = np.random.default_rng(seed)
    label = f"{profile}-n{n}-seed{seed}"

    if profile in ("diagonal", "pontryagin"):
        if profile == "diagonal":
            signs = rng.choice([-1.0, 1.0], size=n)
        else:
            signs = np.ones(n)
            signs[-1] = -1.0
        a = _cap_negative_values(rng, _lattice(rng, n), signs)
        b = _cap_negative_values(rng, _lattice(rng, n), signs)
        p = _even_definitizing(a, signs)
        q = _even_definitizing(b, signs)
        J0 = np.diag(signs).astype(complex)
        U = _krein_unitary(rng, J0)
        Uinv = np.linalg.inv(U)
        A = U @ np.diag(a).astype(complex) @ Uinv
        B = U @ np.diag(b).astype(complex) @ Uinv
        data = {
            "label": label,
            "J": matrix_to_json(J0),
            "A": matrix_to_json(A),
            "B": matrix_to_json(B),
            "p": p.to_list(),
            "q": q.to_list(),
        }
        return parse_instance(data)

    # jordan: cell at the origin, flip Gram, diagonal remainder
    m = n - 2
    signs = rng.choice([-1.0, 1.0], size=m)
    a = _lattice(rng, m)
    # positive-sign slots must sit right of the origin when the cell keeps
    # an odd factor z in p (the shallow variant below)
    deep = bool(rng.integers(0, 2)) if m > 0 else (seed % 2 == 0)
    if not deep:
        a = np.abs(a) + 0.5
        a[signs < 0] = _lattice(rng, int(np.sum(signs < 0)))
    a = _cap_negative_values(rng, a, signs, distinct=1)
    b = np.abs(_lattice(rng, m)) + 0.5
    b[signs < 0] = _lattice(rng, int(np.sum(signs < 0)))
    b = _cap_negative_values(rng, b, signs, distinct=1)

    J = np.zeros((n, n), dtype=complex)
    J[0, 1] = J[1, 0] = 1.0
    A = np.zeros((n, n), dtype=complex)
    A[0, 1] = 1.0
    B = np.zeros((n, n), dtype=complex)
    for i in range(m):
        J[2 + i, 2 + i] = signs[i]
        A[2 + i, 2 + i] = a[i]
        B[2 + i, 2 + i] = b[i]

    if deep:
        p = RealPoly([0.0, 0.0, 1.0]) * _even_definitizing(a, signs)
    else:
        p = RealPoly([0.0, 1.0]) * _even_definitizing(a, signs)
    q = RealPoly([0.0, 1.0]) * _even_definitizing(b, signs)

    data = {
        "label": label,
        "J": matrix_to_json(J),
        "A": matrix_to_json(A),
        "B": matrix_to_json(B),
        "p": p.to_list(),
        "q": q.to_list(),
    }
    return parse_instance(data)
