"""Truncated bivariate jets with convolution product.

Two coefficient containers over an ``m x n`` degree box:

* kind ``"a"`` - the box plus two overflow slots ``(m, 0)`` and ``(0, n)``;
  the degenerate shape ``m = n = 0`` is a single scalar slot, and mixed
  degenerate shapes are rejected.
* kind ``"b"`` - the box alone.

Both are commutative unital *-algebras under componentwise linear structure,
entrywise conjugation, and the truncated convolution

    (a * b)[k, l] = sum_{c<=k, d<=l} a[c, d] * b[k-c, l-d]

where the sum keeps only index pairs present in the shape (for the admissible
shapes this drops nothing). Entries are stored in graded-lexicographic order
with the overflow slots last, which makes the inversion recurrence triangular.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotInvertibleError, ShapeMismatchError

A_KIND = "a"
B_KIND = "b"


@dataclass(frozen=True)
class JetShape:
    """Index set of a jet: degree bounds ``(m, n)`` and the container kind."""

    m: int
    n: int
    kind: str = A_KIND

    def __post_init__(self):
        if self.kind not in (A_KIND, B_KIND):
            raise ValueError(f"unknown jet kind {self.kind!r}")
        if self.m < 0 or self.n < 0:
            raise ValueError("degree bounds must be nonnegative")
        if self.kind == A_KIND and (self.m == 0) != (self.n == 0):
            raise ValueError("scalar-degenerate shape needs m = n = 0")
        if self.kind == B_KIND and (self.m == 0 or self.n == 0):
            raise ValueError("box shape needs m, n >= 1")

    @property
    def indices(self):
        return _indices(self.m, self.n, self.kind)

    @property
    def size(self):
        return len(self.indices)

    def position(self, k, l):
        try:
            return _position_map(self.m, self.n, self.kind)[(k, l)]
        except KeyError:
            raise ShapeMismatchError(f"index ({k}, {l}) not in {self}") from None

    def box(self) -> "JetShape":
        """The box shape the projection maps onto (identity on kind b)."""
        if self.kind == B_KIND or (self.m == 0 and self.n == 0):
            return self
        return JetShape(self.m, self.n, B_KIND)


@lru_cache(maxsize=None)
def _indices(m, n, kind):
    box = [(k, l) for k in range(m) for l in range(n)]
    box.sort(key=lambda kl: (kl[0] + kl[1], kl[1]))
    if kind == A_KIND:
        if m == 0 and n == 0:
            return ((0, 0),)
        return tuple(box) + ((m, 0), (0, n))
    return tuple(box)


@lru_cache(maxsize=None)
def _position_map(m, n, kind):
    return {kl: i for i, kl in enumerate(_indices(m, n, kind))}


@lru_cache(maxsize=None)
def _product_table(shape: JetShape):
    """Per output position, the factor-position pairs of the truncated sum."""
    idx = shape.indices
    pos = _position_map(shape.m, shape.n, shape.kind)
    table = []
    for k, l in idx:
        pa, pb = [], []
        for c in range(k + 1):
            for d in range(l + 1):
                ia = pos.get((c, d))
                ib = pos.get((k - c, l - d))
                if ia is not None and ib is not None:
                    pa.append(ia)
                    pb.append(ib)
        table.append((np.array(pa, dtype=int), np.array(pb, dtype=int)))
    return tuple(table)


class Jet:
    """Immutable coefficient array over a :class:`JetShape`."""

    __slots__ = ("shape", "coeffs")

    def __init__(self, shape: JetShape, coeffs):
        arr = np.asarray(coeffs, dtype=complex).reshape(-1).copy()
        if arr.size != shape.size:
            raise ShapeMismatchError(
                f"{shape} holds {shape.size} entries, got {arr.size}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @classmethod
    def zeros(cls, shape: JetShape) -> "Jet":
        return cls(shape, np.zeros(shape.size, dtype=complex))

    @classmethod
    def unit(cls, shape: JetShape) -> "Jet":
        c = np.zeros(shape.size, dtype=complex)
        c[shape.position(0, 0)] = 1.0
        return cls(shape, c)

    @classmethod
    def from_entries(cls, shape: JetShape, entries) -> "Jet":
        """Build from a ``{(k, l): value}`` mapping; absent entries are zero."""
        c = np.zeros(shape.size, dtype=complex)
        for (k, l), v in dict(entries).items():
            c[shape.position(k, l)] = v
        return cls(shape, c)

    def entry(self, k, l) -> complex:
        return complex(self.coeffs[self.shape.position(k, l)])

    @property
    def value(self) -> complex:
        """The ``(0, 0)`` entry, which decides invertibility."""
        return complex(self.coeffs[self.shape.position(0, 0)])

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeMismatchError(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        self._check_same_shape(other)
        return Jet(self.shape, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        self._check_same_shape(other)
        return Jet(self.shape, self.coeffs - other.coeffs)

    def __neg__(self):
        return Jet(self.shape, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check_same_shape(other)
            table = _product_table(self.shape)
            out = np.empty(self.shape.size, dtype=complex)
            a, b = self.coeffs, other.coeffs
            for t, (pa, pb) in enumerate(table):
                out[t] = np.dot(a[pa], b[pb])
            return Jet(self.shape, out)
        return Jet(self.shape, self.coeffs * complex(other))

    def __rmul__(self, other):
        return Jet(self.shape, self.coeffs * complex(other))

    def conj(self) -> "Jet":
        return Jet(self.shape, self.coeffs.conj())

    def box_part(self) -> "Jet":
        """Projection dropping the overflow slots (identity on kind b).

        The box entries are stored first in the same graded order, so this is
        a prefix slice.
        """
        target = self.shape.box()
        if target == self.shape:
            return self
        return Jet(target, self.coeffs[: target.size])

    def inverse(self, abs_tol: float = 1e-12) -> "Jet":
        """Multiplicative inverse, solving the convolution system in graded order."""
        a00 = self.value
        if abs(a00) <= abs_tol:
            raise NotInvertibleError(
                f"jet has (0,0) entry {a00:.3e} below tolerance {abs_tol:.1e}"
            )
        table = _product_table(self.shape)
        pos0 = self.shape.position(0, 0)
        a = self.coeffs
        x = np.zeros(self.shape.size, dtype=complex)
        x[pos0] = 1.0 / a00
        for t in range(self.shape.size):
            if t == pos0:
                continue
            pa, pb = table[t]
            keep = pa != pos0
            acc = np.dot(a[pa[keep]], x[pb[keep]])
            x[t] = -acc / a00
        return Jet(self.shape, x)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.norm() <= tol

    def to_dict(self) -> dict:
        return {
            "m": self.shape.m,
            "n": self.shape.n,
            "kind": self.shape.kind,
            "entries": [
                [k, l, float(c.real), float(c.imag)]
                for (k, l), c in zip(self.shape.indices, self.coeffs)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Jet":
        shape = JetShape(int(d["m"]), int(d["n"]), str(d["kind"]))
        entries = {(int(k), int(l)): complex(re, im) for k, l, re, im in d["entries"]}
        return cls.from_entries(shape, entries)

    def __repr__(self):
        pairs = ", ".join(
            f"({k},{l}): {c:.4g}" for (k, l), c in zip(self.shape.indices, self.coeffs)
        )
        return f"Jet[{self.shape.kind}{self.shape.m},{self.shape.n}]({pairs})"
