"""Real univariate and complex bivariate polynomials.

Provides the zero structure with multiplicities, exact jets of polynomials by
Taylor shifting, division with remainder against a pair ``a(z), b(w)``, the
jet-evaluation map on the zero grid of such a pair, and its interpolation
inverse on the space of remainders.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly

from .cluster import cluster_points
from .errors import ConditioningError, DegenerateInputError
from .jets import B_KIND, Jet, JetShape
from .tol import DEFAULT_TOL, Tolerances


class RealPoly:
    """Real polynomial with ascending coefficients, trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=float))
        arr = np.trim_zeros(arr, "b")
        if arr.size == 0:
            arr = np.zeros(1)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("RealPoly is immutable")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0.0

    def __call__(self, x):
        return npoly.polyval(x, self.coeffs)

    def deriv(self, order: int = 1) -> "RealPoly":
        return RealPoly(npoly.polyder(self.coeffs, order))

    def __mul__(self, other):
        if isinstance(other, RealPoly):
            return RealPoly(npoly.polymul(self.coeffs, other.coeffs))
        return RealPoly(self.coeffs * float(other))

    __rmul__ = __mul__

    def of_matrix(self, M: np.ndarray) -> np.ndarray:
        """Evaluate at a square matrix by Horner's rule."""
        n = M.shape[0]
        out = np.eye(n, dtype=complex) * self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            out = out @ M + c * np.eye(n)
        return out

    def zeros(self, tol: Tolerances = DEFAULT_TOL):
        """All complex zeros with multiplicities, conjugate-paired.

        Companion-matrix roots clustered by single linkage; a cluster's
        multiplicity is its size, centroids near the real axis snap onto it,
        and nonreal clusters are symmetrized into exact conjugate pairs.
        """
        if self.is_zero():
            raise DegenerateInputError("zero polynomial has no zero set")
        if self.degree == 0:
            return []
        roots = npoly.polyroots(self.coeffs)
        scale = 1.0 + float(np.max(np.abs(roots)))
        radius = tol.cluster_radius(np.max(np.abs(roots)))
        # snap before clustering: a perturbed real double root straddles the
        # axis as a conjugate pair that must merge into one cluster
        roots = np.where(np.abs(roots.imag) <= radius, roots.real + 0j, roots)
        clusters = [(c, len(m)) for c, m in cluster_points(roots, radius)]
        clusters = _merge_by_multiplicity(clusters, scale)
        clusters = [
            (c.real + 0j, m) if abs(c.imag) <= radius else (c, m) for c, m in clusters
        ]
        return _symmetrize_conjugates(clusters, radius)

    def to_list(self):
        return [float(c) for c in self.coeffs]

    def __repr__(self):
        return f"RealPoly({self.to_list()})"


def _merge_by_multiplicity(clusters, scale):
    """Merge cluster fragments of higher-multiplicity roots.

    A k-fold zero computed in floating point scatters like noise**(1/k), far
    beyond the flat clustering radius for k >= 3. For each hypothesis k
    (largest first) clusters within that scatter radius are grouped and merged
    only when the group actually holds at least k roots, which keeps nearby
    genuinely-simple zeros apart.
    """
    noise = 1e3 * np.finfo(float).eps
    total = sum(m for _, m in clusters)
    out = list(clusters)
    for k in range(total, 2, -1):
        radius = 2.0 * noise ** (1.0 / k) * scale
        grouped = cluster_points([c for c, _ in out], radius)
        if len(grouped) == len(out):
            continue
        merged = []
        for _, members in grouped:
            mult = sum(out[i][1] for i in members)
            if len(members) > 1 and mult >= k:
                centroid = sum(out[i][0] * out[i][1] for i in members) / mult
                merged.append((centroid, mult))
            else:
                merged.extend(out[i] for i in members)
        out = merged
    return out


def _symmetrize_conjugates(clusters, radius):
    out = list(clusters)
    used = set()
    for i, (c, m) in enumerate(out):
        if c.imag <= 0 or i in used:
            continue
        partner = None
        for j, (c2, m2) in enumerate(out):
            if j == i or j in used or c2.imag >= 0:
                continue
            if abs(np.conj(c) - c2) <= 2 * radius:
                partner = j
                break
        if partner is None or out[partner][1] != m:
            raise ConditioningError(
                f"no conjugate partner for zero {c:.6g} (multiplicity {m})"
            )
        out[partner] = (np.conj(c), m)
        used.update((i, partner))
    return out


class BiPoly:
    """Complex polynomial in two variables, sparse over (z-degree, w-degree)."""

    __slots__ = ("_c",)

    def __init__(self, entries=None):
        c = {}
        for (k, l), v in dict(entries or {}).items():
            v = complex(v)
            if v != 0:
                c[(int(k), int(l))] = v
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def constant(cls, v) -> "BiPoly":
        return cls({(0, 0): v})

    @classmethod
    def variable(cls, name: str) -> "BiPoly":
        if name == "z":
            return cls({(1, 0): 1.0})
        if name == "w":
            return cls({(0, 1): 1.0})
        raise ValueError("variable must be 'z' or 'w'")

    @classmethod
    def from_univariate(cls, poly: RealPoly, var: str = "z") -> "BiPoly":
        if var == "z":
            return cls({(k, 0): c for k, c in enumerate(poly.coeffs)})
        return cls({(0, k): c for k, c in enumerate(poly.coeffs)})

    def items(self):
        return self._c.items()

    def __bool__(self):
        return bool(self._c)

    @property
    def degree_z(self) -> int:
        return max((k for k, _ in self._c), default=0)

    @property
    def degree_w(self) -> int:
        return max((l for _, l in self._c), default=0)

    def coeff(self, k, l) -> complex:
        return self._c.get((k, l), 0j)

    def __add__(self, other):
        c = dict(self._c)
        for kl, v in other._c.items():
            c[kl] = c.get(kl, 0j) + v
        return BiPoly(c)

    def __sub__(self, other):
        c = dict(self._c)
        for kl, v in other._c.items():
            c[kl] = c.get(kl, 0j) - v
        return BiPoly(c)

    def __neg__(self):
        return BiPoly({kl: -v for kl, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            c = {}
            for (k1, l1), v1 in self._c.items():
                for (k2, l2), v2 in other._c.items():
                    kl = (k1 + k2, l1 + l2)
                    c[kl] = c.get(kl, 0j) + v1 * v2
            return BiPoly(c)
        return BiPoly({kl: v * complex(other) for kl, v in self._c.items()})

    __rmul__ = __mul__

    def __call__(self, z, w):
        z, w = complex(z), complex(w)
        return sum(v * z**k * w**l for (k, l), v in self._c.items()) + 0j

    def sharp(self) -> "BiPoly":
        """The involution s#(z, w) = conj(s(conj z, conj w)): conjugate coefficients."""
        return BiPoly({kl: np.conj(v) for kl, v in self._c.items()})

    def shifted(self, z0, w0) -> "BiPoly":
        """Taylor shift: the polynomial (z, w) -> s(z + z0, w + w0), exactly."""
        z0, w0 = complex(z0), complex(w0)
        c = {}
        for (K, L), v in self._c.items():
            for k in range(K + 1):
                zf = comb(K, k) * z0 ** (K - k)
                for l in range(L + 1):
                    kl = (k, l)
                    c[kl] = c.get(kl, 0j) + v * zf * comb(L, l) * w0 ** (L - l)
        return BiPoly(c)

    def scaled(self, sz, sw) -> "BiPoly":
        """The polynomial (z, w) -> s(sz * z, sw * w)."""
        sz, sw = complex(sz), complex(sw)
        return BiPoly({(K, L): v * sz**K * sw**L for (K, L), v in self._c.items()})

    def jet_at(self, point, shape: JetShape) -> Jet:
        """Scaled partial derivatives at ``point``, arranged in ``shape``.

        Entry (k, l) is d^{k+l} s / (dz^k dw^l) / (k! l!) at the point, read
        off the Taylor-shifted coefficients; no numerical differentiation.
        """
        shifted = self.shifted(point[0], point[1])
        return Jet(
            shape, [shifted.coeff(k, l) for (k, l) in shape.indices]
        )

    def max_abs_coeff(self) -> float:
        return max((abs(v) for v in self._c.values()), default=0.0)

    def is_real(self, tol=0.0) -> bool:
        return all(abs(v.imag) <= tol for v in self._c.values())

    def to_list(self):
        return sorted(
            [[k, l, v.real, v.imag] for (k, l), v in self._c.items()]
        )

    @classmethod
    def from_list(cls, rows) -> "BiPoly":
        c = {}
        for k, l, re, im in rows:
            c[(int(k), int(l))] = c.get((int(k), int(l)), 0j) + complex(re, im)
        return cls(c)

    def __repr__(self):
        if not self._c:
            return "BiPoly(0)"
        terms = " + ".join(
            f"({v:.4g})z^{k}w^{l}" for (k, l), v in sorted(self._c.items())
        )
        return f"BiPoly({terms})"


def euclidean_reduce(s: BiPoly, a: RealPoly, b: RealPoly):
    """Write ``s = a(z) u + b(w) v + r`` with deg_z r < deg a, deg_w r < deg b.

    Division runs first against ``a(z)`` in z, then against ``b(w)`` in w;
    eliminated coefficients are deleted outright so the degree bounds on the
    remainder hold by construction. Real inputs give real outputs.
    """
    if a.is_zero() or b.is_zero():
        raise DegenerateInputError("cannot reduce against a zero polynomial")
    m, n = a.degree, b.degree
    am, bn = a.coeffs[-1], b.coeffs[-1]

    work = {kl: v for kl, v in s.items()}
    u = {}
    for k in range(max((kk for kk, _ in work), default=0), m - 1, -1):
        for (kk, l) in [kl for kl in work if kl[0] == k]:
            q = work.pop((k, l)) / am
            u[(k - m, l)] = u.get((k - m, l), 0j) + q
            for j in range(m):
                kl = (k - m + j, l)
                work[kl] = work.get(kl, 0j) - q * a.coeffs[j]

    v = {}
    for l in range(max((ll for _, ll in work), default=0), n - 1, -1):
        for (k, ll) in [kl for kl in work if kl[1] == l]:
            q = work.pop((k, l)) / bn
            v[(k, l - n)] = v.get((k, l - n), 0j) + q
            for j in range(n):
                kl = (k, l - n + j)
                work[kl] = work.get(kl, 0j) - q * b.coeffs[j]

    return BiPoly(u), BiPoly(v), BiPoly(work)


@dataclass(frozen=True)
class ZeroGrid:
    """Zeros-with-multiplicities of a pair of polynomials and their products."""

    a_zeros: tuple
    b_zeros: tuple

    @classmethod
    def from_polys(cls, a: RealPoly, b: RealPoly, tol: Tolerances = DEFAULT_TOL):
        return cls(tuple(a.zeros(tol)), tuple(b.zeros(tol)))

    @property
    def real_a(self):
        return tuple((z.real, m) for z, m in self.a_zeros if z.imag == 0.0)

    @property
    def real_b(self):
        return tuple((z.real, m) for z, m in self.b_zeros if z.imag == 0.0)

    def pairs(self):
        """All grid pairs ((za, ma), (zb, mb)) in deterministic order."""
        return [
            ((za, ma), (zb, mb))
            for za, ma in self.a_zeros
            for zb, mb in self.b_zeros
        ]

    def cross(self):
        """The pairs with at least one nonreal component."""
        return [
            ((za, ma), (zb, mb))
            for ((za, ma), (zb, mb)) in self.pairs()
            if za.imag != 0.0 or zb.imag != 0.0
        ]

    @property
    def total_a(self) -> int:
        return sum(m for _, m in self.a_zeros)

    @property
    def total_b(self) -> int:
        return sum(m for _, m in self.b_zeros)


def grid_jets(s: BiPoly, grid: ZeroGrid):
    """Holomorphic jets of ``s`` at every grid pair, keyed by the pair."""
    out = {}
    for (za, ma), (zb, mb) in grid.pairs():
        shape = JetShape(ma, mb, B_KIND)
        out[(za, zb)] = s.jet_at((za, zb), shape)
    return out


def hermite_matrix(grid: ZeroGrid):
    """Dense matrix of the jet-evaluation map on low-degree monomials.

    Row order follows ``grid.pairs()`` and each shape's index order; column
    (K, L) runs over the monomials z^K w^L with K < total_a, L < total_b.
    Returns ``(matrix, row_keys)`` where row_keys list ``(za, zb, k, l)``.
    """
    m, n = grid.total_a, grid.total_b
    cols = [(K, L) for K in range(m) for L in range(n)]
    rows = []
    row_keys = []
    for (za, ma), (zb, mb) in grid.pairs():
        for k, l in JetShape(ma, mb, B_KIND).indices:
            row = np.zeros(len(cols), dtype=complex)
            for c, (K, L) in enumerate(cols):
                if K >= k and L >= l:
                    row[c] = (
                        comb(K, k) * comb(L, l) * za ** (K - k) * zb ** (L - l)
                    )
            rows.append(row)
            row_keys.append((za, zb, k, l))
    mat = np.array(rows, dtype=complex).reshape(len(rows), len(cols))
    return mat, row_keys


def _centered(zeros):
    vals = [z for z, _ in zeros]
    mu = complex(np.mean(vals))
    rho = max(1.0, max(abs(z - mu) for z in vals))
    return mu, rho


def interpolate_jets(targets, grid: ZeroGrid, tol: Tolerances = DEFAULT_TOL) -> BiPoly:
    """The unique low-degree polynomial whose grid jets match ``targets``.

    ``targets`` maps grid pairs ``(za, zb)`` to kind-b jets of the matching
    shape. The linear system is solved in a basis centered and scaled on the
    grid (much better conditioned than raw monomials); the result is shifted
    back exactly. Raises :class:`ConditioningError` when even the centered
    system is too ill-conditioned to trust (nearly coincident zeros).
    """
    m, n = grid.total_a, grid.total_b
    if m == 0 or n == 0:
        return BiPoly()
    mu_a, rho_a = _centered(grid.a_zeros)
    mu_b, rho_b = _centered(grid.b_zeros)
    cgrid = ZeroGrid(
        tuple(((z - mu_a) / rho_a, mult) for z, mult in grid.a_zeros),
        tuple(((z - mu_b) / rho_b, mult) for z, mult in grid.b_zeros),
    )
    mat, row_keys = hermite_matrix(cgrid)
    pair_map = {
        cza: za for (cza, _), (za, _) in zip(cgrid.a_zeros, grid.a_zeros)
    }
    pair_map_b = {
        czb: zb for (czb, _), (zb, _) in zip(cgrid.b_zeros, grid.b_zeros)
    }
    rhs = np.zeros(len(row_keys), dtype=complex)
    for i, (cza, czb, k, l) in enumerate(row_keys):
        jet = targets[(pair_map[cza], pair_map_b[czb])]
        rhs[i] = jet.entry(k, l) * rho_a**k * rho_b**l
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > tol.cond:
        raise ConditioningError(
            f"interpolation grid condition number {cond:.2e} exceeds {tol.cond:.1e}"
        )
    sol = np.linalg.solve(mat, rhs)
    cols = [(K, L) for K in range(m) for L in range(n)]
    centered = BiPoly({kl: v for kl, v in zip(cols, sol)})
    return centered.scaled(1.0 / rho_a, 1.0 / rho_b).shifted(-mu_a, -mu_b)
