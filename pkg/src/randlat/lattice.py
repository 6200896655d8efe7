"""Lattice bases, reduction, and exhaustive short-vector enumeration.

A LatticeBasis always has covolume 1 (the setting of every statistic in this
package). Bases may carry an exact integer representation (integer row
matrix plus a positive scale factor); reduction and enumeration then do all
row operations in exact integer arithmetic, with floating point confined to
Gram-Schmidt data, so sign normalization and vector lengths stay reliable
even when raw float rows would lose precision (Construction-A bases have
entries ~2^31 before scaling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analytics import ball_volume_unit
from .sieve import integer_rank

__all__ = [
    "AnnulusSpec",
    "EnumerationResourceError",
    "LatticeBasis",
    "LatticeDomainError",
    "SignNormalizedVector",
    "SingularBasisError",
    "annulus_counts",
    "enumerate_ball",
    "lll_reduce",
    "shortest_vectors",
    "successive_minima",
]

_SIGN_TOL = 1e-9
_RADIUS_INFLATION = 1.0 + 1e-9


class LatticeDomainError(ValueError):
    """Raised for arguments outside an operation's domain."""


class SingularBasisError(ValueError):
    """Raised when rows are (numerically) linearly dependent or not covolume 1."""


class EnumerationResourceError(RuntimeError):
    """Raised before enumeration when the predicted point count is too large."""


@dataclass(frozen=True)
class AnnulusSpec:
    """Origin-centered annulus given in volume units: strict interior (s, t)."""

    s: float
    t: float

    def __post_init__(self):
        if not (0 <= self.s < self.t) or not math.isfinite(self.t):
            raise LatticeDomainError(f"need 0 <= s < t, got s={self.s}, t={self.t}")

    @property
    def volume(self) -> float:
        return self.t - self.s

    def radii(self, n: int) -> tuple[float, float]:
        u = ball_volume_unit(n)
        return (self.s / u) ** (1.0 / n), (self.t / u) ** (1.0 / n)


@dataclass(frozen=True, eq=False)
class SignNormalizedVector:
    """A nonzero lattice vector, one representative per +-pair.

    coords are integer coordinates w.r.t. the basis the vector came from;
    the first nonzero embedding coordinate is positive; nu is the volume of
    the ball whose radius is the vector's length.
    """

    coords: tuple[int, ...]
    embedding: np.ndarray
    length: float
    nu: float


def _integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * prev


class LatticeBasis:
    """Immutable n x n row basis of a covolume-1 lattice."""

    __slots__ = ("n", "rows", "int_rows", "scale", "_reduced")

    def __init__(
        self,
        rows: Optional[np.ndarray] = None,
        *,
        int_rows: Optional[Sequence[Sequence[int]]] = None,
        scale: Optional[float] = None,
        _det: Optional[float] = None,
    ):
        if (rows is None) == (int_rows is None):
            raise LatticeDomainError("provide exactly one of rows / int_rows")
        if int_rows is not None:
            int_rows = tuple(tuple(int(x) for x in r) for r in int_rows)
            n = len(int_rows)
            if any(len(r) != n for r in int_rows):
                raise LatticeDomainError("basis must be square")
            if _det is None:
                _det = _integer_det(int_rows)
            if _det == 0:
                raise SingularBasisError("integer rows are linearly dependent")
            if scale is None:
                scale = float(abs(_det)) ** (-1.0 / n)
            det_abs = abs(_det) * float(scale) ** n
            rows = np.array(int_rows, dtype=float) * scale
        else:
            rows = np.array(rows, dtype=float)
            if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
                raise LatticeDomainError("basis must be a square matrix")
            n = rows.shape[0]
            if not np.all(np.isfinite(rows)):
                raise LatticeDomainError("basis entries must be finite")
            sign, logdet = np.linalg.slogdet(rows)
            if sign == 0:
                raise SingularBasisError("rows are numerically singular")
            det_abs = math.exp(logdet)
            scale = None
            int_rows = None
        if abs(det_abs - 1.0) > 1e-9:
            raise SingularBasisError(
                f"basis covolume {det_abs!r} differs from 1 beyond 1e-9"
            )
        rows.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "int_rows", int_rows)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "_reduced", None)

    def __setattr__(self, name, value):
        raise AttributeError("LatticeBasis is immutable")

    @classmethod
    def identity(cls, n: int) -> "LatticeBasis":
        return cls(int_rows=np.eye(n, dtype=int).tolist(), scale=1.0, _det=1)

    @classmethod
    def from_integer_rows(
        cls,
        int_rows: Sequence[Sequence[int]],
        scale: Optional[float] = None,
        det: Optional[int] = None,
    ) -> "LatticeBasis":
        """Basis from exact integer rows, rescaled to covolume 1.

        With scale omitted it is set to |det|^(-1/n). A known determinant may
        be passed to skip the exact determinant computation.
        """
        return cls(int_rows=int_rows, scale=scale, _det=det)

    @property
    def unit_ball_volume(self) -> float:
        return ball_volume_unit(self.n)

    def embed(self, coords: Sequence[int]) -> np.ndarray:
        """Real embedding of integer coordinates w.r.t. this basis."""
        if self.int_rows is not None:
            exact = _int_matvec(coords, self.int_rows)
            return np.array(exact, dtype=float) * self.scale
        return np.asarray(coords, dtype=float) @ self.rows


def _int_matvec(coords: Sequence[int], rows: Sequence[Sequence[int]]) -> list[int]:
    """coords . rows in exact integer arithmetic."""
    n = len(rows[0])
    out = [0] * n
    for ci, row in zip(coords, rows):
        if ci:
            for t in range(n):
                out[t] += ci * row[t]
    return out


# ---------------------------------------------------------------------------
# LLL reduction


def _lll_core(B, bf, delta, max_iters=500_000):
    """Shared LLL loop. B is the exact row store (int lists or float lists);
    bf is its float mirror used for Gram-Schmidt. Returns the unimodular
    transform U (list of int lists) with B_out = U . B_in, mutating B/bf.
    """
    n = len(B)
    is_int = isinstance(B[0][0], int)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    bstar = np.zeros((n, n))
    c = np.zeros(n)
    mu = np.zeros((n, n))
    np.fill_diagonal(mu, 1.0)
    gso_upto = 0

    def gso_row(i):
        nonlocal gso_upto
        while gso_upto <= i:
            r = gso_upto
            v = bf[r].copy()
            for j in range(r):
                mu[r, j] = (bf[r] @ bstar[j]) / c[j]
                v -= mu[r, j] * bstar[j]
            bstar[r] = v
            c[r] = float(v @ v)
            if c[r] <= 0 or not math.isfinite(c[r]):
                raise SingularBasisError("Gram-Schmidt degenerated during reduction")
            gso_upto = r + 1

    def size_reduce(k):
        nonlocal gso_upto
        for _ in range(64):
            gso_upto = min(gso_upto, k)
            gso_row(k)
            changed = False
            for j in range(k - 1, -1, -1):
                q = round(mu[k, j])
                if q:
                    changed = True
                    bj, bk = B[j], B[k]
                    uj, uk = U[j], U[k]
                    if is_int:
                        for t in range(n):
                            bk[t] -= q * bj[t]
                    else:
                        for t in range(n):
                            bk[t] = bk[t] - q * bj[t]
                    for t in range(n):
                        uk[t] -= q * uj[t]
                    bf[k] = np.array(bk, dtype=float)
                    mu[k, : j + 1] -= q * mu[j, : j + 1]
            if not changed:
                return

    k = 1
    iters = 0
    while k < n:
        iters += 1
        if iters > max_iters:
            raise SingularBasisError("LLL failed to converge (iteration cap)")
        size_reduce(k)
        gso_upto = min(gso_upto, k)
        gso_row(k)
        if c[k] >= (delta - mu[k, k - 1] ** 2) * c[k - 1]:
            k += 1
        else:
            B[k - 1], B[k] = B[k], B[k - 1]
            U[k - 1], U[k] = U[k], U[k - 1]
            bf[[k - 1, k]] = bf[[k, k - 1]]
            gso_upto = min(gso_upto, k - 1)
            k = max(k - 1, 1)
    return U


def lll_reduce(
    basis: LatticeBasis, delta: float = 0.99
) -> tuple[LatticeBasis, list[list[int]]]:
    """LLL-reduce a basis; returns (reduced basis, unimodular transform U)
    with reduced rows = U . input rows. The Gram determinant is preserved
    exactly (U is unimodular by construction).
    """
    if not 0.25 < delta < 1.0:
        raise LatticeDomainError(f"delta must be in (0.25, 1), got {delta}")
    if basis.int_rows is not None:
        B = [list(r) for r in basis.int_rows]
        bf = np.array(B, dtype=float)
        U = _lll_core(B, bf, delta)
        reduced = LatticeBasis.from_integer_rows(
            B, scale=basis.scale, det=_integer_det(B)
        )
    else:
        B = [list(map(float, r)) for r in basis.rows]
        bf = np.array(B, dtype=float)
        U = _lll_core(B, bf, delta)
        # Recompute rows as U . input in one pass so they are exactly the
        # integer combination stated by U.
        rows = np.array(U, dtype=float) @ basis.rows
        reduced = LatticeBasis(rows)
    return reduced, U


def _reduced(basis: LatticeBasis) -> tuple[LatticeBasis, list[list[int]]]:
    cached = basis._reduced
    if cached is None:
        cached = lll_reduce(basis)
        object.__setattr__(basis, "_reduced", cached)
    return cached


# ---------------------------------------------------------------------------
# enumeration


def _gso(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = rows.shape[0]
    mu = np.eye(n)
    bstar = np.zeros_like(rows)
    c = np.zeros(n)
    for i in range(n):
        v = rows[i].copy()
        for j in range(i):
            mu[i, j] = (rows[i] @ bstar[j]) / c[j]
            v -= mu[i, j] * bstar[j]
        bstar[i] = v
        c[i] = float(v @ v)
        if c[i] <= 0:
            raise SingularBasisError("numerically dependent basis rows")
    return mu, c


def _enum_coords(mu: np.ndarray, c: np.ndarray, r2: float) -> list[tuple[int, ...]]:
    """All nonzero integer coefficient vectors x (w.r.t. the rows behind mu/c)
    with squared norm <= r2, one per +-pair: the highest-index nonzero
    coefficient is positive.
    """
    n = len(c)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(level: int, centers: np.ndarray, rem: float, zero_above: bool):
        cl = c[level]
        ctr = float(centers[level])
        bound = math.sqrt(max(rem, 0.0) / cl)
        lo = math.ceil(-ctr - bound)
        hi = math.floor(-ctr + bound)
        if zero_above and lo < 0:
            lo = 0
        for xl in range(lo, hi + 1):
            d = (xl + ctr) ** 2 * cl
            if d > rem * (1 + 1e-12) + 1e-300:
                continue
            x[level] = xl
            if level == 0:
                if not (zero_above and xl == 0):
                    out.append(tuple(x))
            else:
                rec(
                    level - 1,
                    centers[:level] + xl * mu[level, :level],
                    rem - d,
                    zero_above and xl == 0,
                )
        x[level] = 0

    rec(n - 1, np.zeros(n), r2, True)
    return out


def _first_nonzero_sign_float(vec: np.ndarray, length: float) -> int:
    tol = _SIGN_TOL * length
    for v in vec:
        if v > tol:
            return 1
        if v < -tol:
            return -1
    return 0


def enumerate_ball(
    basis: LatticeBasis, radius: float, *, count_cap: int = 10_000_000
) -> list[SignNormalizedVector]:
    """Every nonzero lattice vector of length <= radius with positive first
    nonzero embedding coordinate, sorted by length (ties by coords).

    Complete: runs Fincke-Pohst bound propagation on the LLL-reduced basis
    with the pruning radius inflated by 1e-9, then re-filters candidates
    against the exact radius. Raises EnumerationResourceError if the
    predicted point count U * radius^n exceeds count_cap.
    """
    if radius <= 0:
        raise LatticeDomainError(f"radius must be positive, got {radius}")
    n = basis.n
    predicted = ball_volume_unit(n) * radius**n
    if predicted > count_cap:
        raise EnumerationResourceError(
            f"predicted point count {predicted:.3g} exceeds cap {count_cap:g}"
        )
    reduced, transform = _reduced(basis)
    mu, c = _gso(reduced.rows)
    r2 = (radius * _RADIUS_INFLATION) ** 2
    unit_volume = ball_volume_unit(n)
    out = []
    int_rows = reduced.int_rows
    for coords_red in _enum_coords(mu, c, r2):
        if int_rows is not None:
            emb_int = _int_matvec(coords_red, int_rows)
            norm2 = 0
            for v in emb_int:
                norm2 += v * v
            length = math.sqrt(norm2) * reduced.scale
            if length > radius:
                continue
            sign = 0
            for v in emb_int:
                if v:
                    sign = 1 if v > 0 else -1
                    break
            embedding = np.array(emb_int, dtype=float) * reduced.scale
        else:
            embedding = np.asarray(coords_red, dtype=float) @ reduced.rows
            length = float(np.linalg.norm(embedding))
            if length > radius:
                continue
            sign = _first_nonzero_sign_float(embedding, length)
        if sign < 0:
            embedding = -embedding
            coords_red = tuple(-x for x in coords_red)
        coords = tuple(_int_matvec(coords_red, transform))
        out.append(
            SignNormalizedVector(
                coords=coords,
                embedding=embedding,
                length=length,
                nu=unit_volume * length**n,
            )
        )
    out.sort(key=lambda v: (v.length, v.coords))
    return out


def annulus_counts(
    basis: LatticeBasis,
    annuli: Sequence[AnnulusSpec],
    *,
    count_cap: int = 10_000_000,
) -> list[int]:
    """Number of sign-normalized vectors with nu strictly inside each annulus.

    Annuli must be sorted and pairwise disjoint in the volume coordinate.
    """
    if not annuli:
        return []
    for a, b in zip(annuli, annuli[1:]):
        if b.s < a.t:
            raise LatticeDomainError(
                f"annuli overlap or are unsorted: ({a.s}, {a.t}) then ({b.s}, {b.t})"
            )
    outer = (annuli[-1].t / basis.unit_ball_volume) ** (1.0 / basis.n)
    vectors = enumerate_ball(basis, outer, count_cap=count_cap)
    counts = [0] * len(annuli)
    for v in vectors:
        for i, a in enumerate(annuli):
            if a.s < v.nu < a.t:
                counts[i] += 1
                break
    return counts


def successive_minima(
    basis: LatticeBasis, k: int, *, count_cap: int = 10_000_000
) -> list[float]:
    """First k successive minima, by greedy rank growth over the enumerated
    vectors in length order (exact integer rank on coordinates). The
    enumeration radius doubles until k independent vectors are found.
    """
    if not 1 <= k <= basis.n:
        raise LatticeDomainError(f"need 1 <= k <= n={basis.n}, got {k}")
    reduced, _ = _reduced(basis)
    radius = float(np.min(np.linalg.norm(reduced.rows, axis=1)))
    while True:
        vectors = enumerate_ball(basis, radius, count_cap=count_cap)
        selected: list[tuple[int, ...]] = []
        minima: list[float] = []
        for v in vectors:
            if integer_rank(selected + [v.coords]) > len(selected):
                selected.append(v.coords)
                minima.append(v.length)
                if len(minima) == k:
                    return minima
        radius *= 2.0


def shortest_vectors(
    basis: LatticeBasis,
    k: int,
    inner_volume: float = 0.0,
    *,
    count_cap: int = 10_000_000,
) -> list[SignNormalizedVector]:
    """First k sign-normalized vectors with nu strictly above inner_volume,
    in increasing length order.
    """
    if k < 1:
        raise LatticeDomainError(f"need k >= 1, got {k}")
    if inner_volume < 0:
        raise LatticeDomainError(f"inner volume must be >= 0, got {inner_volume}")
    u = basis.unit_ball_volume
    excess = 2.0 * (k + 2)
    while True:
        radius = ((inner_volume + excess) / u) ** (1.0 / basis.n)
        vectors = enumerate_ball(basis, radius, count_cap=count_cap)
        found = [v for v in vectors if v.nu > inner_volume]
        if len(found) >= k:
            return found[:k]
        excess *= 2.0
