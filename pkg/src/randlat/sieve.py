"""Exact integer/rational sieve combinatorics and corank computation.

Everything here runs in exact arithmetic (Python ints and Fractions): the
alternating binomial inequalities are sharp at 1 and would not survive
rounding. Floating point is deliberately absent from this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

__all__ = [
    "SieveDomainError",
    "FamilyInvariantError",
    "ZigzagSequence",
    "SubsetFamilyPair",
    "alternating_binomial_sum",
    "sieve_bound_check",
    "family_proportions",
    "corank",
    "integer_rank",
    "corank_families",
]


class SieveDomainError(ValueError):
    """Raised when sieve arguments violate a precondition (e.g. M < k)."""


class FamilyInvariantError(ValueError):
    """Raised when a subset family violates its closure invariants."""


def alternating_binomial_sum(M: int, k: int, alpha: int) -> int:
    """Exact value of sum_{h=k}^{alpha} (-1)^(h-k) C(h-1, k-1) C(M, h).

    The result is >= 1 when alpha - k is even and <= 1 when alpha - k is
    odd, provided M >= k.
    """
    if k < 1 or M < k:
        raise SieveDomainError(f"need 1 <= k <= M, got M={M}, k={k}")
    if alpha < k:
        raise SieveDomainError(f"need alpha >= k, got alpha={alpha}, k={k}")
    total = 0
    for h in range(k, alpha + 1):
        term = comb(h - 1, k - 1) * comb(M, h)
        total += -term if (h - k) % 2 else term
    return total


@dataclass(frozen=True)
class ZigzagSequence:
    """A [0,1]-valued sequence indexed k-1, k, ..., with alternating shape.

    sigma mode: values at k+2t-1 dominate their right neighbour and values at
    k+2t are dominated by theirs (down-up-down-... starting at index k-1).
    tau mode reverses all inequalities.
    """

    k: int
    values: tuple[Fraction, ...]
    mode: str  # "sigma" or "tau"

    def __post_init__(self):
        if self.k < 1:
            raise SieveDomainError(f"start index k must be >= 1, got {self.k}")
        if self.mode not in ("sigma", "tau"):
            raise SieveDomainError(f"mode must be 'sigma' or 'tau', got {self.mode!r}")
        if len(self.values) < 2:
            raise SieveDomainError("need at least indices k-1 and k")
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        for v in vals:
            if not 0 <= v <= 1:
                raise SieveDomainError(f"value {v} outside [0, 1]")
        # Pairwise pattern: by convention index k-1+i holds vals[i]; in sigma
        # mode odd-offset entries (k+2t-1, i.e. even i) dominate the next one.
        for i in range(len(vals) - 1):
            offset = i - 1  # vals[i] sits at index k + offset
            descending = offset % 2  # sigma: k+2t-1 >= k+2t
            if self.mode == "tau":
                descending = not descending
            if descending and vals[i] < vals[i + 1]:
                raise SieveDomainError(
                    f"{self.mode} pattern violated at index {self.k - 1 + i}: "
                    f"{vals[i]} < {vals[i + 1]}"
                )
            if not descending and vals[i] > vals[i + 1]:
                raise SieveDomainError(
                    f"{self.mode} pattern violated at index {self.k - 1 + i}: "
                    f"{vals[i]} > {vals[i + 1]}"
                )

    @property
    def top(self) -> int:
        """Largest index carried by the sequence."""
        return self.k - 1 + len(self.values) - 1

    def value(self, h: int) -> Fraction:
        if not self.k - 1 <= h <= self.top:
            raise SieveDomainError(f"index {h} outside [{self.k - 1}, {self.top}]")
        return self.values[h - (self.k - 1)]


def sieve_bound_check(seq: ZigzagSequence, M: int, alpha: int) -> bool:
    """Exact check of the alternating sieve inequality against value(k-1).

    sigma mode (alpha - k odd):
        sum_{h=k}^{alpha} (-1)^(h-k) C(h-1,k-1) C(M,h) sigma_h <= sigma_{k-1}
    tau mode (alpha - k even): the mirrored >= inequality.
    """
    k = seq.k
    if M < k:
        raise SieveDomainError(f"need M >= k, got M={M}, k={k}")
    if alpha < k or alpha > seq.top:
        raise SieveDomainError(f"alpha={alpha} outside [{k}, {seq.top}]")
    parity = (alpha - k) % 2
    if seq.mode == "sigma" and parity != 1:
        raise SieveDomainError("sigma mode requires alpha - k odd")
    if seq.mode == "tau" and parity != 0:
        raise SieveDomainError("tau mode requires alpha - k even")
    total = Fraction(0)
    for h in range(k, alpha + 1):
        term = comb(h - 1, k - 1) * comb(M, h) * seq.value(h)
        total += -term if (h - k) % 2 else term
    if seq.mode == "sigma":
        return total <= seq.value(k - 1)
    return total >= seq.value(k - 1)


def _as_frozensets(family: Iterable[Iterable[int]]) -> frozenset[frozenset[int]]:
    return frozenset(frozenset(e) for e in family)


@dataclass(frozen=True)
class SubsetFamilyPair:
    """Per-cardinality subset families (A_i, A'_i) over {0, ..., M-1}.

    A must be closed downward (dropping any element of an A_i member lands in
    A_{i-1}); A' must contain every one-element extension of every A_{i-1}
    member. Both invariants are checked eagerly at construction.
    """

    universe_size: int
    a: dict[int, frozenset[frozenset[int]]] = field(default_factory=dict)
    a_prime: dict[int, frozenset[frozenset[int]]] = field(default_factory=dict)

    def __post_init__(self):
        M = self.universe_size
        if M < 1:
            raise FamilyInvariantError(f"universe size must be >= 1, got {M}")
        universe = frozenset(range(M))
        a = {i: _as_frozensets(fam) for i, fam in self.a.items()}
        ap = {i: _as_frozensets(fam) for i, fam in self.a_prime.items()}
        a.setdefault(0, frozenset([frozenset()]))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "a_prime", ap)
        for i, fam in list(a.items()) + list(ap.items()):
            for e in fam:
                if len(e) != i or not e <= universe:
                    raise FamilyInvariantError(
                        f"subset {set(e)} invalid at cardinality {i}"
                    )
        # Downward closure of A.
        for i in sorted(a):
            if i == 0:
                continue
            lower = a.get(i - 1, frozenset())
            for e in a[i]:
                for p in e:
                    if e - {p} not in lower:
                        raise FamilyInvariantError(
                            f"A_{i} member {sorted(e)} minus {p} missing from A_{i-1}"
                        )
        # Upward generation of A'.
        for i in sorted(a):
            up = ap.get(i + 1, frozenset())
            if i + 1 > M:
                continue
            for f in a[i]:
                for p in universe - f:
                    if f | {p} not in up:
                        raise FamilyInvariantError(
                            f"A_{i} member {sorted(f)} plus {p} missing from A'_{i+1}"
                        )

    def family_a(self, i: int) -> frozenset[frozenset[int]]:
        return self.a.get(i, frozenset())

    def family_a_prime(self, i: int) -> frozenset[frozenset[int]]:
        return self.a_prime.get(i, frozenset())


def family_proportions(
    fam: SubsetFamilyPair,
) -> tuple[list[Fraction], list[Fraction]]:
    """Zigzag proportions (sigma_i, tau_i) for i = 1..M, as exact rationals.

    sigma_i * C(M, i) counts A_i for odd i and A'_i for even i; tau mirrors
    the roles. The returned sequences satisfy sigma_1 <= sigma_2 >= sigma_3...
    and tau_1 >= tau_2 <= tau_3...; failure of either pattern indicates an
    upstream closure violation and raises.
    """
    M = fam.universe_size
    sigmas: list[Fraction] = []
    taus: list[Fraction] = []
    for i in range(1, M + 1):
        n_a = len(fam.family_a(i))
        n_ap = len(fam.family_a_prime(i))
        denom = comb(M, i)
        if i % 2 == 1:
            sigmas.append(Fraction(n_a, denom))
            taus.append(Fraction(n_ap, denom))
        else:
            sigmas.append(Fraction(n_ap, denom))
            taus.append(Fraction(n_a, denom))
    for name, seq, up_first in (("sigma", sigmas, True), ("tau", taus, False)):
        up = up_first
        for i in range(len(seq) - 1):
            ok = seq[i] <= seq[i + 1] if up else seq[i] >= seq[i + 1]
            if not ok:
                raise FamilyInvariantError(
                    f"{name} zigzag fails between i={i + 1} and i={i + 2}: "
                    f"{seq[i]} vs {seq[i + 1]}"
                )
            up = not up
    return sigmas, taus


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of a tuple of integer vectors, by fraction-free row elimination.

    Bareiss-style pivoting keeps every intermediate value an exact integer.
    """
    m = [list(map(int, row)) for row in vectors]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    for row in m:
        if len(row) != cols:
            raise ValueError("ragged coordinate tuple")
    rank = 0
    prev = 1
    col = 0
    while rank < rows and col < cols:
        pivot_row = next((r for r in range(rank, rows) if m[r][col]), None)
        if pivot_row is None:
            col += 1
            continue
        if pivot_row != rank:
            m[rank], m[pivot_row] = m[pivot_row], m[rank]
        piv = m[rank][col]
        for r in range(rank + 1, rows):
            factor = m[r][col]
            for c in range(col, cols):
                m[r][c] = (m[r][c] * piv - factor * m[rank][c]) // prev
        prev = piv
        rank += 1
        col += 1
    return rank


def corank(vectors: Sequence[Sequence[int]]) -> int:
    """Number of vectors minus the rank of their integer coordinate matrix."""
    if not vectors:
        return 0
    return len(vectors) - integer_rank(vectors)


def corank_families(
    universe: Sequence[Sequence[int]],
    base: Sequence[Sequence[int]] = (),
) -> SubsetFamilyPair:
    """Build (A, A') over explicit vectors: A_i holds the i-subsets E of the
    universe with corank(base + E) = 0, A'_i those with corank <= 1.

    Dropping a vector from an independent set keeps it independent, and
    adding one vector to an independent set costs at most corank 1, so the
    pair always satisfies the SubsetFamilyPair invariants. Exhaustive over
    all 2^M subsets; meant for universes of size <= ~12.
    """
    vecs = [tuple(map(int, v)) for v in universe]
    base_vecs = [tuple(map(int, v)) for v in base]
    M = len(vecs)
    a: dict[int, set[frozenset[int]]] = {i: set() for i in range(M + 1)}
    ap: dict[int, set[frozenset[int]]] = {i: set() for i in range(M + 1)}
    for size in range(M + 1):
        for idx in combinations(range(M), size):
            cr = corank(base_vecs + [vecs[i] for i in idx])
            if cr == 0:
                a[size].add(frozenset(idx))
            if cr <= 1:
                ap[size].add(frozenset(idx))
    return SubsetFamilyPair(
        universe_size=M,
        a={i: frozenset(s) for i, s in a.items()},
        a_prime={i: frozenset(s) for i, s in ap.items()},
    )
