"""Random lattice ensemble and reproducible randomness.

The mod-p Construction-A ensemble stands in for the exact Haar measure on
unit-covolume lattices: a uniform nonzero linear congruence a . x = 0 (mod p)
over Z^n, rescaled to covolume 1. Its vector-count moments converge to the
Haar values as p grows; every report records the ensemble parameters so
results are never mistaken for exact Haar draws.

Per-trial randomness comes from counter-based Philox streams keyed by the
run seed with the trial index in the high counter word, so any subset of
trials can run concurrently (or be replayed alone) with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import LatticeBasis, LatticeDomainError

__all__ = [
    "EnsembleConfig",
    "derive_trial_rng",
    "is_prime",
    "sample_construction_a",
    "sample_uniform_sphere",
    "DEFAULT_PRIME",
]

DEFAULT_PRIME = 2**31 - 1

# Fixed key half so that streams are a keyed Philox family indexed by seed.
_KEY_SALT = 0x9E3779B97F4A7C15


@lru_cache(maxsize=64)
def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if p < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % small == 0:
            return p == small
    d = p - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class EnsembleConfig:
    """Parameters of one Construction-A draw."""

    n: int
    p: int = DEFAULT_PRIME
    seed: int = 0
    trial_index: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise LatticeDomainError(f"dimension must be >= 1, got {self.n}")
        if self.p < 2 or not is_prime(self.p):
            raise LatticeDomainError(f"modulus {self.p} is not prime")
        if self.trial_index < 0:
            raise LatticeDomainError("trial index must be nonnegative")


def derive_trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one trial of one run.

    Counter-based: the Philox key is derived from the seed and the trial
    index occupies the highest 64-bit word of the 256-bit counter, placing
    distinct trials 2^192 counter blocks apart in the same keyed family.
    """
    if trial_index < 0:
        raise ValueError("trial index must be nonnegative")
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF, _KEY_SALT)
    counter = (0, 0, 0, int(trial_index) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def sample_uniform_sphere(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the unit sphere S^(n-1): normalized Gaussian vector."""
    if n < 1:
        raise LatticeDomainError(f"dimension must be >= 1, got {n}")
    while True:
        v = rng.standard_normal(n)
        norm = float(np.linalg.norm(v))
        if norm > 1e-12:
            return v / norm


def congruence_hnf(a: np.ndarray, p: int) -> list[list[int]]:
    """Hermite normal form basis of {x in Z^n : a . x = 0 (mod p)}, p prime.

    Upper triangular with diagonal all 1 except a single p at the last
    coordinate j where a_j is nonzero mod p; the off-diagonal column above
    that pivot is reduced to [0, p). Determinant exactly p.
    """
    n = len(a)
    residues = [int(x) % p for x in a]
    j1 = max((j for j in range(n) if residues[j]), default=None)
    if j1 is None:
        raise LatticeDomainError("congruence vector is zero mod p")
    inv = pow(residues[j1], -1, p)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        if i == j1:
            rows[i][j1] = p
        else:
            rows[i][i] = 1
            rows[i][j1] = (-residues[i] * inv) % p
    return rows


def sample_construction_a(cfg: EnsembleConfig) -> LatticeBasis:
    """Draw one Construction-A lattice, rescaled to covolume 1.

    Identical configs give identical bases. The basis carries the exact
    integer HNF rows with scale p^(-1/n).
    """
    rng = derive_trial_rng(cfg.seed, cfg.trial_index)
    while True:
        a = rng.integers(0, cfg.p, size=cfg.n, dtype=np.int64)
        if np.any(a % cfg.p):
            break
    rows = congruence_hnf(a, cfg.p)
    return LatticeBasis.from_integer_rows(
        rows, scale=float(cfg.p) ** (-1.0 / cfg.n), det=cfg.p
    )
