"""Closed-form Poisson quantities, truncated alternating series, and the
explicit bracket bounds and multi-annulus coefficients used by the
experiments.

Factorial-heavy formulas are evaluated in log space (lgamma); exact-rational
slow paths of the same formulas are provided for the test suite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp, lgamma, log
from typing import Sequence

from scipy.special import gammainc

__all__ = [
    "AnalyticsDomainError",
    "BracketBound",
    "ball_volume_unit",
    "poisson_pmf",
    "poisson_right_cdf",
    "truncated_q_series",
    "truncated_q_series_exact",
    "q_series_term",
    "corank1_error_term",
    "corank1_error_term_exact",
    "schmidt_bracket",
    "joint_main_term",
    "joint_coefficient",
]


class AnalyticsDomainError(ValueError):
    """Raised when an analytic formula is evaluated outside its domain."""


def ball_volume_unit(n: int) -> float:
    """Volume of the unit ball in dimension n: pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise AnalyticsDomainError(f"dimension must be >= 1, got {n}")
    return exp(0.5 * n * log(math.pi) - lgamma(0.5 * n + 1))


def poisson_pmf(lam: float, k: int) -> float:
    """Poisson probability mass e^(-lam) lam^k / k!, stable for large k."""
    if lam < 0 or k < 0:
        raise AnalyticsDomainError(f"need lam >= 0 and k >= 0, got {lam}, {k}")
    if lam == 0:
        return 1.0 if k == 0 else 0.0
    return exp(-lam + k * log(lam) - lgamma(k + 1))


def poisson_right_cdf(lam: float, k: int) -> float:
    """Right tail Q(lam, k) = P(Poisson(lam) >= k); Q(lam, 0) = 1."""
    if lam < 0:
        raise AnalyticsDomainError(f"need lam >= 0, got {lam}")
    if k <= 0:
        return 1.0
    # P(X >= k) equals the regularized lower incomplete gamma P(k, lam).
    return float(gammainc(k, lam))


def q_series_term(lam: float, k: int, h: int) -> float:
    """Magnitude q_h = lam^h / h! * C(h-1, k-1) of the alternating series."""
    if h < k:
        raise AnalyticsDomainError(f"need h >= k, got h={h}, k={k}")
    if lam == 0:
        return 0.0
    return exp(h * log(lam) - lgamma(h + 1) + lgamma(h) - lgamma(k) - lgamma(h - k + 1))


def truncated_q_series(lam: float, k: int, alpha: int) -> float:
    """Partial alternating sum sum_{h=k}^{alpha} (-1)^(h-k) q_h.

    The truncation error against Q(lam, k) is bounded in magnitude by
    q_alpha on the parameter ranges this package uses.
    """
    if k < 1:
        raise AnalyticsDomainError(f"need k >= 1, got {k}")
    if alpha < k:
        raise AnalyticsDomainError(f"need alpha >= k, got alpha={alpha}, k={k}")
    if lam < 0:
        raise AnalyticsDomainError(f"need lam >= 0, got {lam}")
    if lam == 0:
        return 0.0
    total = 0.0
    term = exp(k * log(lam) - lgamma(k + 1))  # q_k, since C(k-1, k-1) = 1
    sign = 1.0
    for h in range(k, alpha + 1):
        total += sign * term
        # q_{h+1} / q_h = lam * h / ((h + 1)(h + 1 - k))
        term *= lam * h / ((h + 1) * (h + 1 - k))
        sign = -sign
    return total


def truncated_q_series_exact(lam: Fraction, k: int, alpha: int) -> Fraction:
    """Exact-rational slow path of truncated_q_series."""
    if alpha < k or k < 1:
        raise AnalyticsDomainError(f"need 1 <= k <= alpha, got k={k}, alpha={alpha}")
    lam = Fraction(lam)
    total = Fraction(0)
    for h in range(k, alpha + 1):
        term = lam**h * comb(h - 1, k - 1) / Fraction(math.factorial(h))
        total += -term if (h - k) % 2 else term
    return total


def corank1_error_term(n: int, V: float, h: int) -> float:
    """Per-order bound on the mean excess of corank-1 over corank-0 h-tuples:

        (V/2)^(h-1) / (h-1)! * (3^h (3/4)^(n/2) + 5^h (1/2)^n)
    """
    if h < 1:
        raise AnalyticsDomainError(f"need h >= 1, got {h}")
    if V < 0:
        raise AnalyticsDomainError(f"need V >= 0, got {V}")
    geo = exp(h * log(3) + 0.5 * n * log(0.75)) + exp(h * log(5) - n * log(2))
    if h == 1:
        return geo
    if V == 0:
        return 0.0
    return exp((h - 1) * log(0.5 * V) - lgamma(h)) * geo


def corank1_error_term_exact(n: int, V: Fraction, h: int) -> Fraction:
    """Exact-rational slow path of corank1_error_term; requires even n."""
    if n % 2:
        raise AnalyticsDomainError("exact path needs even n ((3/4)^(n/2) rational)")
    if h < 1:
        raise AnalyticsDomainError(f"need h >= 1, got {h}")
    V = Fraction(V)
    geo = Fraction(3) ** h * Fraction(3, 4) ** (n // 2) + Fraction(5) ** h * Fraction(1, 2) ** n
    return (V / 2) ** (h - 1) / math.factorial(h - 1) * geo


@dataclass(frozen=True)
class BracketBound:
    """Two-sided bound around a tail probability.

    lower/upper come from the two parity truncations of the alternating
    series, each widened by the explicit corank-1 error sum; main_term is the
    midpoint of the two truncations and always lies inside [lower, upper].
    """

    lower: float
    upper: float
    main_term: float
    error_term: float


def _corank1_error_sum(n: int, V: float, k: int, alpha: int) -> float:
    return math.fsum(
        comb(h - 1, k - 1) * corank1_error_term(n, V, h) for h in range(k, alpha + 1)
    )


def schmidt_bracket(n: int, V: float, k: int) -> BracketBound:
    """Explicit bracket around P(at least k short vectors) at ball volume V.

    The two parity truncations use alpha = n-1 and n-2; each side is widened
    by the corank-1 error sum at its own alpha. Outside V + k <= (n/4)log(4/3)
    the bracket is still computed but is typically vacuous, and a warning is
    issued.
    """
    if k < 1 or k >= n - 1:
        raise AnalyticsDomainError(f"need 1 <= k < n - 1, got n={n}, k={k}")
    if V < 0:
        raise AnalyticsDomainError(f"need V >= 0, got {V}")
    if V + k > 0.25 * n * log(4.0 / 3.0):
        warnings.warn(
            f"V + k = {V + k:.3f} exceeds (n/4)log(4/3) = "
            f"{0.25 * n * log(4.0 / 3.0):.3f}; bracket may be vacuous",
            stacklevel=2,
        )
    lam = 0.5 * V
    alpha_odd = n - 1 if (n - 1 - k) % 2 == 1 else n - 2
    alpha_even = n - 1 if (n - 1 - k) % 2 == 0 else n - 2
    main_lo = truncated_q_series(lam, k, alpha_odd)
    main_hi = truncated_q_series(lam, k, alpha_even)
    err_lo = _corank1_error_sum(n, V, k, alpha_odd)
    err_hi = _corank1_error_sum(n, V, k, alpha_even)
    return BracketBound(
        lower=main_lo - err_lo,
        upper=main_hi + err_hi,
        main_term=0.5 * (main_lo + main_hi),
        error_term=max(err_lo, err_hi),
    )


def joint_main_term(volumes: Sequence[float], counts: Sequence[int]) -> float:
    """prod_{i<d} p(V_i/2, k_i) * Q(V_d/2, k_d) for a disjoint annulus profile."""
    if len(volumes) != len(counts) or not volumes:
        raise AnalyticsDomainError("need matching nonempty volume/count sequences")
    value = 1.0
    for v, k in zip(volumes[:-1], counts[:-1]):
        value *= poisson_pmf(0.5 * v, k)
    return value * poisson_right_cdf(0.5 * volumes[-1], counts[-1])


def joint_coefficient(k: Sequence[int], alpha: Sequence[int]) -> Fraction:
    """Exact coefficient magnitude of the multi-annulus series expansion:

        C(k_1+a_1, k_1) ... C(k_{d-1}+a_{d-1}, k_{d-1}) C(k_d+a_d-1, k_d-1)
        -----------------------------------------------------------------
                        (k_1+a_1)! ... (k_d+a_d)!
    """
    if len(k) != len(alpha) or not k:
        raise AnalyticsDomainError("need matching nonempty count/order sequences")
    if any(x < 0 for x in k) or any(x < 0 for x in alpha):
        raise AnalyticsDomainError("counts and orders must be nonnegative")
    if k[-1] < 1:
        raise AnalyticsDomainError(
            f"last count must be >= 1 (tail factor undefined at k_d={k[-1]})"
        )
    num = 1
    for ki, ai in zip(k[:-1], alpha[:-1]):
        num *= comb(ki + ai, ki)
    num *= comb(k[-1] + alpha[-1] - 1, k[-1] - 1)
    den = 1
    for ki, ai in zip(k, alpha):
        den *= math.factorial(ki + ai)
    return Fraction(num, den)
