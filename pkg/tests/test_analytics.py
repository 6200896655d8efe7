"""Identity, truncation, and coefficient tests for the Poisson analytics."""

import math
import warnings
from fractions import Fraction
from itertools import product
from math import comb, exp, factorial, pi

import pytest

from randlat.analytics import (
    AnalyticsDomainError,
    ball_volume_unit,
    corank1_error_term,
    corank1_error_term_exact,
    joint_coefficient,
    joint_main_term,
    poisson_pmf,
    poisson_right_cdf,
    q_series_term,
    schmidt_bracket,
    truncated_q_series,
    truncated_q_series_exact,
)

LAM_GRID = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)


def _right_cdf_oracle(lam, k, terms=400):
    """Direct summation of the Poisson right tail (no lgamma, no gammainc)."""
    term = exp(-lam)
    for j in range(1, k + 1):
        term *= lam / j
    parts = []
    for j in range(k, k + terms):
        parts.append(term)
        term *= lam / (j + 1)
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# ball volume


def test_ball_volume_closed_forms():
    assert ball_volume_unit(1) == pytest.approx(2.0, rel=1e-14)
    assert ball_volume_unit(2) == pytest.approx(pi, rel=1e-14)
    assert ball_volume_unit(3) == pytest.approx(4 * pi / 3, rel=1e-14)
    assert ball_volume_unit(3) == pytest.approx(4.188790, abs=1e-6)


def test_ball_volume_large_dimension_finite():
    v = ball_volume_unit(300)
    assert 0 < v < 1e-100  # shrinks super-exponentially, must not overflow


# ---------------------------------------------------------------------------
# pmf / right cdf


def test_pmf_basics():
    for lam in LAM_GRID:
        assert poisson_pmf(lam, 0) == pytest.approx(exp(-lam), rel=1e-14)
    assert poisson_pmf(1.0, 1) == pytest.approx(exp(-1), rel=1e-14)
    assert poisson_pmf(0.0, 0) == 1.0
    assert poisson_pmf(0.0, 3) == 0.0


def test_pmf_normalization():
    total = math.fsum(poisson_pmf(5.0, k) for k in range(201))
    assert abs(total - 1.0) <= 1e-12


def test_right_cdf_edge_values():
    for lam in LAM_GRID:
        assert poisson_right_cdf(lam, 0) == 1.0
        assert poisson_right_cdf(lam, 1) == pytest.approx(1 - exp(-lam), rel=1e-13)


def test_right_cdf_against_summation_oracle():
    assert poisson_right_cdf(0.5, 2) == pytest.approx(
        1 - exp(-0.5) * 1.5, abs=1e-13
    )
    for lam in LAM_GRID:
        for k in (0, 1, 2, 5, 13, 30):
            assert poisson_right_cdf(lam, k) == pytest.approx(
                _right_cdf_oracle(lam, k), abs=1e-12
            )


def test_right_cdf_pmf_difference_identity():
    for lam in LAM_GRID:
        for k in range(31):
            lhs = poisson_right_cdf(lam, k) - poisson_right_cdf(lam, k + 1)
            assert abs(lhs - poisson_pmf(lam, k)) <= 1e-12


# ---------------------------------------------------------------------------
# truncated alternating series


def test_truncation_recovers_exponential_for_k1():
    assert truncated_q_series(1.0, 1, 40) == pytest.approx(1 - exp(-1), abs=1e-12)


def test_truncation_zero_intensity():
    for k in (1, 2, 5):
        assert truncated_q_series(0.0, k, k + 3) == 0.0


def test_truncation_error_bounded_by_last_term():
    # |trunc - Q| <= q_alpha; the 1e-13 cushion absorbs float roundoff where
    # q_alpha itself is far below double-precision resolution.
    for lam in LAM_GRID:
        for k in range(1, 31):
            q = poisson_right_cdf(lam, k)
            for alpha in range(k, 41):
                err = abs(truncated_q_series(lam, k, alpha) - q)
                assert err <= q_series_term(lam, k, alpha) + 1e-13, (lam, k, alpha)


def test_truncation_example_against_cdf():
    err = abs(truncated_q_series(2.0, 3, 25) - poisson_right_cdf(2.0, 3))
    assert err <= q_series_term(2.0, 3, 25) + 1e-15


def test_truncation_domain_error():
    with pytest.raises(AnalyticsDomainError):
        truncated_q_series(1.0, 3, 2)


def test_truncation_float_matches_exact_rational():
    for lam_q in (Fraction(1, 2), Fraction(3, 2), Fraction(5)):
        for k in (1, 2, 4):
            for alpha in range(k, k + 10):
                exact = truncated_q_series_exact(lam_q, k, alpha)
                bits = exact.numerator.bit_length() + exact.denominator.bit_length()
                assert bits <= 512
                got = truncated_q_series(float(lam_q), k, alpha)
                if exact != 0:
                    assert abs(got - float(exact)) <= 1e-10 * abs(float(exact))


# ---------------------------------------------------------------------------
# corank-1 error term


def test_corank1_error_h1_closed_form():
    for n in (4, 10, 31):
        want = 3 * (3 / 4) ** (n / 2) + 5 * 0.5**n
        assert corank1_error_term(n, 1.7, 1) == pytest.approx(want, rel=1e-12)


def test_corank1_error_zero_volume():
    assert corank1_error_term(8, 0.0, 2) == 0.0
    assert corank1_error_term(8, 0.0, 1) > 0.0


def test_corank1_error_matches_exact_rational():
    for n in (6, 10, 20):
        for v in (Fraction(1, 2), Fraction(2), Fraction(7, 2)):
            for h in (1, 2, 3, 6):
                exact = corank1_error_term_exact(n, v, h)
                got = corank1_error_term(n, float(v), h)
                assert got == pytest.approx(float(exact), rel=1e-10)


# ---------------------------------------------------------------------------
# schmidt bracket


def test_bracket_zero_volume():
    for k in (1, 2, 3):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            b = schmidt_bracket(20, 0.0, k)
        assert b.lower <= 0.0 <= b.upper
        assert b.main_term == 0.0


def test_bracket_tight_at_large_dimension():
    b = schmidt_bracket(100, 2.0, 1)
    q = poisson_right_cdf(1.0, 1)
    assert b.upper - b.lower <= 1e-3 * q
    assert b.lower <= q <= b.upper


def test_bracket_contains_right_cdf_on_admissible_grid():
    for n in (50, 100):
        budget = 0.05 * n
        for v10 in range(0, int(budget * 10) + 1, 5):
            v = v10 / 10
            kmax = int(budget - v)
            for k in range(1, max(2, kmax + 1)):
                if v + k > budget:
                    continue
                b = schmidt_bracket(n, v, k)
                q = poisson_right_cdf(0.5 * v, k)
                assert b.lower <= q <= b.upper, (n, v, k, b)
                assert b.lower <= b.main_term <= b.upper


def test_bracket_domain_and_warning():
    with pytest.raises(AnalyticsDomainError):
        schmidt_bracket(5, 1.0, 4)
    with pytest.warns(UserWarning, match="vacuous"):
        schmidt_bracket(10, 1.0, 1)


# ---------------------------------------------------------------------------
# joint main term and coefficients


def test_joint_main_term_single_annulus_is_right_cdf():
    assert joint_main_term([1.3], [2]) == pytest.approx(
        poisson_right_cdf(0.65, 2), rel=1e-14
    )


def test_joint_main_term_empty_profile():
    vols = [0.4, 1.1, 0.0]
    want = exp(-0.2) * exp(-0.55) * 1.0
    assert joint_main_term(vols, [0, 0, 0]) == pytest.approx(want, rel=1e-13)


def test_joint_main_term_composition():
    want = exp(-0.5) * (0.5 * exp(-0.5)) * poisson_right_cdf(0.5, 2)
    assert joint_main_term([1.0, 1.0, 1.0], [0, 1, 2]) == pytest.approx(
        want, rel=1e-13
    )


def test_joint_coefficient_single_annulus():
    for k in (1, 2, 5):
        assert joint_coefficient([k], [0]) == Fraction(1, factorial(k))


def test_joint_coefficient_frozen_example():
    assert joint_coefficient([1, 1], [1, 0]) == Fraction(
        comb(2, 1) * comb(0, 0), factorial(2) * factorial(1)
    )
    assert joint_coefficient([1, 1], [1, 0]) == 1


def test_joint_coefficient_rejects_zero_tail_count():
    with pytest.raises(AnalyticsDomainError):
        joint_coefficient([1, 0], [0, 2])


def _pmf_series_coeff(k: int, m: int) -> Fraction:
    """Coefficient of lam^m in e^(-lam) lam^k / k!, built by convolution."""
    if m < k:
        return Fraction(0)
    j = m - k
    return Fraction((-1) ** j, factorial(j) * factorial(k))


def _right_cdf_series_coeff(k: int, m: int) -> Fraction:
    """Coefficient of lam^m in sum_{j>=k} e^(-lam) lam^j / j!."""
    return sum(
        (Fraction((-1) ** (m - j), factorial(m - j) * factorial(j)) for j in range(k, m + 1)),
        Fraction(0),
    )


def test_right_cdf_series_coeff_matches_alternating_term():
    # The series coefficients reproduce (-1)^(m-k) C(m-1, k-1) / m!.
    for k in (1, 2, 3):
        for m in range(k, k + 8):
            want = Fraction((-1) ** (m - k) * comb(m - 1, k - 1), factorial(m))
            assert _right_cdf_series_coeff(k, m) == want


def test_joint_coefficient_matches_series_product():
    for d in (1, 2, 3):
        for ks in product((1, 2, 3), repeat=d):
            for alphas in product(range(7), repeat=d):
                if sum(alphas) > 6:
                    continue
                coeff = Fraction(1)
                for i in range(d - 1):
                    coeff *= _pmf_series_coeff(ks[i], ks[i] + alphas[i])
                coeff *= _right_cdf_series_coeff(ks[-1], ks[-1] + alphas[-1])
                want = Fraction((-1) ** sum(alphas)) * joint_coefficient(
                    list(ks), list(alphas)
                )
                assert coeff == want, (ks, alphas)
