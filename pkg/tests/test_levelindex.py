"""Level-index arithmetic: representation bands, iterated log/exp, ordering."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from rittgrowth.errors import DomainError, ExtRangeError
from rittgrowth.levelindex import (ExtReal, compare, exp_iter, from_real, log_iter,
                                   lse_accumulate, pow_scale, ratio_to_float, to_real)

E = math.e


class TestFromReal:
    def test_below_band_limit(self):
        x = from_real(2.0)
        assert (x.level, x.mantissa) == (0, 2.0)

    def test_hundred(self):
        # log 100 = 4.605170185988092, log of that = 1.5271796258079011
        x = from_real(100.0)
        assert x.level == 2
        assert x.mantissa == pytest.approx(1.5271796258079011, rel=1e-14)

    def test_band_boundary_e(self):
        x = from_real(E)
        assert x.level == 1
        assert x.mantissa == pytest.approx(1.0, abs=1e-15)

    def test_negative_stays_level_zero(self):
        x = from_real(-1234.5)
        assert (x.level, x.mantissa) == (0, -1234.5)

    def test_rejects_nan_and_inf(self):
        with pytest.raises(DomainError):
            from_real(float("nan"))
        with pytest.raises(DomainError):
            from_real(math.inf)


class TestToReal:
    def test_plain(self):
        assert to_real(ExtReal(0, -7.5)) == -7.5

    def test_tower_of_two(self):
        assert to_real(ExtReal(2, 1.5271796258079011)) == pytest.approx(100.0, abs=1e-10)

    def test_overflow(self):
        with pytest.raises(ExtRangeError):
            to_real(ExtReal(9, 1.4))


class TestBands:
    def test_level0_band_enforced(self):
        with pytest.raises(ValueError):
            ExtReal(0, 3.0)

    def test_level1_band_enforced(self):
        with pytest.raises(ValueError):
            ExtReal(1, 0.5)
        with pytest.raises(ValueError):
            ExtReal(2, E)


class TestLogIter:
    def test_level_decrement(self):
        assert log_iter(ExtReal(3, 1.2), 2) == ExtReal(1, 1.2)

    def test_hundred_one_log(self):
        x = log_iter(from_real(100.0), 1)
        assert to_real(x) == pytest.approx(math.log(100.0), rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            log_iter(ExtReal(0, -1.0), 1)

    def test_identity_k0(self):
        x = from_real(17.25)
        assert log_iter(x, 0) == x


class TestExpIter:
    def test_level_increment(self):
        assert exp_iter(ExtReal(2, 1.5), 1) == ExtReal(3, 1.5)

    def test_exp_zero(self):
        assert exp_iter(ExtReal(0, 0.0), 1) == ExtReal(0, 1.0)

    def test_band_check(self):
        assert exp_iter(ExtReal(0, 2.0), 1) == ExtReal(1, 2.0)

    def test_negative_k_is_log(self):
        assert exp_iter(ExtReal(2, 1.3), -1) == ExtReal(1, 1.3)


class TestCompare:
    def test_higher_level_dominates(self):
        assert compare(ExtReal(2, 1.5), ExtReal(1, 2.7)) == 1

    def test_value_comparison_across_levels(self):
        # 3.0 normalizes to (1, log 3); e^1.2 = 3.32 > 3
        assert compare(from_real(3.0), ExtReal(1, 1.2)) == -1

    def test_equal(self):
        x = from_real(123.0)
        assert compare(x, x) == 0


class TestLse:
    def test_two_zeros(self):
        assert lse_accumulate([0.0, 0.0]) == pytest.approx(math.log(2.0), rel=1e-14)

    def test_negligible_term(self):
        assert lse_accumulate([0.0, -1e308]) == pytest.approx(0.0, abs=1e-300)

    def test_reciprocal_factorials(self):
        # independent oracle: direct float sum of 1/n! up to n=20
        terms = [-math.lgamma(n + 1) for n in range(1, 21)]
        expected = math.log(sum(1.0 / math.factorial(n) for n in range(1, 21)))
        assert lse_accumulate(terms) == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.5413248546129182, rel=1e-12)

    def test_minus_inf_terms_vanish(self):
        assert lse_accumulate([-math.inf, 0.0]) == pytest.approx(0.0, abs=1e-300)


class TestPowScale:
    def test_e_squared(self):
        x = pow_scale(ExtReal(1, 1.0), 2.0)
        assert x == ExtReal(1, 2.0)

    def test_identity(self):
        x = from_real(42.0)
        assert pow_scale(x, 1.0) == x

    def test_zero_exponent(self):
        assert pow_scale(from_real(9.0), 0.0) == ExtReal(0, 1.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            pow_scale(ExtReal(0, -2.0), 2.0)

    def test_huge_base(self):
        # (e^(e^40))^3 = e^(3 e^40): compare one log down
        x = exp_iter(from_real(40.0), 2)
        y = pow_scale(x, 3.0)
        assert to_real(log_iter(y, 1)) == pytest.approx(3.0 * math.exp(40.0), rel=1e-12)


class TestRatio:
    def test_plain(self):
        assert ratio_to_float(from_real(6.0), from_real(3.0)) == pytest.approx(2.0)

    def test_tower_over_small_is_inf(self):
        assert ratio_to_float(ExtReal(5, 1.5), from_real(10.0)) == math.inf

    def test_small_over_tower_is_zero(self):
        assert ratio_to_float(from_real(10.0), ExtReal(5, 1.5)) == 0.0

    def test_comparable_towers(self):
        num = exp_iter(from_real(1000.0 + math.log(2.5)), 1)
        den = exp_iter(from_real(1000.0), 1)
        assert ratio_to_float(num, den) == pytest.approx(2.5, rel=1e-9)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
@settings(max_examples=300)
def test_round_trip(v):
    assert to_real(from_real(v)) == pytest.approx(v, rel=1e-12, abs=1e-300)


@given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=-1e6, max_value=1e6))
@settings(max_examples=300)
def test_order_embedding(u, v):
    cu, cv = from_real(u), from_real(v)
    if u < v:
        assert compare(cu, cv) == -1
    elif u > v:
        assert compare(cu, cv) == 1
    else:
        assert compare(cu, cv) == 0


@given(st.integers(min_value=0, max_value=8), st.floats(min_value=1.0, max_value=2.718),
       st.integers(min_value=0, max_value=5))
@settings(max_examples=300)
def test_exp_log_inverse(level, mantissa, k):
    if level >= 1 and not mantissa < E:
        mantissa = 1.5
    x = ExtReal(level, mantissa) if level >= 1 else ExtReal(0, mantissa)
    y = exp_iter(log_iter(x, 0), 0)
    assert y == x
    z = log_iter(exp_iter(x, k), k)
    assert z.level == x.level
    assert z.mantissa == pytest.approx(x.mantissa, rel=k * 1e-14 + 1e-15)


@given(st.floats(min_value=0.1, max_value=1e5), st.floats(min_value=0.1, max_value=1e5),
       st.integers(min_value=1, max_value=3))
@settings(max_examples=200)
def test_monotonicity(u, v, k):
    if u == v:
        return
    lo, hi = (u, v) if u < v else (v, u)
    assert compare(exp_iter(from_real(lo), k), exp_iter(from_real(hi), k)) == -1
    if math.log(lo) > 0 or k == 1:
        try:
            a, b = log_iter(from_real(lo), k), log_iter(from_real(hi), k)
        except DomainError:
            return
        assert compare(a, b) == -1
