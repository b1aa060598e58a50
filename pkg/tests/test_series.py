"""Series validation, maximum term, and the certified sum surrogate."""

import math

import numpy as np
import pytest

from rittgrowth.errors import DomainError, SpecFormatError
from rittgrowth.levelindex import compare, to_real
from rittgrowth.series import (SeriesSpec, expexp_spec, log_sum_upper, max_term_log,
                               spec_from_json, table_spec, term_log, validate)


def brute_max_term(a, c, sigma, n_hi=5000):
    """Independent oracle: full enumeration of the term logs."""
    best_n, best = 1, -math.inf
    for n in range(1, n_hi + 1):
        t = n * math.log(c) - math.lgamma(n + 1) + sigma * a * n
        if t > best:
            best_n, best = n, t
    return best_n, best


def brute_log_sum(a, c, sigma, n_hi=5000):
    ts = [n * math.log(c) - math.lgamma(n + 1) + sigma * a * n for n in range(1, n_hi + 1)]
    m = max(ts)
    return m + math.log(sum(math.exp(t - m) for t in ts))


class TestValidate:
    def test_expexp_passes(self):
        report = validate(expexp_spec(1, 1), 100)
        assert report.verdict == "pass"
        assert report.monotone_ok
        # sup of log n / n over n <= 100 sits at n = 3
        assert report.d_estimate == pytest.approx(math.log(3) / 3, rel=1e-12)
        assert report.coeff_decay_trend < 0

    def test_decreasing_exponents_fail(self):
        bad = SeriesSpec("bad", lambda n: 1.0 / n, lambda n: -float(n))
        assert validate(bad, 32).verdict == "fail"

    def test_no_decay_fails(self):
        bad = SeriesSpec("flat", lambda n: float(n), lambda n: float(n))
        report = validate(bad, 32)
        assert report.verdict == "fail"
        assert report.coeff_decay_trend >= 0

    def test_generator_failure_is_fail_verdict(self):
        def boom(n):
            raise RuntimeError("broken generator")
        report = validate(SeriesSpec("boom", boom, boom), 32)
        assert report.verdict == "fail"
        assert "generator failure" in report.cause


class TestTermLog:
    def test_sigma_zero_first_term(self):
        assert term_log(expexp_spec(1, 1), 1, 0.0) == 0.0

    def test_third_term(self):
        # 3*2 - log 3! = 4.208240530771945
        assert term_log(expexp_spec(1, 1), 3, 2.0) == pytest.approx(4.208240530771945, rel=1e-14)

    def test_c_three(self):
        # 2 log 3 - log 2 = 1.5040773967762746
        assert term_log(expexp_spec(1, 3), 2, 0.0) == pytest.approx(1.5040773967762746, rel=1e-14)


class TestMaxTerm:
    def test_sigma_zero(self):
        n, v = max_term_log(expexp_spec(1, 1), 0.0)
        assert n == 1
        assert to_real(v) == 0.0

    def test_sigma_three_matches_enumeration(self):
        n, v = max_term_log(expexp_spec(1, 1), 3.0)
        bn, bt = brute_max_term(1, 1, 3.0)
        assert n == bn == 20
        assert to_real(v) == pytest.approx(bt, rel=1e-12)
        assert bt == pytest.approx(17.664383539246515, rel=1e-12)

    def test_lambda_scaling_inert_at_zero(self):
        n, v = max_term_log(expexp_spec(2, 1), 0.0)
        assert n == 1 and to_real(v) == 0.0

    @pytest.mark.parametrize("a,c,sigma", [(1, 1, 1.0), (1, 3, 2.5), (2, 1, 3.0), (3, 2, 1.5)])
    def test_against_enumeration(self, a, c, sigma):
        n, v = max_term_log(expexp_spec(a, c), sigma)
        bn, bt = brute_max_term(a, c, sigma)
        assert n == bn
        assert to_real(v) == pytest.approx(bt, rel=1e-12)

    def test_hint_does_not_change_result(self):
        spec = expexp_spec(1, 1)
        ref = max_term_log(spec, 4.0)
        for hint in (2, 50, 5000):
            n, v = max_term_log(spec, 4.0, hint=hint)
            assert (n, to_real(v)) == (ref[0], to_real(ref[1]))


class TestLogSum:
    def test_sigma_zero_closed_form(self):
        v = log_sum_upper(expexp_spec(1, 1), 0.0, tail_tol=1e-12)
        assert to_real(v) == pytest.approx(math.log(math.e - 1.0), rel=1e-12)

    def test_c2_sigma_one_closed_form(self):
        # sum (2e)^n/n! = exp(2e) - 1
        v = log_sum_upper(expexp_spec(1, 2), 1.0, tail_tol=1e-12)
        expected = 2 * math.e + math.log1p(-math.exp(-2 * math.e))
        assert to_real(v) == pytest.approx(expected, rel=1e-12)
        assert to_real(v) == pytest.approx(brute_log_sum(1, 2, 1.0), rel=1e-12)

    @pytest.mark.parametrize("a,c", [(1, 1), (2, 1), (1, 3), (3, 2)])
    def test_closed_form_regression(self, a, c):
        # |log_sum - log(exp(c e^(a sigma)) - 1)| <= 1e-9 relative on [0, 30]
        spec = expexp_spec(a, c)
        for sigma in np.linspace(0.0, 30.0, 61):
            x = c * math.exp(a * sigma)
            closed = x + math.log1p(-math.exp(-x)) if x < 700 else x
            got = to_real(log_sum_upper(spec, float(sigma)))
            assert abs(got - closed) <= 1e-9 * max(1.0, abs(closed))

    def test_sandwich(self):
        for a, c in ((1, 1), (2, 1), (1, 3), (3, 2)):
            spec = expexp_spec(a, c)
            for sigma in (0.0, 2.0, 7.5, 18.0, 30.0):
                _, mt = max_term_log(spec, sigma)
                assert compare(mt, log_sum_upper(spec, sigma)) <= 0

    def test_strict_monotonicity_in_sigma(self):
        spec = expexp_spec(1, 2)
        sigmas = np.linspace(0.0, 25.0, 40)
        sums = [log_sum_upper(spec, float(s)) for s in sigmas]
        maxes = [max_term_log(spec, float(s))[1] for s in sigmas]
        for prev, cur in zip(sums, sums[1:]):
            assert compare(prev, cur) == -1
        for prev, cur in zip(maxes, maxes[1:]):
            assert compare(prev, cur) == -1

    def test_refinement_never_decreases_much(self):
        # halving the tail tolerance only adds mass (or switches to a wider
        # certified bound); any decrease would exceed the previous tail bound
        spec = expexp_spec(1, 3)
        for sigma in (0.0, 3.0, 9.0):
            tol = 1e-6
            prev = to_real(log_sum_upper(spec, sigma, tail_tol=tol))
            for _ in range(4):
                tol /= 2
                cur = to_real(log_sum_upper(spec, sigma, tail_tol=tol))
                assert cur >= prev - 2 * tol
                prev = cur


from hypothesis import given, settings, strategies as st


@given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.5, max_value=5.0),
       st.floats(min_value=0.0, max_value=20.0))
@settings(max_examples=60, deadline=None)
def test_sandwich_property(a, c, sigma):
    spec = expexp_spec(a, c)
    _, mt = max_term_log(spec, sigma)
    assert compare(mt, log_sum_upper(spec, sigma)) <= 0


@given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.5, max_value=5.0),
       st.floats(min_value=0.0, max_value=15.0), st.floats(min_value=0.01, max_value=5.0))
@settings(max_examples=60, deadline=None)
def test_monotone_property(a, c, sigma, step):
    spec = expexp_spec(a, c)
    assert compare(log_sum_upper(spec, sigma), log_sum_upper(spec, sigma + step)) == -1


class TestTableSpec:
    def test_finite_sum(self):
        spec = table_spec("t", [1.0, 2.0, 3.0], [0.0, -1.0, -3.0])
        expected = math.log(math.exp(0.0 + 2.0) + math.exp(-1.0 + 4.0) + math.exp(-3.0 + 6.0))
        assert to_real(log_sum_upper(spec, 2.0)) == pytest.approx(expected, rel=1e-12)

    def test_beyond_table_is_error(self):
        spec = table_spec("t", [1.0, 2.0], [0.0, -1.0])
        with pytest.raises(DomainError):
            term_log(spec, 5, 0.0)

    def test_validation_works_on_tables(self):
        lam = [float(n) for n in range(1, 33)]
        ln = [-0.5 * n * math.log(n + 1) for n in range(1, 33)]
        assert validate(table_spec("t", lam, ln), 32).verdict in ("pass", "warn")


class TestSpecFromJson:
    def test_expexp(self):
        spec = spec_from_json({"family": "expexp", "a": 1, "c": 3})
        assert spec.params == {"a": 1.0, "c": 3.0}

    def test_table(self):
        spec = spec_from_json({"family": "table", "lambda": [1, 2], "log_norm": [0, -1]})
        assert spec.n_limit == 2

    def test_unknown_family(self):
        with pytest.raises(SpecFormatError):
            spec_from_json({"family": "nope"})

    def test_unknown_field_rejected(self):
        with pytest.raises(SpecFormatError):
            spec_from_json({"family": "expexp", "a": 1, "c": 1, "bogus": 2})

    def test_missing_field(self):
        with pytest.raises(SpecFormatError):
            spec_from_json({"family": "expexp", "a": 1})
