"""Truncated expansions: values against exact routes, budgets honest."""

import mpmath
import pytest
from mpmath import mpf

from hardedge import asymptotics as asy
from hardedge import finite_n as fn
from hardedge import fredholm as fr
from hardedge.finite_n import EnsembleParams
from hardedge.precision import PrecisionCtx
from hardedge.specfun import zeta_prime_minus_one

CTX = PrecisionCtx(256)


def test_logdet_series_alpha_zero_is_quarter_s():
    with CTX.workprec():
        r = asy.logdet_series(50, mpf(0), CTX)
        assert r.value == mpf(-50) / 4
        assert r.budget == mpf(50) ** -3


def test_logdet_series_matches_nystrom():
    with CTX.workprec():
        for a in (mpf("0.5"), mpf(1)):
            r = asy.logdet_series(400, a, CTX)
            exact = fr.log_fredholm_det(400, a, ctx=CTX)
            assert abs(r.value - exact) < 100 * r.budget


def test_logp_near_one_vs_exact():
    p = EnsembleParams(mpf(1), mpf(2), 50)
    t = mpf("0.999")
    # moment matrix needs ~2n log2(1/(1-t)) extra bits at extreme t
    ctx = PrecisionCtx(fn.default_bits(50) + 1100)
    with ctx.workprec():
        exact = fn.log_prob_smallest(t, p, ctx)
        r = asy.logp_near_one(t, p, ctx)
        assert abs(r.value - exact) <= 3 * r.budget


def test_logp_large_n_vs_exact():
    p = EnsembleParams(mpf(1), mpf(2), 32)
    ctx = PrecisionCtx(fn.default_bits(32))
    with ctx.workprec():
        t = mpf("0.25")
        exact = fn.log_prob_smallest(t, p, ctx)
        r = asy.logp_large_n(t, p, ctx)
        assert abs(r.value - exact) <= 3 * r.budget


def test_hn_series_vs_exact():
    p = EnsembleParams(mpf(1), mpf(2), 80)
    ctx = PrecisionCtx(fn.default_bits(80))
    with ctx.workprec():
        t = mpf("0.36")
        exact = fn.hn_exact(t, p, ctx)
        r = asy.hn_series(t, p, ctx)
        assert abs(r.value - exact) <= r.budget


def test_wn_series_vanishes_at_alpha_zero():
    with CTX.workprec():
        r = asy.wn_series(mpf("0.4"), EnsembleParams(mpf(0), mpf(2), 30), CTX)
        assert r.value == 0


def test_wn_series_vs_exact_aux():
    p = EnsembleParams(mpf(1), mpf(2), 40)
    ctx = PrecisionCtx(fn.default_bits(40))
    with ctx.workprec():
        t = mpf("0.36")
        aux = fn.aux_exact(t, p, ctx)
        w = 1 - (1 - t) * aux.x_n / p.a_n
        r = asy.wn_series(t, p, ctx)
        assert abs(r.value - w) <= 100 * r.budget


def test_sym_gap_equals_logdet_pair_termwise():
    with CTX.workprec():
        for b in (mpf(20), mpf(30)):
            pair = (asy.logdet_series(b * b, mpf("0.5"), CTX).value
                    + asy.logdet_series(b * b, mpf("-0.5"), CTX).value)
            r = asy.sym_gap_series(b, CTX)
            # identical printed coefficients via the Barnes product value
            assert abs(pair - r.value) < mpf("1e-12")


def test_sym_gap_constant_value():
    with CTX.workprec():
        r = asy.sym_gap_series(mpf(25), CTX)
        const = mpmath.log(2) / 12 + 3 * zeta_prime_minus_one(CTX)
        stripped = (r.value + mpf(25) ** 2 / 2 + mpmath.log(25) / 4
                    - 1 / (32 * mpf(25) ** 2) - 5 / (128 * mpf(25) ** 4))
        assert abs(stripped - const) < mpf(2) ** -200


def test_budget_positive_and_validation():
    with pytest.raises(ValueError):
        asy.logdet_series(-1, mpf(0), CTX)
    with pytest.raises(ValueError):
        asy.logp_near_one(mpf("1.5"), EnsembleParams(1, 2, 5), CTX)
    with pytest.raises(ValueError):
        asy.sym_gap_series(0, CTX)
    with pytest.raises(ValueError):
        asy.ExpansionResult(value=mpf(1), budget=mpf(-1), order="x")
