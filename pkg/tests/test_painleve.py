"""Painlevé VI route: seeds, Taylor-series integration, algebraic maps."""

import mpmath
import pytest
from mpmath import mpf

from hardedge import finite_n as fn
from hardedge import painleve as pv
from hardedge.finite_n import EnsembleParams
from hardedge.precision import PrecisionCtx


def test_series_seed_satisfies_ode():
    # the two-term local solution W = t - C t^(1+alpha) must satisfy the
    # equation to the order of the omitted terms
    params = EnsembleParams(mpf(1), mpf(2), 3)
    ctx = PrecisionCtx(448)
    with ctx.workprec():
        t0 = mpf("1e-6")
        w, wp = pv.series_at_zero(params, t0, ctx)
        # second derivative of the seed's own truncation
        c = pv.local_coefficient(params, ctx)
        wpp_seed = -c * (1 + mpf(params.alpha)) * mpf(params.alpha) * t0 ** (
            mpf(params.alpha) - 1)
        rhs = pv.pvi_rhs(t0, w, wp, params, ctx)
        # omitted orders enter at O(t0^alpha) relative to wpp ~ t0^(alpha-1),
        # with an O(A_n^2) constant
        assert abs(rhs - wpp_seed) <= abs(wpp_seed) * mpf("1e-3")


def test_local_coefficient_alpha_one_closed_form():
    # at alpha = 1 the family coefficient reduces to (A_n^2 - beta^2)/4
    ctx = PrecisionCtx(448)
    with ctx.workprec():
        for b, n in ((mpf(2), 3), (mpf("0.5"), 5)):
            params = EnsembleParams(mpf(1), b, n)
            c = pv.local_coefficient(params, ctx)
            a_n = mpf(params.a_n)
            assert abs(c - (a_n ** 2 - b ** 2) / 4) < mpf(2) ** -300


def test_trajectory_matches_exact_aux():
    params = EnsembleParams(mpf(1), mpf(2), 4)
    grid = [mpf("0.2"), mpf("0.5"), mpf("0.8")]
    traj = pv.integrate_w(params, grid)
    hctx = PrecisionCtx(fn.default_bits(params.n))
    with traj.ctx.workprec():
        for t, w, wp in zip(traj.grid, traj.w, traj.wp):
            aux = fn.aux_exact(t, params, hctx)
            w_exact = 1 - (1 - t) * aux.x_n / params.a_n
            assert abs(w - w_exact) / abs(w_exact) < mpf("1e-8")


def test_hn_and_closure_identity_along_trajectory():
    params = EnsembleParams(mpf(2), mpf("0.5"), 4)
    grid = [mpf("0.3"), mpf("0.7")]
    traj = pv.integrate_w(params, grid)
    with traj.ctx.workprec():
        a, b, n = mpf(2), mpf("0.5"), 4
        for t, w, wp in zip(traj.grid, traj.w, traj.wp):
            h = pv.hn_from_w(t, w, wp, params, traj.ctx)
            aux = pv.aux_from_w(t, w, wp, params, traj.ctx)
            closure = (2 * n + a + b) * (aux.y_n - t * aux.r_n) - n * (n + a)
            assert abs(h - closure) < mpf("1e-30") * max(1, abs(h))


def test_verify_seed_reports_shift_error():
    params = EnsembleParams(mpf(1), mpf(2), 3)
    traj = pv.integrate_w(params, [mpf("0.4")],
                          opts=pv.IntegratorOpts(verify_seed=True))
    assert traj.seed_shift_error is not None
    assert traj.seed_shift_error < mpf("1e-15")


def test_large_n_seed_matches_expansion_locally():
    # seed-mode agreement at the seed point itself for large n
    params = EnsembleParams(mpf(1), mpf(2), 80)
    t = mpf("0.49")
    ctx = PrecisionCtx(448)
    with ctx.workprec():
        w, wp = pv.large_n_seed(params, t, ctx)
        aux = fn.aux_exact(t, params, PrecisionCtx(fn.default_bits(80)))
        w_exact = 1 - (1 - t) * aux.x_n / params.a_n
        assert abs(w - w_exact) <= 3 * mpf(80) ** -4 * 1000


def test_grid_validation():
    params = EnsembleParams(mpf(1), mpf(2), 3)
    with pytest.raises(ValueError):
        pv.integrate_w(params, [mpf("0.5"), mpf("0.2")])
    with pytest.raises(ValueError):
        pv.integrate_w(params, [mpf("0.5"), mpf("1.5")])


def test_hn_from_w_pole_guard():
    params = EnsembleParams(mpf(1), mpf(2), 3)
    with pytest.raises(pv.PoleError):
        pv.hn_from_w(mpf("0.5"), mpf("0.5"), mpf(1), params, PrecisionCtx(256))
