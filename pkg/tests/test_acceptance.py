"""Acceptance suite: the ten gate criteria, one printed pass/fail line each.

Each test prints `criterion N (<name>): PASS|FAIL ...` and asserts the
stated tolerance and runtime budget.
"""

import time

import mpmath
import pytest
from mpmath import mpf

from hardedge import asymptotics, finite_n, fredholm, mc, painleve
from hardedge.cli import constant_extract
from hardedge.finite_n import EnsembleParams, default_bits
from hardedge.precision import PrecisionCtx
from hardedge.specfun import log_barnes_g, zeta_prime_minus_one

ROUTE_TRIPLES = ((4, mpf(1), mpf(2)), (6, mpf("0.5"), mpf("1.5")),
                 (8, mpf(2), mpf("0.5")))


def _report(num: int, name: str, ok: bool, detail: str):
    line = f"criterion {num} ({name}): {'PASS' if ok else 'FAIL'} {detail}"
    print(line, flush=True)
    assert ok, line


def _grid_005_09():
    with mpmath.workprec(128):
        return [mpf(k) / 100 for k in range(5, 91, 5)]


def test_criterion_1_alpha_zero_exactness():
    tic = time.time()
    ctx = PrecisionCtx(256)
    worst = mpf(0)
    with ctx.workprec():
        for n in range(1, 11):
            for b in (mpf("0.5"), mpf(1), mpf(2)):
                params = EnsembleParams(mpf(0), b, n)
                for k in range(1, 10):
                    t = mpf(k) / 10
                    got = finite_n.log_prob_smallest(t, params, ctx)
                    worst = max(worst, abs(got - n * (n + b) * mpmath.log(1 - t)))
    elapsed = time.time() - tic
    ok = worst <= mpf("1e-30") and elapsed < 5
    _report(1, "alpha=0 exactness",
            ok, f"worst={mpmath.nstr(worst, 3)} elapsed={elapsed:.1f}s")


def test_criterion_2_closed_form_at_zero():
    tic = time.time()
    ctx = PrecisionCtx(256)
    worst = mpf(0)
    with ctx.workprec():
        for a, b in ((mpf(1), mpf(2)), (mpf("0.5"), mpf("1.5")),
                     (mpf("2.5"), mpf("0.5"))):
            for n in range(1, 17):
                params = EnsembleParams(a, b, n)
                chol = finite_n.log_dn(mpf(0), params, ctx)
                closed = finite_n.log_dn0_closed_form(params, ctx)
                worst = max(worst, abs(chol - closed))
    elapsed = time.time() - tic
    ok = worst <= mpf("1e-30") and elapsed < 5
    _report(2, "Hankel-vs-Barnes closed form at t=0",
            ok, f"worst={mpmath.nstr(worst, 3)} elapsed={elapsed:.1f}s")


def test_criterion_3_route_equivalence():
    tic = time.time()
    grid = _grid_005_09()
    worst = mpf(0)
    for n, a, b in ROUTE_TRIPLES:
        params = EnsembleParams(a, b, n)
        hctx = PrecisionCtx(default_bits(n))
        traj = painleve.integrate_w(params, grid)
        with traj.ctx.workprec():
            for t, w, wp in zip(traj.grid, traj.w, traj.wp):
                h_ode = painleve.hn_from_w(t, w, wp, params, traj.ctx)
                h_ex = finite_n.hn_exact(t, params, hctx)
                worst = max(worst, abs(h_ode - h_ex) / abs(h_ex))
    elapsed = time.time() - tic
    ok = worst <= mpf("1e-6") and elapsed < 60
    _report(3, "Painleve-vs-Hankel route equivalence",
            ok, f"worst_rel={mpmath.nstr(worst, 3)} elapsed={elapsed:.1f}s")


def _richardson_xp(t, params, ctx, h=mpf("1e-5")):
    """x_n'(t) by 4th-order Richardson central differences of aux_exact."""
    vals = {}
    for k in (-2, -1, 1, 2):
        vals[k] = finite_n.aux_exact(t + k * h, params, ctx).x_n
    return (8 * (vals[1] - vals[-1]) - (vals[2] - vals[-2])) / (12 * h)


def test_criterion_4_identity_suite():
    tic = time.time()
    worst = mpf(0)
    grid = _grid_005_09()
    for n, a, b in ROUTE_TRIPLES:
        params = EnsembleParams(a, b, n)
        ctx = PrecisionCtx(default_bits(n))
        A = params.a_n
        with ctx.workprec():
            for t in grid:
                aux = finite_n.aux_exact(t, params, ctx)
                x, y, r = aux.x_n, aux.y_n, aux.r_n
                xp = _richardson_xp(t, params, ctx)
                h_ex = finite_n.hn_exact(t, params, ctx)
                # ladder relation for r_n in terms of (x_n, x_n', y_n)
                r_rhs = (-mpf(1) / 2 + (A + (1 - t) * xp) / (2 * x)
                         - (2 * y + b - (1 - t) * x + t) * (A - x) / (2 * t * x))
                # ladder relation for y_n in terms of (x_n, x_n')
                f = (t * (1 - t) * xp + (x - A) * (b - (1 - t) * x)) / (2 * x)
                y_rhs = -(x * (x * f * f + (x - A) * ((2 * n + a) * f
                                                      + n * (n + a) * t))
                          / ((2 * n + a + b) * (x - A) * ((1 - t) * x - A)))
                # Hamiltonian closure through (y_n, r_n)
                h_rhs = (2 * n + a + b) * (y - t * r) - n * (n + a)
                # Hamiltonian from (W, W')
                w = 1 - (1 - t) * x / A
                wp = (x - (1 - t) * xp) / A
                h_w = painleve.hn_from_w(t, w, wp, params, ctx)
                worst = max(worst, abs(r - r_rhs), abs(y - y_rhs),
                            abs(h_ex - h_rhs), abs(h_ex - h_w))
    elapsed = time.time() - tic
    ok = worst <= mpf("1e-10") and elapsed < 60
    _report(4, "ladder/Hamiltonian identity suite",
            ok, f"worst_residual={mpmath.nstr(worst, 3)} elapsed={elapsed:.1f}s")


def test_criterion_5_large_n_ladders():
    tic = time.time()
    a, b = mpf(1), mpf(2)
    with mpmath.workprec(128):
        t = mpf("0.36")
    res_w, res_h = {}, {}
    for n in (20, 40, 80):
        params = EnsembleParams(a, b, n)
        ctx = PrecisionCtx(default_bits(n))
        with ctx.workprec():
            aux = finite_n.aux_exact(t, params, ctx)
            w = 1 - (1 - t) * aux.x_n / params.a_n
            # leading (1/n) term of the W expansion
            res_w[n] = abs(w - a * mpmath.sqrt(t) / (2 * n))
            h = finite_n.hn_exact(t, params, ctx)
            res_h[n] = abs(h - asymptotics.hn_series(t, params, ctx).value)
    ratios = [res_w[20] / res_w[40], res_w[40] / res_w[80],
              res_h[20] / res_h[40], res_h[40] / res_h[80]]
    elapsed = time.time() - tic
    ok = all(mpf("3.2") <= q <= mpf("4.8") for q in ratios) and elapsed < 120
    _report(5, "large-n expansion ladders",
            ok, "ratios=[" + ", ".join(mpmath.nstr(q, 4) for q in ratios)
            + f"] elapsed={elapsed:.1f}s")


def test_criterion_6_hard_edge_convergence():
    tic = time.time()
    ctx = PrecisionCtx(256)
    limit = fredholm.log_fredholm_det(25, mpf(1), ctx=ctx)
    betas = (mpf("0.5"), mpf(1), mpf(2))
    disc, logp = {}, {}
    for b in betas:
        for n in (8, 16, 32):
            bits = 1024 if n == 32 else 512
            with mpmath.workprec(128):
                t = mpf(25) / (4 * n * n)
            lp = finite_n.log_prob_smallest(t, EnsembleParams(mpf(1), b, n),
                                            PrecisionCtx(bits))
            logp[(b, n)] = lp
            disc[(b, n)] = abs(lp - limit)
    ok = True
    detail = []
    for b in betas:
        d = [disc[(b, n)] for n in (8, 16, 32)]
        mono = d[0] > d[1] > d[2]
        r1, r2 = d[0] / d[1], d[1] / d[2]
        ok = ok and mono and all(mpf("1.5") <= q <= mpf("2.8") for q in (r1, r2))
        detail.append(f"b={mpmath.nstr(b, 2)}:"
                      f"{mpmath.nstr(r1, 3)},{mpmath.nstr(r2, 3)}")
    # beta-independence within the discrepancy budget at each n
    for n in (8, 16, 32):
        spread = max(abs(logp[(b1, n)] - logp[(b2, n)])
                     for b1 in betas for b2 in betas)
        budget = max(disc[(b, n)] for b in betas)
        ok = ok and spread <= budget
    elapsed = time.time() - tic
    ok = ok and elapsed < 120
    _report(6, "hard-edge limit convergence",
            ok, " ".join(detail) + f" elapsed={elapsed:.1f}s")


def test_criterion_7_limit_constant():
    tic = time.time()
    ctx = PrecisionCtx(192)
    ok = True
    detail = []
    for a in (mpf(0), mpf("0.5"), mpf(1), mpf(2)):
        c_hat, c_exact, diff = constant_extract(a, 400, 900, 5, None, ctx)
        ok = ok and diff <= mpf("1e-3")
        detail.append(f"a={mpmath.nstr(a, 2)}:{mpmath.nstr(diff, 3)}")
    # quadrature size certified by doubling at the largest s, largest alpha
    m0 = fredholm.default_points(900)
    shift = abs(fredholm.log_fredholm_det(900, mpf(2), 2 * m0, ctx)
                - fredholm.log_fredholm_det(900, mpf(2), m0, ctx))
    ok = ok and shift <= mpf("1e-10")
    elapsed = time.time() - tic
    ok = ok and elapsed < 120
    _report(7, "universal constant extraction",
            ok, " ".join(detail) + f" doubling={mpmath.nstr(shift, 3)}"
            f" elapsed={elapsed:.1f}s")


def test_criterion_8_symmetric_gap():
    tic = time.time()
    ctx = PrecisionCtx(256)
    with ctx.workprec():
        const_exact = mpmath.log(2) / 12 + 3 * zeta_prime_minus_one(ctx)
        acc = mpf(0)
        worst = mpf(0)
        for bval in (20, 25, 30):
            s = mpf(bval) ** 2
            pair = (fredholm.log_fredholm_det(s, mpf("0.5"), ctx=ctx)
                    + fredholm.log_fredholm_det(s, mpf("-0.5"), ctx=ctx))
            series = asymptotics.sym_gap_series(bval, ctx)
            worst = max(worst, abs(pair - series.value))
            acc += pair - (series.value - const_exact)
        c_hat = acc / 3
        cdiff = abs(c_hat - const_exact)
    elapsed = time.time() - tic
    ok = worst <= mpf("1e-3") and cdiff <= mpf("1e-3") and elapsed < 60
    _report(8, "symmetric-interval gap constant",
            ok, f"worst={mpmath.nstr(worst, 3)} const_diff={mpmath.nstr(cdiff, 3)}"
            f" elapsed={elapsed:.1f}s")


def test_criterion_9_monte_carlo_oracle():
    tic = time.time()
    p_hat, se = mc.survival_estimate(100000, 0.05, 5, 1, 2, seed=20260824)
    ctx = PrecisionCtx(256)
    exact = mpmath.e ** finite_n.log_prob_smallest(
        mpf("0.05"), EnsembleParams(mpf(1), mpf(2), 5), ctx)
    diff = abs(mpf(p_hat) - exact)
    elapsed = time.time() - tic
    ok = diff <= 4 * mpf(se) and elapsed < 60
    _report(9, "Monte Carlo oracle",
            ok, f"|p_hat-exact|={mpmath.nstr(diff, 3)} 4se={mpmath.nstr(4 * mpf(se), 3)}"
            f" elapsed={elapsed:.1f}s")


def test_criterion_10_barnes_self_consistency():
    tic = time.time()
    ctx = PrecisionCtx(256)
    with ctx.workprec():
        worst = mpf(0)
        for z in (mpf("10.3"), mpf("30.7"), mpf("100.1")):
            # recursion G(z+1) = Gamma(z) G(z) vs independent splice evals
            lhs = log_barnes_g(z + 1, ctx)
            rhs = mpmath.loggamma(z) + log_barnes_g(z, ctx)
            worst = max(worst, abs(lhs - rhs))
        # closed form: log G(1/2) = 1/24 log 2 + 1/8 - 1/4 log pi - 3/2 log A,
        # log A = 1/12 - zeta'(-1)
        log_a = mpf(1) / 12 - zeta_prime_minus_one(ctx)
        closed = (mpmath.log(2) / 24 + mpf(1) / 8 - mpmath.log(mpmath.pi) / 4
                  - 3 * log_a / 2)
        half_diff = abs(log_barnes_g(mpf("0.5"), ctx) - closed)
    elapsed = time.time() - tic
    ok = worst <= mpf("1e-10") and half_diff <= mpf("1e-12") and elapsed < 1
    _report(10, "Barnes-G self-consistency",
            ok, f"recursion={mpmath.nstr(worst, 3)} half={mpmath.nstr(half_diff, 3)}"
            f" elapsed={elapsed:.1f}s")
