"""Painlevé VI route to the gap probability: integrate the ODE for
W_n(t) = 1 - (1-t) x_n(t) / A_n and map the trajectory back to H_n and
the auxiliary quantities (x_n, y_n, r_n).

This is the second finite-n route, independent of the Hankel
determinant linear algebra in :mod:`hardedge.finite_n`; agreement of
the two is the core cross-validation of the package.

Integration notes
-----------------
t = 0 is a fixed singular point of the equation and W = t is one of
its singular manifolds, which the solution leaves only algebraically:
near the origin

    W(t) = t - C t^(1+alpha) + ...,

where C = C(n, alpha, beta) > 0 is NOT determined by the equation --
it selects the relevant solution inside the one-parameter family
satisfying W(0) = 0, W'(0) = 1.  C has the closed form

    C = (1 + alpha) * [D_{n-1}(0; alpha+2, beta) / D_n(0; alpha, beta)]
        / (n (n + beta)),

a ratio of Hankel determinants at t = 0 (Barnes-G expressible); the
determinant ratio is the hard-edge density constant lim K_n(x,x)/x^alpha.
Seeding with the plain first-order data W(t0) = t0, W'(t0) = 1 lands on
the wrong family member and the deviation grows to O(1) downstream, so
``series_at_zero`` includes the C-term.

Perturbations around the true solution are amplified by roughly
exp(A_n/sqrt(2) * |log t|)-type factors, so both the seed point t0 and
the per-step tolerance are chosen aggressively small by default (they
scale with A_n); the time stepper is an adaptive Taylor-series method
(order ~ tolerance digits) whose cost grows only logarithmically in
1/t0, making tight tolerances affordable.  The integration variable is
V = W - t: V is exponentially smaller than W near the origin, and
error control relative to V is what keeps the family coefficient C
uncorrupted (absolute control on W destroys it and the trajectory
then hits a movable pole).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .finite_n import EnsembleParams, log_dn0_closed_form
from .precision import DEFAULT_CTX, PrecisionCtx, PrecisionError

__all__ = [
    "PoleError",
    "IntegratorOpts",
    "PainleveTrajectory",
    "WAux",
    "pvi_rhs",
    "local_coefficient",
    "series_at_zero",
    "large_n_seed",
    "integrate_w",
    "hn_from_w",
    "aux_from_w",
]

#: proximity threshold for the singular manifolds W in {0, 1, t}
POLE_TOL = mpf("1e-12")

#: hard cap on accepted steps; hitting it means the trajectory is
#: stalling against a movable pole
MAX_STEPS = 50_000


class PoleError(ArithmeticError):
    """The trajectory came within POLE_TOL of a singular manifold.

    Movable poles of Painlevé VI pass through W in {0, 1, t}; an
    accurate trajectory for the gap-probability solution stays away
    from all three on (0, 1), so proximity signals either a genuinely
    singular parameter choice or an under-resolved integration (raise
    the precision / lower the tolerance / shrink t0).
    """

    def __init__(self, message: str, t=None):
        super().__init__(message)
        self.t = t


# ---------------------------------------------------------------------------
# The ODE
# ---------------------------------------------------------------------------

def pvi_rhs(t, w, wp, params: EnsembleParams, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """W'' as a function of (t, W, W') -- the Painlevé VI right side.

    W'' = (1/2)(1/W + 1/(W-1) + 1/(W-t)) W'^2
          - (1/t + 1/(t-1) + 1/(W-t)) W'
          + W(W-1)(W-t)/(t^2(t-1)^2) *
            [A^2/2 - a^2 t/(2W^2) + b^2(t-1)/(2(W-1)^2) + t(t-1)/(2(W-t)^2)]
    """
    with ctx.workprec():
        t, w, wp = mpf(t), mpf(w), mpf(wp)
        a2 = mpf(params.alpha) ** 2
        b2 = mpf(params.beta) ** 2
        A2 = params.a_n ** 2
        wm1, wmt, tm1 = w - 1, w - t, t - 1
        if min(abs(w), abs(wm1), abs(wmt)) < POLE_TOL:
            raise PoleError(f"singular manifold at t={mpmath.nstr(t, 8)}", t=t)
        return (
            (1 / w + 1 / wm1 + 1 / wmt) * wp * wp / 2
            - (1 / t + 1 / tm1 + 1 / wmt) * wp
            + w * wm1 * wmt / (t * t * tm1 * tm1)
            * (A2 / 2 - a2 * t / (2 * w * w)
               + b2 * tm1 / (2 * wm1 * wm1)
               + t * tm1 / (2 * wmt * wmt))
        )


# ---------------------------------------------------------------------------
# Seeding
# ---------------------------------------------------------------------------

def local_coefficient(params: EnsembleParams, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """The coefficient C in W(t) = t - C t^(1+alpha) + ... near t = 0.

    C = (1+alpha) D_{n-1}(0; alpha+2, beta) / [D_n(0; alpha, beta) n (n+beta)].

    The determinant ratio is (M(0)^{-1})_{00} of the t=0 moment matrix,
    i.e. the hard-edge density constant; both determinants come from
    the Barnes-G closed form, so C is exact to working precision.
    """
    with ctx.workprec():
        n = params.n
        alpha = mpf(params.alpha)
        beta = mpf(params.beta)
        shifted = EnsembleParams(alpha + 2, beta, n - 1)
        log_ratio = (log_dn0_closed_form(shifted, ctx)
                     - log_dn0_closed_form(params, ctx))
        return (1 + alpha) * mpmath.e ** log_ratio / (n * (n + beta))


def series_at_zero(params: EnsembleParams, t0, ctx: PrecisionCtx = DEFAULT_CTX):
    """Seed data (W, W') at t0 from the local expansion at the origin.

    Uses the two-term series W = t - C t^(1+alpha); the first omitted
    term is O(t^(2+alpha)), and its effect on the family coefficient
    scales linearly with t0, so t0 is taken very small (the stepper's
    cost in 1/t0 is only logarithmic).
    """
    with ctx.workprec():
        t0 = mpf(t0)
        if not (0 < t0 < 1):
            raise ValueError(f"series_at_zero requires t0 in (0,1), got {t0}")
        alpha = mpf(params.alpha)
        c = local_coefficient(params, ctx)
        w = t0 - c * t0 ** (1 + alpha)
        wp = 1 - c * (1 + alpha) * t0 ** alpha
        return w, wp


def large_n_seed(params: EnsembleParams, t_seed, ctx: PrecisionCtx = DEFAULT_CTX):
    """Seed data (W, W') at t_seed from the large-n expansion of W_n.

    W = a sqrt(t)/(2n) - a(1+a+b) sqrt(t)/(4 n^2)
        + a [t^2(1-4b^2) + 2t(4(a+b)(a+b+2) + 2b^2 + 3) + 1] / (64 n^3 sqrt(t))
        + O(n^-4),

    differentiated analytically for W'.  Accuracy is O(n^-4) at fixed
    t, so this mode is for large n only.
    """
    with ctx.workprec():
        t = mpf(t_seed)
        if not (0 < t < 1):
            raise ValueError(f"large_n_seed requires t in (0,1), got {t}")
        a = mpf(params.alpha)
        b = mpf(params.beta)
        n = mpf(params.n)
        rt = mpmath.sqrt(t)
        c2 = 1 - 4 * b * b
        c1 = 2 * (4 * (a + b) * (a + b + 2) + 2 * b * b + 3)
        num = a * (c2 * t * t + c1 * t + 1)
        w = (a * rt / (2 * n)
             - a * (1 + a + b) * rt / (4 * n * n)
             + num / (64 * n ** 3 * rt))
        wp = (a / (4 * n * rt)
              - a * (1 + a + b) / (8 * n * n * rt)
              + a * (2 * c2 * t + c1) / (64 * n ** 3 * rt)
              - num / (128 * n ** 3 * t * rt))
        return w, wp


# ---------------------------------------------------------------------------
# Taylor-series time stepper
# ---------------------------------------------------------------------------

class _Series:
    """Lazy power-series node: coefficient k is computed on first access."""

    __slots__ = ("f", "c")

    def __init__(self, f):
        self.f = f
        self.c = []

    def __getitem__(self, k):
        while len(self.c) <= k:
            self.c.append(self.f(len(self.c)))
        return self.c[k]


def _s_const(v):
    return _Series(lambda k: v if k == 0 else mpf(0))


def _s_add(*nodes):
    return _Series(lambda k: sum(nd[k] for nd in nodes))


def _s_sub(a, b):
    return _Series(lambda k: a[k] - b[k])


def _s_mul(a, b):
    return _Series(lambda k: mpmath.fsum(a[j] * b[k - j] for j in range(k + 1)))


def _s_scale(a, v):
    return _Series(lambda k: v * a[k])


def _s_recip(a):
    r = _Series(None)

    def f(k):
        if k == 0:
            return 1 / a[0]
        return -mpmath.fsum(a[j] * r[k - j] for j in range(1, k + 1)) / a[0]

    r.f = f
    return r


def _taylor_coeffs(tc, v0, v1, a2, b2, A2, order):
    """Taylor coefficients of V = W - t about tc, to the given order.

    V'' = W''; the right side is assembled as lazy power series, and
    the recursion v_{k+2} = R_k / ((k+1)(k+2)) fills the list, where
    R_k (the tau^k coefficient of the right side) only needs V
    coefficients up to k+1.  Working in V keeps W - t exact; the
    1/(W-t) factors become 1/V with no cancellation.
    """
    v = [v0, v1]
    V = _Series(lambda k: v[k])
    W = _Series(lambda k: v[0] + tc if k == 0 else (v[1] + 1 if k == 1 else v[k]))
    Wp = _Series(lambda k: (v[1] + 1) if k == 0 else (k + 1) * v[k + 1])
    t = _Series(lambda k: tc if k == 0 else (mpf(1) if k == 1 else mpf(0)))
    wm1 = _s_sub(W, _s_const(mpf(1)))
    tm1 = _s_sub(t, _s_const(mpf(1)))
    i_w, i_wm1, i_v, i_t, i_tm1 = map(_s_recip, (W, wm1, V, t, tm1))
    wp2 = _s_mul(Wp, Wp)
    s1 = _s_scale(_s_mul(_s_add(i_w, i_wm1, i_v), wp2), mpf(1) / 2)
    s2 = _s_scale(_s_mul(_s_add(i_t, i_tm1, i_v), Wp), mpf(-1))
    pref = _s_mul(_s_mul(_s_mul(W, wm1), V), _s_mul(_s_mul(i_t, i_t), _s_mul(i_tm1, i_tm1)))
    bracket = _s_add(
        _s_const(A2 / 2),
        _s_scale(_s_mul(t, _s_mul(i_w, i_w)), -a2 / 2),
        _s_scale(_s_mul(tm1, _s_mul(i_wm1, i_wm1)), b2 / 2),
        _s_scale(_s_mul(_s_mul(t, tm1), _s_mul(i_v, i_v)), mpf(1) / 2),
    )
    rhs = _s_add(s1, s2, _s_mul(pref, bracket))
    for k in range(order - 1):
        v.append(rhs[k] / ((k + 1) * (k + 2)))
    return v


# ---------------------------------------------------------------------------
# Integration driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegratorOpts:
    """Settings for integrate_w; None fields are auto-chosen from A_n.

    The defaults scale with A_n = 2n+1+alpha+beta because the seed and
    per-step errors are amplified by exp(const * A_n) over the run:
    tol ~ 10^-(20+A), t0 ~ 10^(-2A), order ~ 1.2 * tolerance digits.
    """

    tol: mpf | None = None
    t0: mpf | None = None
    order: int | None = None
    verify_seed: bool = False

    def resolved(self, params: EnsembleParams):
        a_n = float(params.a_n)
        digits = 20 + int(a_n)
        tol = self.tol if self.tol is not None else mpf(10) ** (-digits)
        t0 = self.t0 if self.t0 is not None else mpf(10) ** (-int(2 * a_n))
        if self.order is not None:
            order = self.order
        else:
            order = min(64, max(32, int(1.2 * digits)))
        return mpf(tol), mpf(t0), order

    def bits_needed(self, params: EnsembleParams) -> int:
        a_n = float(params.a_n)
        alpha = float(params.alpha)
        digits = 20 + int(a_n)
        # must resolve t0^(1+alpha) relative to t0 plus the tolerance
        return max(448, int(3.4 * (2 * a_n * (1 + alpha) + digits)) + 64)


@dataclass(frozen=True)
class PainleveTrajectory:
    """W_n and W_n' sampled on a grid, plus integration diagnostics."""

    params: EnsembleParams
    grid: tuple
    w: tuple
    wp: tuple
    seed_mode: str
    steps: int
    min_step: mpf
    pole_proximity: bool
    seed_shift_error: mpf | None = None
    ctx: PrecisionCtx = field(default=DEFAULT_CTX, repr=False)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("trajectory grid must be strictly increasing")
        if not all(0 < t < 1 for t in self.grid):
            raise ValueError("trajectory grid must lie in (0,1)")
        for t, w in zip(self.grid, self.w):
            if min(abs(w), abs(w - 1), abs(w - t)) < POLE_TOL:
                raise PoleError(
                    f"sampled point within pole tolerance at t={mpmath.nstr(t, 8)}",
                    t=t,
                )


def _integrate(params, grid, seed_mode, tol, t0, order, ctx):
    """Core time-stepping loop; returns (w-list, wp-list, steps, min h)."""
    alpha = mpf(params.alpha)
    a2, b2 = alpha ** 2, mpf(params.beta) ** 2
    A2 = params.a_n ** 2
    if seed_mode == "series_at_zero":
        t = mpf(t0)
        w, wp = series_at_zero(params, t, ctx)
    elif seed_mode == "large_n_seed":
        t = mpf(grid[0])
        w, wp = large_n_seed(params, t, ctx)
    else:
        raise ValueError(f"unknown seed_mode {seed_mode!r}")
    v, vp = w - t, wp - 1
    targets = [mpf(g) for g in grid]
    if targets[0] <= t and seed_mode == "series_at_zero":
        raise ValueError("grid must start above the seed point t0")
    out_w, out_wp = [], []
    if seed_mode == "large_n_seed":
        out_w.append(w)
        out_wp.append(wp)
        targets = targets[1:]
    idx = 0
    steps = 0
    min_h = mpmath.inf
    floor = mpf(10) ** (-300)
    t_end = targets[-1] if targets else t
    while idx < len(targets):
        if steps >= MAX_STEPS:
            raise PoleError(
                f"step limit reached at t={mpmath.nstr(t, 8)} "
                "(movable pole or tolerance too tight)",
                t=t,
            )
        coeff = _taylor_coeffs(t, v, vp, a2, b2, A2, order)
        scale = max(abs(coeff[0]), abs(coeff[1]) * abs(t) / 10, floor)
        hs = [
            (tol * scale / abs(coeff[k])) ** (mpf(1) / k)
            for k in (order - 2, order - 1, order)
            if coeff[k] != 0
        ]
        h = min(hs) if hs else (t_end - t)
        if h < abs(t) * mpf(2) ** (-ctx.bits // 2):
            raise PoleError(
                f"step size collapsed at t={mpmath.nstr(t, 8)} "
                "(approaching a movable pole)",
                t=t,
            )
        hit = t + h >= targets[idx]
        if hit:
            h = targets[idx] - t
        # Horner evaluation of V and V' at t + h
        val = coeff[order]
        der = order * coeff[order]
        for k in range(order - 1, 0, -1):
            val = val * h + coeff[k]
            der = der * h + k * coeff[k]
        val = val * h + coeff[0]
        t, v, vp = t + h, val, der
        steps += 1
        min_h = min(min_h, h)
        w = v + t
        # near the origin W ~ t and V ~ -C t^(1+alpha) are legitimately
        # tiny; the manifold guard only makes sense past the seed zone
        # (step-size collapse catches pole approach everywhere)
        if t > mpf("0.01") and min(abs(w), abs(w - 1), abs(v)) < POLE_TOL:
            raise PoleError(
                f"singular-manifold proximity at t={mpmath.nstr(t, 8)}", t=t
            )
        if hit:
            out_w.append(w)
            out_wp.append(vp + 1)
            idx += 1
    return out_w, out_wp, steps, min_h


def integrate_w(
    params: EnsembleParams,
    grid,
    seed_mode: str = "series_at_zero",
    opts: IntegratorOpts | None = None,
    ctx: PrecisionCtx | None = None,
) -> PainleveTrajectory:
    """Integrate the Painlevé VI equation and sample (W, W') on grid.

    grid must be strictly increasing inside (0,1).  seed_mode is
    "series_at_zero" (local expansion at a tiny t0, the accurate
    default) or "large_n_seed" (large-n expansion at grid[0], for
    large n).  With opts.verify_seed the integration is repeated from
    t0/2 and the difference at the first grid point is recorded in
    seed_shift_error.
    """
    opts = opts or IntegratorOpts()
    if ctx is None:
        ctx = PrecisionCtx(opts.bits_needed(params))
    with ctx.workprec():
        tol, t0, order = opts.resolved(params)
        grid = tuple(mpf(g) for g in grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("integration grid must be strictly increasing")
        if not all(0 < t < 1 for t in grid):
            raise ValueError("integration grid must lie in (0,1)")
        w, wp, steps, min_h = _integrate(params, grid, seed_mode, tol, t0, order, ctx)
        shift_err = None
        if opts.verify_seed and seed_mode == "series_at_zero":
            w2, _, _, _ = _integrate(params, grid[:1], seed_mode, tol, t0 / 2, order, ctx)
            shift_err = abs(w2[0] - w[0])
        return PainleveTrajectory(
            params=params,
            grid=grid,
            w=tuple(w),
            wp=tuple(wp),
            seed_mode=seed_mode,
            steps=steps,
            min_step=min_h,
            pole_proximity=False,
            seed_shift_error=shift_err,
            ctx=ctx,
        )


# ---------------------------------------------------------------------------
# Algebraic maps from the trajectory
# ---------------------------------------------------------------------------

def hn_from_w(t, w, wp, params: EnsembleParams, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """H_n(t) from (W, W'):

    H_n = t^2(1-t)^2 W'^2 / (4 W (W-1)(W-t)) + t(1-t) W' / (2(W-t))
          - (A_n/4)(2n-1+a+b) W
          + (1/4)[t((2n+a+b)^2 + 1) + a^2 - b^2 - 1]
          - a^2 t/(4W) + b^2(t-1)/(4(W-1)) + t(t-1)/(4(W-t))
    """
    with ctx.workprec():
        t, w, wp = mpf(t), mpf(w), mpf(wp)
        a = mpf(params.alpha)
        b = mpf(params.beta)
        n = params.n
        A = params.a_n
        wm1, wmt = w - 1, w - t
        if min(abs(w), abs(wm1), abs(wmt)) < POLE_TOL:
            raise PoleError(f"singular manifold at t={mpmath.nstr(t, 8)}", t=t)
        s = 2 * n + a + b
        return (
            t ** 2 * (1 - t) ** 2 * wp ** 2 / (4 * w * wm1 * wmt)
            + t * (1 - t) * wp / (2 * wmt)
            - A * (2 * n - 1 + a + b) * w / 4
            + (t * (s * s + 1) + a * a - b * b - 1) / 4
            - a * a * t / (4 * w)
            + b * b * (t - 1) / (4 * wm1)
            + t * (t - 1) / (4 * wmt)
        )


@dataclass(frozen=True)
class WAux:
    """Auxiliary quantities recovered from the trajectory (R_n omitted)."""

    x_n: mpf
    x_n_prime: mpf
    y_n: mpf
    r_n: mpf


def aux_from_w(t, w, wp, params: EnsembleParams, ctx: PrecisionCtx = DEFAULT_CTX) -> WAux:
    """(x_n, x_n', y_n, r_n) from (W, W') by the algebraic inversions.

    x_n = A (1-W)/(1-t) and its exact derivative; then with

        F = [t(1-t) x' + (x - A)(b - (1-t) x)] / (2x),

    y_n = -x [x F^2 + (x-A)((2n+a) F + n(n+a) t)]
          / [(2n+a+b)(x-A)((1-t)x - A)],

    r_n = -1/2 + (A + (1-t)x')/(2x)
          - (2y + b - (1-t)x + t)(A - x)/(2 t x).
    """
    with ctx.workprec():
        t, w, wp = mpf(t), mpf(w), mpf(wp)
        a = mpf(params.alpha)
        b = mpf(params.beta)
        n = params.n
        A = params.a_n
        x = A * (1 - w) / (1 - t)
        xp = A * ((1 - w) - (1 - t) * wp) / (1 - t) ** 2
        for name, denom in (("x_n", x), ("x_n - A_n", x - A),
                            ("(1-t)x_n - A_n", (1 - t) * x - A)):
            if abs(denom) < POLE_TOL:
                raise PoleError(
                    f"degenerate denominator {name} at t={mpmath.nstr(t, 8)}", t=t
                )
        f = (t * (1 - t) * xp + (x - A) * (b - (1 - t) * x)) / (2 * x)
        y = -(x * (x * f * f + (x - A) * ((2 * n + a) * f + n * (n + a) * t))
              / ((2 * n + a + b) * (x - A) * ((1 - t) * x - A)))
        r = (-mpf(1) / 2 + (A + (1 - t) * xp) / (2 * x)
             - (2 * y + b - (1 - t) * x + t) * (A - x) / (2 * t * x))
        return WAux(x_n=x, x_n_prime=xp, y_n=y, r_n=r)
