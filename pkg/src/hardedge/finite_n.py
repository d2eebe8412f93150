"""Exact finite-n route: Hankel moment matrices of the truncated Jacobi
weight x^alpha (1-x)^beta on [t, 1], their log-determinants, the gap
probability, the log-derivative quantity H_n, and the auxiliary
quantities (R_n, r_n, x_n, y_n) built from the monic orthogonal
polynomials.  This is the ground-truth route the other three are
validated against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from . import specfun
from .precision import DEFAULT_CTX, PrecisionCtx, PrecisionError

__all__ = [
    "EnsembleParams",
    "MomentMatrix",
    "OrthoBasis",
    "AuxQuantities",
    "default_bits",
    "moment_matrix",
    "log_dn",
    "log_dn0_closed_form",
    "log_prob_smallest",
    "log_prob_largest",
    "hn_exact",
    "ortho_basis",
    "aux_exact",
]


def default_bits(n: int) -> int:
    """Working precision that keeps the order-n Hankel solve accurate.

    The moment matrices lose roughly a constant number of bits per row;
    empirically 24 bits per row with a 256-bit floor is comfortable.
    """
    return max(256, 24 * n)


@dataclass(frozen=True)
class EnsembleParams:
    """Jacobi-ensemble parameters (alpha, beta, n).

    The weight is x^alpha (1-x)^beta on [0, 1]; alpha, beta > -1 is the
    integrable range (the standing assumption upstream is alpha, beta > 0;
    routes that need it enforce it themselves).  ``a_n`` = 2n+1+alpha+beta.
    """

    alpha: float
    beta: float
    n: int

    def __post_init__(self):
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("EnsembleParams requires alpha > -1 and beta > -1")
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"EnsembleParams requires integer n >= 1, got {self.n}")

    @property
    def a_n(self):
        return 2 * self.n + 1 + self.alpha + self.beta


@dataclass(frozen=True)
class MomentMatrix:
    """Hankel matrix M_ij = mu_{i+j}(t) of truncated-Jacobi moments.

    ``beta_shift`` in {0, -1} selects the plain weight or the weight with
    beta lowered by one (used by the 1/(1-x)-weighted integrals of the
    auxiliary quantities).  ``size`` may exceed params.n (aux_exact needs
    size n+1).  Entries are extended-precision; the matrix is positive
    definite for t < 1.
    """

    t: mpf
    params: EnsembleParams
    beta_shift: int
    size: int
    entries: mpmath.matrix = field(repr=False)
    log_moments: tuple = field(repr=False)
    ctx: PrecisionCtx = field(default=DEFAULT_CTX, repr=False)

    def cholesky(self) -> mpmath.matrix:
        """Lower Cholesky factor; failure signals insufficient precision."""
        with self.ctx.workprec():
            try:
                return mpmath.cholesky(self.entries)
            except ValueError as exc:
                raise PrecisionError(
                    "moment matrix lost positive definiteness at "
                    f"{self.ctx.bits} bits (n={self.size}, t={self.t}); "
                    "increase PrecisionCtx.bits"
                ) from exc


def moment_matrix(
    t,
    params: EnsembleParams,
    beta_shift: int = 0,
    ctx: PrecisionCtx | None = None,
    size: int | None = None,
) -> MomentMatrix:
    """Assemble the Hankel moment matrix at full precision.

    M_ij = int_t^1 x^(i+j+alpha) (1-x)^(beta+beta_shift) dx.
    """
    if beta_shift not in (0, -1):
        raise ValueError("beta_shift must be 0 or -1")
    if beta_shift == -1 and params.beta <= 0:
        raise ValueError("beta_shift=-1 requires beta > 0")
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    size = size or params.n
    with ctx.workprec():
        t = mpf(t)
        if not (0 <= t < 1):
            raise ValueError(f"moment_matrix requires t in [0,1), got {t}")
        logmu = tuple(
            specfun.log_inc_beta(k, t, params.alpha, params.beta + beta_shift, ctx)
            for k in range(2 * size - 1)
        )
        mu = [mpmath.exp(v) for v in logmu]
        m = mpmath.matrix(size)
        for i in range(size):
            for j in range(size):
                m[i, j] = mu[i + j]
        return MomentMatrix(
            t=t, params=params, beta_shift=beta_shift, size=size,
            entries=m, log_moments=logmu, ctx=ctx,
        )


def _chol_solve(L: mpmath.matrix, b) -> list:
    """Solve L L^T x = b given the lower Cholesky factor."""
    n = L.rows
    y = [mpf(0)] * n
    for i in range(n):
        s = b[i]
        for j in range(i):
            s -= L[i, j] * y[j]
        y[i] = s / L[i, i]
    x = [mpf(0)] * n
    for i in range(n - 1, -1, -1):
        s = y[i]
        for j in range(i + 1, n):
            s -= L[j, i] * x[j]
        x[i] = s / L[i, i]
    return x


def log_dn(t, params: EnsembleParams, ctx: PrecisionCtx | None = None) -> mpf:
    """log of the Hankel determinant D_n(t, alpha, beta).

    Computed as twice the log-sum of the Cholesky diagonal of the moment
    matrix; positivity of the measure makes the factorization succeed
    whenever the precision is adequate.
    """
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    m = moment_matrix(t, params, 0, ctx)
    with ctx.workprec():
        chol = m.cholesky()
        return 2 * mpmath.fsum(mpmath.log(chol[i, i]) for i in range(m.size))


def log_dn0_closed_form(params: EnsembleParams, ctx: PrecisionCtx | None = None) -> mpf:
    """Barnes-G closed form of log D_n(0, alpha, beta).

    log D_n(0) = log G(n+1) + log G(n+a+1) + log G(n+b+1) + log G(n+a+b+1)
                 - log G(a+1) - log G(b+1) - log G(2n+a+b+1).
    """
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    with ctx.workprec():
        a, b, n = mpf(params.alpha), mpf(params.beta), params.n
        lg = lambda z: specfun.log_barnes_g(z, ctx)
        return (
            lg(n + 1) + lg(n + a + 1) + lg(n + b + 1) + lg(n + a + b + 1)
            - lg(a + 1) - lg(b + 1) - lg(2 * n + a + b + 1)
        )


def log_prob_smallest(t, params: EnsembleParams, ctx: PrecisionCtx | None = None) -> mpf:
    """log P(t, alpha, beta, n): all n eigenvalues lie in [t, 1].

    Equal to log D_n(t) - log D_n(0); nonpositive, decreasing in t, and
    zero at t = 0.
    """
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    with ctx.workprec():
        if mpf(t) == 0:
            return mpf(0)
        return log_dn(t, params, ctx) - log_dn(0, params, ctx)


def log_prob_largest(t, params: EnsembleParams, ctx: PrecisionCtx | None = None) -> mpf:
    """log of the largest-eigenvalue distribution at t.

    Delegates through the reflection x -> 1-x of the weight, which swaps
    alpha and beta: P_L(t, alpha, beta, n) = P(1-t, beta, alpha, n).
    """
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t <= 1):
            raise ValueError(f"log_prob_largest requires t in (0,1], got {t}")
        swapped = EnsembleParams(alpha=params.beta, beta=params.alpha, n=params.n)
        return log_prob_smallest(1 - t, swapped, ctx)


def hn_exact(t, params: EnsembleParams, ctx: PrecisionCtx | None = None) -> mpf:
    """H_n(t) = t(t-1) d/dt log D_n(t), evaluated exactly.

    d/dt log det M = trace(M^-1 M') with the entrywise derivative
    mu_k'(t) = -t^(k+alpha) (1-t)^beta, which makes M' the rank-one matrix
    -t^alpha (1-t)^beta v v^T with v_i = t^i.  Hence
    H_n = t(1-t) t^alpha (1-t)^beta v^T M^-1 v; no finite differencing.
    """
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    m = moment_matrix(t, params, 0, ctx)
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t < 1):
            raise ValueError(f"hn_exact requires t in (0,1), got {t}")
        chol = m.cholesky()
        v = [t**i for i in range(params.n)]
        x = _chol_solve(chol, v)
        quad = mpmath.fsum(vi * xi for vi, xi in zip(v, x))
        a, b = mpf(params.alpha), mpf(params.beta)
        return t * (1 - t) * t**a * (1 - t) ** b * quad


@dataclass(frozen=True)
class OrthoBasis:
    """Monic orthogonal polynomials P_n and P_{n-1} for the weight on [t, 1].

    Coefficient vectors are lowest-degree first with leading coefficient 1.
    ``p1`` is the coefficient of x^(n-1) in P_n (the subleading coefficient).
    """

    degree: int
    pn: tuple
    pn_minus_1: tuple
    h_n: mpf
    h_n_minus_1: mpf
    pn_at_t: mpf
    pn_minus_1_at_t: mpf

    @property
    def p1(self) -> mpf:
        return self.pn[-2] if self.degree >= 1 else mpf(0)


def _monic_coeffs(logmu, k: int):
    """Coefficients of monic P_k from the order-k principal moment system."""
    if k == 0:
        return [mpf(1)]
    mu = [mpmath.exp(v) for v in logmu]
    sub = mpmath.matrix(k)
    for i in range(k):
        for j in range(k):
            sub[i, j] = mu[i + j]
    subchol = mpmath.cholesky(sub)
    rhs = [-mu[k + j] for j in range(k)]
    c = _chol_solve(subchol, rhs)
    return c + [mpf(1)]


def _polyval(coeffs, x):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def ortho_basis(t, params: EnsembleParams, ctx: PrecisionCtx | None = None) -> OrthoBasis:
    """Monic P_n, P_{n-1}, their norms, and their boundary values at x = t."""
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    n = params.n
    m = moment_matrix(t, params, 0, ctx, size=n + 1)
    with ctx.workprec():
        t = mpf(t)
        logmu = m.log_moments
        mu = [mpmath.exp(v) for v in logmu]
        cn = _monic_coeffs(logmu, n)
        cn1 = _monic_coeffs(logmu, n - 1)
        # h_k = int P_k x^k w = sum_i c_i mu_{i+k}  (orthogonality kills the rest)
        h_n = mpmath.fsum(c * mu[i + n] for i, c in enumerate(cn))
        h_n1 = mpmath.fsum(c * mu[i + n - 1] for i, c in enumerate(cn1))
        if h_n <= 0 or h_n1 <= 0:
            raise PrecisionError(
                f"nonpositive norm h_n at {ctx.bits} bits; increase precision"
            )
        return OrthoBasis(
            degree=n,
            pn=tuple(cn),
            pn_minus_1=tuple(cn1),
            h_n=h_n,
            h_n_minus_1=h_n1,
            pn_at_t=_polyval(cn, t),
            pn_minus_1_at_t=_polyval(cn1, t),
        )


@dataclass(frozen=True)
class AuxQuantities:
    """The four auxiliary quantities at one t.

    R_n = t^a (1-t)^b P_n(t,t)^2 / h_n
    r_n = t^a (1-t)^b P_n(t,t) P_{n-1}(t,t) / h_{n-1}
    x_n = (beta/h_n)     int_t^1 P_n^2 / (1-x) x^a (1-x)^b dx
    y_n = (beta/h_{n-1}) int_t^1 P_n P_{n-1} / (1-x) x^a (1-x)^b dx
    """

    R_n: mpf
    r_n: mpf
    x_n: mpf
    y_n: mpf


def aux_exact(t, params: EnsembleParams, ctx: PrecisionCtx | None = None) -> AuxQuantities:
    """Auxiliary quantities from moment bilinear forms (beta > 0, t in (0,1)).

    The 1/(1-x)-weighted integrals are quadratic/bilinear forms of the
    monic coefficient vectors against the beta-shifted moment matrix.
    """
    if params.beta <= 0:
        raise ValueError("aux_exact requires beta > 0")
    ctx = ctx or PrecisionCtx(default_bits(params.n))
    basis = ortho_basis(t, params, ctx)
    shifted = moment_matrix(t, params, -1, ctx, size=params.n + 1)
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t < 1):
            raise ValueError(f"aux_exact requires t in (0,1), got {t}")
        ms = shifted.entries
        cn = basis.pn
        cn1 = basis.pn_minus_1
        b = mpf(params.beta)
        quad = mpmath.fsum(
            cn[i] * ms[i, j] * cn[j] for i in range(len(cn)) for j in range(len(cn))
        )
        bil = mpmath.fsum(
            cn[i] * ms[i, j] * cn1[j] for i in range(len(cn)) for j in range(len(cn1))
        )
        x_n = b / basis.h_n * quad
        y_n = b / basis.h_n_minus_1 * bil
        a = mpf(params.alpha)
        w_t = t**a * (1 - t) ** mpf(params.beta)
        r_fac = w_t * basis.pn_at_t
        return AuxQuantities(
            R_n=r_fac * basis.pn_at_t / basis.h_n,
            r_n=r_fac * basis.pn_minus_1_at_t / basis.h_n_minus_1,
            x_n=x_n,
            y_n=y_n,
        )
