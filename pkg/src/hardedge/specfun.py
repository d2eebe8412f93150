"""Extended-precision special functions used by every other module.

All functions are pure and take a :class:`~hardedge.precision.PrecisionCtx`;
precision, not modeling, is the only error source here.
"""

from __future__ import annotations

import functools

import mpmath
from mpmath import mp, mpf

from .precision import DEFAULT_CTX, PrecisionCtx

__all__ = [
    "log_gamma",
    "log_barnes_g",
    "zeta_prime_minus_one",
    "bessel_g",
    "bessel_pair",
    "log_inc_beta",
]


def log_gamma(x, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """log Gamma(x) for real x > 0."""
    with ctx.workprec():
        x = mpf(x)
        if x <= 0:
            raise ValueError(f"log_gamma requires x > 0, got {x}")
        return mpmath.loggamma(x)


# ---------------------------------------------------------------------------
# Barnes G
# ---------------------------------------------------------------------------

def _barnes_shift_threshold(bits: int) -> int:
    # The asymptotic tail below has terms ~ B_{2k+2}/(2k(2k+1)(2k+2) z^{2k}),
    # whose smallest achievable magnitude is ~ exp(-2 pi z).  Truncation
    # below 2^-(bits) therefore needs z >~ bits * log(2)/(2 pi) ~ 0.1103*bits.
    return max(30, int(0.13 * bits) + 4)


def _log_barnes_g_asymptotic(z: mpf) -> mpf:
    """log G(z+1) for large z by the Voros-type asymptotic expansion.

    log G(z+1) = z^2 (log z / 2 - 3/4) + (z/2) log 2pi - (log z)/12
                 + zeta'(-1) + sum_{k>=1} B_{2k+2} / (4k(k+1) z^{2k})

    The sum is truncated at its smallest term (the series is asymptotic).
    """
    total = (
        z * z * (mpmath.log(z) / 2 - mpf(3) / 4)
        + z / 2 * mpmath.log(2 * mpmath.pi)
        - mpmath.log(z) / 12
        + _zeta_prime_minus_one_cached(mp.prec)
    )
    zsq = z * z
    zpow = zsq
    prev = mpmath.inf
    eps = mpf(2) ** (-mp.prec)
    for k in range(1, 4 * int(z) + 40):
        term = mpmath.bernoulli(2 * k + 2) / (4 * k * (k + 1) * zpow)
        if abs(term) >= prev:
            break  # divergent tail reached; stop at the smallest term
        total += term
        if abs(term) < eps * abs(total):
            break
        prev = abs(term)
        zpow *= zsq
    return total


def log_barnes_g(z, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """log G(z) for real z > 0, G the Barnes G-function.

    Evaluated by ascending the recursion G(z+1) = Gamma(z) G(z) until the
    argument clears a precision-dependent threshold, then applying the
    asymptotic expansion of log G at the shifted argument.
    """
    with ctx.workprec():
        z = mpf(z)
        if z <= 0:
            raise ValueError(f"log_barnes_g requires z > 0, got {z}")
        z0 = _barnes_shift_threshold(ctx.bits)
        # log G(z) = log G(z + N) - sum_{k=0}^{N-1} log Gamma(z + k)
        shift = max(0, int(mpmath.ceil(z0 - z)) + 1)
        acc = mpf(0)
        for k in range(shift):
            acc += mpmath.loggamma(z + k)
        return _log_barnes_g_asymptotic(z + shift - 1) - acc


# ---------------------------------------------------------------------------
# zeta'(-1)
# ---------------------------------------------------------------------------

def _zeta_prime_two(prec: int) -> mpf:
    """zeta'(2) = -sum_{k>=2} log(k)/k^2 by Euler-Maclaurin acceleration.

    For f(x) = log(x)/x^2 the m-th derivative is
    f^(m)(x) = x^(-(2+m)) (A_m log x + B_m) with
    A_{m+1} = -(m+2) A_m,  B_{m+1} = A_m - (m+2) B_m,  A_0 = 1, B_0 = 0,
    so the correction terms are exact.
    """
    with mpmath.workprec(prec + 16):
        N = max(24, prec // 3)
        s = mpf(0)
        for k in range(2, N):
            s += mpmath.log(k) / mpf(k) ** 2
        # tail: int_N^inf f + f(N)/2 - sum B_{2j}/(2j)! f^(2j-1)(N)
        logN = mpmath.log(N)
        tail = (logN + 1) / N + logN / (2 * mpf(N) ** 2)
        A, B = mpf(1), mpf(0)
        m = 0
        eps = mpf(2) ** (-(prec + 8))
        prev = mpmath.inf
        while True:
            # advance derivative coefficients to order m+1
            A, B = -(m + 2) * A, A - (m + 2) * B
            m += 1
            if m % 2 == 1:  # odd-order derivative enters the EM sum
                j = (m + 1) // 2
                deriv = (A * logN + B) / mpf(N) ** (2 + m)
                term = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * deriv
                tail -= term
                if abs(term) >= prev:
                    raise ArithmeticError("Euler-Maclaurin tail stopped converging")
                prev = abs(term)
                if abs(term) < eps:
                    break
        return -(s + tail)


@functools.lru_cache(maxsize=None)
def _zeta_prime_minus_one_cached(prec: int) -> mpf:
    with mpmath.workprec(prec + 16):
        # Glaisher-Kinkelin: zeta'(-1) = 1/12 - log A with
        # 12 log A = gamma + log(2 pi) - 6 zeta'(2)/pi^2.
        zp2 = _zeta_prime_two(prec + 16)
        log_a = (mpmath.euler + mpmath.log(2 * mpmath.pi) - 6 * zp2 / mpmath.pi**2) / 12
        return mpf(1) / 12 - log_a


def zeta_prime_minus_one(ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """zeta'(-1), via the Glaisher-Kinkelin relation zeta'(-1) = 1/12 - log A."""
    with ctx.workprec():
        return +_zeta_prime_minus_one_cached(mp.prec)


# ---------------------------------------------------------------------------
# Regularized Bessel pair
# ---------------------------------------------------------------------------

def bessel_g(nu, x, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """Regularized Bessel function g_nu(x) = J_nu(sqrt(x)) / x^(nu/2).

    Entire in x, with g_nu(0) = 2^(-nu)/Gamma(nu+1).  This is the building
    block of the hard-edge kernel with the x^(nu/2) branch factored off.
    """
    with ctx.workprec():
        nu, x = mpf(nu), mpf(x)
        if x < 0:
            raise ValueError(f"bessel_g requires x >= 0, got {x}")
        if x == 0:
            return mpf(2) ** (-nu) / mpmath.gamma(nu + 1)
        if x < mpf("1e-8"):
            # power series in x; three terms are ample at this size
            c0 = mpf(2) ** (-nu) / mpmath.gamma(nu + 1)
            s = mpf(1) - x / (4 * (nu + 1)) + x * x / (32 * (nu + 1) * (nu + 2))
            return c0 * s
        z = mpmath.sqrt(x)
        return mpmath.besselj(nu, z) * x ** (-nu / 2)


def bessel_pair(alpha, x, ctx: PrecisionCtx = DEFAULT_CTX):
    """The pair (g, h) with g = J_a(sqrt x)/x^(a/2), h = sqrt(x) J_a'(sqrt x)/x^(a/2).

    Both are entire in x.  h is evaluated through the recurrence
    z J_a'(z) = a J_a(z) - z J_{a+1}(z), i.e. h_a(x) = a g_a(x) - x g_{a+1}(x).
    """
    with ctx.workprec():
        alpha, x = mpf(alpha), mpf(x)
        if alpha <= -1:
            raise ValueError(f"bessel_pair requires alpha > -1, got {alpha}")
        if x < 0:
            raise ValueError(f"bessel_pair requires x >= 0, got {x}")
        g = bessel_g(alpha, x, ctx)
        g1 = bessel_g(alpha + 1, x, ctx)
        return g, alpha * g - x * g1


# ---------------------------------------------------------------------------
# Truncated-Jacobi moments
# ---------------------------------------------------------------------------

def log_inc_beta(k: int, t, alpha, beta, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """log of the upper incomplete Beta value int_t^1 x^(k+alpha) (1-x)^beta dx.

    These are the Hankel-matrix entries of the truncated Jacobi weight;
    only the log is exposed because the raw moments underflow for large
    k and n.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"log_inc_beta requires integer k >= 0, got {k}")
    with ctx.workprec():
        t, alpha, beta = mpf(t), mpf(alpha), mpf(beta)
        if not (0 <= t < 1):
            raise ValueError(f"log_inc_beta requires t in [0,1), got {t}")
        if alpha <= -1 or beta <= -1:
            raise ValueError("log_inc_beta requires alpha > -1 and beta > -1")
        val = mpmath.betainc(k + alpha + 1, beta + 1, t, 1)
        return mpmath.log(val)
