"""Truncated asymptotic expansions with explicit error budgets.

Every evaluator returns an :class:`ExpansionResult` carrying the value
of the printed terms and a budget equal to the magnitude of the first
omitted order (with constant 1); callers must treat the truth as
value ± C·budget with C order-one, never as exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .finite_n import EnsembleParams
from .precision import DEFAULT_CTX, PrecisionCtx
from .specfun import log_barnes_g, zeta_prime_minus_one

__all__ = [
    "ExpansionResult",
    "logdet_series",
    "logp_near_one",
    "logp_large_n",
    "hn_series",
    "wn_series",
    "sym_gap_series",
]


@dataclass(frozen=True)
class ExpansionResult:
    """Truncated expansion value plus the first omitted order's size."""

    value: mpf
    budget: mpf
    order: str

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("error budget must be nonnegative")


def logdet_series(s, alpha, ctx: PrecisionCtx = DEFAULT_CTX) -> ExpansionResult:
    """Large-s expansion of log det(I − K_Bessel) on (0, s):

    −s/4 + a√s − (a²/4) log s + log G(a+1) − (a/2) log 2π
    + (a/8) s^(−1/2) + (a²/16) s^(−1) + (a³/24 + 3a/128) s^(−3/2)
    + (a⁴/32 + 9a²/128) s^(−2) + (a⁵/40 + 9a³/64 + 45a/1024) s^(−5/2),

    budget s^(−3).  At a=0 every a-term vanishes and the value is
    exactly −s/4.
    """
    with ctx.workprec():
        s, a = mpf(s), mpf(alpha)
        if s <= 0:
            raise ValueError(f"logdet_series requires s > 0, got {s}")
        rs = mpmath.sqrt(s)
        value = (-s / 4 + a * rs - a * a / 4 * mpmath.log(s)
                 + log_barnes_g(a + 1, ctx) - a / 2 * mpmath.log(2 * mpmath.pi)
                 + a / (8 * rs) + a * a / (16 * s)
                 + (a ** 3 / 24 + 3 * a / 128) / (s * rs)
                 + (a ** 4 / 32 + 9 * a * a / 128) / (s * s)
                 + (a ** 5 / 40 + 9 * a ** 3 / 64 + 45 * a / 1024) / (s * s * rs))
        return ExpansionResult(value=value, budget=s ** (-3),
                               order="through s^(-5/2)")


def _barnes_block(n, alpha, beta):
    """The six [c² /2 − 1/12]·log(·) terms shared by the two log P expansions."""
    n = mpf(n)
    a, b = mpf(alpha), mpf(beta)
    out = mpf(0)
    for sign, c in (
        (1, n),
        (1, n + b),
        (1, 2 * n + a + b),
        (-1, n + a),
        (-1, 2 * n + b),
        (-1, n + a + b),
    ):
        out += sign * (c * c / 2 - mpf(1) / 12) * mpmath.log(c)
    return out


def logp_near_one(t, params: EnsembleParams,
                  ctx: PrecisionCtx = DEFAULT_CTX) -> ExpansionResult:
    """log P(t) for t near 1 and n large:

    n(n+β) log(1−t) + nα log t + log G(α+1) − (α/2) log 2π + 3α²/4
    + [Barnes block],

    budget 1/n + |1−t| (the two remainders are not ranked by the
    source expansion, so they are added).
    """
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t < 1):
            raise ValueError(f"logp_near_one requires t in (0,1), got {t}")
        a, b, n = mpf(params.alpha), mpf(params.beta), params.n
        value = (n * (n + b) * mpmath.log(1 - t) + n * a * mpmath.log(t)
                 + log_barnes_g(a + 1, ctx) - a / 2 * mpmath.log(2 * mpmath.pi)
                 + 3 * a * a / 4
                 + _barnes_block(n, a, b))
        return ExpansionResult(value=value, budget=mpf(1) / n + (1 - t),
                               order="O(1/n) + O(1-t)")


def logp_large_n(t, params: EnsembleParams,
                 ctx: PrecisionCtx = DEFAULT_CTX) -> ExpansionResult:
    """log P(t) for n large and t fixed:

    n² log(1−t) + n[β log(1−t) + 2α log(1+√t) − 2α log 2]
    + α(α+β) log(1+√t) − (α²/4) log t − α(α+β) log 2 + 3α²/4
    + log G(α+1) − (α/2) log 2π + [Barnes block],

    budget 1/n + 1/(n√t).
    """
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t < 1):
            raise ValueError(f"logp_large_n requires t in (0,1), got {t}")
        a, b, n = mpf(params.alpha), mpf(params.beta), params.n
        rt = mpmath.sqrt(t)
        log2 = mpmath.log(2)
        value = (n * n * mpmath.log(1 - t)
                 + n * (b * mpmath.log(1 - t) + 2 * a * mpmath.log(1 + rt) - 2 * a * log2)
                 + a * (a + b) * mpmath.log(1 + rt) - a * a / 4 * mpmath.log(t)
                 - a * (a + b) * log2 + 3 * a * a / 4
                 + log_barnes_g(a + 1, ctx) - a / 2 * mpmath.log(2 * mpmath.pi)
                 + _barnes_block(n, a, b))
        return ExpansionResult(value=value, budget=mpf(1) / n + 1 / (n * rt),
                               order="O(1/n) + O(1/(n sqrt(t)))")


def hn_series(t, params: EnsembleParams,
              ctx: PrecisionCtx = DEFAULT_CTX) -> ExpansionResult:
    """Large-n expansion of H_n(t):

    n²t + [(α+β)t − α√t] n + (α/4)[(α+2β)t − 2(α+β)√t + α]
    + α(1−t)[1 + (4β²−1)t] / (32 √t n),

    budget 1/(n²t).
    """
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t < 1):
            raise ValueError(f"hn_series requires t in (0,1), got {t}")
        a, b, n = mpf(params.alpha), mpf(params.beta), params.n
        rt = mpmath.sqrt(t)
        value = (n * n * t + ((a + b) * t - a * rt) * n
                 + a / 4 * ((a + 2 * b) * t - 2 * (a + b) * rt + a)
                 + a * (1 - t) * (1 + (4 * b * b - 1) * t) / (32 * rt * n))
        return ExpansionResult(value=value, budget=1 / (mpf(n) ** 2 * t),
                               order="through n^(-1)")


def wn_series(t, params: EnsembleParams,
              ctx: PrecisionCtx = DEFAULT_CTX) -> ExpansionResult:
    """Large-n expansion of W_n(t):

    α√t/(2n) − α(1+α+β)√t/(4n²)
    + α[t²(1−4β²) + 2t(4(α+β)(α+β+2) + 2β² + 3) + 1] / (64 n³ √t),

    budget n^(−4).  Identically zero at α=0.
    """
    with ctx.workprec():
        t = mpf(t)
        if not (0 < t < 1):
            raise ValueError(f"wn_series requires t in (0,1), got {t}")
        a, b, n = mpf(params.alpha), mpf(params.beta), mpf(params.n)
        rt = mpmath.sqrt(t)
        c2 = 1 - 4 * b * b
        c1 = 2 * (4 * (a + b) * (a + b + 2) + 2 * b * b + 3)
        value = (a * rt / (2 * n) - a * (1 + a + b) * rt / (4 * n * n)
                 + a * (c2 * t * t + c1 * t + 1) / (64 * n ** 3 * rt))
        return ExpansionResult(value=value, budget=n ** (-4),
                               order="through n^(-3)")


def sym_gap_series(b, ctx: PrecisionCtx = DEFAULT_CTX) -> ExpansionResult:
    """Large-b expansion of the symmetric-interval JUE gap constant:

    −b²/2 − (log b)/4 + (log 2)/12 + 3ζ'(−1) + 1/(32 b²) + 5/(128 b⁴),

    budget b^(−6).  Equals logdet_series(b², 1/2) + logdet_series(b², −1/2)
    termwise (via G(1/2)G(3/2) = e^{3ζ'(−1)} 2^{1/12}).
    """
    with ctx.workprec():
        b = mpf(b)
        if b <= 0:
            raise ValueError(f"sym_gap_series requires b > 0, got {b}")
        value = (-b * b / 2 - mpmath.log(b) / 4 + mpmath.log(2) / 12
                 + 3 * zeta_prime_minus_one(ctx)
                 + 1 / (32 * b * b) + 5 / (128 * b ** 4))
        return ExpansionResult(value=value, budget=b ** (-6),
                               order="through b^(-4)")
