"""Fredholm determinant of the Bessel kernel on (0, s) by Nyström
discretization — the hard-edge limit of the smallest-eigenvalue gap
probability.

The Bessel kernel

    K(x, y) = [J_a(√x) √y J_a'(√y) − √x J_a'(√x) J_a(√y)] / (2(x−y))

is factored as K(x,y) = (xy)^(a/2) · G_a(x,y) with

    G_a(x, y) = [g(x) h(y) − h(x) g(y)] / (2(x−y)),
    g(x) = J_a(√x)/x^(a/2),     h(x) = a·g(x) − x·g_{a+1}(x),

both entire in x.  The branch factor (xy)^(a/2) is absorbed into a
Gauss–Jacobi quadrature with weight x^a on (0, s); the resulting
symmetric Nyström matrix √(w_i w_j) G(x_i, x_j) then converges
spectrally in the number of points even for non-integer a, and

    log det(I − K) = Σ_i log(1 − λ_i)

over its eigenvalues, which lie in [0, 1) because K is a positive
contraction on (0, s).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .precision import DEFAULT_CTX, PrecisionCtx
from .quadrature import QuadratureRule, quad_rule
from .specfun import bessel_g

__all__ = [
    "ContractionError",
    "NystromDiscretization",
    "kernel_g",
    "nystrom",
    "log_fredholm_det",
    "default_points",
]

#: half-width of the near-diagonal strip (relative to max(1, x)) where
#: the kernel switches to its Taylor form in (y - x)
DIAG_DELTA = mpf("1e-6")


class ContractionError(ArithmeticError):
    """A Nyström eigenvalue fell outside [0, 1).

    The continuous operator is a positive contraction, so this is a
    discretization artifact; increase the number of quadrature points.
    """


def _h_derivs(alpha, x, ctx: PrecisionCtx):
    """(g, h) and their first three derivatives at x.

    Uses g_nu' = -g_{nu+1}/2 (exact from the series), hence
    h' = -(a+2)/2 g1 + x/2 g2,  h'' = (a+4)/4 g2 - x/4 g3,
    h''' = -(a+6)/8 g3 + x/8 g4.
    """
    a = mpf(alpha)
    g = [bessel_g(a + k, x, ctx) for k in range(5)]
    gd = (g[0], -g[1] / 2, g[2] / 4, -g[3] / 8)
    h0 = a * g[0] - x * g[1]
    h1 = -(a + 2) / 2 * g[1] + x / 2 * g[2]
    h2 = (a + 4) / 4 * g[2] - x / 4 * g[3]
    h3 = -(a + 6) / 8 * g[3] + x / 8 * g[4]
    return gd, (h0, h1, h2, h3)


def kernel_g(alpha, x, y, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """The regularized Bessel kernel G_a(x,y) (branch factor removed).

    Away from the diagonal this is the two-point formula; for
    |x - y| <= DIAG_DELTA * max(1, x) it switches to the Taylor form

        G = (h g' - g h')/2 + e (h g'' - g h'')/4 + e^2 (h g''' - g h''')/12

    with e = y - x, which is exact through O(e^2) (the next term is
    O(e^3)); at e = 0 this is the diagonal value, e.g. G_0(0,0) = 1/4.
    """
    with ctx.workprec():
        a, x, y = mpf(alpha), mpf(x), mpf(y)
        if x < 0 or y < 0:
            raise ValueError("kernel_g requires x, y >= 0")
        if abs(x - y) <= DIAG_DELTA * max(mpf(1), x):
            (g0, g1, g2, g3), (h0, h1, h2, h3) = _h_derivs(a, x, ctx)
            e = y - x
            return ((h0 * g1 - g0 * h1) / 2
                    + e * (h0 * g2 - g0 * h2) / 4
                    + e * e * (h0 * g3 - g0 * h3) / 12)
        gx = bessel_g(a, x, ctx)
        hx = a * gx - x * bessel_g(a + 1, x, ctx)
        gy = bessel_g(a, y, ctx)
        hy = a * gy - y * bessel_g(a + 1, y, ctx)
        return (gx * hy - hx * gy) / (2 * (x - y))


@dataclass(frozen=True)
class NystromDiscretization:
    """Symmetric Nyström matrix of the Bessel kernel on (0, s)."""

    s: mpf
    alpha: mpf
    m: int
    rule: QuadratureRule = field(repr=False)
    matrix: tuple = field(repr=False)
    ctx: PrecisionCtx = field(default=DEFAULT_CTX, repr=False)

    def eigenvalues(self):
        """Eigenvalues of the Nyström matrix, ascending."""
        with self.ctx.workprec():
            A = mpmath.matrix(self.m, self.m)
            for i in range(self.m):
                for j in range(self.m):
                    A[i, j] = self.matrix[i][j]
            ev = mpmath.eigsy(A, eigvals_only=True)
            return sorted(ev[i] for i in range(self.m))


def default_points(s) -> int:
    """Default quadrature size: ceil(10 + 2.2 sqrt(s)).

    Sized so that doubling m moves log det by < 1e-10 for s <= 1000;
    callers that need certainty should verify by doubling.
    """
    return int(mpmath.ceil(10 + mpf("2.2") * mpmath.sqrt(mpf(s))))


def nystrom(s, alpha, m: int | None = None,
            ctx: PrecisionCtx = DEFAULT_CTX) -> NystromDiscretization:
    """Build the m-point Nyström discretization on (0, s).

    The Gauss–Jacobi rule with weight x^alpha on (0, s) absorbs the
    (xy)^(alpha/2) branch factor, so the matrix entries use only the
    entire kernel G: A_ij = sqrt(w_i w_j) G(x_i, x_j).
    """
    with ctx.workprec():
        s, alpha = mpf(s), mpf(alpha)
        if s <= 0:
            raise ValueError(f"nystrom requires s > 0, got {s}")
        if alpha <= -1:
            raise ValueError(f"nystrom requires alpha > -1, got {alpha}")
        if m is None:
            m = default_points(s)
        if m < 4:
            raise ValueError(f"nystrom requires m >= 4, got {m}")
        rule = quad_rule("jacobi", m, (mpf(0), s), ctx, a=alpha)
        sw = [mpmath.sqrt(w) for w in rule.weights]
        rows = []
        for i in range(m):
            row = []
            for j in range(m):
                if j < i:
                    row.append(rows[j][i])
                else:
                    row.append(sw[i] * sw[j]
                               * kernel_g(alpha, rule.nodes[i], rule.nodes[j], ctx))
            rows.append(row)
        return NystromDiscretization(
            s=s, alpha=alpha, m=m, rule=rule,
            matrix=tuple(tuple(r) for r in rows), ctx=ctx,
        )


def log_fredholm_det(s, alpha, m: int | None = None,
                     ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """log det(I - K_Bessel) on (0, s) via the symmetric eigensolve.

    Returns sum_i log(1 - lambda_i) over the Nyström eigenvalues.
    Eigenvalues outside [0, 1) (beyond roundoff slack) raise
    ContractionError with an m-increase hint; tiny negative values are
    discretization roundoff and are clamped.
    """
    disc = nystrom(s, alpha, m, ctx)
    with ctx.workprec():
        slack = mpf(2) ** (-ctx.bits // 2)
        total = mpf(0)
        for lam in disc.eigenvalues():
            if lam >= 1:
                raise ContractionError(
                    f"Nystrom eigenvalue {mpmath.nstr(lam, 8)} >= 1 at "
                    f"s={mpmath.nstr(disc.s, 8)}, m={disc.m}; increase m"
                )
            if lam < 0:
                if lam < -slack:
                    raise ContractionError(
                        f"Nystrom eigenvalue {mpmath.nstr(lam, 8)} < 0 at "
                        f"s={mpmath.nstr(disc.s, 8)}, m={disc.m}; increase m"
                    )
                lam = mpf(0)
            total += mpmath.log(1 - lam)
        return total
