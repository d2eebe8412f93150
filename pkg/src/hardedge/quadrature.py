"""Gaussian quadrature rules by the Golub-Welsch algorithm in extended
precision.

Supported weight functions: Legendre (constant weight) and Jacobi-type
(x - lo)^a on an interval (lo, hi) with a > -1.  Nodes and weights come
from the symmetric tridiagonal Jacobi matrix of the three-term recurrence
of the orthogonal family; the eigensolve is an implicit-shift QL iteration
that accumulates only the first eigenvector component (all that the
weights need).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .precision import DEFAULT_CTX, PrecisionCtx

__all__ = ["QuadratureRule", "QuadratureError", "quad_rule"]


class QuadratureError(ArithmeticError):
    """The tridiagonal eigensolve failed to converge."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of an m-point Gaussian rule on (lo, hi).

    ``kind`` is "legendre" or "jacobi"; for "jacobi" the weight function
    is (x - lo)^a.  The rule integrates polynomials of degree <= 2m-1
    exactly against its weight function.
    """

    kind: str
    lo: mpf
    hi: mpf
    nodes: tuple
    weights: tuple
    a: mpf | None = None
    ctx: PrecisionCtx = field(default=DEFAULT_CTX, repr=False)

    def __post_init__(self):
        if self.lo >= self.hi:
            raise ValueError("QuadratureRule requires lo < hi")
        if any(w <= 0 for w in self.weights):
            raise ValueError("quadrature weights must be positive")
        if any(not (self.lo < x < self.hi) for x in self.nodes):
            raise ValueError("quadrature nodes must lie strictly inside (lo, hi)")
        if any(b <= a for a, b in zip(self.nodes, self.nodes[1:])):
            raise ValueError("quadrature nodes must be strictly increasing")

    def integrate(self, f) -> mpf:
        """Apply the rule to a callable f (against the rule's weight)."""
        with self.ctx.workprec():
            return mpmath.fsum(w * f(x) for x, w in zip(self.nodes, self.weights))


def _tridiag_ql(d: list, e: list, max_iter: int = 60):
    """Implicit-shift QL for a symmetric tridiagonal matrix.

    ``d`` is the diagonal (length m), ``e`` the subdiagonal (length m-1).
    Returns (eigenvalues, first components of the normalized eigenvectors),
    unsorted.  Classic EISPACK tql2 restricted to a single eigenvector row.
    """
    m = len(d)
    d = list(d)
    e = list(e) + [mpf(0)]
    z = [mpf(1)] + [mpf(0)] * (m - 1)  # first row of the eigenvector matrix
    eps = mpf(2) ** (-mpmath.mp.prec + 2)
    for l in range(m):
        for iteration in range(max_iter + 1):
            # look for a negligible subdiagonal element
            for mm in range(l, m - 1):
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= eps * dd:
                    break
            else:
                mm = m - 1
            if mm == l:
                break
            if iteration == max_iter:
                raise QuadratureError(
                    f"tridiagonal QL did not converge at eigenvalue {l} "
                    f"after {max_iter} iterations"
                )
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = mpmath.hypot(g, 1)
            g = d[mm] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s, c = mpf(1), mpf(1)
            p = mpf(0)
            for i in range(mm - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = mpmath.hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[mm] = mpf(0)
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                # accumulate the first eigenvector component only
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            else:
                d[l] -= p
                e[l] = g
                e[mm] = mpf(0)
    return d, z


def _jacobi_recurrence(m: int, A: mpf, B: mpf):
    """Monic recurrence coefficients for the weight (1-u)^A (1+u)^B on [-1,1].

    Returns (alphas, betas) with beta_0 = int of the weight, per Gautschi.
    """
    ab = A + B
    alphas, betas = [], []
    for k in range(m):
        if k == 0:
            alphas.append((B - A) / (ab + 2))
            betas.append(
                mpf(2) ** (ab + 1) * mpmath.beta(A + 1, B + 1)
            )
        else:
            s = 2 * k + ab
            alphas.append((B * B - A * A) / (s * (s + 2)))
            betas.append(
                4 * k * (k + A) * (k + B) * (k + ab) / (s * s * (s + 1) * (s - 1))
            )
    return alphas, betas


def quad_rule(
    kind: str,
    m: int,
    domain,
    ctx: PrecisionCtx = DEFAULT_CTX,
    a=None,
) -> QuadratureRule:
    """m-point Gaussian rule of the given kind on domain (lo, hi).

    kind="legendre": weight 1.  kind="jacobi": weight (x-lo)^a, a > -1.
    """
    if m < 1:
        raise ValueError(f"quad_rule requires m >= 1, got {m}")
    if kind not in ("legendre", "jacobi"):
        raise ValueError(f"unknown quadrature kind {kind!r}")
    with ctx.workprec():
        lo, hi = mpf(domain[0]), mpf(domain[1])
        if lo >= hi:
            raise ValueError("quad_rule requires lo < hi")
        if kind == "jacobi":
            if a is None:
                raise ValueError("jacobi rule requires the exponent a")
            a = mpf(a)
            if a <= -1:
                raise ValueError(f"jacobi exponent must exceed -1, got {a}")
            A, B = mpf(0), a  # weight (1+u)^a on [-1,1]
        else:
            A = B = mpf(0)
        alphas, betas = _jacobi_recurrence(m, A, B)
        diag = alphas
        sub = [mpmath.sqrt(b) for b in betas[1:]]
        eig, z0 = _tridiag_ql(diag, sub)
        order = sorted(range(m), key=lambda i: eig[i])
        half = (hi - lo) / 2
        nodes, weights = [], []
        for i in order:
            u = eig[i]
            w = betas[0] * z0[i] ** 2
            nodes.append(lo + half * (1 + u))
            if kind == "jacobi":
                weights.append(w * half ** (a + 1))
            else:
                weights.append(w * half)
        return QuadratureRule(
            kind=kind,
            lo=lo,
            hi=hi,
            nodes=tuple(nodes),
            weights=tuple(weights),
            a=a if kind == "jacobi" else None,
            ctx=ctx,
        )
