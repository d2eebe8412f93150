"""Working-precision context shared by every numerical route.

All extended-precision arithmetic in this package goes through mpmath.
A :class:`PrecisionCtx` pins the number of significand bits for one
computation; operations open a temporary mpmath precision scope, so
concurrent callers with different contexts do not interfere with the
global mpmath state beyond the scope of a single call.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

#: Guard bits added on top of the requested precision inside every
#: operation, so results are correct to ~2^(-bits) after rounding.
GUARD_BITS = 16


class PrecisionError(ArithmeticError):
    """A computation lost so much accuracy that the result is unusable.

    Typically raised when a Cholesky factorization of a moment matrix
    fails; the fix is to rerun with a larger ``bits``.
    """


@dataclass(frozen=True)
class PrecisionCtx:
    """Immutable working precision, in bits of significand.

    ``bits`` must be at least 53 (IEEE double).  All operations taking a
    context produce results with relative error <= 2^(-bits + g) where
    g = ``GUARD_BITS``.
    """

    bits: int = 256

    def __post_init__(self) -> None:
        if self.bits < 53:
            raise ValueError(f"PrecisionCtx.bits must be >= 53, got {self.bits}")

    @property
    def eps(self) -> mpf:
        """Unit roundoff 2^(-bits) at this precision."""
        with self.workprec():
            return mpf(2) ** (-self.bits)

    def workprec(self):
        """Context manager setting mpmath precision to bits + guard."""
        return mpmath.workprec(self.bits + GUARD_BITS)

    def mpf(self, x) -> mpf:
        """Convert ``x`` to an mpf at this context's precision.

        Strings and integers convert exactly; floats are taken at face
        value (they are already exact binary rationals).
        """
        with self.workprec():
            return mpf(x)


#: Default context used when callers do not pass one explicitly.
DEFAULT_CTX = PrecisionCtx(256)
