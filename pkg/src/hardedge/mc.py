"""Monte Carlo sampler of Jacobi-unitary spectra (integer parameters).

A spectrum with density proportional to

    prod_i x_i^alpha (1-x_i)^beta * prod_{i<j} (x_i - x_j)^2

on [0,1]^n is realized, for integer alpha and beta, as the eigenvalues
of the Wishart quotient W1 (W1 + W2)^(-1), where W1 = X1 X1* and
W2 = X2 X2* with X1, X2 standard complex Gaussian of shapes
n x (n+alpha) and n x (n+beta).  The quotient is scale invariant, so
the Gaussian variance convention drops out.

Reproducibility contract: every sample owns a counter-based RNG keyed
by (seed, stream), so partitioning the sample index range across any
number of workers cannot change the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RngSpec",
    "SpectrumSample",
    "sample_spectrum",
    "survival_estimate",
]

#: hard cap on resampling attempts per (seed, stream) before giving up
MAX_ATTEMPTS = 64


@dataclass(frozen=True)
class RngSpec:
    """Key of one counter-based random substream.

    Identical (seed, stream) pairs yield bit-identical samples across
    runs and worker counts; `stream` is the per-sample substream index.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= v < 2 ** 64:
                raise ValueError(f"RngSpec.{name} must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.seed, self.stream]))


@dataclass(frozen=True)
class SpectrumSample:
    """One sampled spectrum: strictly increasing eigenvalues in [0, 1].

    `resamples` counts rejected draws (exact ties or eigensolver
    failures, both measure-zero events) before this one was accepted.
    """

    eigenvalues: tuple
    rng: RngSpec
    resamples: int = 0

    def __post_init__(self):
        ev = self.eigenvalues
        if any(not 0 <= x <= 1 for x in ev):
            raise ValueError("eigenvalues must lie in [0, 1]")
        if any(ev[i] >= ev[i + 1] for i in range(len(ev) - 1)):
            raise ValueError("eigenvalues must be strictly increasing")

    @property
    def smallest(self) -> float:
        return self.eigenvalues[0]


def _draw(gen: np.random.Generator, n: int, alpha_int: int, beta_int: int):
    """One Wishart-quotient eigenvalue vector (may contain ties/NaNs)."""
    def cgauss(rows, cols):
        z = gen.standard_normal((rows, 2 * cols))
        return z[:, :cols] + 1j * z[:, cols:]

    x1 = cgauss(n, n + alpha_int)
    x2 = cgauss(n, n + beta_int)
    w1 = x1 @ x1.conj().T
    chol = np.linalg.cholesky(w1 + x2 @ x2.conj().T)
    # W1 (W1+W2)^(-1) is similar to the Hermitian pencil reduction
    # L^(-1) W1 L^(-*) with W1+W2 = L L*.
    y = np.linalg.solve(chol, w1)
    b = np.linalg.solve(chol, y.conj().T).conj().T
    lam = np.linalg.eigvalsh((b + b.conj().T) / 2)
    return np.clip(lam, 0.0, 1.0)


def sample_spectrum(n: int, alpha_int: int, beta_int: int,
                    rng: RngSpec) -> SpectrumSample:
    """Sample one spectrum of the unitary Jacobi law with integer parameters.

    Exact ties and eigensolver failures (both probability zero) are
    rejected and redrawn from the same substream, counted in
    `resamples`; non-integer parameters are out of scope here and are
    served by the deterministic routes.
    """
    if n < 1:
        raise ValueError(f"sample_spectrum requires n >= 1, got {n}")
    for name, v in (("alpha_int", alpha_int), ("beta_int", beta_int)):
        if not isinstance(v, (int, np.integer)) or v < 0:
            raise ValueError(f"sample_spectrum requires integer {name} >= 0, got {v!r}")
    gen = rng.generator()
    for attempt in range(MAX_ATTEMPTS):
        try:
            lam = _draw(gen, n, int(alpha_int), int(beta_int))
        except np.linalg.LinAlgError:
            continue
        if np.any(~np.isfinite(lam)) or np.any(np.diff(lam) <= 0):
            continue
        return SpectrumSample(eigenvalues=tuple(float(x) for x in lam),
                              rng=rng, resamples=attempt)
    raise ArithmeticError(
        f"no valid spectrum in {MAX_ATTEMPTS} attempts for {rng}"
    )


def survival_estimate(samples: int, t, n: int, alpha_int: int,
                      beta_int: int, seed: int):
    """Empirical P(smallest eigenvalue >= t) with its standard error.

    Sample i uses substream RngSpec(seed, i), so the estimate is an
    associative reduction over independent substreams: any worker
    partitioning of the index range reproduces it bit for bit.
    Returns (p_hat, se) with se = sqrt(p_hat (1 - p_hat) / samples).
    """
    if samples < 100:
        raise ValueError(f"survival_estimate requires samples >= 100, got {samples}")
    t = float(t)
    if not 0 < t < 1:
        raise ValueError(f"survival_estimate requires t in (0,1), got {t}")
    hits = 0
    for i in range(samples):
        s = sample_spectrum(n, alpha_int, beta_int, RngSpec(seed, i))
        if s.smallest >= t:
            hits += 1
    p_hat = hits / samples
    se = math.sqrt(p_hat * (1 - p_hat) / samples)
    return p_hat, se
