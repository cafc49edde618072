"""Pair correlation g2 of the stored spin wave from |P| and the excitation statistics.

With |c_m|^2 the probability of m excitations and P the pair interference
function, the normalized pair correlation closes over the two-body result:

    g2 = sum_{m>=2} |c_m|^2 m(m-1) |P|^(m(m-1))
         / [ sum_{m>=1} |c_m|^2 m |P|^(2(m-1)) ]^2

The numerator exponent m(m-1) counts both orderings of every pair among
the m excitations.  In the denominator only the pairs linking the probed
excitation to the m-1 spectators survive the modulus (the spectator-
spectator phases cancel), leaving exponent 2(m-1).  Both sums keep the
m = 1 term at |P|^0 = 1, the m = 2 terms reproduce the two-excitation
limit

    g2 -> 2 |c_2|^2 |P|^2 / (|c_1|^2 + 2 |c_2|^2 |P|^2)^2

exactly, and g2 = 1 at |P| = 1 for any Poisson distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError

TAIL_BOUND = 1e-9
DEFAULT_M_MAX = 13  # unit-mean Poisson tail beyond 13 is ~4e-12


@dataclass(frozen=True)
class ExcitationDistribution:
    """Probabilities |c_m|^2 for m = 0..m_max excitations.

    The probabilities are not renormalized after truncation; construction
    requires the discarded tail to be below TAIL_BOUND.  The spin-wave
    wavevector k0 is carried as metadata only: it cancels identically in
    every pair-correlation expression.
    """

    probs: np.ndarray
    mean: float
    m_max: int
    k0: tuple[float, float, float] | None = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size != self.m_max + 1:
            raise ValueError("probs must be a 1-d array of length m_max + 1")
        if np.any(p < 0):
            raise ValueError("probabilities must be non-negative")
        tail = 1.0 - p.sum()
        if tail > TAIL_BOUND:
            raise ValueError(
                f"probabilities sum to {p.sum():.12f}; tail {tail:.3e} exceeds {TAIL_BOUND:.1e}"
            )
        object.__setattr__(self, "probs", p)


@dataclass
class CorrelationSeries:
    """g2 values on a grid, with optional per-m diagnostics."""

    grid: np.ndarray
    g2: np.ndarray
    components: dict | None = field(default=None)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.g2 = np.asarray(self.g2, dtype=float)
        if np.any(self.g2 < 0):
            raise ValueError("g2 must be non-negative")


def poisson_tail(mean: float, m_max: int) -> float:
    """P(m > m_max) for a Poisson distribution, summed from the small end."""
    # direct summation is fine here: terms fall off factorially
    total = 0.0
    term = math.exp(-mean)
    for m in range(m_max + 1):
        total += term
        term *= mean / (m + 1)
    return max(1.0 - total, 0.0)


def minimum_m_max(mean: float, bound: float = TAIL_BOUND) -> int:
    """Smallest cutoff whose Poisson tail is below ``bound``."""
    m = max(int(mean), 1)
    while poisson_tail(mean, m) >= bound:
        m += 1
    return m


def poisson_amplitudes(mean: float, m_max: int = DEFAULT_M_MAX) -> ExcitationDistribution:
    """Poisson excitation statistics, probs[m] = exp(-mean) mean^m / m!.

    Fails with the required cutoff named when the discarded tail beyond
    m_max is not below TAIL_BOUND.
    """
    if mean <= 0:
        raise ValueError(f"mean must be positive, got {mean}")
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    tail = poisson_tail(mean, m_max)
    if tail >= TAIL_BOUND:
        raise TruncationError(m_max, tail, TAIL_BOUND, minimum_m_max(mean))
    m = np.arange(m_max + 1)
    logp = -mean + m * math.log(mean) - np.array([math.lgamma(k + 1.0) for k in m])
    return ExcitationDistribution(probs=np.exp(logp), mean=mean, m_max=m_max)


def _g2_point(w: np.ndarray, p: float) -> tuple[float, float, float]:
    m = np.arange(w.size)
    num = float(np.sum(w[2:] * (m * (m - 1))[2:] * p ** (m * (m - 1))[2:]))
    den_sum = float(np.sum(w[1:] * m[1:] * p ** (2 * (m - 1))[1:]))
    return num / den_sum**2, num, den_sum


def g2_series(
    dist: ExcitationDistribution,
    p_abs,
    m_max: int | None = None,
    grid=None,
) -> CorrelationSeries:
    """Multi-excitation g2 for each |P| value on the grid.

    m_max truncates the closure sums (defaults to the distribution's own
    cutoff; must not exceed it).  Requires 0 <= |P| <= 1 pointwise.
    """
    p_abs = np.atleast_1d(np.asarray(p_abs, dtype=float))
    if np.any(p_abs < 0) or np.any(p_abs > 1):
        raise ValueError("|P| must lie in [0, 1]")
    if m_max is None:
        m_max = dist.m_max
    if not 1 <= m_max <= dist.m_max:
        raise ValueError(f"m_max must be in [1, {dist.m_max}], got {m_max}")
    w = dist.probs[: m_max + 1]
    out = np.empty(p_abs.shape)
    nums = np.empty(p_abs.shape)
    dens = np.empty(p_abs.shape)
    for k, p in enumerate(p_abs):
        out[k], nums[k], dens[k] = _g2_point(w, p)
    if grid is None:
        grid = np.arange(p_abs.size, dtype=float)
    return CorrelationSeries(
        grid=grid, g2=out, components={"numerator": nums, "denominator_sum": dens, "m_max": m_max}
    )


def g2_longtime(dist: ExcitationDistribution, p_abs: float) -> float:
    """Two-excitation limit of g2, exact once |P| << 1.

    Identical to g2_series truncated at m = 2 for any |P|.
    """
    if not 0 <= p_abs <= 1:
        raise ValueError("|P| must lie in [0, 1]")
    c1 = float(dist.probs[1])
    c2 = float(dist.probs[2]) if dist.m_max >= 2 else 0.0
    num = 2.0 * c2 * p_abs**2
    return num / (c1 + num) ** 2


def g2_double_only(dist: ExcitationDistribution, p_abs_series, grid=None) -> CorrelationSeries:
    """g2 retaining only single and double excitations (m_max = 2)."""
    return g2_series(dist, p_abs_series, m_max=2, grid=grid)


def apply_background(g2, g2_bg: float):
    """Fold detection background noise in: g2 -> (1 - g2_bg) g2 + g2_bg.

    Fixes g2 = 1 and preserves ordering.
    """
    if not 0.0 <= g2_bg <= 1.0:
        raise ValueError(f"g2_bg must lie in [0, 1], got {g2_bg}")
    g2 = np.asarray(g2, dtype=float)
    out = (1.0 - g2_bg) * g2 + g2_bg
    return out if out.ndim else float(out)
