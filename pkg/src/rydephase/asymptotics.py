"""Closed-form long-time behavior of the pair interference function.

Steepest-descent evaluation of P(tau) = int p(kappa) exp(-i kappa tau) dkappa
for the power-law shift densities gives, at leading order,

    dipole-dipole (R^-3):   P_D(tau) -> A_D tau^((D-1)/5) exp(-B tau^(2/5))
    van der Waals (R^-6):   P_D(tau) -> C_D tau^((D-1)/8) exp(-F tau^(1/4))

with complex constants fixed by the saddle.  The first-order correction
multiplies the leading term by {1 + phase * c(D) / (6 tau)^(2/5)} (and the
(12 tau)^(1/4) analogue), where c(D) is a real quadratic with a zero at
D = 2 for both potentials.

All phase signs here follow the exp(-i kappa tau) transform of a positive
shift density, so Im P <= 0 at small tau and arg P drifts negative; the
saddle sits in the lower half plane.  Real D > 0 is supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

Order = Literal["leading", "corrected"]

_SQRT_PI_OVER_5 = math.sqrt(math.pi / 5.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def dd_constants(D: float) -> tuple[complex, complex]:
    """Saddle constants (A_D, B) of the dipole-dipole decay law."""
    if D <= 0:
        raise ValueError(f"dimension must be positive, got {D}")
    B = 2.5 * 6.0 ** (-0.6) * np.exp(1j * math.pi / 5.0)
    A = (
        _SQRT_PI_OVER_5
        * np.exp(1j * math.pi * (D - 1.0) / 10.0)
        * 6.0 ** ((D - 1.0) / 5.0)
        / (2.0 ** (D - 2.0) * math.gamma(D / 2.0))
    )
    return complex(A), complex(B)


def vdw_constants(D: float) -> tuple[complex, complex]:
    """Saddle constants (C_D, F) of the van der Waals decay law."""
    if D <= 0:
        raise ValueError(f"dimension must be positive, got {D}")
    F = (12.0**0.25 / 3.0) * np.exp(1j * math.pi / 8.0)
    C = (
        _SQRT_2PI
        * np.exp(1j * math.pi * (D - 1.0) / 16.0)
        * 12.0 ** ((D - 1.0) / 8.0)
        / (2.0**D * math.gamma(D / 2.0))
    )
    return complex(C), complex(F)


def dd_correction_coefficient(D: float) -> float:
    """Real coefficient of the first dipole-dipole correction, zero part at D = 2."""
    return 0.6 * (1.0 + D / 3.0) * (D - 2.0) + 14.0 / 15.0


def vdw_correction_coefficient(D: float) -> float:
    """Real coefficient of the first van der Waals correction, zero part at D = 2."""
    return 0.75 * (1.0 + D / 6.0) * (D - 2.0) + 35.0 / 24.0


def _check_tau(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise ValueError("tau must be strictly positive")
    return tau


def dd_asymptote(D: float, tau, order: Order = "leading"):
    """Long-time dipole-dipole P(tau); corrected order adds the first
    1/(6 tau)^(2/5) term.  Valid for tau >> 1 (not enforced)."""
    if order not in ("leading", "corrected"):
        raise ValueError(f"order must be 'leading' or 'corrected', got {order!r}")
    t = _check_tau(tau)
    A, B = dd_constants(D)
    val = A * t ** ((D - 1.0) / 5.0) * np.exp(-B * t**0.4)
    if order == "corrected":
        # correction phase is the conjugate of B's phase
        val = val * (1.0 + np.exp(-1j * math.pi / 5.0) / (6.0 * t) ** 0.4 * dd_correction_coefficient(D))
    return val if val.ndim else complex(val)


def vdw_asymptote(D: float, tau, order: Order = "leading"):
    """Long-time van der Waals P(tau); corrected order adds the first
    1/(12 tau)^(1/4) term.  Valid for tau >> 1 (not enforced)."""
    if order not in ("leading", "corrected"):
        raise ValueError(f"order must be 'leading' or 'corrected', got {order!r}")
    t = _check_tau(tau)
    C, F = vdw_constants(D)
    val = C * t ** ((D - 1.0) / 8.0) * np.exp(-F * t**0.25)
    if order == "corrected":
        val = val * (1.0 + np.exp(-1j * math.pi / 8.0) / (12.0 * t) ** 0.25 * vdw_correction_coefficient(D))
    return val if val.ndim else complex(val)


@dataclass(frozen=True)
class AsymptoteSpec:
    """Which asymptotic law to evaluate: potential exponent, dimension, order."""

    alpha: int
    D: float
    order: Order = "leading"

    def __post_init__(self):
        if self.alpha not in (3, 6):
            raise ValueError(f"alpha must be 3 or 6, got {self.alpha}")
        if self.order not in ("leading", "corrected"):
            raise ValueError(f"order must be 'leading' or 'corrected', got {self.order!r}")

    def evaluate(self, tau):
        if self.alpha == 3:
            return dd_asymptote(self.D, tau, self.order)
        return vdw_asymptote(self.D, tau, self.order)
