"""The atom pair interference function P(t) by three independent routes.

P(t) is the ensemble average of exp(-i Delta t) over atom pairs:

  * pair_sum     -- exact double sum over one sampled cloud, O(N^2) pairs,
                    value (N-1)/N at t = 0;
  * distance_mc  -- Monte Carlo over the analytic pair-distance law,
                    sample mean of exp(-i kappa tau) with kappa = (sigma/R)^alpha;
  * quadrature   -- deterministic Fourier integral of the shift density,
                    P(tau) = int_0^inf p(kappa) exp(-i kappa tau) dkappa.

All give Im P <= 0 at small positive tau for a repulsive potential, and
P(-tau) = conj(P(tau)) since p is real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .asymptotics import Order  # noqa: F401  (re-exported for callers)
from .cloud import AtomCloud, pairwise_distances, shift_density_prefactor
from .errors import QuadratureError
from .potentials import PotentialSpec

EULER_GAMMA = 0.5772156649015329

# absolute error budget for one quadrature value, summed over segments
QUAD_TOL = 1e-8
_SEG_EPSABS = 1e-11
_SEG_LIMIT = 600


@dataclass
class ComplexSeries:
    """Complex P on a time grid, with per-point standard errors for MC routes.

    grid is dimensionless tau when grid_is_tau, physical time in us
    otherwise.  stderr components are reported separately for the real and
    imaginary parts; deterministic methods leave them None.
    """

    grid: np.ndarray
    values: np.ndarray
    stderr_re: np.ndarray | None = None
    stderr_im: np.ndarray | None = None
    grid_is_tau: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values must have the same shape")
        if np.any(np.abs(self.values) > 1.0 + 1e-9):
            raise ValueError("|P| must not exceed 1")

    def modsq(self) -> np.ndarray:
        """|P|^2 with the MC noise bias removed when standard errors exist.

        The naive |mean|^2 is biased upward by the estimator variance;
        subtracting (se_re^2 + se_im^2) corrects it and may go slightly
        negative in the deep tail.
        """
        raw = np.abs(self.values) ** 2
        if self.stderr_re is None:
            return raw
        return raw - (self.stderr_re**2 + self.stderr_im**2)

    def combined_stderr(self) -> np.ndarray:
        """Euclidean norm of the component standard errors (0 if exact)."""
        if self.stderr_re is None:
            return np.zeros_like(self.grid)
        return np.hypot(self.stderr_re, self.stderr_im)


def pair_series_from_shifts(n_atoms: int, iu, ju, shifts, times, meta=None) -> ComplexSeries:
    """Interference series from precomputed pair shifts (rad/us).

    Serves coefficient scans that reuse one cloud's pair distances across
    potentials.  Standard errors come from a delete-one-atom jackknife,
    which estimates the cloud-to-cloud scatter of the estimator.
    """
    times = np.asarray(times, dtype=float)
    n = n_atoms
    values = np.empty(times.shape, dtype=complex)
    se_re = np.empty(times.shape)
    se_im = np.empty(times.shape)
    for k, t in enumerate(times):
        ph = np.exp(-1j * shifts * t)
        total = 2.0 * ph.sum()
        values[k] = total / n**2
        # row sums: each pair contributes to both of its atoms
        row = (
            np.bincount(iu, weights=ph.real, minlength=n)
            + np.bincount(ju, weights=ph.real, minlength=n)
            + 1j
            * (
                np.bincount(iu, weights=ph.imag, minlength=n)
                + np.bincount(ju, weights=ph.imag, minlength=n)
            )
        )
        loo = (total - 2.0 * row) / (n - 1) ** 2
        se_re[k] = math.sqrt((n - 1) / n * np.sum((loo.real - loo.real.mean()) ** 2))
        se_im[k] = math.sqrt((n - 1) / n * np.sum((loo.imag - loo.imag.mean()) ** 2))

    return ComplexSeries(
        grid=times,
        values=values,
        stderr_re=se_re,
        stderr_im=se_im,
        grid_is_tau=False,
        meta=dict(meta or {}),
    )


def pair_sum(cloud: AtomCloud, pot: PotentialSpec, times) -> ComplexSeries:
    """Exact interference sum (2/N^2) sum_{i<j} exp(-i Delta_ij t) over one cloud.

    The N(N-1)/2 shifts are computed once and reused across the grid.
    """
    iu, ju, dist = pairwise_distances(cloud)
    shifts = pot.c_over_hbar / dist**pot.alpha
    return pair_series_from_shifts(
        cloud.n_atoms,
        iu,
        ju,
        shifts,
        times,
        meta={"method": "pair_sum", "n_atoms": cloud.n_atoms, "seed": cloud.seed, "alpha": pot.alpha},
    )


def distance_mc(D: int, alpha: int, taus, samples: int, seed: int) -> ComplexSeries:
    """Monte Carlo estimate of P(tau) from the pair-distance distribution.

    Each grid point draws its own independent Philox substream, so results
    do not depend on evaluation order or thread count.  tau = 0 is exact.
    """
    if D not in (1, 2, 3):
        raise ValueError(f"D must be 1, 2 or 3, got {D}")
    if alpha not in (3, 6):
        raise ValueError(f"alpha must be 3 or 6, got {alpha}")
    if samples < 100:
        raise ValueError(f"samples must be >= 100, got {samples}")
    taus = np.asarray(taus, dtype=float)

    base = np.random.Philox(key=seed)
    values = np.empty(taus.shape, dtype=complex)
    se_re = np.zeros(taus.shape)
    se_im = np.zeros(taus.shape)
    root = 1.0 / math.sqrt(samples)
    for k, tau in enumerate(taus):
        if tau == 0.0:
            values[k] = 1.0
            continue
        rng = np.random.Generator(base.jumped(k))
        x1 = rng.normal(size=(samples, D))
        x2 = rng.normal(size=(samples, D))
        # sigma cancels from kappa = (sigma/R)^alpha; draw at sigma = 1
        r = np.linalg.norm(x1 - x2, axis=1)
        r = np.maximum(r, 1e-300)
        ph = np.exp(-1j * tau * r ** (-float(alpha)))
        values[k] = ph.mean()
        se_re[k] = ph.real.std(ddof=1) * root
        se_im[k] = ph.imag.std(ddof=1) * root

    return ComplexSeries(
        grid=taus,
        values=values,
        stderr_re=se_re,
        stderr_im=se_im,
        grid_is_tau=True,
        meta={"method": "distance_mc", "samples": samples, "seed": seed, "D": D, "alpha": alpha},
    )


def _density_lower_quadrant(D: float, alpha: int, z: complex) -> complex:
    # principal-branch continuation of the shift density; analytic for
    # Re z >= 0, Im z <= 0, z != 0
    return shift_density_prefactor(D, alpha) * z ** (-1.0 - D / alpha) * np.exp(
        -0.25 * z ** (-2.0 / alpha)
    )


def quadrature_point(D: float, alpha: int, tau: float, tol: float = QUAD_TOL) -> complex:
    """Deterministic P(tau) for one tau; supports real D > 0 and any tau.

    The integration path splits at kappa_c = max(1, 1/|tau|): the finite
    segment is integrated on the real axis with oscillatory-weight
    adaptive quadrature, and the remainder follows the rotated contour
    kappa = kappa_c - i s, where exp(-i kappa tau) turns into exp(-s tau)
    decay and the integrand is analytic.  Negative tau uses
    P(-tau) = conj(P(tau)).
    """
    if D <= 0:
        raise ValueError(f"dimension must be positive, got {D}")
    if alpha not in (3, 6):
        raise ValueError(f"alpha must be 3 or 6, got {alpha}")
    if tau == 0.0:
        return 1.0 + 0.0j
    if tau < 0.0:
        return complex(np.conj(quadrature_point(D, alpha, -tau, tol)))

    pref = shift_density_prefactor(D, alpha)
    inv_alpha = 1.0 + D / alpha
    two_over_alpha = 2.0 / alpha

    def dens(k):
        if k <= 0.0:
            return 0.0
        return pref * k ** (-inv_alpha) * math.exp(-0.25 * k ** (-two_over_alpha))

    kc = max(1.0, 1.0 / tau)
    if tau >= 1.0:
        # up to tau/(2 pi) oscillations on [0, 1]: oscillatory-weight rule
        re, err_re = quad(dens, 0.0, kc, weight="cos", wvar=tau, epsabs=_SEG_EPSABS, limit=_SEG_LIMIT)
        im, err_im = quad(dens, 0.0, kc, weight="sin", wvar=tau, epsabs=_SEG_EPSABS, limit=_SEG_LIMIT)
    else:
        # kc = 1/tau: the phase spans <= 1 rad, plain adaptive rules suffice;
        # split where the density structure lives
        mid = min(50.0, kc)
        re = im = err_re = err_im = 0.0
        for lo, hi in ((0.0, mid), (mid, kc)):
            if hi <= lo:
                continue
            v, e = quad(lambda k: dens(k) * math.cos(k * tau), lo, hi, epsabs=_SEG_EPSABS, limit=_SEG_LIMIT)
            re += v
            err_re += e
            v, e = quad(lambda k: dens(k) * math.sin(k * tau), lo, hi, epsabs=_SEG_EPSABS, limit=_SEG_LIMIT)
            im += v
            err_im += e

    # rotated tail, substituting s = u / tau so the weight is exp(-u);
    # the 1/tau prefactor means the tail tolerance must scale with tau
    def tail(u):
        z = kc - 1j * (u / tau)
        return _density_lower_quadrant(D, alpha, z) * math.exp(-u)

    tail_eps = _SEG_EPSABS * min(tau, 1.0)
    tr, err_tr = quad(lambda u: tail(u).real, 0.0, np.inf, epsabs=tail_eps, limit=_SEG_LIMIT)
    ti, err_ti = quad(lambda u: tail(u).imag, 0.0, np.inf, epsabs=tail_eps, limit=_SEG_LIMIT)

    achieved = err_re + err_im + (err_tr + err_ti) / tau
    if achieved > tol:
        raise QuadratureError(
            f"oscillatory quadrature did not converge at D={D}, alpha={alpha}, tau={tau}",
            achieved,
        )
    head = re - 1j * im
    tail_val = -1j * np.exp(-1j * kc * tau) / tau * (tr + 1j * ti)
    return complex(head + tail_val)


def quadrature(D: float, alpha: int, taus, tol: float = QUAD_TOL) -> ComplexSeries:
    """P(tau) on a grid by deterministic quadrature (absolute error <= tol)."""
    taus = np.asarray(taus, dtype=float)
    values = np.array([quadrature_point(D, alpha, t, tol) for t in taus])
    # clip eps-level overshoot of |P| <= 1 at tiny tau
    mod = np.abs(values)
    over = mod > 1.0
    if np.any(over):
        values[over] /= mod[over]
    return ComplexSeries(
        grid=taus,
        values=values,
        grid_is_tau=True,
        meta={"method": "quadrature", "D": D, "alpha": alpha, "tol": tol},
    )


def short_time_dd3(tau: float) -> complex:
    """Small-tau expansion of the three-dimensional dipole-dipole P(tau).

    P = 1 - (sqrt(pi) tau / 12) [1 - (6i/pi)(ln(tau^(1/3)/2) + 5 gamma/6 - 1/3)]

    with gamma the Euler-Mascheroni constant.  Accurate for tau << 1;
    larger tau is allowed but the truncation error grows.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    bracket = 1.0 - (6j / math.pi) * (
        math.log(tau ** (1.0 / 3.0) / 2.0) + 5.0 * EULER_GAMMA / 6.0 - 1.0 / 3.0
    )
    return 1.0 - (math.sqrt(math.pi) * tau / 12.0) * bracket


def ramsey_transform(series: ComplexSeries) -> ComplexSeries:
    """Map P -> (1 + P)/2, the pair amplitude after one two-pulse cycle.

    The input values must be the bare interference function evaluated at
    twice each output grid time (evaluate the underlying method at 2t
    directly; do not interpolate).  The output keeps the input grid.
    """
    vals = 0.5 * (1.0 + series.values)
    meta = dict(series.meta)
    meta["ramsey"] = True
    se_re = None if series.stderr_re is None else 0.5 * series.stderr_re
    se_im = None if series.stderr_im is None else 0.5 * series.stderr_im
    return ComplexSeries(
        grid=series.grid.copy(),
        values=vals,
        stderr_re=se_re,
        stderr_im=se_im,
        grid_is_tau=series.grid_is_tau,
        meta=meta,
    )
