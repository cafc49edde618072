"""Gaussian atom clouds and the analytic pair-separation / level-shift densities.

Lengths are in micrometers throughout.  A cloud is a frozen set of atom
positions; each axis is an independent zero-mean Gaussian whose standard
deviation sigma relates to the beam waist through w = 2 sigma.  For two
atoms drawn from the same isotropic D-dimensional Gaussian, the distance
R = |r1 - r2| has density

    P_D(R) = [2 pi^(D/2) / Gamma(D/2)] R^(D-1) exp(-R^2/(4 sigma^2)) / (4 pi sigma^2)^(D/2)

and the dimensionless level shift kappa = (sigma/R)^alpha of a power-law
pair potential C/R^alpha has density

    p(kappa) = 2 / (2^D Gamma(D/2) alpha) kappa^(-1 - D/alpha) exp(-kappa^(-2/alpha)/4).

Both densities accept non-integer D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError

# Pairs closer than this are unphysical for a frozen gas with a power-law
# potential; samplers redraw below it and fixed clouds report it.
MIN_SEPARATION_UM = 1e-9


def _rng(seed: int) -> np.random.Generator:
    # Philox is counter-based: substreams via .jumped() are reproducible
    # independent of scheduling.
    return np.random.Generator(np.random.Philox(key=seed))


@dataclass(frozen=True)
class AtomCloud:
    """Frozen atom positions with per-axis Gaussian widths.

    positions has shape (N, 3); axes with sigma = 0 carry identically zero
    coordinates.
    """

    positions: np.ndarray
    axis_sigmas: tuple[float, float, float]
    seed: int

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"positions must have shape (N, 3), got {pos.shape}")
        if pos.shape[0] < 2:
            raise ValueError("a cloud needs at least 2 atoms")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "axis_sigmas", tuple(float(s) for s in self.axis_sigmas))

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        """Number of axes with nonzero width."""
        return sum(1 for s in self.axis_sigmas if s > 0)


@dataclass(frozen=True)
class SeparationSample:
    """Monte Carlo draw of pair distances R > 0."""

    distances: np.ndarray
    dimension: float
    sigma: float

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        if np.any(d <= 0):
            raise ValueError("pair distances must be strictly positive")
        object.__setattr__(self, "distances", d)


def sample_gaussian_cloud(axis_sigmas, count: int, seed: int) -> AtomCloud:
    """Draw ``count`` atoms with independent Gaussian coordinates per axis.

    Deterministic for a fixed seed.  At least one axis width must be
    positive; axes with zero width stay exactly at zero.
    """
    sig = tuple(float(s) for s in axis_sigmas)
    if len(sig) != 3:
        raise ValueError("axis_sigmas must have 3 entries")
    if any(s < 0 for s in sig):
        raise ValueError(f"axis sigmas must be non-negative, got {sig}")
    if all(s == 0 for s in sig):
        raise ValueError("at least one axis sigma must be positive")
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")

    rng = _rng(seed)
    pos = np.zeros((count, 3))
    for ax, s in enumerate(sig):
        if s > 0:
            pos[:, ax] = rng.normal(0.0, s, size=count)
    return AtomCloud(positions=pos, axis_sigmas=sig, seed=seed)


def pair_separation_density(D: float, sigma: float, R) -> np.ndarray | float:
    """Density of the distance between two atoms of one isotropic cloud.

    Supports non-integer D.  Vectorized over R.
    """
    if D <= 0:
        raise ValueError(f"dimension must be positive, got {D}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    R = np.asarray(R, dtype=float)
    if np.any(R < 0):
        raise ValueError("R must be non-negative")
    pref = 2.0 / (math.gamma(D / 2.0) * 2.0**D * sigma**D)
    with np.errstate(divide="ignore"):
        out = pref * R ** (D - 1.0) * np.exp(-(R**2) / (4.0 * sigma**2))
    # R = 0 with D < 1 would diverge; the D > 1 limit is 0, D = 1 finite.
    if D < 1 and np.any(R == 0):
        raise ValueError("density diverges at R = 0 for D < 1")
    return out if out.ndim else float(out)


def sample_pair_separation(D: int, sigma: float, count: int, seed: int) -> SeparationSample:
    """Draw R = |x1 - x2| for two independent D-dimensional Gaussian atoms.

    Zero-distance draws (probability zero up to float rounding) are
    redrawn so every distance is strictly positive.
    """
    if D not in (1, 2, 3):
        raise ValueError(f"D must be 1, 2 or 3, got {D}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")

    rng = _rng(seed)
    out = np.empty(count)
    filled = 0
    while filled < count:
        todo = count - filled
        x1 = rng.normal(0.0, sigma, size=(todo, D))
        x2 = rng.normal(0.0, sigma, size=(todo, D))
        r = np.linalg.norm(x1 - x2, axis=1)
        r = r[r >= MIN_SEPARATION_UM]
        out[filled : filled + r.size] = r
        filled += r.size
    return SeparationSample(distances=out, dimension=float(D), sigma=sigma)


def shift_density_prefactor(D: float, alpha: int) -> float:
    """Normalization constant of the dimensionless shift density."""
    return 2.0 / (2.0**D * math.gamma(D / 2.0) * alpha)


def shift_density(D: float, alpha: int, kappa) -> np.ndarray | float:
    """Density of kappa = (sigma/R)^alpha under the pair-separation law.

    Valid for real D > 0 and alpha in {3, 6}; vectorized over kappa > 0.
    """
    if D <= 0:
        raise ValueError(f"dimension must be positive, got {D}")
    if alpha not in (3, 6):
        raise ValueError(f"alpha must be 3 or 6, got {alpha}")
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise ValueError("kappa must be strictly positive")
    out = (
        shift_density_prefactor(D, alpha)
        * kappa ** (-1.0 - D / alpha)
        * np.exp(-0.25 * kappa ** (-2.0 / alpha))
    )
    return out if out.ndim else float(out)


def estimate_atom_number(rho0: float, w_z: float, w_perp: float) -> float:
    """Interacting-atom number of a cigar, (pi/2)^(3/2) rho0 w_z w_perp^2.

    rho0 in atoms per cubic micrometer, waists in micrometers.
    """
    if rho0 <= 0 or w_z <= 0 or w_perp <= 0:
        raise ValueError("rho0, w_z and w_perp must all be positive")
    return (math.pi / 2.0) ** 1.5 * rho0 * w_z * w_perp**2


def pairwise_distances(cloud: AtomCloud):
    """Condensed upper-triangle pair distances of a cloud.

    Returns (i_idx, j_idx, distances) for pairs i < j.  Raises
    DegenerateGeometryError when any pair sits below the separation guard.
    """
    pos = cloud.positions
    iu, ju = np.triu_indices(cloud.n_atoms, k=1)
    d = np.linalg.norm(pos[iu] - pos[ju], axis=1)
    bad = d < MIN_SEPARATION_UM
    if np.any(bad):
        raise DegenerateGeometryError(list(zip(iu[bad].tolist(), ju[bad].tolist())))
    return iu, ju, d
