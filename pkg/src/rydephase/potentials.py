"""Power-law Rydberg pair potentials and coefficient models vs principal quantum number.

The stored strength is C_alpha/hbar in rad um^alpha / us, so a pair at
distance R um acquires the level shift Delta = (C/hbar)/R^alpha in rad/us.
Coefficients quoted as 2pi x MHz um^alpha convert by multiplying with 2pi.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .cloud import MIN_SEPARATION_UM
from .errors import DegenerateGeometryError

import numpy as np

RB_NS_QUANTUM_DEFECT = 3.13


@dataclass(frozen=True)
class PotentialSpec:
    """Two-body potential C_alpha / R^alpha.

    alpha = 3 is the dipole-dipole law, alpha = 6 van der Waals;
    c_over_hbar is C_alpha/hbar in rad um^alpha / us.
    """

    alpha: int
    c_over_hbar: float

    def __post_init__(self):
        if self.alpha not in (3, 6):
            raise ValueError(f"alpha must be 3 or 6, got {self.alpha}")
        if self.c_over_hbar <= 0:
            raise ValueError(f"c_over_hbar must be positive, got {self.c_over_hbar}")


@dataclass(frozen=True)
class CoefficientModel:
    """Map from principal quantum number n to C_alpha/hbar.

    Two kinds: a scaling law anchored at one level,

        C(n) = anchor_value * [(n - delta) / (anchor_n - delta)]^exponent,

    or a table of (n, C/hbar) rows interpolated linearly in n - delta with
    no extrapolation.  The default exponent 11 fits the growth of the
    R^-6 coefficient; 4 suits the R^-3 one.
    """

    kind: str  # "scaling_law" | "table"
    anchor_n: int = 100
    anchor_value: float = 2 * math.pi * 5.3e7
    exponent: float = 11.0
    quantum_defect: float = RB_NS_QUANTUM_DEFECT
    alpha: int = 6
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("scaling_law", "table"):
            raise ValueError(f"kind must be 'scaling_law' or 'table', got {self.kind!r}")
        if self.anchor_value <= 0:
            raise ValueError("anchor_value must be positive")
        if self.alpha not in (3, 6):
            raise ValueError(f"alpha must be 3 or 6, got {self.alpha}")
        if self.kind == "table":
            if not self.table or len(self.table) < 2:
                raise ValueError("table mode needs at least two (n, value) rows")
            ns = [row[0] for row in self.table]
            if any(b <= a for a, b in zip(ns, ns[1:])):
                raise ValueError("table rows must be strictly increasing in n")


def load_coefficient_table(path) -> tuple[tuple[float, float], ...]:
    """Read a coefficient table CSV with header ``n,c_over_hbar_2pi_MHz_um_alpha``.

    Values are converted from 2pi x MHz um^alpha to rad um^alpha / us.
    """
    rows = []
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["n", "c_over_hbar_2pi_MHz_um_alpha"]:
            raise ValueError(
                f"unexpected header {header!r}; expected n,c_over_hbar_2pi_MHz_um_alpha"
            )
        for rec in reader:
            if not rec:
                continue
            rows.append((float(rec[0]), 2 * math.pi * float(rec[1])))
    return tuple(rows)


def coefficient_for_level(n: int, model: CoefficientModel) -> float:
    """Evaluate C_alpha/hbar at principal quantum number n."""
    delta = model.quantum_defect
    if n <= delta:
        raise ValueError(f"n must exceed the quantum defect {delta}, got {n}")
    if model.kind == "scaling_law":
        return model.anchor_value * ((n - delta) / (model.anchor_n - delta)) ** model.exponent
    ns = [row[0] for row in model.table]
    if not ns[0] <= n <= ns[-1]:
        raise ValueError(f"n={n} outside table range [{ns[0]}, {ns[-1]}]; no extrapolation")
    x = n - delta
    xs = [v - delta for v in ns]
    vals = [row[1] for row in model.table]
    return float(np.interp(x, xs, vals))


def pairwise_shift(r1, r2, pot: PotentialSpec) -> float:
    """Level shift Delta = (C/hbar)/|r1 - r2|^alpha of one atom pair, rad/us."""
    r = float(np.linalg.norm(np.asarray(r1, dtype=float) - np.asarray(r2, dtype=float)))
    if r < MIN_SEPARATION_UM:
        raise DegenerateGeometryError([(0, 1)])
    return pot.c_over_hbar / r**pot.alpha


def characteristic_frequency(pot: PotentialSpec, sigma: float) -> float:
    """Typical shift Omega = (C/hbar)/sigma^alpha; tau = Omega t is dimensionless."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return pot.c_over_hbar / sigma**pot.alpha
