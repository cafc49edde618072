"""Declarative experiment configuration: JSON in, validated dataclasses out.

Every physical quantity in the JSON document carries its unit in the key
name (``sigma_um``, ``c_over_hbar_2pi_MHz_um6``, ``storage_time_us``),
since unit mix-ups are the dominant failure mode in this domain.
Coefficients are quoted as 2pi x MHz um^alpha and converted to
rad um^alpha / us on load.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .potentials import CoefficientModel, PotentialSpec, load_coefficient_table

SCENARIOS = ("fig1", "decay", "shorttime", "ramsey", "custom")
METHODS = (
    "pair_sum",
    "distance_mc",
    "quadrature",
    "asymptote_leading",
    "asymptote_corrected",
    "short_time",
)
OUTPUT_KINDS = ("csv", "json", "svg")


@dataclass(frozen=True)
class GeometryConfig:
    """Either explicit per-axis widths or an isotropic (D, sigma) pair."""

    axis_sigmas_um: tuple[float, float, float] | None = None
    dimension: float | None = None
    sigma_um: float | None = None

    def resolved_axis_sigmas(self) -> tuple[float, float, float] | None:
        """Per-axis widths for cloud sampling, if the geometry defines them."""
        if self.axis_sigmas_um is not None:
            return self.axis_sigmas_um
        if self.dimension is not None and float(self.dimension).is_integer() and self.sigma_um:
            d = int(self.dimension)
            return tuple(self.sigma_um if ax < d else 0.0 for ax in range(3))
        return None

    def resolved_dimension(self) -> float | None:
        if self.dimension is not None:
            return float(self.dimension)
        if self.axis_sigmas_um is not None:
            nz = [s for s in self.axis_sigmas_um if s > 0]
            if nz and all(abs(s - nz[0]) < 1e-12 for s in nz):
                return float(len(nz))
        return None

    def resolved_sigma(self) -> float | None:
        if self.sigma_um is not None:
            return float(self.sigma_um)
        if self.axis_sigmas_um is not None:
            nz = [s for s in self.axis_sigmas_um if s > 0]
            if nz and all(abs(s - nz[0]) < 1e-12 for s in nz):
                return float(nz[0])
        return None


@dataclass(frozen=True)
class TimeGridConfig:
    start: float
    stop: float
    points: int
    spacing: str = "linear"  # linear | log
    unit: str = "tau"  # tau | us

    def build(self):
        import numpy as np

        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class McConfig:
    atom_count: int = 1000
    distance_samples: int = 100_000
    seed: int = 7


@dataclass(frozen=True)
class ExcitationConfig:
    mean: float = 1.0
    m_max: int = 13


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    geometry: GeometryConfig
    methods: tuple[str, ...]
    excitation: ExcitationConfig = ExcitationConfig()
    mc: McConfig = McConfig()
    time_grid: TimeGridConfig | None = None
    g2_bg: float = 0.0
    outputs: tuple[str, ...] = ("csv", "json")
    # direct potential (decay uses one per alpha)
    potential_specs: tuple[PotentialSpec, ...] = ()
    # coefficient-model potential (fig1)
    coefficient_model: CoefficientModel | None = None
    n_start: int | None = None
    n_stop: int | None = None
    storage_time_us: float | None = None
    dimensions: tuple[int, ...] = ()
    overlay_csv: str | None = None
    label: str = ""

    def validate(self) -> list[str]:
        """Collect every violated field; empty list means valid."""
        bad: list[str] = []
        if self.scenario not in SCENARIOS:
            bad.append(f"scenario: {self.scenario!r} not one of {SCENARIOS}")
        if not self.methods:
            bad.append("methods: at least one method must be selected")
        for m in self.methods:
            if m not in METHODS:
                bad.append(f"methods: unknown method {m!r}")
        for o in self.outputs:
            if o not in OUTPUT_KINDS:
                bad.append(f"outputs: unknown output kind {o!r}")
        if self.mc.atom_count < 2:
            bad.append(f"mc.atom_count: must be >= 2, got {self.mc.atom_count}")
        if self.mc.distance_samples < 100:
            bad.append(f"mc.distance_samples: must be >= 100, got {self.mc.distance_samples}")
        if not 0.0 <= self.g2_bg <= 1.0:
            bad.append(f"background.g2_bg: must lie in [0, 1], got {self.g2_bg}")
        if self.excitation.mean <= 0:
            bad.append(f"excitation.mean: must be positive, got {self.excitation.mean}")

        if self.time_grid is not None:
            tg = self.time_grid
            if tg.points < 2:
                bad.append(f"time_grid.points: must be >= 2, got {tg.points}")
            if tg.spacing not in ("linear", "log"):
                bad.append(f"time_grid.spacing: must be linear or log, got {tg.spacing!r}")
            if tg.unit not in ("tau", "us"):
                bad.append(f"time_grid.unit: must be tau or us, got {tg.unit!r}")
            if not tg.stop > tg.start:
                bad.append("time_grid: stop must exceed start (grid strictly increasing)")
            if tg.spacing == "log" and tg.start <= 0:
                bad.append("time_grid.start: log spacing needs start > 0")
        elif self.scenario != "fig1":
            bad.append("time_grid: required for every scenario except fig1")

        # method/geometry compatibility
        axis = self.geometry.resolved_axis_sigmas()
        dim = self.geometry.resolved_dimension()
        if axis is not None and (len(axis) != 3 or any(s < 0 for s in axis) or all(s == 0 for s in axis)):
            bad.append(f"geometry.axis_sigmas_um: need 3 non-negative entries, one positive; got {axis}")
        if dim is not None and dim <= 0:
            bad.append(f"geometry.dimension: must be positive, got {dim}")
        sig = self.geometry.resolved_sigma()
        if sig is not None and sig <= 0:
            bad.append(f"geometry.sigma_um: must be positive, got {sig}")
        # decay sweeps its own integer dimension list over an isotropic sigma
        decay_sweep = self.scenario == "decay" and bool(self.dimensions) and sig is not None
        integer_d = dim is not None and float(dim).is_integer()
        for m in self.methods:
            if decay_sweep:
                continue
            if m == "pair_sum" and axis is None:
                bad.append("methods.pair_sum: requires axis_sigmas (or integer dimension + sigma)")
            if m in ("distance_mc", "pair_sum") and dim is not None and not integer_d:
                bad.append(f"methods.{m}: non-integer dimension {dim} not supported")
            if m == "distance_mc" and dim is None:
                bad.append("methods.distance_mc: geometry must resolve to an isotropic dimension")
            if m in ("quadrature", "asymptote_leading", "asymptote_corrected", "short_time") and dim is None:
                bad.append(f"methods.{m}: geometry must resolve to a dimension")

        if self.scenario == "fig1":
            if self.coefficient_model is None:
                bad.append("potential: fig1 needs a coefficient model")
            if self.n_start is None or self.n_stop is None or self.n_stop < self.n_start:
                bad.append("potential.n_start/n_stop: need n_start <= n_stop")
            if not self.storage_time_us or self.storage_time_us <= 0:
                bad.append("storage_time_us: must be positive for fig1")
            if "pair_sum" not in self.methods:
                bad.append("methods: fig1 runs on pair_sum")
        elif self.scenario == "decay":
            if len(self.potential_specs) == 0:
                bad.append("potential: decay needs at least one of the dd / vdw coefficients")
            if not self.dimensions:
                bad.append("dimensions: decay needs a non-empty list of integer dimensions")
            if any(d not in (1, 2, 3) for d in self.dimensions):
                bad.append(f"dimensions: entries must be 1, 2 or 3; got {self.dimensions}")
        elif self.scenario in ("shorttime", "ramsey", "custom"):
            if len(self.potential_specs) != 1:
                bad.append(f"potential: {self.scenario} needs exactly one potential")
        if "short_time" in self.methods:
            if dim != 3 or (self.potential_specs and self.potential_specs[0].alpha != 3):
                bad.append("methods.short_time: only defined for D = 3, alpha = 3")
        return bad


def builtin_scenarios() -> dict[str, dict]:
    """Default JSON documents for every built-in scenario."""
    return {
        "fig1": {
            "scenario": "fig1",
            "geometry": {"axis_sigmas_um": [7.5, 3.2, 3.2]},
            "potential": {
                "model": {
                    "kind": "scaling_law",
                    "alpha": 6,
                    "anchor_n": 100,
                    "anchor_value_2pi_MHz_um6": 5.3e7,
                    "exponent": 11.0,
                    "quantum_defect": 3.13,
                },
                "n_start": 50,
                "n_stop": 102,
            },
            "storage_time_us": 0.3,
            "excitation": {"mean": 1.0, "m_max": 13},
            "mc": {"atom_count": 1000, "distance_samples": 100000, "seed": 7},
            "background": {"g2_bg": 0.0},
            "methods": ["pair_sum"],
            "outputs": ["csv", "json", "svg"],
        },
        "decay": {
            "scenario": "decay",
            "geometry": {"sigma_um": 15.0},
            "dimensions": [1, 2, 3],
            "potential": {
                "dd_c_over_hbar_2pi_MHz_um3": 1.0e5,
                "vdw_c_over_hbar_2pi_MHz_um6": 5.3e7,
            },
            "time_grid": {"start": 1.0, "stop": 2000.0, "points": 40, "spacing": "log", "unit": "tau"},
            "excitation": {"mean": 1.0, "m_max": 13},
            "mc": {"atom_count": 1000, "distance_samples": 200000, "seed": 11},
            "background": {"g2_bg": 0.0},
            "methods": ["pair_sum", "asymptote_leading", "asymptote_corrected"],
            "outputs": ["csv", "json", "svg"],
        },
        "shorttime": {
            "scenario": "shorttime",
            "geometry": {"dimension": 3, "sigma_um": 15.0},
            "potential": {"alpha": 3, "c_over_hbar_2pi_MHz_um3": 1.0e5},
            "time_grid": {"start": 1e-3, "stop": 2.0, "points": 60, "spacing": "log", "unit": "tau"},
            "mc": {"atom_count": 1000, "distance_samples": 100000, "seed": 5},
            "methods": ["quadrature", "short_time"],
            "outputs": ["csv", "json", "svg"],
        },
        "ramsey": {
            "scenario": "ramsey",
            "geometry": {"dimension": 3, "sigma_um": 30.0},
            "potential": {"alpha": 3, "c_over_hbar_2pi_MHz_um3": 1.0e5},
            "time_grid": {"start": 0.02, "stop": 400.0, "points": 120, "spacing": "log", "unit": "tau"},
            "excitation": {"mean": 1.0, "m_max": 13},
            "mc": {"atom_count": 1000, "distance_samples": 100000, "seed": 3},
            "methods": ["quadrature"],
            "outputs": ["csv", "json", "svg"],
        },
    }


def _potential_from_dict(d: dict, bad: list[str]):
    """Parse the 'potential' block: direct coefficients and/or a model."""
    specs: list[PotentialSpec] = []
    model = None
    if "alpha" in d:
        alpha = int(d["alpha"])
        key = f"c_over_hbar_2pi_MHz_um{alpha}"
        if key not in d:
            bad.append(f"potential.{key}: required with alpha={alpha}")
        else:
            try:
                specs.append(PotentialSpec(alpha=alpha, c_over_hbar=2 * math.pi * float(d[key])))
            except ValueError as exc:
                bad.append(f"potential: {exc}")
    if "dd_c_over_hbar_2pi_MHz_um3" in d:
        specs.append(PotentialSpec(alpha=3, c_over_hbar=2 * math.pi * float(d["dd_c_over_hbar_2pi_MHz_um3"])))
    if "vdw_c_over_hbar_2pi_MHz_um6" in d:
        specs.append(PotentialSpec(alpha=6, c_over_hbar=2 * math.pi * float(d["vdw_c_over_hbar_2pi_MHz_um6"])))
    if "model" in d:
        md = d["model"]
        try:
            table = None
            if md.get("table_csv"):
                table = load_coefficient_table(md["table_csv"])
            alpha = int(md.get("alpha", 6))
            anchor_key = f"anchor_value_2pi_MHz_um{alpha}"
            anchor = 2 * math.pi * float(md.get(anchor_key, 5.3e7))
            model = CoefficientModel(
                kind=md.get("kind", "scaling_law"),
                anchor_n=int(md.get("anchor_n", 100)),
                anchor_value=anchor,
                exponent=float(md.get("exponent", 11.0 if alpha == 6 else 4.0)),
                quantum_defect=float(md.get("quantum_defect", 3.13)),
                alpha=alpha,
                table=table,
            )
        except (ValueError, OSError) as exc:
            bad.append(f"potential.model: {exc}")
    return tuple(specs), model


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build and validate an ExperimentConfig; raises ConfigError listing
    every violation."""
    bad: list[str] = []
    scenario = doc.get("scenario", "")
    base = builtin_scenarios().get(scenario)
    if base is not None:
        merged = copy.deepcopy(base)
        _deep_update(merged, doc)
        doc = merged

    g = doc.get("geometry", {})
    geometry = GeometryConfig(
        axis_sigmas_um=tuple(g["axis_sigmas_um"]) if "axis_sigmas_um" in g else None,
        dimension=g.get("dimension"),
        sigma_um=g.get("sigma_um"),
    )
    if geometry.axis_sigmas_um is None and geometry.dimension is None and geometry.sigma_um is None:
        bad.append("geometry: provide axis_sigmas_um or (dimension, sigma_um)")

    pot = doc.get("potential", {})
    specs, model = _potential_from_dict(pot, bad)

    tg = None
    if "time_grid" in doc:
        t = doc["time_grid"]
        try:
            tg = TimeGridConfig(
                start=float(t["start"]),
                stop=float(t["stop"]),
                points=int(t["points"]),
                spacing=t.get("spacing", "linear"),
                unit=t.get("unit", "tau"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            bad.append(f"time_grid: {exc!r}")

    exc_d = doc.get("excitation", {})
    mc_d = doc.get("mc", {})
    cfg = ExperimentConfig(
        scenario=scenario,
        geometry=geometry,
        methods=tuple(doc.get("methods", ())),
        excitation=ExcitationConfig(
            mean=float(exc_d.get("mean", 1.0)), m_max=int(exc_d.get("m_max", 13))
        ),
        mc=McConfig(
            atom_count=int(mc_d.get("atom_count", 1000)),
            distance_samples=int(mc_d.get("distance_samples", 100_000)),
            seed=int(mc_d.get("seed", 7)),
        ),
        time_grid=tg,
        g2_bg=float(doc.get("background", {}).get("g2_bg", 0.0)),
        outputs=tuple(doc.get("outputs", ("csv", "json"))),
        potential_specs=specs,
        coefficient_model=model,
        n_start=pot.get("n_start"),
        n_stop=pot.get("n_stop"),
        storage_time_us=doc.get("storage_time_us"),
        dimensions=tuple(int(d) for d in doc.get("dimensions", ())),
        overlay_csv=doc.get("overlay_csv"),
        label=doc.get("label", scenario),
    )
    bad.extend(cfg.validate())
    if bad:
        raise ConfigError(bad)
    return cfg


def load_config(path, seed_override: int | None = None) -> ExperimentConfig:
    """Read a JSON config file; an explicit seed wins over the document's."""
    with open(Path(path)) as fh:
        doc = json.load(fh)
    if seed_override is not None:
        doc.setdefault("mc", {})["seed"] = int(seed_override)
    return config_from_dict(doc)


def _deep_update(base: dict, override: dict) -> None:
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(base.get(key), dict):
            _deep_update(base[key], val)
        else:
            base[key] = val
