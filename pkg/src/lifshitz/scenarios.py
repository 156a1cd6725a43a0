"""Pre-packaged reproduction runs: optical force modulation, condensate
frequency shift, and the entropy audit table.

Scenario files are INI documents with a [scenario] type discriminator; see
the parse functions for the per-variant sections.  Outputs are theory
curves only; measured data points can be overlaid downstream from a
two-column file with '#' comments (an empty overlay slot, nothing is
bundled).

Each theory column of the optical-modulation run is a single rule mapping a
plate state to a response model, applied to the dark and the light state
alike.  A state counts as dielectric-like when its conductivity vanishes at
T = 0 (thermally activated density or mobility) and metallic-like when the
carrier density survives at T = 0 (photo-generated carriers); this is what
makes a run with identical dark/light states produce identically zero
force differences in every column.
"""

import configparser
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from . import __version__
from .constants import K_BOLTZMANN, M_ELECTRON, EV_TO_JOULE, effective_temperature
from .dielectric import AtomModel, CarrierScenario
from .engine import (
    AtomJob,
    LifshitzJob,
    Material,
    ReflectionPolicy,
    TrapParameters,
    free_energy_atom_wall,
    free_energy_plates,
    free_energy_plates_zero_T,
    frequency_shift_gamma_z,
)
from .materials import MaterialFileError, load_material
from .numerics import ConvergenceError, QuadratureSpec, SummationSpec
from .output import SweepResult, config_hash
from .thermo import AsymptoticReport, nernst_audit

__all__ = [
    "ScopeError",
    "OpticalModulationSpec",
    "CondensateShiftSpec",
    "EntropyAuditSpec",
    "parse_scenario",
    "run_optical_modulation",
    "run_condensate_shift",
    "run_entropy_audit",
    "EXPECTED_AUDIT_VERDICTS",
]

EXPECTED_AUDIT_VERDICTS = {
    "oscillator-only": "satisfied",
    "dc-augmented": "violated",
    "screened-vanishing-n": "satisfied",
    "screened-fixed-n": "violated",
    "plasma-like": "satisfied",
}


class ScopeError(RuntimeError):
    """Request outside the implemented scope (e.g. nonequilibrium runs)."""


@dataclass(frozen=True)
class OpticalModulationSpec:
    plate: Material                  # core response of the plate
    sphere: Material
    dark: CarrierScenario
    light: CarrierScenario
    separations: Tuple[float, ...]   # m
    temperature: float               # K
    sphere_radius: float             # m
    label: str = ""

    def __post_init__(self):
        _check_grid(self.separations)


@dataclass(frozen=True)
class CondensateShiftSpec:
    wall: Material
    atom: AtomModel
    trap: TrapParameters
    substrate_temperature: float
    environment_temperature: float
    separations: Tuple[float, ...]   # m

    def __post_init__(self):
        _check_grid(self.separations)


@dataclass(frozen=True)
class EntropyAuditSpec:
    material: Material
    separation: float
    classes: Tuple[str, ...]
    fit_window: Tuple[float, float] = (1e-3, 5e-2)
    points: int = 12
    density: float = 5e20            # m^-3
    activation: float = 0.5 * EV_TO_JOULE
    mobility: float = 0.045          # m^2/(V s)
    effective_mass: float = 0.26 * M_ELECTRON


def _check_grid(grid):
    if len(grid) < 1 or any(g <= 0.0 for g in grid):
        raise ValueError("separation grid must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("separation grid must be strictly increasing")


# ---------------------------------------------------------------------------
# scenario file parsing
# ---------------------------------------------------------------------------

def parse_scenario(path):
    """Parse a scenario file; returns one of the *Spec dataclasses."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    text = Path(path).read_text()
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise MaterialFileError(f"{path}: {exc}") from exc
    if "scenario" not in parser or "type" not in parser["scenario"]:
        raise MaterialFileError(f"{path}: missing [scenario] type")
    kind = parser["scenario"]["type"].strip()
    if kind == "optical-modulation":
        return _parse_optical(parser, path)
    if kind == "condensate-shift":
        return _parse_condensate(parser, path)
    if kind == "entropy-audit":
        return _parse_audit(parser, path)
    raise MaterialFileError(f"{path}: unknown scenario type {kind!r}")


def _grid(section, start_key, stop_key, path):
    start = section.getfloat(start_key)
    stop = section.getfloat(stop_key)
    points = section.getint("points", 6)
    spacing = section.get("spacing", "linear").strip()
    if start is None or stop is None:
        raise MaterialFileError(f"{path}: [geometry] needs {start_key} and {stop_key}")
    if spacing == "log":
        return tuple(np.geomspace(start, stop, points))
    return tuple(np.linspace(start, stop, points))


def _phase_carriers(section, temperature, path):
    """Carrier scenario from a phase section; densities are the values at
    the run temperature (converted back to Arrhenius amplitudes)."""
    density = section.getfloat("density_m3")
    if density is None:
        raise MaterialFileError(f"{path}: phase section needs density_m3")
    density_act = section.getfloat("density_activation_ev", 0.0) * EV_TO_JOULE
    mobility = section.getfloat("mobility_m2_per_vs", 0.045)
    mobility_act = section.getfloat("mobility_activation_ev", 0.0) * EV_TO_JOULE
    mass_ratio = section.getfloat("effective_mass_ratio")
    if mass_ratio is None:
        raise MaterialFileError(
            f"{path}: effective_mass_ratio is required (no default is shipped)")
    statistics = section.get("statistics", "maxwell-boltzmann").strip()
    boost = math.exp(density_act / (K_BOLTZMANN * temperature))
    return CarrierScenario(
        density_amplitude=density * boost,
        mobility_amplitude=mobility * math.exp(mobility_act / (K_BOLTZMANN * temperature)),
        density_activation=density_act,
        mobility_activation=mobility_act,
        statistics=statistics,
        effective_mass=mass_ratio * M_ELECTRON,
    )


def _parse_optical(parser, path):
    geometry = parser["geometry"]
    temperature = geometry.getfloat("temperature_k", 300.0)
    plate = load_material(parser["plate"]["material"])
    sphere_ref = parser["sphere"].get("material", "builtin:au-placeholder")
    sphere = load_material(sphere_ref)
    for phase in ("dark", "light"):
        if phase not in parser:
            raise MaterialFileError(f"{path}: missing [{phase}] section")
    dark = _phase_carriers(parser["dark"], temperature, path)
    light = _phase_carriers(parser["light"], temperature, path)
    return OpticalModulationSpec(
        plate=Material(plate.model),
        sphere=sphere,
        dark=dark,
        light=light,
        separations=_grid(geometry, "separation_start_m", "separation_stop_m", path),
        temperature=temperature,
        sphere_radius=geometry.getfloat("sphere_radius_m", 1e-4),
        label=parser["light"].get("label", ""),
    )


def _parse_condensate(parser, path):
    geometry = parser["geometry"]
    t_substrate = geometry.getfloat("substrate_temperature_k", 310.0)
    t_environment = geometry.getfloat("environment_temperature_k", 310.0)
    atom_section = parser["atom"] if "atom" in parser else {}
    atom = AtomModel(
        alpha0=float(atom_section.get("alpha0_m3", 4.73e-29)),
        omega_a=float(atom_section.get("omega_a_rads", 2.415e15)),
    )
    trap = TrapParameters(
        omega=2.0 * math.pi * float(atom_section.get("trap_frequency_hz", 229.0)),
        mass=float(atom_section.get("mass_kg", 1.443e-25)),
    )
    return CondensateShiftSpec(
        wall=load_material(parser["wall"]["material"]),
        atom=atom,
        trap=trap,
        substrate_temperature=t_substrate,
        environment_temperature=t_environment,
        separations=_grid(geometry, "z_start_m", "z_stop_m", path),
    )


def _parse_audit(parser, path):
    section = parser["audit"]
    classes = section.get("classes", "all").strip()
    if classes == "all":
        class_tuple = tuple(EXPECTED_AUDIT_VERDICTS)
    else:
        class_tuple = tuple(c.strip() for c in classes.split(","))
        for c in class_tuple:
            if c not in EXPECTED_AUDIT_VERDICTS:
                raise MaterialFileError(f"{path}: unknown audit class {c!r}")
    return EntropyAuditSpec(
        material=load_material(section.get("material", "builtin:sio2")),
        separation=section.getfloat("separation_m", 1e-6),
        classes=class_tuple,
        fit_window=(section.getfloat("t_min", 1e-3), section.getfloat("t_max", 5e-2)),
        points=section.getint("points", 12),
        density=section.getfloat("density_m3", 5e20),
        activation=section.getfloat("activation_ev", 0.5) * EV_TO_JOULE,
        mobility=section.getfloat("mobility_m2_per_vs", 0.045),
        effective_mass=section.getfloat("effective_mass_ratio", 0.26) * M_ELECTRON,
    )


# ---------------------------------------------------------------------------
# optical modulation
# ---------------------------------------------------------------------------

def _is_dielectric_like(carriers: CarrierScenario) -> bool:
    """Conductivity vanishes at T = 0: activated density or mobility."""
    return carriers.density_activation > 0.0 or carriers.mobility_activation > 0.0


def _phase_treatment(column: str, carriers: CarrierScenario):
    """(attached carriers, policy) for one plate state under one theory column."""
    dielectric_like = _is_dielectric_like(carriers)
    if column in ("neglected", "zero-T"):
        if dielectric_like:
            return None, "standard"
        return carriers, "plasma"
    if column == "included":
        if dielectric_like:
            return carriers, "dc"
        return carriers, "plasma"
    if column == "screened":
        return carriers, "screened"
    raise AssertionError(column)


_OPTICAL_COLUMNS = ("neglected", "included", "screened", "zero-T")


def run_optical_modulation(spec: OpticalModulationSpec, threads: int = 1) -> SweepResult:
    """Force-difference sweep between the illuminated and the dark plate state.

    Emits, per separation, the sphere-plate force change for four theory
    columns: carrier drift neglected in dielectric-like states, dc
    conductivity included, carrier screening included, and the
    zero-temperature evaluation.  Rows failing to converge are flagged in
    the status column and carry NaN values; the sweep continues.
    """
    def evaluate_row(a):
        values, trunc, quad_err = [], 0, 0.0
        try:
            for column in _OPTICAL_COLUMNS:
                forces = {}
                for name, carriers in (("dark", spec.dark), ("light", spec.light)):
                    attached, policy = _phase_treatment(column, carriers)
                    plate = Material(spec.plate.model, attached)
                    job = LifshitzJob(
                        a=a,
                        T=0.0 if column == "zero-T" else spec.temperature,
                        material_1=plate,
                        material_2=spec.sphere,
                        policy=ReflectionPolicy(policy),
                    )
                    result = (free_energy_plates_zero_T(job) if column == "zero-T"
                              else free_energy_plates(job))
                    forces[name] = 2.0 * math.pi * spec.sphere_radius * result.value
                    trunc = max(trunc, result.truncation_index)
                    quad_err = max(quad_err, result.quadrature_error)
                values.append(forces["light"] - forces["dark"])
            return (a, *values, trunc, quad_err, "ok")
        except ConvergenceError as exc:
            return (a, *(math.nan,) * 4, trunc, math.nan, f"failed: {exc}")

    rows = _map_rows(evaluate_row, spec.separations, threads)
    meta = {
        "version": __version__,
        "scenario": "optical-modulation",
        "temperature_K": spec.temperature,
        "sphere_radius_m": spec.sphere_radius,
        "absorbed_power_label": spec.label,
        "config_hash": config_hash({
            "separations": list(spec.separations),
            "T": spec.temperature,
            "R": spec.sphere_radius,
            "dark_density": spec.dark.density_amplitude,
            "light_density": spec.light.density_amplitude,
        }),
        "tolerances": _tolerance_line(),
        "overlay": "none (supply a two-column data file downstream)",
    }
    return SweepResult(
        columns=["separation_m", "dF_dc_neglected_N", "dF_dc_included_N",
                 "dF_screened_N", "dF_zero_T_N", "truncation_index",
                 "quadrature_error", "status"],
        rows=rows,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# condensate frequency shift
# ---------------------------------------------------------------------------

def run_condensate_shift(spec: CondensateShiftSpec, threads: int = 1) -> SweepResult:
    """Relative trap-frequency shift over the separation grid, with the wall
    conductivity neglected and included.

    Only the equilibrium configuration is in scope; a substrate temperature
    different from the environment requires the nonequilibrium force term,
    which this engine deliberately does not provide.
    """
    if spec.substrate_temperature != spec.environment_temperature:
        raise ScopeError(
            "nonequilibrium condensate runs (substrate T != environment T) are out of "
            "scope: the nonequilibrium force contribution is not implemented")
    T = spec.substrate_temperature

    def evaluate_row(z):
        try:
            row = [z]
            for policy, carriers in (("standard", None), ("dc", spec.wall.carriers)):
                job = AtomJob(a=z, T=T, wall=Material(spec.wall.model, carriers),
                              atom=spec.atom, policy=ReflectionPolicy(policy))
                row.append(frequency_shift_gamma_z(job, spec.trap))
            diag = free_energy_atom_wall(
                AtomJob(a=z, T=T, wall=spec.wall, atom=spec.atom))
            return (*row, diag.truncation_index, diag.quadrature_error, "ok")
        except ConvergenceError as exc:
            return (z, math.nan, math.nan, 0, math.nan, f"failed: {exc}")

    rows = _map_rows(evaluate_row, spec.separations, threads)
    for col in (1, 2):
        values = [r[col] for r in rows if r[-1] == "ok"]
        if any(v <= 0.0 for v in values):
            raise RuntimeError("frequency-shift column is not strictly positive")
        if any(b >= a for a, b in zip(values, values[1:])):
            raise RuntimeError("frequency-shift column is not strictly decreasing")
    meta = {
        "version": __version__,
        "scenario": "condensate-shift",
        "temperature_K": T,
        "trap_frequency_rads": spec.trap.omega,
        "atom_mass_kg": spec.trap.mass,
        "config_hash": config_hash({
            "separations": list(spec.separations),
            "T": T,
            "alpha0": spec.atom.alpha0,
        }),
        "tolerances": _tolerance_line(),
        "overlay": "none (supply a two-column data file downstream)",
    }
    return SweepResult(
        columns=["separation_m", "gamma_z_dc_neglected", "gamma_z_dc_included",
                 "truncation_index", "quadrature_error", "status"],
        rows=rows,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# entropy audit table
# ---------------------------------------------------------------------------

def _audit_carriers(spec: EntropyAuditSpec, model_class: str) -> Optional[CarrierScenario]:
    fixed_n = CarrierScenario(
        density_amplitude=spec.density,
        mobility_amplitude=spec.mobility,
        mobility_activation=spec.activation,
        effective_mass=spec.effective_mass,
    )
    vanishing_n = CarrierScenario(
        density_amplitude=spec.density,
        density_activation=spec.activation,
        mobility_amplitude=spec.mobility,
        effective_mass=spec.effective_mass,
    )
    return {
        "oscillator-only": None,
        "dc-augmented": fixed_n,
        "screened-fixed-n": fixed_n,
        "screened-vanishing-n": vanishing_n,
        "plasma-like": replace(fixed_n, mobility_activation=0.0),
    }[model_class]


_AUDIT_POLICY = {
    "oscillator-only": "standard",
    "dc-augmented": "dc",
    "screened-fixed-n": "screened",
    "screened-vanishing-n": "screened",
    "plasma-like": "plasma",
}


def run_entropy_audit(spec: EntropyAuditSpec) -> List[AsymptoticReport]:
    """One heat-theorem report per requested model class."""
    reports = []
    for model_class in spec.classes:
        carriers = _audit_carriers(spec, model_class)
        material = Material(spec.material.model, carriers)
        policy = ReflectionPolicy(_AUDIT_POLICY[model_class])

        def job_family(T, _m=material, _p=policy):
            return LifshitzJob(a=spec.separation, T=T, material_1=_m,
                               material_2=_m, policy=_p)

        reports.append(nernst_audit(job_family, model_class=model_class,
                                    fit_window=spec.fit_window, points=spec.points))
    return reports


def _map_rows(fn, grid, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, grid))
    return [fn(x) for x in grid]


def _tolerance_line():
    q = QuadratureSpec()
    s = SummationSpec()
    return (f"rel={q.relative_tolerance:g} floor={q.absolute_floor:g} "
            f"cutoff={s.term_cutoff_ratio:g}")
