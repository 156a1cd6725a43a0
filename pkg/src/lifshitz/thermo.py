"""Low-temperature asymptotics, entropy, and the Nernst heat-theorem audit.

The closed forms below hold for T well below the crossover temperature
T_eff = hbar c/(2 a k_B).  Exponentially small remainders of the
free-carrier models are neglected throughout; the audit tolerances absorb
them.  All residual-entropy brackets are written with zeta(3) and the
trilogarithm of r0^2, r0 = (eps0-1)/(eps0+1).
"""

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from .constants import HBAR, C_LIGHT, K_BOLTZMANN, effective_temperature
from .dielectric import static_permittivity
from .engine import (
    AtomJob,
    LifshitzJob,
    free_energy_atom_wall,
    free_energy_atom_wall_zero_T,
    free_energy_plates,
)
from .numerics import (
    ConvergenceError,
    QuadratureSpec,
    SummationSpec,
    derivative_central,
    integrate_semi_infinite,
    polylog3,
    zeta3,
)
from .reflection import r0_bar, static_tm_dielectric

__all__ = [
    "AsymptoticReport",
    "AsymptoticCoefficients",
    "FitError",
    "entropy",
    "asymptotic_free_energy_plates",
    "asymptotic_free_energy_atom",
    "asymptotic_entropy",
    "dc_residual_entropy_plates",
    "dc_residual_entropy_atom",
    "dc_free_energy_correction",
    "screened_free_energy_correction",
    "screened_free_energy_asymptote",
    "screened_entropy_asymptote",
    "screened_atom_asymptotes",
    "nernst_audit",
    "fit_C_D",
    "compute_C_D",
]

NERNST_SATISFIED = "satisfied"
NERNST_VIOLATED = "violated"

MODEL_CLASSES = ("oscillator-only", "dc-augmented", "screened-vanishing-n",
                 "screened-fixed-n", "plasma-like")

# quadrature controls for the closed-form correction integrals
_ASYMPTOTE_QUAD = QuadratureSpec(relative_tolerance=1e-12, absolute_floor=1e-20)


class FitError(RuntimeError):
    """Asymptotic fit could not be performed (too few points or singular)."""


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Low-temperature expansion coefficients for one material pairing."""

    cubic_T_coefficient: float          # plates free energy, J/m^2 per (T/T_eff)^3
    quartic_T_coefficient: float        # atom free energy, J per (T/T_eff)^4
    quadratic_entropy_coefficient: float  # plates, J K^-1 m^-2 per (T/T_eff)^2
    cubic_entropy_coefficient: float      # atom, J K^-1 per (T/T_eff)^3
    C_D: float


@dataclass(frozen=True)
class AsymptoticReport:
    """Outcome of one Nernst audit run."""

    model_class: str
    geometry: str
    separation: float
    predicted_S0: Optional[float]
    fitted_S0: float
    fit_uncertainty: float
    power: int
    power_coefficient: float
    fit_window: Tuple[float, float]      # in T/T_eff
    points: int
    verdict: str
    residual_relative_discrepancy: Optional[float]
    temperatures: Tuple[float, ...] = field(default=())
    entropies: Tuple[float, ...] = field(default=())
    schema_version: int = 1

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "model_class": self.model_class,
            "geometry": self.geometry,
            "separation_m": self.separation,
            "predicted_S0": self.predicted_S0,
            "fitted_S0": self.fitted_S0,
            "fit_uncertainty": self.fit_uncertainty,
            "power": self.power,
            "power_coefficient": self.power_coefficient,
            "fit_window_t": list(self.fit_window),
            "points": self.points,
            "verdict": self.verdict,
            "residual_relative_discrepancy": self.residual_relative_discrepancy,
            "temperatures_K": list(self.temperatures),
            "entropies": list(self.entropies),
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def entropy(job, geometry: Optional[str] = None) -> float:
    """Entropy -dF/dT of the plate-plate or atom-wall free energy.

    Five-point temperature stencil with step max(T*1e-3, 1e-3 K); the
    outer stencil evaluations reuse the Matsubara truncation index of the
    central point, so the large temperature-independent part of the free
    energy cancels cleanly in the differences.
    """
    if job.T <= 0.0:
        raise ValueError("entropy requires T > 0")
    if isinstance(job, AtomJob):
        evaluate = free_energy_atom_wall
        inferred = "atom-wall"
    else:
        evaluate = free_energy_plates
        inferred = "plates"
    if geometry is not None and geometry != inferred:
        raise ValueError(f"geometry {geometry!r} does not match job type ({inferred})")
    center = evaluate(job)
    frozen = center.truncation_index

    def f(T):
        return evaluate(replace(job, T=T), forced_truncation=frozen).value

    h = max(job.T * 1e-3, 1e-3)
    slope, _ = derivative_central(f, job.T, h)
    return -slope


# ---------------------------------------------------------------------------
# oscillator-model (compliant) asymptotics
# ---------------------------------------------------------------------------

def asymptotic_free_energy_plates(a, T, eps0, zero_point_energy):
    """E(a) minus the cubic thermal correction
    (hbar c/(32 pi a^3)) zeta(3) r0^2 (eps0+1) (T/T_eff)^3  [J/m^2].

    The caller supplies E(a) (e.g. from free_energy_plates_zero_T).  Emits a
    warning-free result but is only meaningful for T well below 0.1*T_eff.
    """
    r0 = static_tm_dielectric(eps0)
    t = T / effective_temperature(a)
    cubic = HBAR * C_LIGHT / (32.0 * math.pi * a**3) * zeta3() * r0**2 * (eps0 + 1.0)
    return zero_point_energy - cubic * t**3


def asymptotic_free_energy_atom(a, T, alpha0, C_D, zero_point_energy):
    """E_A(a) minus the quartic thermal correction
    (hbar c pi^3/(240 a^4)) alpha(0) C_D (T/T_eff)^4  [J]."""
    t = T / effective_temperature(a)
    quartic = HBAR * C_LIGHT * math.pi**3 / (240.0 * a**4) * alpha0 * C_D
    return zero_point_energy - quartic * t**4


def asymptotic_entropy(a, T, eps0, geometry="plates", C_D=None, alpha0=None):
    """Leading low-temperature entropy of the oscillator (compliant) model.

    plates:    (3 k_B/(16 pi a^2)) zeta(3) r0^2 (eps0+1) (T/T_eff)^2
    atom-wall: (pi^3 k_B/(30 a^3)) alpha(0) C_D (T/T_eff)^3
    """
    t = T / effective_temperature(a)
    if geometry == "plates":
        r0 = static_tm_dielectric(eps0)
        return (3.0 * K_BOLTZMANN / (16.0 * math.pi * a**2)
                * zeta3() * r0**2 * (eps0 + 1.0) * t**2)
    if geometry == "atom-wall":
        if C_D is None or alpha0 is None:
            raise ValueError("atom-wall asymptotic entropy needs C_D and alpha0")
        return math.pi**3 * K_BOLTZMANN / (30.0 * a**3) * alpha0 * C_D * t**3
    raise ValueError(f"unknown geometry {geometry!r}")


def asymptotic_coefficients(a, eps0, alpha0, C_D):
    """Bundle of the expansion coefficients at one (a, eps0, alpha0, C_D)."""
    r0 = static_tm_dielectric(eps0)
    teff = effective_temperature(a)
    cubic = HBAR * C_LIGHT / (32.0 * math.pi * a**3) * zeta3() * r0**2 * (eps0 + 1.0)
    quartic = HBAR * C_LIGHT * math.pi**3 / (240.0 * a**4) * alpha0 * C_D
    quad_S = (3.0 * K_BOLTZMANN / (16.0 * math.pi * a**2)
              * zeta3() * r0**2 * (eps0 + 1.0))
    cubic_S = math.pi**3 * K_BOLTZMANN / (30.0 * a**3) * alpha0 * C_D
    if not all(map(math.isfinite, (cubic, quartic, quad_S, cubic_S))):
        raise ValueError("asymptotic coefficients must be finite")
    return AsymptoticCoefficients(cubic, quartic, quad_S, cubic_S, C_D)


# ---------------------------------------------------------------------------
# dc-conductivity (violating) residuals
# ---------------------------------------------------------------------------

def dc_residual_entropy_plates(a, eps0):
    """Zero-temperature entropy left behind by the dc term:
    (k_B/(16 pi a^2)) [zeta(3) - Li_3(r0^2)] > 0."""
    r0 = static_tm_dielectric(eps0)
    return K_BOLTZMANN / (16.0 * math.pi * a**2) * (zeta3() - polylog3(r0**2))


def dc_residual_entropy_atom(a, eps0, alpha0):
    """Atom-wall zero-temperature entropy defect (k_B alpha(0)/(4 a^3)) (1-r0) > 0."""
    r0 = static_tm_dielectric(eps0)
    return K_BOLTZMANN * alpha0 / (4.0 * a**3) * (1.0 - r0)


def dc_free_energy_correction(a, T, eps0, alpha0=None, geometry="plates"):
    """Linear-in-T free-energy shift produced by including the dc term.

    plates:    -(k_B T/(16 pi a^2)) [zeta(3) - Li_3(r0^2)]
    atom-wall: -(k_B T/(4 a^3)) (1 - r0) alpha(0)

    The exponentially small finite-T remainders are neglected.
    """
    if geometry == "plates":
        return -T * dc_residual_entropy_plates(a, eps0)
    if geometry == "atom-wall":
        if alpha0 is None:
            raise ValueError("atom-wall correction needs alpha0")
        return -T * dc_residual_entropy_atom(a, eps0, alpha0)
    raise ValueError(f"unknown geometry {geometry!r}")


# ---------------------------------------------------------------------------
# screened-model asymptotics
# ---------------------------------------------------------------------------

def _screened_log_integral(a, eps0, kappa):
    """J = int_0^inf y ln(1 - r0bar(y)^2 e^-y) dy; J(kappa=0) = -Li_3(r0^2)."""
    def integrand(y):
        r = r0_bar(eps0, a, kappa, y)
        return y * np.log1p(-r * r * np.exp(-y))
    return integrate_semi_infinite(integrand, _ASYMPTOTE_QUAD).value


def screened_free_energy_correction(a, T, eps0, kappa):
    """(k_B T/(16 pi a^2)) { J(kappa) + Li_3(r0^2) }  [J/m^2].

    Vanishes at kappa = 0 and tends to -(k_B T/(16 pi a^2))[zeta(3)-Li_3(r0^2)]
    as kappa -> inf.
    """
    r0 = static_tm_dielectric(eps0)
    braced = _screened_log_integral(a, eps0, kappa) + polylog3(r0**2)
    return K_BOLTZMANN * T / (16.0 * math.pi * a**2) * braced


def screened_free_energy_asymptote(a, T, eps0, kappa, base_free_energy):
    """Low-temperature screened free energy: the compliant-model value plus
    the screening correction (exponentially small remainder neglected)."""
    return base_free_energy + screened_free_energy_correction(a, T, eps0, kappa)


def screened_entropy_asymptote(a, T, eps0, kappa, dkappa2_dT, base_entropy=0.0):
    """Low-temperature screened entropy [J K^-1 m^-2].

    base_entropy carries the compliant quadratic law; the screening adds

      -(k_B/(16 pi a^2)) { J + Li_3(r0^2)
          - 8 a^2 eps0 T dkappa^2/dT *
            int y^2 r0bar / [(e^y - r0bar^2) s (eps0 s + y)^2] dy },

    s = sqrt(y^2 + (2 a kappa)^2).  With fixed carrier density
    (kappa^2 ~ 1/T) the T -> 0 limit is the dc residual; with exponentially
    vanishing density it is zero.
    """
    r0 = static_tm_dielectric(eps0)
    braced = _screened_log_integral(a, eps0, kappa) + polylog3(r0**2)
    if kappa > 0.0 and dkappa2_dT != 0.0:
        two_a_kappa = 2.0 * a * kappa

        def integrand(y):
            r = r0_bar(eps0, a, kappa, y)
            s = np.sqrt(y * y + two_a_kappa**2)
            return (y * y * r / ((np.exp(y) - r * r) * s * (eps0 * s + y) ** 2))

        integral = integrate_semi_infinite(integrand, _ASYMPTOTE_QUAD).value
        braced = braced - 8.0 * a**2 * eps0 * T * dkappa2_dT * integral
    return base_entropy - K_BOLTZMANN / (16.0 * math.pi * a**2) * braced


def screened_atom_asymptotes(a, T, eps0, alpha0, kappa, dkappa2_dT,
                             base_free_energy=0.0, base_entropy=0.0):
    """Low-temperature screened atom-wall (free energy [J], entropy [J/K]).

    The free energy acquires -(k_B T alpha(0)/(8 a^3)) [K(kappa) - 2 r0]
    with K = int y^2 r0bar(y) e^-y dy (K(0) = 2 r0, K(inf) = 2), and the
    entropy the corresponding positive bracket plus the kappa-drift term.
    """
    r0 = static_tm_dielectric(eps0)
    two_a_kappa = 2.0 * a * kappa

    def k_integrand(y):
        return y * y * r0_bar(eps0, a, kappa, y) * np.exp(-y)

    k_value = integrate_semi_infinite(k_integrand, _ASYMPTOTE_QUAD).value
    bracket = k_value - 2.0 * r0
    free = base_free_energy - K_BOLTZMANN * T * alpha0 / (8.0 * a**3) * bracket

    drift = 0.0
    if kappa > 0.0 and dkappa2_dT != 0.0:
        def d_integrand(y):
            s = np.sqrt(y * y + two_a_kappa**2)
            return y**3 * np.exp(-y) / (s * (eps0 * s + y) ** 2)

        integral = integrate_semi_infinite(d_integrand, _ASYMPTOTE_QUAD).value
        drift = 4.0 * a**2 * eps0 * T * dkappa2_dT * integral
    ent = base_entropy + K_BOLTZMANN * alpha0 / (8.0 * a**3) * (bracket + drift)
    return free, ent


# ---------------------------------------------------------------------------
# Nernst audit
# ---------------------------------------------------------------------------

_AUDIT_SUMMATION = SummationSpec(term_cutoff_ratio=1e-14, accelerate=True)
_AUDIT_QUADRATURE = QuadratureSpec(relative_tolerance=1e-9, absolute_floor=1e-22)


def _weighted_fit(T, S, p, with_nuisance):
    powers = [0, p] + ([p + 1] if with_nuisance else [])
    design = np.column_stack([T**k for k in powers])
    weights = 1.0 / T ** (p + 1)
    dw = design * weights[:, None]
    yw = S * weights
    coef, _, rank, _ = np.linalg.lstsq(dw, yw, rcond=None)
    if rank < design.shape[1]:
        raise FitError("asymptotic fit is rank deficient")
    resid = yw - dw @ coef
    dof = max(len(T) - design.shape[1], 1)
    cov = (resid @ resid) / dof * np.linalg.inv(dw.T @ dw)
    return coef, np.sqrt(np.diag(cov))


def nernst_audit(job_family: Callable[[float], object],
                 geometry: Optional[str] = None,
                 model_class: str = "",
                 fit_window: Tuple[float, float] = (1e-3, 5e-2),
                 points: int = 12,
                 predicted_S0: Optional[float] = None,
                 tighten: bool = True) -> AsymptoticReport:
    """Audit the T -> 0 entropy of a job family against the heat theorem.

    Evaluates the entropy on a log grid of T/T_eff across fit_window, fits

        S(T) = S0 + c T^p        (p = 2 plates, 3 atom-wall)

    with the next power T^(p+1) carried as a nuisance term to de-bias S0
    and c, and classifies: |S0| below three times the fit uncertainty means
    the heat theorem is satisfied.  The uncertainty combines the statistical
    fit error with the spread between the plain and nuisance-corrected fits,
    which bounds the systematic from still-higher orders.

    Parameters
    ----------
    job_family : callable T -> LifshitzJob | AtomJob
        Jobs identical except for temperature.
    model_class : str
        One of MODEL_CLASSES; selects the closed-form residual the fitted
        S0 is compared against (overridable via predicted_S0).
    tighten : bool
        Replace the jobs' numerical controls with audit-grade ones
        (term cutoff 1e-14 with tail acceleration); the default job
        tolerances are too loose for entropy at T/T_eff = 1e-3.

    Raises
    ------
    FitError
        Fewer than 6 grid points evaluable, or a singular fit.
    """
    sample = job_family(1.0)
    a = sample.a
    teff = effective_temperature(a)
    if isinstance(sample, AtomJob):
        inferred, p = "atom-wall", 3
    else:
        inferred, p = "plates", 2
    if geometry is not None and geometry != inferred:
        raise ValueError(f"geometry {geometry!r} does not match job family ({inferred})")
    geometry = inferred

    t_grid = np.geomspace(fit_window[0], fit_window[1], points)
    temperatures, entropies = [], []
    for t in t_grid:
        job = job_family(t * teff)
        if tighten:
            job = replace(job, summation=_AUDIT_SUMMATION, quadrature=_AUDIT_QUADRATURE)
        try:
            entropies.append(entropy(job))
            temperatures.append(t * teff)
        except ConvergenceError:
            continue
    if len(temperatures) < 6:
        raise FitError(f"only {len(temperatures)} usable grid points (need >= 6)")

    T = np.asarray(temperatures)
    S = np.asarray(entropies)
    coef3, err3 = _weighted_fit(T, S, p, with_nuisance=True)
    coef2, _ = _weighted_fit(T, S, p, with_nuisance=False)
    fitted_S0 = float(coef3[0])
    systematic = abs(fitted_S0 - float(coef2[0]))
    uncertainty = math.hypot(float(err3[0]), systematic)

    if predicted_S0 is None and model_class:
        predicted_S0 = _predicted_residual(model_class, geometry, sample)

    satisfied = abs(fitted_S0) < 3.0 * uncertainty
    verdict = NERNST_SATISFIED if satisfied else NERNST_VIOLATED
    discrepancy = None
    if predicted_S0:
        discrepancy = abs(fitted_S0 - predicted_S0) / abs(predicted_S0)
    return AsymptoticReport(
        model_class=model_class or "unspecified",
        geometry=geometry,
        separation=a,
        predicted_S0=predicted_S0,
        fitted_S0=fitted_S0,
        fit_uncertainty=uncertainty,
        power=p,
        power_coefficient=float(coef3[1]),
        fit_window=fit_window,
        points=len(temperatures),
        verdict=verdict,
        residual_relative_discrepancy=discrepancy,
        temperatures=tuple(float(x) for x in T),
        entropies=tuple(float(x) for x in S),
    )


def _predicted_residual(model_class, geometry, sample):
    if model_class not in MODEL_CLASSES:
        raise ValueError(f"unknown model class {model_class!r}")
    if model_class in ("oscillator-only", "screened-vanishing-n", "plasma-like"):
        return 0.0
    wall = sample.wall if isinstance(sample, AtomJob) else sample.material_1
    eps0 = static_permittivity(wall.model)
    if geometry == "plates":
        return dc_residual_entropy_plates(sample.a, eps0)
    return dc_residual_entropy_atom(sample.a, eps0, sample.atom.alpha0)


# ---------------------------------------------------------------------------
# atom-wall quartic coefficient
# ---------------------------------------------------------------------------

_CD_CACHE = {}


def fit_C_D(a, eps0, alpha0, samples, zero_point_energy):
    """Least-squares estimate of the dimensionless atom-wall quartic constant.

    samples are (T, free_energy) pairs on a low-temperature grid; the model
    is E_A - F_A(T) = (hbar c pi^3/(240 a^4)) alpha0 C_D t^4 with t = T/T_eff,
    fitted together with a t^5 nuisance term under 1/t^5 weights.

    Raises FitError when fewer than 4 samples are given or the fit is
    singular.
    """
    if len(samples) < 4:
        raise FitError("fit_C_D needs at least 4 samples")
    teff = effective_temperature(a)
    t = np.array([T for T, _ in samples]) / teff
    y = np.array([zero_point_energy - F for _, F in samples])
    design = np.column_stack([t**4, t**5])
    weights = 1.0 / t**5
    dw = design * weights[:, None]
    coef, _, rank, _ = np.linalg.lstsq(dw, y * weights, rcond=None)
    if rank < 2:
        raise FitError("C_D fit is rank deficient")
    scale = HBAR * C_LIGHT * math.pi**3 / (240.0 * a**4) * alpha0
    return float(coef[0] / scale)


def compute_C_D(eps0, a=1e-6, points=8, cache=True):
    """Fit C_D(eps0) from engine atom-wall runs and cache it per eps0.

    The wall is a single oscillator reproducing eps0 with its resonance far
    above the thermal frequency window, and the atom is taken quasi-static,
    so the fitted constant probes only the static response.
    """
    key = round(float(eps0), 10)
    if cache and key in _CD_CACHE:
        return _CD_CACHE[key]
    from .dielectric import AtomModel, Oscillator, OscillatorSet

    resonance = 2e16
    wall_model = Oscillator(OscillatorSet.from_rows(
        [((eps0 - 1.0) * resonance**2, resonance, 0.0)]))
    atom = AtomModel(alpha0=3e-29, omega_a=1e17)
    from .engine import Material

    teff = effective_temperature(a)
    base = AtomJob(a=a, T=1.0, wall=Material(wall_model), atom=atom,
                   summation=_AUDIT_SUMMATION, quadrature=_AUDIT_QUADRATURE)
    zero_point = free_energy_atom_wall_zero_T(base).value
    samples = []
    for t in np.geomspace(2e-3, 3e-2, points):
        job = replace(base, T=t * teff)
        samples.append((job.T, free_energy_atom_wall(job).value))
    value = fit_C_D(a, eps0, atom.alpha0, samples, zero_point)
    if cache:
        _CD_CACHE[key] = value
    return value
