"""Lifshitz free energies, forces and derived quantities for the
plate-plate and atom-wall geometries.

The Matsubara sum runs over the dimensionless variables y = 2aq and
zeta_l = 2*a*xi_l/c, in which every integrand carries the factor exp(-y):

    F(a,T)   = k_B T/(8 pi a^2) * sum'_l  I(zeta_l),
    I(zeta)  = int_zeta^inf y dy [ln(1 - r1_TM r2_TM e^-y) + ln(1 - r1_TE r2_TE e^-y)],

and the T = 0 branch replaces the primed sum by (1/(2 pi)) * the integral
over zeta of the same I.  The l = 0 term always evaluates an explicit
ZeroFrequencyRule; it is never a numerical xi -> 0 limit.

Policies select how free carriers enter a side built from a core
(bound-electron) model:

    standard         carriers ignored; TM(0) = (eps0-1)/(eps0+1), TE(0) = 0
    dc               adds 4*pi*sigma(T)/xi at l >= 1; TM(0) = 1 while the
                     scenario carries charge
    screened         screened TM with Drude TE at l >= 1; static-screened
                     TM(0)
    static-screened  core coefficients at l >= 1, static-screened TM(0)
    plasma           adds omega_p^2/xi^2 at l >= 1; TM(0) = 1 with a
                     nonzero TE(0)
    ideal-metal      forces (1, -1) everywhere (closed-form test limit)

Sides whose model is itself a free-carrier variant (PlasmaLike, Drude,
DcAugmented) keep their native treatment under any policy except
ideal-metal.
"""

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .constants import (
    C_LIGHT,
    HBAR,
    K_BOLTZMANN,
    dc_permittivity_term,
    effective_temperature,
    matsubara_frequency,
)
from .dielectric import (
    AtomModel,
    CarrierScenario,
    DcAugmented,
    DielectricModel,
    Drude,
    Oscillator,
    PlasmaLike,
    static_permittivity,
)
from .numerics import (
    QuadratureSpec,
    SummationSpec,
    integrate_semi_infinite,
    matsubara_sum,
    derivative_central,
    second_derivative_central,
)
from .reflection import ZeroFrequencyRule, fresnel, screened_tm

__all__ = [
    "Material",
    "ReflectionPolicy",
    "LifshitzJob",
    "AtomJob",
    "TrapParameters",
    "EnergyResult",
    "free_energy_plates",
    "free_energy_plates_zero_T",
    "free_energy_atom_wall",
    "free_energy_atom_wall_zero_T",
    "pfa_sphere_force",
    "pressure_plates",
    "difference_force",
    "frequency_shift_gamma_z",
]

POLICY_KINDS = ("standard", "dc", "screened", "static-screened", "plasma", "ideal-metal")

# trap defaults for the condensate frequency-shift observable
RB_ATOM_MASS = 1.443e-25            # kg
TRAP_ANGULAR_FREQUENCY = 2.0 * math.pi * 229.0   # rad/s


@dataclass(frozen=True)
class Material:
    """A half-space: core dielectric model plus optional free carriers."""

    model: DielectricModel
    carriers: Optional[CarrierScenario] = None


@dataclass(frozen=True)
class ReflectionPolicy:
    kind: str = "standard"

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy {self.kind!r}; choose from {POLICY_KINDS}")


@dataclass(frozen=True)
class LifshitzJob:
    a: float
    T: float
    material_1: Material
    material_2: Material
    policy: ReflectionPolicy = ReflectionPolicy()
    quadrature: QuadratureSpec = QuadratureSpec()
    summation: SummationSpec = SummationSpec()

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("separation must be positive")
        if self.T < 0.0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class AtomJob:
    a: float
    T: float
    wall: Material
    atom: AtomModel
    policy: ReflectionPolicy = ReflectionPolicy()
    quadrature: QuadratureSpec = QuadratureSpec()
    summation: SummationSpec = SummationSpec()

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("separation must be positive")
        if self.T < 0.0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class TrapParameters:
    omega: float = TRAP_ANGULAR_FREQUENCY   # rad/s
    mass: float = RB_ATOM_MASS              # kg


@dataclass(frozen=True)
class EnergyResult:
    """value [J/m^2 for plates, J for atom-wall] plus convergence diagnostics."""

    value: float
    truncation_index: int
    quadrature_error: float            # relative
    per_term: Optional[Tuple[float, ...]] = None


class _Side:
    """Resolved reflection behavior of one half-space at fixed (policy, T)."""

    def __init__(self, pair_fn: Callable, zero_rule: ZeroFrequencyRule):
        self.pair = pair_fn          # (xi, kperp ndarray) -> (r_tm, r_te)
        self.zero_rule = zero_rule


def _resolve_side(material: Material, policy: ReflectionPolicy, T: float) -> _Side:
    model = material.model
    carriers = material.carriers
    kind = policy.kind

    if kind == "ideal-metal":
        def pair(xi, kperp):
            ones = np.ones_like(np.asarray(kperp, dtype=float))
            return ones, -ones
        return _Side(pair, ZeroFrequencyRule.ideal_metal())

    if isinstance(model, PlasmaLike):
        def pair(xi, kperp, _m=model):
            return fresnel(lambda x: _m.eps(x), xi, kperp)
        return _Side(pair, ZeroFrequencyRule.plasma(model.plasma_frequency))

    if isinstance(model, Drude):
        core_eps0 = model.oscillators.static_permittivity
        def pair(xi, kperp, _m=model):
            return fresnel(lambda x: _m.eps(x), xi, kperp)
        return _Side(pair, ZeroFrequencyRule.drude(core_eps0, carriers_present=True))

    if isinstance(model, DcAugmented):
        return _dc_side(Oscillator(model.oscillators), model.carriers, T)

    # core-only models follow the job policy
    eps0 = static_permittivity(model)
    if kind == "standard" or carriers is None or not carriers.has_carriers:
        def pair(xi, kperp, _m=model):
            return fresnel(lambda x: _m.eps(x), xi, kperp)
        return _Side(pair, ZeroFrequencyRule.dielectric_finite(eps0))

    if kind == "dc":
        return _dc_side(model, carriers, T)

    if kind == "screened":
        def pair(xi, kperp, _m=model, _c=carriers, _T=T):
            core = lambda x: _m.eps(x)
            r_tm = screened_tm(core, _c, xi, kperp, _T)
            omega_p = _c.plasma_frequency_at(_T)
            gamma = _c.relaxation_at(_T)
            drude = omega_p**2 / (xi * (xi + gamma)) if omega_p > 0.0 else 0.0
            _, r_te = fresnel(lambda x: _m.eps(x) + drude, xi, kperp)
            return r_tm, r_te
        from .dielectric import screening_kappa
        kappa = screening_kappa(carriers, eps0, T) if T > 0.0 else 0.0
        return _Side(pair, ZeroFrequencyRule.screened_static(eps0, kappa))

    if kind == "static-screened":
        def pair(xi, kperp, _m=model):
            return fresnel(lambda x: _m.eps(x), xi, kperp)
        from .dielectric import screening_kappa
        kappa = screening_kappa(carriers, eps0, T) if T > 0.0 else 0.0
        return _Side(pair, ZeroFrequencyRule.screened_static(eps0, kappa))

    if kind == "plasma":
        omega_p = carriers.plasma_frequency_at(T)
        def pair(xi, kperp, _m=model, _w=omega_p):
            return fresnel(lambda x: _m.eps(x) + _w * _w / (x * x), xi, kperp)
        return _Side(pair, ZeroFrequencyRule.plasma(omega_p))

    raise AssertionError(f"unhandled policy {kind!r}")


def _dc_side(model, carriers: CarrierScenario, T: float) -> _Side:
    eps0 = static_permittivity(model)
    sigma = carriers.conductivity_si(T)
    def pair(xi, kperp, _m=model, _s=sigma):
        return fresnel(lambda x: _m.eps(x) + dc_permittivity_term(_s, x), xi, kperp)
    return _Side(pair, ZeroFrequencyRule.drude(eps0, carriers_present=carriers.has_carriers))


# ---------------------------------------------------------------------------
# plate-plate geometry
# ---------------------------------------------------------------------------

def _plate_term_value(side1, side2, a, xi, zeta, quadrature, errors):
    """I(zeta) for one Matsubara point (xi > 0), integrated over u = y - zeta."""
    def integrand(u):
        y = zeta + u
        kperp = np.sqrt(np.maximum(y * y - zeta * zeta, 0.0)) / (2.0 * a)
        r_tm1, r_te1 = side1.pair(xi, kperp)
        r_tm2, r_te2 = side2.pair(xi, kperp)
        decay = np.exp(-y)
        return y * (np.log1p(-r_tm1 * r_tm2 * decay) + np.log1p(-r_te1 * r_te2 * decay))
    res = integrate_semi_infinite(integrand, quadrature)
    errors.append(res.error)
    return res.value


def _plate_zero_term(side1, side2, a, quadrature, errors):
    def integrand(y):
        kperp = y / (2.0 * a)
        r_tm1, r_te1 = side1.zero_rule.pair(kperp)
        r_tm2, r_te2 = side2.zero_rule.pair(kperp)
        decay = np.exp(-y)
        return y * (np.log1p(-r_tm1 * r_tm2 * decay) + np.log1p(-r_te1 * r_te2 * decay))
    res = integrate_semi_infinite(integrand, quadrature)
    errors.append(res.error)
    return res.value


def free_energy_plates(job: LifshitzJob, keep_terms: bool = False,
                       forced_truncation: Optional[int] = None) -> EnergyResult:
    """Free energy per unit area of two half-spaces at T > 0 [J/m^2].

    Runs the primed Matsubara sum of the transverse-momentum integral; the
    l = 0 term follows the policy's ZeroFrequencyRule.  Negative (attractive)
    for similar materials.

    Parameters
    ----------
    job : LifshitzJob
    keep_terms : bool
        Attach the individual l-term contributions [J/m^2] to the result.
    forced_truncation : int, optional
        Evaluate exactly this many l >= 1 terms instead of applying the
        cutoff test; differentiation stencils use this to keep the
        truncation structure identical across neighboring evaluations.

    Raises
    ------
    ConvergenceError
        Propagated from the sum or the quadrature with the partial value.
    """
    if job.T <= 0.0:
        raise ValueError("free_energy_plates requires T > 0; use free_energy_plates_zero_T")
    side1 = _resolve_side(job.material_1, job.policy, job.T)
    side2 = _resolve_side(job.material_2, job.policy, job.T)
    tau = 2.0 * math.pi * job.T / effective_temperature(job.a)
    errors = []
    terms = [] if keep_terms else None
    prefactor = K_BOLTZMANN * job.T / (8.0 * math.pi * job.a**2)

    def term(l):
        if l == 0:
            v = _plate_zero_term(side1, side2, job.a, job.quadrature, errors)
        else:
            xi = matsubara_frequency(job.T, l)
            v = _plate_term_value(side1, side2, job.a, xi, tau * l, job.quadrature, errors)
        if terms is not None:
            terms.append(prefactor * v * (0.5 if l == 0 else 1.0))
        return v

    result = matsubara_sum(term, job.summation, forced_truncation=forced_truncation)
    value = prefactor * result.value
    quad_err = prefactor * sum(errors) / max(abs(value), 1e-300)
    return EnergyResult(value, result.truncation_index, quad_err,
                        tuple(terms) if terms is not None else None)


def free_energy_plates_zero_T(job: LifshitzJob) -> EnergyResult:
    """Casimir energy per unit area at T = 0 [J/m^2].

    The primed sum becomes (hbar/2 pi) times the integral over continuous
    frequency; carriers with thermally activated conductivity drop out
    because sigma(0) = 0.
    """
    side1 = _resolve_side(job.material_1, job.policy, 0.0)
    side2 = _resolve_side(job.material_2, job.policy, 0.0)
    errors = []
    inner_subdiv = []

    def outer(zetas):
        out = np.empty_like(zetas)
        for i, zeta in enumerate(zetas):
            xi = zeta * C_LIGHT / (2.0 * job.a)
            out[i] = _plate_term_value(side1, side2, job.a, xi, zeta,
                                       job.quadrature, errors)
        return out

    res = integrate_semi_infinite(outer, job.quadrature)
    value = HBAR * C_LIGHT / (32.0 * math.pi**2 * job.a**3) * res.value
    scale = HBAR * C_LIGHT / (32.0 * math.pi**2 * job.a**3)
    quad_err = scale * (res.error + sum(errors)) / max(abs(value), 1e-300)
    return EnergyResult(value, 0, quad_err)


# ---------------------------------------------------------------------------
# atom-wall geometry
# ---------------------------------------------------------------------------

def _atom_term_value(side, atom, a, xi, zeta, quadrature, errors):
    """A(zeta) = int_zeta^inf y^2 e^-y [2 r_TM - (zeta^2/y^2)(r_TM + r_TE)] dy."""
    def integrand(u):
        y = zeta + u
        kperp = np.sqrt(np.maximum(y * y - zeta * zeta, 0.0)) / (2.0 * a)
        if xi > 0.0:
            r_tm, r_te = side.pair(xi, kperp)
        else:
            r_tm, r_te = side.zero_rule.pair(kperp)
        bracket = 2.0 * r_tm
        if zeta > 0.0:
            bracket = bracket - (zeta * zeta) / (y * y) * (r_tm + r_te)
        return y * y * np.exp(-y) * bracket
    res = integrate_semi_infinite(integrand, quadrature)
    errors.append(res.error)
    return res.value


def free_energy_atom_wall(job: AtomJob, keep_terms: bool = False,
                          forced_truncation: Optional[int] = None) -> EnergyResult:
    """Free energy of an atom facing a wall at T > 0 [J].

    The zero-frequency TE value never contributes: the TE coefficient only
    enters through the xi^2/(q^2 c^2) bracket, which vanishes at l = 0.
    """
    if job.T <= 0.0:
        raise ValueError("free_energy_atom_wall requires T > 0; use free_energy_atom_wall_zero_T")
    side = _resolve_side(job.wall, job.policy, job.T)
    tau = 2.0 * math.pi * job.T / effective_temperature(job.a)
    errors = []
    terms = [] if keep_terms else None
    prefactor = -K_BOLTZMANN * job.T / (8.0 * job.a**3)

    def term(l):
        xi = matsubara_frequency(job.T, l)
        alpha = float(job.atom.alpha(xi))
        v = alpha * _atom_term_value(side, job.atom, job.a, xi, tau * l,
                                     job.quadrature, errors)
        if terms is not None:
            terms.append(prefactor * v * (0.5 if l == 0 else 1.0))
        return v

    result = matsubara_sum(term, job.summation, forced_truncation=forced_truncation)
    value = prefactor * result.value
    quad_err = abs(prefactor) * job.atom.alpha0 * sum(errors) / max(abs(value), 1e-300)
    return EnergyResult(value, result.truncation_index, quad_err,
                        tuple(terms) if terms is not None else None)


def free_energy_atom_wall_zero_T(job: AtomJob) -> EnergyResult:
    """Atom-wall interaction energy at T = 0 [J]."""
    side = _resolve_side(job.wall, job.policy, 0.0)
    errors = []

    def outer(zetas):
        out = np.empty_like(zetas)
        for i, zeta in enumerate(zetas):
            xi = zeta * C_LIGHT / (2.0 * job.a)
            alpha = float(job.atom.alpha(xi))
            out[i] = alpha * _atom_term_value(side, job.atom, job.a, xi, zeta,
                                              job.quadrature, errors)
        return out

    res = integrate_semi_infinite(outer, job.quadrature)
    scale = HBAR * C_LIGHT / (32.0 * math.pi * job.a**4)
    value = -scale * res.value
    quad_err = scale * (res.error + job.atom.alpha0 * sum(errors)) / max(abs(value), 1e-300)
    return EnergyResult(value, 0, quad_err)


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------

def pfa_sphere_force(job: LifshitzJob, radius: float) -> float:
    """Sphere-plate force via the proximity relation F = 2 pi R * F_plates [N]."""
    if radius / job.a < 100.0:
        warnings.warn("proximity approximation degrades for R/a < 100",
                      stacklevel=2)
    plates = (free_energy_plates(job) if job.T > 0.0
              else free_energy_plates_zero_T(job))
    return 2.0 * math.pi * radius * plates.value


def pressure_plates(job: LifshitzJob) -> float:
    """Pressure -dF/da between the plates [N/m^2].

    Five-point stencil with step a*1e-4; the stencil evaluations reuse the
    truncation index of the central point so the differenced values share
    their truncation structure.
    """
    h = job.a * 1e-4
    if job.T > 0.0:
        center = free_energy_plates(job)
        frozen = center.truncation_index
        def f(a_value):
            return free_energy_plates(replace(job, a=a_value),
                                      forced_truncation=frozen).value
    else:
        def f(a_value):
            return free_energy_plates_zero_T(replace(job, a=a_value)).value
    slope, _ = derivative_central(f, job.a, h)
    return -slope


def difference_force(job_dark: LifshitzJob, job_light: LifshitzJob,
                     radius: float) -> float:
    """Sphere-plate force change between two plate states sharing geometry [N]."""
    if job_dark.a != job_light.a or job_dark.T != job_light.T:
        raise ValueError("difference_force requires jobs sharing a and T")
    return pfa_sphere_force(job_light, radius) - pfa_sphere_force(job_dark, radius)


def frequency_shift_gamma_z(job: AtomJob,
                            trap: TrapParameters = TrapParameters()) -> float:
    """Relative trap-frequency shift of a trapped atom near the wall.

    gamma_z = |d F_A/dz| / (2 m omega^2) with the force F_A = -d(free energy)/dz,
    i.e. the second separation derivative of the atom-wall free energy over
    2 m omega^2.  Point-atom gradient only; averaging over a condensate
    cloud is a deliberate extension seam.
    """
    if job.atom.alpha0 == 0.0:
        return 0.0
    h = job.a * 1e-4
    if job.T > 0.0:
        center = free_energy_atom_wall(job)
        frozen = center.truncation_index
        def f(z):
            return free_energy_atom_wall(replace(job, a=z),
                                         forced_truncation=frozen).value
    else:
        def f(z):
            return free_energy_atom_wall_zero_T(replace(job, a=z)).value
    curvature = second_derivative_central(f, job.a, h)
    return abs(curvature) / (2.0 * trap.mass * trap.omega**2)
