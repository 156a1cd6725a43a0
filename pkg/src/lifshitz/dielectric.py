"""Permittivity models along the imaginary frequency axis, carrier
conductivity laws and screening lengths.

All models are immutable after construction and evaluate vectorized over
frequency.  Model parameters are SI at the constructor boundary; the dc
term is the Gaussian 4*pi*sigma/xi, handled by `constants`.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .constants import (
    C_LIGHT,
    E_CHARGE,
    EPSILON_VACUUM,
    EV_TO_RAD_PER_S,
    HBAR,
    K_BOLTZMANN,
    M_ELECTRON,
    conductivity_si_to_gaussian,
    dc_permittivity_term,
    plasma_frequency_from_density,
)

__all__ = [
    "OscillatorSet",
    "CarrierScenario",
    "AtomModel",
    "Oscillator",
    "DcAugmented",
    "PlasmaLike",
    "Drude",
    "SiLorentz",
    "SiLogBand",
    "DielectricModel",
    "eps_oscillator",
    "eps_dc_augmented",
    "eps_plasma_like",
    "eps_si_lorentz",
    "eps_si_logband",
    "conductivity",
    "screening_kappa",
    "static_permittivity",
]

MAXWELL_BOLTZMANN = "maxwell-boltzmann"
FERMI_DIRAC = "fermi-dirac"


@dataclass(frozen=True)
class OscillatorSet:
    """Bound-electron oscillators: strengths g_j [rad^2/s^2], resonance
    frequencies omega_j > 0 [rad/s], dampings gamma_j >= 0 [rad/s]."""

    strengths: Tuple[float, ...] = ()
    frequencies: Tuple[float, ...] = ()
    dampings: Tuple[float, ...] = ()

    def __post_init__(self):
        g, w, d = self.strengths, self.frequencies, self.dampings
        if not (len(g) == len(w) == len(d)):
            raise ValueError("oscillator arrays must have equal length")
        if any(wi <= 0.0 for wi in w):
            raise ValueError("oscillator frequencies must be positive")
        if any(gi < 0.0 for gi in g) or any(di < 0.0 for di in d):
            raise ValueError("strengths and dampings must be non-negative")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]):
        """Build from (g, omega, gamma) rows."""
        g, w, d = [], [], []
        for row in rows:
            gi, wi, di = (float(v) for v in row)
            g.append(gi)
            w.append(wi)
            d.append(di)
        return cls(tuple(g), tuple(w), tuple(d))

    @property
    def static_permittivity(self):
        """eps(0) = 1 + sum_j g_j/omega_j^2."""
        return 1.0 + sum(g / w**2 for g, w in zip(self.strengths, self.frequencies))


@dataclass(frozen=True)
class CarrierScenario:
    """Charge-carrier content of a material: Arrhenius density and mobility
    laws, statistics flag, and the derived Drude/screening parameters.

    density(T) = density_amplitude * exp(-density_activation/(k_B T)) and
    likewise for the mobility; zero activation means a T-independent factor.
    plasma_frequency/relaxation override the values otherwise derived from
    density, mobility and effective mass.
    """

    density_amplitude: float                 # m^-3
    mobility_amplitude: float                # m^2 V^-1 s^-1
    density_activation: float = 0.0          # J
    mobility_activation: float = 0.0         # J
    statistics: str = MAXWELL_BOLTZMANN
    effective_mass: float = M_ELECTRON       # kg
    plasma_frequency: Optional[float] = None  # rad/s
    relaxation: Optional[float] = None        # rad/s

    def __post_init__(self):
        if self.density_amplitude < 0.0 or self.mobility_amplitude < 0.0:
            raise ValueError("density and mobility amplitudes must be >= 0")
        if self.density_activation < 0.0 or self.mobility_activation < 0.0:
            raise ValueError("activation energies must be >= 0")
        if self.statistics not in (MAXWELL_BOLTZMANN, FERMI_DIRAC):
            raise ValueError(f"unknown statistics {self.statistics!r}")
        if self.effective_mass <= 0.0:
            raise ValueError("effective mass must be positive")

    def density(self, T):
        """Carrier density n(T) [m^-3]; exactly zero at T = 0 with activation."""
        return self.density_amplitude * _arrhenius(self.density_activation, T)

    def mobility(self, T):
        """Carrier mobility mu(T) [m^2/(V s)]."""
        return self.mobility_amplitude * _arrhenius(self.mobility_activation, T)

    @property
    def activation(self):
        """Total conductivity activation energy [J]."""
        return self.density_activation + self.mobility_activation

    @property
    def has_carriers(self):
        """True when sigma(T) > 0 mathematically for every T > 0.

        This is a structural statement about the laws, deliberately not a
        floating-point test: Arrhenius factors underflow to 0.0 long before
        the physics says sigma = 0.
        """
        return self.density_amplitude > 0.0 and self.mobility_amplitude > 0.0

    @property
    def vanishing_density(self):
        """True when n(T) -> 0 as T -> 0 (insulator / intrinsic behavior)."""
        return self.density_activation > 0.0 or self.density_amplitude == 0.0

    def conductivity_si(self, T):
        """sigma(T) = n(T) |e| mu(T) in SI units [S/m]."""
        return self.density(T) * E_CHARGE * self.mobility(T)

    def plasma_frequency_at(self, T):
        """omega_p(T) [rad/s], from the density unless overridden."""
        if self.plasma_frequency is not None:
            return self.plasma_frequency
        return plasma_frequency_from_density(self.density(T), self.effective_mass)

    def relaxation_at(self, T):
        """Drude relaxation gamma(T) = e/(m* mu(T)) [rad/s] unless overridden.

        Diverges (returns inf) when the mobility underflows to zero; the
        Drude term omega_p^2/(xi (xi + gamma)) then vanishes cleanly.
        """
        if self.relaxation is not None:
            return self.relaxation
        mu = self.mobility(T)
        if mu == 0.0:
            return math.inf
        return E_CHARGE / (self.effective_mass * mu)


def _arrhenius(activation, T):
    if activation == 0.0:
        return 1.0
    if T <= 0.0:
        return 0.0
    return math.exp(-activation / (K_BOLTZMANN * T))


@dataclass(frozen=True)
class AtomModel:
    """Single-oscillator dynamic polarizability alpha_0*w_a^2/(w_a^2+xi^2)."""

    alpha0: float        # static polarizability, m^3
    omega_a: float       # characteristic absorption frequency, rad/s

    def __post_init__(self):
        if self.alpha0 < 0.0:
            raise ValueError("alpha0 must be >= 0")
        if self.omega_a <= 0.0:
            raise ValueError("omega_a must be positive")

    def alpha(self, xi):
        w2 = self.omega_a**2
        return self.alpha0 * w2 / (w2 + np.asarray(xi, dtype=float) ** 2)


# ---------------------------------------------------------------------------
# permittivity laws
# ---------------------------------------------------------------------------

def eps_oscillator(model: OscillatorSet, xi):
    """1 + sum_j g_j/(omega_j^2 + xi^2 + gamma_j*xi)."""
    xi = np.asarray(xi, dtype=float)
    out = np.ones_like(xi)
    for g, w, d in zip(model.strengths, model.frequencies, model.dampings):
        out = out + g / (w * w + xi * xi + d * xi)
    return out if out.ndim else float(out)


def eps_dc_augmented(model: OscillatorSet, scenario: CarrierScenario, xi, T):
    """Core permittivity plus the dc-conductivity term 4*pi*sigma(T)/xi.

    Diverges at xi = 0; the zero-frequency point is handled by the explicit
    reflection limit rules, never by evaluating this law.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0.0):
        raise ValueError("dc-augmented permittivity requires xi > 0")
    sigma = scenario.conductivity_si(T)
    out = eps_oscillator(model, xi_arr) + dc_permittivity_term(sigma, xi_arr)
    return out if np.ndim(out) else float(out)


def eps_plasma_like(model: OscillatorSet, plasma_frequency, xi):
    """1 + omega_p^2/xi^2 + oscillator terms (dissipationless free carriers)."""
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0.0):
        raise ValueError("plasma-like permittivity requires xi > 0")
    out = eps_oscillator(model, xi_arr) + plasma_frequency**2 / xi_arr**2
    return out if np.ndim(out) else float(out)


def eps_drude(model: OscillatorSet, plasma_frequency, relaxation, xi):
    """Core plus dissipative free-carrier term omega_p^2/(xi*(xi+gamma))."""
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0.0):
        raise ValueError("Drude permittivity requires xi > 0")
    out = eps_oscillator(model, xi_arr) + plasma_frequency**2 / (xi_arr * (xi_arr + relaxation))
    return out if np.ndim(out) else float(out)


SI_LORENTZ_EPS_STATIC = 11.87
SI_LORENTZ_EPS_INF = 1.035
SI_LORENTZ_RESONANCE = 6.6e15      # rad/s

SI_LOGBAND_HEIGHT = 48.0
SI_LOGBAND_LOW_EV = 3.22
SI_LOGBAND_HIGH_EV = 4.62


def eps_si_lorentz(xi, eps_static=SI_LORENTZ_EPS_STATIC,
                   eps_inf=SI_LORENTZ_EPS_INF, resonance=SI_LORENTZ_RESONANCE):
    """Single-Lorentzian silicon permittivity on the imaginary axis."""
    xi = np.asarray(xi, dtype=float)
    w2 = resonance**2
    out = eps_inf + (eps_static - eps_inf) * w2 / (w2 + xi * xi)
    return out if out.ndim else float(out)


def eps_si_logband(xi, band_height=SI_LOGBAND_HEIGHT,
                   band_low_ev=SI_LOGBAND_LOW_EV, band_high_ev=SI_LOGBAND_HIGH_EV):
    """Silicon permittivity from a constant absorption band between two
    photon energies [eV]: 1 + (band/pi) ln((w1^2+xi^2)/(w0^2+xi^2))."""
    xi = np.asarray(xi, dtype=float)
    w0 = band_low_ev * EV_TO_RAD_PER_S
    w1 = band_high_ev * EV_TO_RAD_PER_S
    out = 1.0 + (band_height / math.pi) * np.log((w1 * w1 + xi * xi) / (w0 * w0 + xi * xi))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# model variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Oscillator:
    oscillators: OscillatorSet = OscillatorSet()

    def eps(self, xi, T=None):
        return eps_oscillator(self.oscillators, xi)

    @property
    def eps_static(self):
        return self.oscillators.static_permittivity


@dataclass(frozen=True)
class DcAugmented:
    oscillators: OscillatorSet
    carriers: CarrierScenario

    def eps(self, xi, T):
        return eps_dc_augmented(self.oscillators, self.carriers, xi, T)

    @property
    def eps_static(self):
        # static value of the core; the dc term diverges and is handled by
        # the zero-frequency reflection rules
        return self.oscillators.static_permittivity


@dataclass(frozen=True)
class PlasmaLike:
    oscillators: OscillatorSet
    plasma_frequency: float

    def eps(self, xi, T=None):
        return eps_plasma_like(self.oscillators, self.plasma_frequency, xi)

    @property
    def eps_static(self):
        return math.inf


@dataclass(frozen=True)
class Drude:
    oscillators: OscillatorSet
    plasma_frequency: float
    relaxation: float

    def eps(self, xi, T=None):
        return eps_drude(self.oscillators, self.plasma_frequency, self.relaxation, xi)

    @property
    def eps_static(self):
        return math.inf


@dataclass(frozen=True)
class SiLorentz:
    eps_static_value: float = SI_LORENTZ_EPS_STATIC
    eps_inf: float = SI_LORENTZ_EPS_INF
    resonance: float = SI_LORENTZ_RESONANCE

    def eps(self, xi, T=None):
        return eps_si_lorentz(xi, self.eps_static_value, self.eps_inf, self.resonance)

    @property
    def eps_static(self):
        return self.eps_static_value


@dataclass(frozen=True)
class SiLogBand:
    band_height: float = SI_LOGBAND_HEIGHT
    band_low_ev: float = SI_LOGBAND_LOW_EV
    band_high_ev: float = SI_LOGBAND_HIGH_EV

    def eps(self, xi, T=None):
        return eps_si_logband(xi, self.band_height, self.band_low_ev, self.band_high_ev)

    @property
    def eps_static(self):
        return float(eps_si_logband(0.0, self.band_height,
                                    self.band_low_ev, self.band_high_ev))


DielectricModel = Union[Oscillator, DcAugmented, PlasmaLike, Drude, SiLorentz, SiLogBand]


def static_permittivity(model):
    """eps(i0) of the model core (inf for free-carrier variants)."""
    return model.eps_static


# ---------------------------------------------------------------------------
# carriers: conductivity and screening
# ---------------------------------------------------------------------------

def conductivity(scenario: CarrierScenario, T):
    """dc conductivity sigma(T) in Gaussian angular-frequency units [1/s]."""
    if T < 0.0:
        raise ValueError("temperature must be >= 0")
    return conductivity_si_to_gaussian(scenario.conductivity_si(T))


def screening_kappa(scenario: CarrierScenario, eps0, T):
    """Inverse screening length kappa [1/m].

    Maxwell-Boltzmann statistics gives the Debye-Hueckel form
    kappa^2 = n e^2/(eps_vac eps0 k_B T); Fermi-Dirac gives the
    Thomas-Fermi form kappa^2 = (3/2) n e^2/(eps_vac eps0 E_F) with the
    Fermi energy E_F = hbar*omega_p.  n = 0 returns 0 (no screening).
    """
    n = scenario.density(T)
    if n == 0.0:
        return 0.0
    if scenario.statistics == MAXWELL_BOLTZMANN:
        if T <= 0.0:
            raise ValueError("Maxwell-Boltzmann screening requires T > 0")
        return math.sqrt(n * E_CHARGE**2 / (EPSILON_VACUUM * eps0 * K_BOLTZMANN * T))
    fermi_energy = HBAR * scenario.plasma_frequency_at(T)
    if fermi_energy <= 0.0:
        raise ValueError("Fermi-Dirac screening requires a positive plasma frequency")
    return math.sqrt(1.5 * n * E_CHARGE**2 / (EPSILON_VACUUM * eps0 * fermi_energy))
