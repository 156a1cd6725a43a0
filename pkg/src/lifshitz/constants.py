"""Physical constants and unit conversions shared by all physics modules.

Internal convention: frequencies on the imaginary axis are angular
frequencies in rad/s, separations in m, temperatures in K, energies in J.
Free-energy formulas are written in the Gaussian convention (dc term
4*pi*sigma/xi, plasma term omega_p^2/xi^2); SI-facing inputs are converted
here at the boundary, so no esu quantities appear elsewhere.
"""

import math

from scipy import constants as _sc

HBAR = _sc.hbar            # J s
C_LIGHT = _sc.c            # m/s
K_BOLTZMANN = _sc.k        # J/K
E_CHARGE = _sc.e           # C
EPSILON_VACUUM = _sc.epsilon_0   # F/m
M_ELECTRON = _sc.m_e       # kg

# One shared eV <-> rad/s conversion, 12 significant digits (e/hbar).
EV_TO_RAD_PER_S = 1.519267447879e15
EV_TO_JOULE = E_CHARGE


def effective_temperature(a):
    """Thermal crossover temperature hbar*c/(2*a*k_B) for separation a [m]."""
    return HBAR * C_LIGHT / (2.0 * a * K_BOLTZMANN)


def matsubara_frequency(T, l):
    """l-th Matsubara angular frequency 2*pi*k_B*T*l/hbar [rad/s]."""
    return 2.0 * math.pi * K_BOLTZMANN * T * l / HBAR


def reduced_frequency(xi, a):
    """Dimensionless frequency 2*a*xi/c."""
    return 2.0 * a * xi / C_LIGHT


def dc_permittivity_term(sigma_si, xi):
    """Drude-like dc addition 4*pi*sigma/xi for SI conductivity [S/m].

    Equals sigma_si/(epsilon_vacuum*xi); dimensionless.
    """
    return sigma_si / (EPSILON_VACUUM * xi)


def conductivity_si_to_gaussian(sigma_si):
    """SI conductivity [S/m] to Gaussian angular-frequency units [1/s]."""
    return sigma_si / (4.0 * math.pi * EPSILON_VACUUM)


def plasma_frequency_from_density(n, effective_mass):
    """Plasma angular frequency [rad/s] for carrier density n [m^-3]."""
    if n <= 0.0:
        return 0.0
    return math.sqrt(n * E_CHARGE**2 / (EPSILON_VACUUM * effective_mass))
