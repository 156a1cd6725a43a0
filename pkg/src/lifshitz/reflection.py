"""Reflection coefficients at imaginary Matsubara frequencies.

Families: standard Fresnel, the screened TM coefficient built from the
carrier drift/diffusion response, its static limit, and the uniaxial-crystal
pair.  Zero-frequency values are table-driven through ZeroFrequencyRule so
the l = 0 treatment is explicit and auditable instead of being a numerical
xi -> 0 limit inside the engine.

A note on the screened family: its static limit equals the uniaxial pair
only under a wave-vector-dependent eps_z, i.e. the screened coefficients as
a whole cannot be reproduced by any spatially dispersive permittivity (the
TE equality would force eps_x -> inf at zero frequency and hence TM -> 1,
contradicting the finite static TM value).  See `uniaxial` for the
demonstration used in tests.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .dielectric import CarrierScenario, screening_kappa

__all__ = [
    "WaveContext",
    "ZeroFrequencyRule",
    "wave_numbers",
    "fresnel",
    "screened_tm",
    "screened_tm_static",
    "uniaxial",
    "r0_bar",
    "beta_expansion",
    "static_tm_dielectric",
    "static_te_plasma",
]


def _safe_sqrt(x):
    # clamps the tiny negative values produced by q^2 - kperp^2 cancellation
    return np.sqrt(np.maximum(x, 0.0))


@dataclass(frozen=True)
class WaveContext:
    """Wave numbers at one (xi, kperp) point: q in vacuum, k in the medium."""

    xi: float
    kperp: float
    q: float
    k: float


def wave_numbers(eps, xi, kperp):
    """(q, k) with q^2 = kperp^2 + xi^2/c^2 and k^2 = kperp^2 + eps*xi^2/c^2."""
    w2 = (xi / C_LIGHT) ** 2
    kperp = np.asarray(kperp, dtype=float)
    q = _safe_sqrt(kperp * kperp + w2)
    k = _safe_sqrt(kperp * kperp + eps * w2)
    return q, k


def fresnel(eps_fn, xi, kperp):
    """Standard Fresnel pair (r_TM, r_TE) at imaginary frequency xi > 0.

    eps_fn maps xi [rad/s] to the permittivity; kperp may be an ndarray.
    """
    eps = eps_fn(xi)
    q, k = wave_numbers(eps, xi, kperp)
    r_tm = (eps * q - k) / (eps * q + k)
    r_te = (q - k) / (q + k)
    return r_tm, r_te


def screened_tm(core_eps_fn, scenario: CarrierScenario, xi, kperp, T):
    """TM coefficient with carrier screening (drift plus diffusion response).

    The free carriers enter through the Drude-type addition
    eps~ = eps + omega_p^2/(xi*(xi+gamma)) and through the inverse screening
    length kappa; the wave equation inside the medium acquires the extra
    longitudinal channel, which modifies the TM coefficient to

        [eps~ q - k - (kperp^2/eta)(eps~-eps)/eps] /
        [eps~ q + k + (kperp^2/eta)(eps~-eps)/eps],

    with k^2 = kperp^2 + eps~ xi^2/c^2 and
    eta^2 = kperp^2 + kappa^2 (eps(0)/eps) eps~/(eps~-eps).

    When the carrier response is absent (eps~ == eps, e.g. the mobility has
    frozen out) this reduces to the plain Fresnel TM value of the core.
    """
    eps = core_eps_fn(xi)
    omega_p = scenario.plasma_frequency_at(T)
    gamma = scenario.relaxation_at(T)
    drude = omega_p**2 / (xi * (xi + gamma)) if omega_p > 0.0 else 0.0
    if drude == 0.0:
        r_tm, _ = fresnel(core_eps_fn, xi, kperp)
        return r_tm
    eps_t = eps + drude
    eps0 = core_eps_fn(0.0)
    kappa = screening_kappa(scenario, eps0, T)
    kperp = np.asarray(kperp, dtype=float)
    q, _ = wave_numbers(1.0, xi, kperp)
    k = _safe_sqrt(kperp * kperp + eps_t * (xi / C_LIGHT) ** 2)
    eta = _safe_sqrt(kperp * kperp + kappa**2 * (eps0 / eps) * (eps_t / drude))
    correction = kperp * kperp * drude / (eta * eps)
    return (eps_t * q - k - correction) / (eps_t * q + k + correction)


def screened_tm_static(eps0, kappa, kperp):
    """Zero-frequency TM coefficient with static screening:
    [eps0 sqrt(kperp^2+kappa^2) - kperp] / [eps0 sqrt(kperp^2+kappa^2) + kperp]."""
    kperp = np.asarray(kperp, dtype=float)
    s = _safe_sqrt(kperp * kperp + kappa * kappa)
    out = (eps0 * s - kperp) / (eps0 * s + kperp)
    return out if out.ndim else float(out)


def uniaxial(eps_x_fn, eps_z_fn, xi, kperp):
    """Reflection pair for a uniaxial crystal (optical axis normal to the
    surface): r_TM uses sqrt(eps_x eps_z) and the eps_z wave number, r_TE
    uses the eps_x wave number."""
    eps_x = eps_x_fn(xi)
    eps_z = eps_z_fn(xi)
    kperp = np.asarray(kperp, dtype=float)
    w2 = (xi / C_LIGHT) ** 2
    q = _safe_sqrt(kperp * kperp + w2)
    k_z = _safe_sqrt(kperp * kperp + eps_z * w2)
    k_x = _safe_sqrt(kperp * kperp + eps_x * w2)
    root = math.sqrt(eps_x * eps_z)
    r_tm = (root * q - k_z) / (root * q + k_z)
    r_te = (q - k_x) / (q + k_x)
    return r_tm, r_te


def r0_bar(eps0, a, kappa, y):
    """Static screened TM coefficient in the dimensionless variable y = 2*a*q:
    [eps0 sqrt(y^2+(2 a kappa)^2) - y] / [eps0 sqrt(y^2+(2 a kappa)^2) + y]."""
    y = np.asarray(y, dtype=float)
    t = 2.0 * a * kappa
    s = _safe_sqrt(y * y + t * t)
    out = (eps0 * s - y) / (eps0 * s + y)
    return out if out.ndim else float(out)


def beta_expansion(eps, zeta, y):
    """Zeroth- and first-order reflection response to a dc addition.

    For the permittivity eps + beta with beta = 4*pi*sigma/xi, expands both
    coefficients at the dimensionless point (zeta, y = 2aq):

        r(beta) = r0 + c*beta + O(beta^2).

    Returns (r_TM0, c_TM, r_TE0, c_TE) with

        c_TM = y (2y^2 + (eps-2) zeta^2) / (s (eps y + s)^2),
        c_TE = -zeta^2 y / (s (y + s)^2),   s = sqrt(y^2 + (eps-1) zeta^2).

    Both are the exact derivatives d r/d beta, verified against finite
    differences of the augmented-permittivity Fresnel family.
    """
    s = math.sqrt(y * y + (eps - 1.0) * zeta * zeta)
    r_tm0 = (eps * y - s) / (eps * y + s)
    r_te0 = (y - s) / (y + s)
    c_tm = y * (2.0 * y * y + (eps - 2.0) * zeta * zeta) / (s * (eps * y + s) ** 2)
    c_te = -zeta * zeta * y / (s * (y + s) ** 2)
    return r_tm0, c_tm, r_te0, c_te


def static_tm_dielectric(eps0):
    """Zero-frequency TM value (eps0-1)/(eps0+1) of a finite dielectric."""
    return (eps0 - 1.0) / (eps0 + 1.0)


def static_te_plasma(omega_p, kperp):
    """Zero-frequency TE limit of the plasma-like family: the free-carrier
    term keeps eps*xi^2/c^2 -> omega_p^2/c^2 finite, leaving a nonzero
    (kperp - sqrt(kperp^2+omega_p^2/c^2)) / (kperp + sqrt(...))."""
    kperp = np.asarray(kperp, dtype=float)
    k = _safe_sqrt(kperp * kperp + (omega_p / C_LIGHT) ** 2)
    out = (kperp - k) / (kperp + k)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ZeroFrequencyRule:
    """Explicit l = 0 reflection values, one variant per coefficient family.

    kind:
      dielectric-finite  TM = (eps0-1)/(eps0+1), TE = 0
      drude              TM = 1 when carriers are present, else the
                         dielectric value; TE = 0
      plasma             TM = 1, TE = static_te_plasma(omega_p, kperp)
      screened-static    TM = screened_tm_static(eps0, kappa, kperp), TE = 0
      ideal-metal        TM = 1, TE = -1
    """

    kind: str
    eps0: float = math.nan
    omega_p: float = 0.0
    kappa: float = 0.0
    carriers_present: bool = False

    @classmethod
    def dielectric_finite(cls, eps0):
        return cls("dielectric-finite", eps0=eps0)

    @classmethod
    def drude(cls, eps0, carriers_present):
        return cls("drude", eps0=eps0, carriers_present=carriers_present)

    @classmethod
    def plasma(cls, omega_p):
        return cls("plasma", omega_p=omega_p)

    @classmethod
    def screened_static(cls, eps0, kappa):
        return cls("screened-static", eps0=eps0, kappa=kappa)

    @classmethod
    def ideal_metal(cls):
        return cls("ideal-metal")

    def pair(self, kperp):
        """(r_TM, r_TE) at xi = 0 for transverse wave number(s) kperp."""
        kperp = np.asarray(kperp, dtype=float)
        ones = np.ones_like(kperp)
        if self.kind == "dielectric-finite":
            return static_tm_dielectric(self.eps0) * ones, 0.0 * ones
        if self.kind == "drude":
            tm = 1.0 if self.carriers_present else static_tm_dielectric(self.eps0)
            return tm * ones, 0.0 * ones
        if self.kind == "plasma":
            return ones, static_te_plasma(self.omega_p, kperp) * np.ones_like(kperp)
        if self.kind == "screened-static":
            return screened_tm_static(self.eps0, self.kappa, kperp) * ones, 0.0 * ones
        if self.kind == "ideal-metal":
            return ones, -ones
        raise ValueError(f"unknown zero-frequency rule {self.kind!r}")
