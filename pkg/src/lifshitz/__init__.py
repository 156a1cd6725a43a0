"""Casimir and Casimir-Polder computation engine.

Evaluates plate-plate and atom-wall dispersion free energies, forces and
entropies under interchangeable dielectric-response models (bound-electron
oscillators, dc-conductivity and plasma-like free-carrier additions,
carrier-screened reflection), and audits each model family against the
low-temperature heat theorem.
"""

__version__ = "0.1.0"

from .constants import effective_temperature
from .dielectric import (
    AtomModel,
    CarrierScenario,
    DcAugmented,
    Drude,
    Oscillator,
    OscillatorSet,
    PlasmaLike,
    SiLogBand,
    SiLorentz,
    conductivity,
    eps_dc_augmented,
    eps_oscillator,
    eps_plasma_like,
    eps_si_logband,
    eps_si_lorentz,
    screening_kappa,
    static_permittivity,
)
from .engine import (
    AtomJob,
    EnergyResult,
    LifshitzJob,
    Material,
    ReflectionPolicy,
    TrapParameters,
    difference_force,
    free_energy_atom_wall,
    free_energy_atom_wall_zero_T,
    free_energy_plates,
    free_energy_plates_zero_T,
    frequency_shift_gamma_z,
    pfa_sphere_force,
    pressure_plates,
)
from .materials import MaterialFileError, builtin_material_path, load_material, parse_material
from .numerics import (
    ConvergenceError,
    QuadratureSpec,
    SummationSpec,
    derivative_central,
    integrate_semi_infinite,
    matsubara_sum,
    polylog3,
    zeta3,
)
from .reflection import (
    ZeroFrequencyRule,
    beta_expansion,
    fresnel,
    r0_bar,
    screened_tm,
    screened_tm_static,
    uniaxial,
)
from .thermo import (
    AsymptoticReport,
    FitError,
    asymptotic_entropy,
    asymptotic_free_energy_plates,
    compute_C_D,
    dc_free_energy_correction,
    dc_residual_entropy_atom,
    dc_residual_entropy_plates,
    entropy,
    fit_C_D,
    nernst_audit,
    screened_atom_asymptotes,
    screened_entropy_asymptote,
    screened_free_energy_asymptote,
    screened_free_energy_correction,
)
