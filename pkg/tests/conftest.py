import math

import pytest

from lifshitz.constants import M_ELECTRON
from lifshitz.dielectric import (
    AtomModel,
    CarrierScenario,
    Oscillator,
    OscillatorSet,
)
from lifshitz.engine import Material

# single-oscillator stand-ins reproducing a given static permittivity with
# the resonance far above the thermal frequency window
UV_RESONANCE = 2e16   # rad/s


def oscillator_material(eps0):
    g = (eps0 - 1.0) * UV_RESONANCE**2
    return Material(Oscillator(OscillatorSet.from_rows([(g, UV_RESONANCE, 0.0)])))


@pytest.fixture(scope="session")
def vacuum():
    return Material(Oscillator(OscillatorSet()))


@pytest.fixture(scope="session")
def silica_like():
    """eps0 = 3.81 single-oscillator dielectric."""
    return oscillator_material(3.81)


@pytest.fixture(scope="session")
def fixed_n_carriers():
    """Carrier density that survives T -> 0; mobility freezes out."""
    return CarrierScenario(
        density_amplitude=5e20,
        mobility_amplitude=0.045,
        mobility_activation=0.5 * 1.602176634e-19,
        effective_mass=0.26 * M_ELECTRON,
    )


@pytest.fixture(scope="session")
def vanishing_n_carriers():
    """Thermally activated density; mobility constant."""
    return CarrierScenario(
        density_amplitude=5e20,
        density_activation=0.5 * 1.602176634e-19,
        mobility_amplitude=0.045,
        effective_mass=0.26 * M_ELECTRON,
    )


@pytest.fixture(scope="session")
def rb_atom():
    return AtomModel(alpha0=4.73e-29, omega_a=2.415e15)
