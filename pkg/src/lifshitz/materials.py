"""Material definition files.

INI documents with sections [variant], [oscillators] and [carriers], parsed
identically by the CLI and the library constructors:

    [variant]
    kind = oscillator        ; oscillator | dc | plasma-like | drude |
                             ; si-lorentz | si-logband

    [oscillators]
    ; label = g[rad^2/s^2]  omega[rad/s]  gamma[rad/s]
    uv = 1.124e33  2.0e16  0.0

    [carriers]
    statistics = maxwell-boltzmann      ; or fermi-dirac
    density_m3 = 5e20                   ; Arrhenius amplitude
    density_activation_ev = 0.0
    mobility_m2_per_vs = 0.045
    mobility_activation_ev = 0.5
    effective_mass_ratio = 0.26         ; in electron masses
    ; plasma_frequency_rads = ...       ; optional overrides
    ; relaxation_rads = ...

Variant-specific keys in [variant]: si-lorentz accepts eps_static, eps_inf,
resonance_rads; si-logband accepts band_height, band_low_ev, band_high_ev;
plasma-like and drude accept plasma_frequency_rads (and relaxation_rads),
falling back to values derived from [carriers].

Built-in materials ship under lifshitz/data and resolve via the
"builtin:<name>" prefix.
"""

import configparser
from importlib import resources
from pathlib import Path

from .constants import EV_TO_JOULE, M_ELECTRON
from .dielectric import (
    CarrierScenario,
    DcAugmented,
    Drude,
    Oscillator,
    OscillatorSet,
    PlasmaLike,
    SiLogBand,
    SiLorentz,
)
from .engine import Material

__all__ = ["MaterialFileError", "load_material", "parse_material",
           "builtin_material_path", "BUILTIN_MATERIALS"]

BUILTIN_MATERIALS = ("vacuum", "si-lorentz", "si-logband", "sio2", "au-placeholder")

_VARIANTS = ("oscillator", "dc", "plasma-like", "drude", "si-lorentz", "si-logband")


class MaterialFileError(ValueError):
    """Malformed material definition; message carries file and section context."""


def builtin_material_path(name):
    """Filesystem path of a shipped material definition."""
    if name not in BUILTIN_MATERIALS:
        raise MaterialFileError(
            f"unknown builtin material {name!r}; available: {', '.join(BUILTIN_MATERIALS)}")
    return resources.files("lifshitz.data").joinpath(name.replace("-", "_") + ".ini")


def load_material(source) -> Material:
    """Load a material from a path or a 'builtin:<name>' reference."""
    source = str(source)
    if source.startswith("builtin:"):
        path = builtin_material_path(source.split(":", 1)[1])
        return parse_material(path.read_text(), origin=source)
    path = Path(source)
    if not path.exists():
        raise MaterialFileError(f"material file not found: {source}")
    return parse_material(path.read_text(), origin=source)


def parse_material(text, origin="<string>") -> Material:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text, source=origin)
    except configparser.Error as exc:
        raise MaterialFileError(f"{origin}: {exc}") from exc

    if "variant" not in parser:
        raise MaterialFileError(f"{origin}: missing [variant] section")
    kind = parser["variant"].get("kind", "").strip()
    if kind not in _VARIANTS:
        raise MaterialFileError(
            f"{origin}: [variant] kind must be one of {', '.join(_VARIANTS)} (got {kind!r})")

    oscillators = _parse_oscillators(parser, origin)
    carriers = _parse_carriers(parser, origin)
    variant = parser["variant"]

    if kind == "oscillator":
        return Material(Oscillator(oscillators), carriers)
    if kind == "dc":
        if carriers is None:
            raise MaterialFileError(f"{origin}: kind=dc requires a [carriers] section")
        return Material(DcAugmented(oscillators, carriers), carriers)
    if kind == "plasma-like":
        omega_p = _get_float(variant, "plasma_frequency_rads", origin, default=None)
        if omega_p is None:
            if carriers is None:
                raise MaterialFileError(
                    f"{origin}: kind=plasma-like needs plasma_frequency_rads or [carriers]")
            omega_p = carriers.plasma_frequency_at(300.0)
        return Material(PlasmaLike(oscillators, omega_p), carriers)
    if kind == "drude":
        omega_p = _get_float(variant, "plasma_frequency_rads", origin, default=None)
        gamma = _get_float(variant, "relaxation_rads", origin, default=None)
        if omega_p is None or gamma is None:
            if carriers is None:
                raise MaterialFileError(
                    f"{origin}: kind=drude needs plasma_frequency_rads and relaxation_rads "
                    "or [carriers]")
            omega_p = omega_p if omega_p is not None else carriers.plasma_frequency_at(300.0)
            gamma = gamma if gamma is not None else carriers.relaxation_at(300.0)
        return Material(Drude(oscillators, omega_p, gamma), carriers)
    if kind == "si-lorentz":
        model = SiLorentz(
            eps_static_value=_get_float(variant, "eps_static", origin, default=11.87),
            eps_inf=_get_float(variant, "eps_inf", origin, default=1.035),
            resonance=_get_float(variant, "resonance_rads", origin, default=6.6e15),
        )
        return Material(model, carriers)
    if kind == "si-logband":
        model = SiLogBand(
            band_height=_get_float(variant, "band_height", origin, default=48.0),
            band_low_ev=_get_float(variant, "band_low_ev", origin, default=3.22),
            band_high_ev=_get_float(variant, "band_high_ev", origin, default=4.62),
        )
        return Material(model, carriers)
    raise AssertionError


def _parse_oscillators(parser, origin) -> OscillatorSet:
    if "oscillators" not in parser:
        return OscillatorSet()
    rows = []
    for label, value in parser["oscillators"].items():
        fields = value.split()
        if len(fields) != 3:
            raise MaterialFileError(
                f"{origin}: oscillator {label!r} needs 3 values (g omega gamma), "
                f"got {len(fields)}")
        try:
            rows.append(tuple(float(v) for v in fields))
        except ValueError as exc:
            raise MaterialFileError(f"{origin}: oscillator {label!r}: {exc}") from exc
    try:
        return OscillatorSet.from_rows(rows)
    except ValueError as exc:
        raise MaterialFileError(f"{origin}: [oscillators]: {exc}") from exc


def _parse_carriers(parser, origin):
    if "carriers" not in parser:
        return None
    section = parser["carriers"]
    statistics = section.get("statistics", "maxwell-boltzmann").strip()
    omega_p = _get_float(section, "plasma_frequency_rads", origin, default=None)
    gamma = _get_float(section, "relaxation_rads", origin, default=None)
    try:
        return CarrierScenario(
            density_amplitude=_get_float(section, "density_m3", origin, default=0.0),
            mobility_amplitude=_get_float(section, "mobility_m2_per_vs", origin, default=0.0),
            density_activation=_get_float(section, "density_activation_ev", origin,
                                          default=0.0) * EV_TO_JOULE,
            mobility_activation=_get_float(section, "mobility_activation_ev", origin,
                                           default=0.0) * EV_TO_JOULE,
            statistics=statistics,
            effective_mass=_get_float(section, "effective_mass_ratio", origin,
                                      default=1.0) * M_ELECTRON,
            plasma_frequency=omega_p,
            relaxation=gamma,
        )
    except ValueError as exc:
        raise MaterialFileError(f"{origin}: [carriers]: {exc}") from exc


def _get_float(section, key, origin, default):
    raw = section.get(key, None)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise MaterialFileError(f"{origin}: {key} = {raw!r} is not a number") from exc
