"""Command-line surface.

Subcommands: eps (permittivity tables), free-energy (single points and
sweeps), audit (heat-theorem reports), scenario (packaged reproduction
runs).  Exit codes are a stable contract:

    0  success
    2  input error (bad flags, malformed files)
    3  numerical failure (quadrature/summation/fit did not converge)
    4  --expect mismatch
    5  out-of-scope request (e.g. nonequilibrium condensate runs)

CLI flags override file values, which override defaults.  Output files
start with '#' comment headers recording version, config hash and
tolerances; reruns with --deterministic are byte-identical.
"""

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .dielectric import AtomModel
from .engine import (
    AtomJob,
    LifshitzJob,
    Material,
    ReflectionPolicy,
    free_energy_atom_wall,
    free_energy_atom_wall_zero_T,
    free_energy_plates,
    free_energy_plates_zero_T,
)
from .materials import MaterialFileError, load_material
from .numerics import ConvergenceError, QuadratureSpec, SummationSpec
from .output import SweepResult, config_hash, csv_text, json_text
from .scenarios import (
    EXPECTED_AUDIT_VERDICTS,
    EntropyAuditSpec,
    CondensateShiftSpec,
    OpticalModulationSpec,
    ScopeError,
    parse_scenario,
    run_condensate_shift,
    run_entropy_audit,
    run_optical_modulation,
)
from .thermo import FitError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_EXPECT = 4
EXIT_SCOPE = 5

CLI_POLICIES = ("standard", "dc", "screened", "static-screened", "plasma")


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (MaterialFileError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, FitError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ScopeError as exc:
        print(f"out of scope: {exc}", file=sys.stderr)
        return EXIT_SCOPE


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lifshitz",
        description="Casimir / Casimir-Polder free energies, forces and entropy audits",
    )
    parser.add_argument("--version", action="version", version=f"lifshitz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    eps = sub.add_parser("eps", help="permittivity along the imaginary axis")
    eps.add_argument("--material", required=True)
    eps.add_argument("--sweep", required=True, metavar="start:stop:points[:log]")
    eps.add_argument("--T", type=float, default=300.0)
    _common_output_flags(eps)
    eps.set_defaults(handler=cmd_eps)

    fe = sub.add_parser("free-energy", help="plate-plate or atom-wall free energy")
    fe.add_argument("--material", required=True, help="plate 1 / wall material file")
    fe.add_argument("--material2", default=None, help="plate 2 (defaults to --material)")
    fe.add_argument("--atom", default=None, help="atom file: switches to atom-wall geometry")
    fe.add_argument("--a", type=float, default=None, help="separation [m]")
    fe.add_argument("--T", type=float, default=None, help="temperature [K]")
    fe.add_argument("--R", type=float, default=None,
                    help="sphere radius [m]; adds a proximity-force column")
    fe.add_argument("--policy", choices=CLI_POLICIES, default="standard")
    fe.add_argument("--sweep", default=None, metavar="start:stop:points[:log]")
    fe.add_argument("--sweep-var", choices=("a", "T"), default="a")
    _common_output_flags(fe)
    fe.set_defaults(handler=cmd_free_energy)

    audit = sub.add_parser("audit", help="low-temperature heat-theorem audit")
    audit.add_argument("--material", required=True)
    audit.add_argument("--model-class", required=True,
                       choices=tuple(EXPECTED_AUDIT_VERDICTS))
    audit.add_argument("--a", type=float, default=1e-6)
    audit.add_argument("--points", type=int, default=12)
    audit.add_argument("--expect", choices=("satisfied", "violated"), default=None)
    _common_output_flags(audit)
    audit.set_defaults(handler=cmd_audit)

    scenario = sub.add_parser("scenario", help="run a packaged scenario file")
    scenario.add_argument("spec_file")
    scenario.add_argument("--out", required=True, help="output directory")
    scenario.add_argument("--format", choices=("csv", "json"), default="csv")
    scenario.add_argument("--deterministic", action="store_true")
    scenario.add_argument("--threads", type=int, default=1)
    scenario.set_defaults(handler=cmd_scenario)
    return parser


def _common_output_flags(sub):
    sub.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--deterministic", action="store_true",
                     help="force ordered single-thread evaluation")
    sub.add_argument("--threads", type=int, default=1)


def _parse_sweep(text):
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"--sweep wants start:stop:points[:log], got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    points = int(parts[2])
    if points < 1:
        raise ValueError("--sweep needs at least 1 point")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ValueError(f"unknown sweep spacing {parts[3]!r}")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def _emit(args, columns, rows, meta):
    meta = dict(meta)
    meta.setdefault("version", __version__)
    meta.setdefault("deterministic", bool(args.deterministic))
    q, s = QuadratureSpec(), SummationSpec()
    meta.setdefault("tolerances",
                    f"rel={q.relative_tolerance:g} floor={q.absolute_floor:g} "
                    f"cutoff={s.term_cutoff_ratio:g}")
    text = (csv_text(columns, rows, meta) if args.format == "csv"
            else json_text(columns, rows, meta))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def load_atom(source) -> AtomModel:
    """Atom definition file: [atom] with alpha0_m3 and omega_a_rads."""
    import configparser

    path = Path(source)
    if not path.exists():
        raise MaterialFileError(f"atom file not found: {source}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(path.read_text(), source=source)
    except Exception as exc:
        raise MaterialFileError(f"{source}: {exc}") from exc
    if "atom" not in parser:
        raise MaterialFileError(f"{source}: missing [atom] section")
    section = parser["atom"]
    return AtomModel(alpha0=section.getfloat("alpha0_m3"),
                     omega_a=section.getfloat("omega_a_rads"))


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def cmd_eps(args):
    material = load_material(args.material)
    grid = _parse_sweep(args.sweep)
    rows = []
    for xi in grid:
        value = material.model.eps(float(xi), args.T)
        rows.append((float(xi), float(value)))
    meta = {
        "command": "eps",
        "material": args.material,
        "temperature_K": args.T,
        "config_hash": config_hash({"material": args.material, "T": args.T,
                                    "sweep": args.sweep}),
    }
    return _emit(args, ["xi_rad_per_s", "eps"], rows, meta)


def cmd_free_energy(args):
    material1 = load_material(args.material)
    atom = load_atom(args.atom) if args.atom else None
    material2 = load_material(args.material2) if args.material2 else material1
    policy = ReflectionPolicy(args.policy)

    if args.sweep is not None:
        grid = _parse_sweep(args.sweep)
        fixed_a, fixed_T = args.a, args.T
        if args.sweep_var == "a" and fixed_T is None:
            raise ValueError("an a-sweep needs --T")
        if args.sweep_var == "T" and fixed_a is None:
            raise ValueError("a T-sweep needs --a")
        abscissae = [(float(x), fixed_T) if args.sweep_var == "a"
                     else (fixed_a, float(x)) for x in grid]
    else:
        if args.a is None or args.T is None:
            raise ValueError("give --a and --T, or --sweep")
        abscissae = [(args.a, args.T)]

    rows = []
    failed = False
    for a, T in abscissae:
        abscissa = a if args.sweep is None or args.sweep_var == "a" else T
        try:
            result = _evaluate_point(a, T, material1, material2, atom, policy)
            row = [abscissa, result.value, result.truncation_index,
                   result.quadrature_error]
            if args.R is not None:
                row.insert(2, 2.0 * math.pi * args.R * result.value)
            rows.append((*row, "ok"))
        except ConvergenceError as exc:
            failed = True
            row = [abscissa, math.nan, 0, math.nan]
            if args.R is not None:
                row.insert(2, math.nan)
            rows.append((*row, f"failed: {exc}"))

    columns = ["abscissa", "free_energy", "truncation_index", "quadrature_error", "status"]
    if args.R is not None:
        columns.insert(2, "pfa_force_N")
    meta = {
        "command": "free-energy",
        "material": args.material,
        "material2": args.material2 or args.material,
        "geometry": "atom-wall" if atom else "plates",
        "policy": args.policy,
        "config_hash": config_hash({
            "material": args.material, "material2": args.material2,
            "atom": args.atom, "a": args.a, "T": args.T, "R": args.R,
            "policy": args.policy, "sweep": args.sweep, "var": args.sweep_var,
        }),
    }
    code = _emit(args, columns, rows, meta)
    return EXIT_NUMERICAL if failed else code


def _evaluate_point(a, T, material1, material2, atom, policy):
    if atom is not None:
        job = AtomJob(a=a, T=T, wall=material1, atom=atom, policy=policy)
        return (free_energy_atom_wall(job) if T > 0.0
                else free_energy_atom_wall_zero_T(job))
    job = LifshitzJob(a=a, T=T, material_1=material1, material_2=material2,
                      policy=policy)
    return (free_energy_plates(job) if T > 0.0
            else free_energy_plates_zero_T(job))


def cmd_audit(args):
    material = load_material(args.material)
    carriers = material.carriers
    spec = EntropyAuditSpec(
        material=material,
        separation=args.a,
        classes=(args.model_class,),
        points=args.points,
        **({} if carriers is None else {
            "density": carriers.density_amplitude,
            "activation": (carriers.density_activation + carriers.mobility_activation)
                          or EntropyAuditSpec.activation,
            "mobility": carriers.mobility_amplitude,
            "effective_mass": carriers.effective_mass,
        }),
    )
    report = run_entropy_audit(spec)[0]
    payload = report.to_dict()
    payload["expected"] = EXPECTED_AUDIT_VERDICTS[args.model_class]
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.expect is not None and report.verdict != args.expect:
        print(f"expectation mismatch: verdict {report.verdict}, expected {args.expect}",
              file=sys.stderr)
        return EXIT_EXPECT
    return EXIT_OK


def cmd_scenario(args):
    spec = parse_scenario(args.spec_file)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    threads = 1 if args.deterministic else max(args.threads, 1)

    if isinstance(spec, OpticalModulationSpec):
        sweep = run_optical_modulation(spec, threads=threads)
        name = "optical_modulation"
    elif isinstance(spec, CondensateShiftSpec):
        sweep = run_condensate_shift(spec, threads=threads)
        name = "condensate_shift"
    elif isinstance(spec, EntropyAuditSpec):
        reports = run_entropy_audit(spec)
        summary = {
            "scenario": "entropy-audit",
            "version": __version__,
            "reports": [r.to_dict() for r in reports],
            "expected": {c: EXPECTED_AUDIT_VERDICTS[c] for c in spec.classes},
            "mismatches": [r.model_class for r in reports
                           if r.verdict != EXPECTED_AUDIT_VERDICTS[r.model_class]],
        }
        path = out_dir / "entropy_audit.json"
        path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
        return EXIT_OK
    else:
        raise ValueError(f"unhandled scenario {type(spec).__name__}")

    sweep.meta["deterministic"] = bool(args.deterministic)
    suffix = "csv" if args.format == "csv" else "json"
    path = out_dir / f"{name}.{suffix}"
    path.write_text(sweep.to_csv() if args.format == "csv" else sweep.to_json())
    summary = {
        "scenario": sweep.meta.get("scenario"),
        "version": __version__,
        "rows": len(sweep.rows),
        "failed_rows": sum(1 for r in sweep.rows if r[-1] != "ok"),
        "columns": sweep.columns,
        "config_hash": sweep.meta.get("config_hash"),
    }
    summary_path = out_dir / f"{name}_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")
    print(f"wrote {summary_path}")
    if summary["failed_rows"]:
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
