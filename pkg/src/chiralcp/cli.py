"""Command-line front end.

    chiralcp run --config cfg.json [--set geometry.gap=2e-7] [--format csv|json]
    chiralcp validate --config cfg.json

Configs are JSON. Scenarios: response, halfspace, perfect-mirror, cavity,
limits-check. All emitted columns are SI; ``--scale`` appends nm / fN columns.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from chiralcp import __version__
from chiralcp.cavity import SCAN_COLUMNS, CavityConfig, scan
from chiralcp.core import (
    CONST,
    ChiralCPError,
    ConvergenceError,
    SingularInterfaceError,
    SingularResponseError,
)
from chiralcp.material import ChiralMedium, eval_imag, passivity_report
from chiralcp.molecule import Molecule, Transition, dmds_example
from chiralcp.potential import (
    force_nonretarded,
    force_perfect_mirror,
    nonretarded_coefficients,
    u_chiral_nonretarded_limit,
    u_chiral_perfect_mirror,
    u_chiral_retarded_limit,
)
from chiralcp.quadrature import Mapping, QuadratureSpec
from chiralcp.reflection import Handedness

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3
EXIT_CONVERGENCE = 4
EXIT_SINGULAR = 5

SCENARIOS = ("response", "halfspace", "perfect-mirror", "cavity", "limits-check")

MEDIUM_KEYS = ("omega_p", "omega_m", "a", "omega_E", "omega_B", "omega_C",
               "gamma_E", "gamma_B", "gamma_C")

# Chiral woodpile metamaterial fit (single resonance each for eps, mu, kappa).
WOODPILE = {
    "omega_p": 5.47e14,
    "omega_m": 3.06e14,
    "a": -3.61e14,
    "omega_E": 4.96e14,
    "omega_B": 4.96e14,
    "omega_C": 4.96e14,
    "gamma_E": 2.51e13,
    "gamma_B": 2.51e13,
    "gamma_C": -2.58e13,
}

# Plasma frequency closest (in float64) to the point where the excited DMDS
# molecule's resonant and off-resonant electric forces cancel for the tuned medium.
TUNED_OMEGA_P = 1.03031057128776e16


def tuned_medium_parameters(omega_p: float) -> dict:
    """All resonances, dampings and strengths as fixed multiples of ``omega_p``."""
    return {
        "omega_p": omega_p,
        "omega_m": omega_p / 5,
        "a": -omega_p / 3,
        "omega_E": omega_p / 2,
        "omega_B": omega_p / 2,
        "omega_C": omega_p / 2,
        "gamma_E": omega_p / 1e3,
        "gamma_B": omega_p / 1e3,
        "gamma_C": -omega_p / 1e3,
    }


MOLECULE_PRESETS = {
    "dmds-ground": lambda: dmds_example(),
    "dmds-excited": lambda: dmds_example(excited=True),
    "dmds-ground-mirror": lambda: dmds_example(enantiomer=True),
    "dmds-excited-mirror": lambda: dmds_example(excited=True, enantiomer=True),
}


class ConfigError(ChiralCPError):
    pass


@dataclass
class Diagnostic:
    level: str  # "error" | "warning"
    module: str
    parameter: str
    message: str

    def __str__(self):
        return f"{self.level} [{self.module}:{self.parameter}] {self.message}"


# -- config handling ---------------------------------------------------------


def load_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", module="cli", parameter="config") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", module="cli", parameter="config") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object", module="cli", parameter="config")
    return cfg


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply ``key.sub=value`` overrides; values are parsed as JSON when possible."""
    cfg = copy.deepcopy(cfg)
    for item in overrides or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not key=value", module="cli", parameter="--set")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for p in parts[:-1]:
            child = node.setdefault(p, {})
            if not isinstance(child, dict):
                raise ConfigError(f"cannot descend into non-object {p!r}", module="cli", parameter=key)
            node = child
        node[parts[-1]] = value
    return cfg


def build_medium(block: dict | None, where: str = "medium") -> ChiralMedium:
    if block is None:
        raise ConfigError(f"missing {where} block", module="material", parameter=where)
    block = dict(block)
    preset = block.pop("preset", None)
    if preset is None:
        params = {}
    elif preset == "woodpile":
        params = dict(WOODPILE)
    elif preset == "tuned":
        params = tuned_medium_parameters(float(block.pop("omega_p", TUNED_OMEGA_P)))
    else:
        raise ConfigError(f"unknown medium preset {preset!r}", module="material",
                          parameter=f"{where}.preset")
    unknown = set(block) - set(MEDIUM_KEYS)
    if unknown:
        raise ConfigError(f"unknown medium keys {sorted(unknown)}", module="material",
                          parameter=where)
    params.update({k: float(v) for k, v in block.items()})
    missing = [k for k in MEDIUM_KEYS if k not in params]
    if missing:
        raise ConfigError(f"medium is missing {missing}", module="material", parameter=where)
    try:
        return ChiralMedium.from_parameters(**params)
    except ValueError as exc:
        raise ChiralCPError(str(exc), module="material", parameter=where) from exc


def build_molecule(block: dict | None) -> Molecule:
    if block is None:
        raise ConfigError("missing molecule block", module="molecule", parameter="molecule")
    if "preset" in block:
        name = block["preset"]
        if name not in MOLECULE_PRESETS:
            raise ConfigError(f"unknown molecule preset {name!r} (known: {sorted(MOLECULE_PRESETS)})",
                              module="molecule", parameter="molecule.preset")
        return MOLECULE_PRESETS[name]()
    try:
        return Molecule(tuple(
            Transition(float(t["omega_kn"]), float(t["dipole_sq"]), float(t["rotatory"]))
            for t in block.get("transitions", [])
        ))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed transition entry: {exc}", module="molecule",
                          parameter="molecule.transitions") from exc
    except ValueError as exc:
        raise ChiralCPError(str(exc), module="molecule", parameter="molecule.transitions") from exc


def build_quadrature(block: dict | None) -> QuadratureSpec:
    block = dict(block or {})
    try:
        if "mapping" in block:
            block["mapping"] = Mapping(block["mapping"])
        return QuadratureSpec(**block)
    except TypeError as exc:
        raise ConfigError(str(exc), module="quadrature", parameter="quadrature") from exc
    except ValueError as exc:
        raise ChiralCPError(str(exc), module="quadrature", parameter="quadrature") from exc


def build_handedness(cfg: dict) -> Handedness:
    try:
        return Handedness(cfg.get("handedness", "right"))
    except ValueError as exc:
        raise ConfigError(f"handedness must be 'right' or 'left', got {cfg.get('handedness')!r}",
                          module="reflection", parameter="handedness") from exc


def _grid(block, name: str, default=None) -> np.ndarray:
    if name in block:
        return np.asarray(block[name], dtype=float).ravel()
    rng = block.get(f"{name}_range")
    if rng is None:
        if default is None:
            raise ConfigError(f"need {name} or {name}_range", module="cli", parameter=name)
        return default
    start, stop, num = float(rng["start"]), float(rng["stop"]), int(rng["num"])
    if rng.get("spacing", "linear") == "log":
        return np.geomspace(start, stop, num)
    return np.linspace(start, stop, num)


def _positions(cfg: dict, mol: Molecule | None = None) -> np.ndarray:
    geom = cfg.get("geometry", {})
    default = None
    if mol is not None:
        default = np.geomspace(1e-3, 1e2, 11) * CONST.c / mol.dominant_frequency
    z = _grid(geom, "z", default)
    if np.any(z <= 0):
        raise ChiralCPError("all distances z must be > 0", module="potential", parameter="geometry.z")
    return z


def build_cavity(cfg: dict) -> CavityConfig:
    geom = cfg.get("geometry", {})
    left = build_medium(cfg.get("medium"))
    right = build_medium(cfg["right_medium"], "right_medium") if "right_medium" in cfg else left.mirrored()
    try:
        return CavityConfig(
            gap_width=float(geom.get("gap", 100e-9)),
            left_medium=left,
            right_medium=right,
            molecule=build_molecule(cfg.get("molecule")),
            grid=int(geom.get("grid", 200)),
            margin=float(geom.get("margin", 1e-9)),
        )
    except ValueError as exc:
        raise ChiralCPError(str(exc), module="cavity", parameter="geometry") from exc


# -- scenarios ---------------------------------------------------------------


def _run_response(cfg, spec, jobs):
    medium = build_medium(cfg.get("medium"))
    xi = _grid(cfg.get("frequency", {}), "xi", np.geomspace(1e12, 1e18, 61))
    eps, mu, kappa = eval_imag(medium, xi)
    cols = ("xi_rad_s", "eps", "mu", "im_kappa")
    return cols, [dict(zip(cols, map(float, r))) for r in zip(xi, eps.real, mu.real, kappa.imag)]


def _run_halfspace(cfg, spec, jobs):
    medium = build_medium(cfg.get("medium"))
    mol = build_molecule(cfg.get("molecule"))
    coeff = nonretarded_coefficients(medium, mol, spec)
    cols = ("z_m", "U_e_offres", "U_e_res", "U_c_offres", "U_c_res", "U_e", "U_c", "F_e", "F_c")
    rows = []
    for z in _positions(cfg):
        u = coeff.scaled(1.0 / z**3)
        f = force_nonretarded(medium, mol, z, spec, coefficients=coeff)
        rows.append(dict(zip(cols, (float(z), *u, u.electric, u.chiral, f.electric, f.chiral))))
    return cols, rows


def _run_perfect_mirror(cfg, spec, jobs):
    mol = build_molecule(cfg.get("molecule"))
    h = build_handedness(cfg)
    cols = ("z_m", "U_c", "F_c")
    rows = [dict(zip(cols, (float(z), u_chiral_perfect_mirror(h, mol, z, spec),
                            force_perfect_mirror(h, mol, z, spec))))
            for z in _positions(cfg, mol)]
    return cols, rows


def _run_limits(cfg, spec, jobs):
    mol = build_molecule(cfg.get("molecule"))
    h = build_handedness(cfg)
    w_max = max(abs(t.omega_kn) for t in mol.transitions)
    cols = ("z_m", "z_omega_over_c", "U_numeric", "U_retarded", "U_nonretarded",
            "ratio_retarded", "ratio_nonretarded")
    rows = []
    for z in _positions(cfg, mol):
        u = u_chiral_perfect_mirror(h, mol, z, spec)
        ur = u_chiral_retarded_limit(mol, z, h)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            un = u_chiral_nonretarded_limit(mol, z, h)
        rows.append(dict(zip(cols, (float(z), z * w_max / CONST.c, u, ur, un,
                                    _ratio(u, ur), _ratio(u, un)))))
    return cols, rows


def _ratio(a, b):
    return a / b if b != 0 else math.inf


def _run_cavity(cfg, spec, jobs):
    config = build_cavity(cfg)
    result = scan(config, spec, jobs=jobs)
    return SCAN_COLUMNS, list(result.rows())


RUNNERS = {
    "response": _run_response,
    "halfspace": _run_halfspace,
    "perfect-mirror": _run_perfect_mirror,
    "cavity": _run_cavity,
    "limits-check": _run_limits,
}


def execute(cfg: dict, jobs: int = 1):
    """Run the configured scenario; returns (columns, rows)."""
    scenario = cfg.get("scenario")
    if scenario not in RUNNERS:
        raise ConfigError(f"unknown scenario {scenario!r} (known: {', '.join(SCENARIOS)})",
                          module="cli", parameter="scenario")
    spec = build_quadrature(cfg.get("quadrature"))
    return RUNNERS[scenario](cfg, spec, jobs)


# -- emission ----------------------------------------------------------------

FORCE_PREFIX = "F_"


def add_scaled_columns(cols, rows):
    """Append z in nm and forces in fN; SI columns are kept."""
    extra = []
    if "z_m" in cols:
        extra.append(("z_nm", "z_m", 1e9))
    extra += [(c + "_fN", c, 1e15) for c in cols if c.startswith(FORCE_PREFIX)]
    new_cols = tuple(cols) + tuple(e[0] for e in extra)
    for r in rows:
        for name, src, factor in extra:
            r[name] = r[src] * factor
    return new_cols, rows


def _fmt(v) -> str:
    return format(float(v), ".17g")


def render_csv(cols, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in cols])
    return buf.getvalue()


def _json_number(v):
    v = float(format(float(v), ".17g"))
    return v if math.isfinite(v) else None


def render_json(cols, rows, cfg) -> str:
    doc = {
        "meta": {"version": __version__, "scenario": cfg.get("scenario"), "columns": list(cols),
                 "config": cfg},
        "rows": [{c: _json_number(r[c]) for c in cols} for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


# -- validation --------------------------------------------------------------


def validate_config(cfg: dict) -> list[Diagnostic]:
    """Collect invariant violations and passivity warnings without running anything."""
    diags: list[Diagnostic] = []

    def err(exc: ChiralCPError):
        diags.append(Diagnostic("error", exc.module or "cli", exc.parameter, str(exc)))

    scenario = cfg.get("scenario")
    if scenario not in SCENARIOS:
        diags.append(Diagnostic("error", "cli", "scenario",
                                f"unknown scenario {scenario!r} (known: {', '.join(SCENARIOS)})"))
    try:
        build_quadrature(cfg.get("quadrature"))
    except ChiralCPError as exc:
        err(exc)

    mol = None
    if scenario != "response":
        try:
            mol = build_molecule(cfg.get("molecule"))
        except ChiralCPError as exc:
            err(exc)
    if mol is not None and scenario in ("perfect-mirror", "limits-check") and not mol.is_ground_state:
        diags.append(Diagnostic("error", "potential", "molecule",
                                "perfect-mirror formulas need a ground-state molecule"))

    media = []
    if scenario not in ("perfect-mirror", "limits-check"):
        for key in ("medium", "right_medium"):
            if key == "right_medium" and key not in cfg:
                continue
            try:
                media.append((key, build_medium(cfg.get(key), key)))
            except ChiralCPError as exc:
                err(exc)
    for key, medium in media:
        if medium.kappa_model.gamma_c < 0:
            diags.append(Diagnostic("warning", "material", f"{key}.gamma_C",
                                    f"negative chirality damping gamma_C = {medium.kappa_model.gamma_c:g}"))
        probe = {medium.eps_model.resonance, medium.mu_model.resonance, medium.kappa_model.omega_c}
        if mol is not None:
            probe |= {abs(t.omega_kn) for t in mol.transitions}
        for w in sorted(x for x in probe if x > 0):
            try:
                rep = passivity_report(medium, w)
            except ChiralCPError as exc:
                err(exc)
                continue
            if not rep.passive:
                diags.append(Diagnostic("warning", "material", key,
                                        f"(Im kappa)^2 < Im eps Im mu violated at omega = {w:g} "
                                        f"(margin {rep.margin:.3g})"))

    if scenario == "cavity":
        geom = cfg.get("geometry", {})
        try:
            gap = float(geom.get("gap", 100e-9))
            grid = int(geom.get("grid", 200))
            margin = float(geom.get("margin", 1e-9))
        except (TypeError, ValueError) as exc:
            diags.append(Diagnostic("error", "cavity", "geometry", str(exc)))
        else:
            if not gap > 0:
                diags.append(Diagnostic("error", "cavity", "geometry.gap", f"gap must be > 0, got {gap}"))
            if grid < 3:
                diags.append(Diagnostic("error", "cavity", "geometry.grid", f"grid must be >= 3, got {grid}"))
            if gap > 0 and not 0 <= margin < gap / 2:
                diags.append(Diagnostic("error", "cavity", "geometry.margin",
                                        "margin must lie in [0, gap/2)"))
    elif scenario in ("halfspace", "perfect-mirror", "limits-check"):
        try:
            _positions(cfg, mol if scenario != "halfspace" else None)
        except ChiralCPError as exc:
            err(exc)
        except (TypeError, ValueError, KeyError) as exc:
            diags.append(Diagnostic("error", "cli", "geometry", f"malformed geometry: {exc}"))
    if scenario in ("perfect-mirror", "limits-check"):
        try:
            build_handedness(cfg)
        except ChiralCPError as exc:
            err(exc)
    return diags


# -- entry point -------------------------------------------------------------


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, (SingularInterfaceError, SingularResponseError)):
        return EXIT_SINGULAR
    return EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chiralcp", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario and emit rows")
    run.add_argument("--config", required=True, metavar="PATH")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", dest="overrides",
                     help="dotted-path override, repeatable")
    run.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    run.add_argument("--format", choices=("csv", "json"))
    run.add_argument("--scale", action="store_true", help="append nm / fN display columns")
    run.add_argument("--jobs", type=int, default=1, metavar="N")

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("--config", required=True, metavar="PATH")
    val.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", dest="overrides")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = apply_overrides(load_config(args.config), args.overrides)
    except ChiralCPError as exc:
        print(f"error [{exc.module}:{exc.parameter}] {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        diags = validate_config(cfg)
        for d in diags:
            print(d, file=sys.stderr)
        errors = [d for d in diags if d.level == "error"]
        if not errors:
            print(f"ok ({len(diags)} warning(s))", file=sys.stderr)
            return EXIT_OK
        return EXIT_CONFIG

    try:
        cols, rows = execute(cfg, jobs=max(1, args.jobs))
    except ChiralCPError as exc:
        print(f"error [{exc.module}:{exc.parameter}] {exc}", file=sys.stderr)
        return _exit_code(exc)
    except ValueError as exc:
        print(f"error [cli:parameters] {exc}", file=sys.stderr)
        return EXIT_INVARIANT

    if args.scale:
        cols, rows = add_scaled_columns(cols, rows)
    fmt = args.format or cfg.get("output", {}).get("format", "csv")
    if fmt not in ("csv", "json"):
        print(f"error [cli:output.format] unknown format {fmt!r}", file=sys.stderr)
        return EXIT_CONFIG
    text = render_csv(cols, rows) if fmt == "csv" else render_json(cols, rows, cfg)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
