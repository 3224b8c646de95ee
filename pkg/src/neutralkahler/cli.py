"""Batch entry point: verification suites, reports, family sweeps, export.

One task per invocation; every randomized sweep draws from a Philox
counter-based generator seeded from the run configuration, so identical
configurations produce identical JSON reports (up to the timestamp
field). Reports list one entry per check with its explicit tolerance:

    {"schema": 1, "task": ..., "checks": [{name, value, tolerance, passed}], ...}

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration
error, 3 I/O error. The output directory may be overridden with the
``NKLAB_OUTPUT_DIR`` environment variable.
"""

from __future__ import annotations

import argparse
import configparser
import datetime
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .ambient import (
    TangentPoint,
    ambient_frame,
    ambient_signature,
    calibration_gap,
    theta_form,
)
from .errors import (
    ConfigError,
    EmptyDomainError,
    NeutralKahlerError,
    SingularResidualError,
)
from .graphs import (
    GraphSection,
    area,
    bump_basis,
    el_residual,
    export_classification_csv,
    first_variation,
    pullback_determinant,
    slopes,
    stokes_check,
)
from .lines3d import TorusFamily, export_congruence, torus_section
from .numerics import DEFAULT_BAND_HALF_WIDTH, AnnulusGrid
from .rotsym import (
    FamilyParams,
    comfortable_range,
    ode_residuals,
    psi_closed_form,
    stationary_family,
)
from .sampling import (
    geometry_by_name,
    j_invariant_plane,
    random_lagrangian_section,
    random_plane,
    random_polynomial_section,
    random_tangent_coords,
    rng_from_seed,
)

TASKS = ("verify", "residual", "area", "variation", "family", "classify", "export")

#: default check tolerances; every report entry cites one of these or an override
DEFAULT_TOLERANCES = {
    "calibration_floor": 1e-10,
    "jplane_gap": 1e-10,
    "compatibility": 1e-9,
    "closedness": 1e-6,
    "exactness": 1e-6,
    "det_oracle": 1e-6,
    "stokes": 1e-6,
    "residual_max": 1e-6,
    "first_variation_rel": 1e-5,
    "ode_residual": 1e-6,
    "psi_quadrature": 1e-6,
}


@dataclass
class RunConfig:
    """Resolved options of one CLI invocation."""

    task: str
    geometry: str = "flat"
    suite: str = "all"
    samples: int = 500
    seed: int = 0
    a1: float = 0.0
    b1: float = 0.0
    a2: Optional[float] = None
    b2: Optional[float] = None
    c2: Optional[float] = None
    branch: int = 1
    rmin: float = 0.5
    rmax: float = 2.5
    grid_r: int = 32
    grid_theta: int = 32
    exclude: tuple[tuple[float, float], ...] = ()
    half_length: float = 3.0
    fmt: str = "obj"
    out: Optional[str] = None
    report: Optional[str] = None
    tol: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"unknown task '{self.task}'")
        if self.geometry not in ("flat", "sphere"):
            raise ConfigError(f"unknown geometry '{self.geometry}'")
        if self.samples <= 0:
            raise ConfigError("samples must be positive")
        unknown = set(self.tol) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance overrides: {sorted(unknown)}")

    def tolerance(self, name: str) -> float:
        return float(self.tol.get(name, DEFAULT_TOLERANCES[name]))


def _output_dir() -> Path:
    return Path(os.environ.get("NKLAB_OUTPUT_DIR", "."))


def _resolve(path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else _output_dir() / p


class Report:
    def __init__(self, config: RunConfig):
        self.config = config
        self.checks: list[dict] = []
        self.values: dict = {}
        self.artifacts: list[str] = []

    def check(self, name: str, value: float, tolerance: float, passed: Optional[bool] = None):
        if passed is None:
            passed = bool(value <= tolerance)
        self.checks.append(
            {"name": name, "value": float(value), "tolerance": float(tolerance), "passed": passed}
        )

    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def as_dict(self) -> dict:
        cfg = {
            "task": self.config.task,
            "geometry": self.config.geometry,
            "suite": self.config.suite,
            "samples": self.config.samples,
            "seed": self.config.seed,
            "grid": [self.config.grid_r, self.config.grid_theta],
            "r_range": [self.config.rmin, self.config.rmax],
            "exclude": [list(b) for b in self.config.exclude],
            "tolerance_overrides": dict(sorted(self.config.tol.items())),
        }
        return {
            "schema": 1,
            "version": __version__,
            "task": self.config.task,
            "config": cfg,
            "checks": self.checks,
            "values": self.values,
            "artifacts": self.artifacts,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.as_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")


# ---------------------------------------------------------------------------
# section and grid construction
# ---------------------------------------------------------------------------


def _build_section(config: RunConfig) -> tuple[GraphSection, tuple[float, float]]:
    """Family section plus the admissible radial range for grids."""
    if config.c2 is not None:
        if config.b2 is None:
            raise ConfigError("torus shorthand needs both --B2 and --C2")
        fam = TorusFamily(config.b2, config.c2, config.branch)
        return torus_section(fam), (config.rmin, config.rmax)
    if config.a2 is None:
        raise ConfigError("family tasks need --A2/--B2 (or the sphere --B2/--C2 shorthand)")
    params = FamilyParams(config.a1, config.b1, config.a2, config.b2 or 0.0)
    geom = geometry_by_name(config.geometry)
    profile = stationary_family(geom, params, config.branch, (config.rmin, config.rmax))
    return profile.section(), comfortable_range(profile)


def _build_grid(config: RunConfig, r_range: tuple[float, float]) -> AnnulusGrid:
    return AnnulusGrid(
        r_range[0], r_range[1], config.grid_r, config.grid_theta, config.exclude
    )


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------


def _suite_ambient(config: RunConfig, report: Report) -> None:
    geom = geometry_by_name(config.geometry)
    rng = rng_from_seed(config.seed)
    n = config.samples

    worst_gap = math.inf
    for _ in range(n):
        xi, eta = random_tangent_coords(rng)
        frame = ambient_frame(geom, TangentPoint(xi, eta))
        v1, v2 = random_plane(rng)
        worst_gap = min(worst_gap, calibration_gap(frame, v1, v2))
    report.check("calibration_floor", -worst_gap, config.tolerance("calibration_floor"))

    worst_j = 0.0
    for _ in range(max(n // 10, 10)):
        xi, eta = random_tangent_coords(rng)
        frame = ambient_frame(geom, TangentPoint(xi, eta))
        v1, v2 = j_invariant_plane(rng)
        worst_j = max(worst_j, abs(calibration_gap(frame, v1, v2)))
    report.check("jplane_gap", worst_j, config.tolerance("jplane_gap"))

    sig_bad = 0
    worst_compat = 0.0
    for _ in range(n):
        xi, eta = random_tangent_coords(rng)
        frame = ambient_frame(geom, TangentPoint(xi, eta))
        if ambient_signature(frame) != (2, 2):
            sig_bad += 1
        a = rng.normal(size=4)
        b = rng.normal(size=4)
        scale = max(1.0, float(np.max(np.abs(frame.G4))))
        ja, jb = frame.J4 @ a, frame.J4 @ b
        worst_compat = max(
            worst_compat,
            abs(frame.metric(ja, jb) - frame.metric(a, b)) / scale,
            abs(frame.metric(a, b) - frame.symplectic(ja, b)) / scale,
        )
    report.check("signature_defects", float(sig_bad), 0.0, passed=(sig_bad == 0))
    report.check("compatibility", worst_compat, config.tolerance("compatibility"))

    worst_closed = 0.0
    worst_exact = 0.0
    h = 1e-5
    for _ in range(min(max(n // 20, 5), 50)):
        xi, eta = random_tangent_coords(rng)
        c0 = np.array([xi.real, xi.imag, eta.real, eta.imag])

        def omega_at(c):
            p = TangentPoint(complex(c[0], c[1]), complex(c[2], c[3]))
            return ambient_frame(geom, p).O4

        def theta_at(c):
            p = TangentPoint(complex(c[0], c[1]), complex(c[2], c[3]))
            return theta_form(geom, p).components

        grads_o = []
        grads_t = []
        for i in range(4):
            cp, cm = c0.copy(), c0.copy()
            cp[i] += h
            cm[i] -= h
            grads_o.append((omega_at(cp) - omega_at(cm)) / (2 * h))
            grads_t.append((theta_at(cp) - theta_at(cm)) / (2 * h))
        for a_ in range(4):
            for b_ in range(a_ + 1, 4):
                for c_ in range(b_ + 1, 4):
                    cyc = grads_o[a_][b_, c_] + grads_o[b_][c_, a_] + grads_o[c_][a_, b_]
                    worst_closed = max(worst_closed, abs(cyc))
        O4 = omega_at(c0)
        for a_ in range(4):
            for b_ in range(4):
                worst_exact = max(worst_exact, abs(grads_t[a_][b_] - grads_t[b_][a_] - O4[a_, b_]))
    report.check("closedness", worst_closed, config.tolerance("closedness"))
    report.check("exactness", worst_exact, config.tolerance("exactness"))


def _suite_graphs(config: RunConfig, report: Report) -> None:
    geom = geometry_by_name(config.geometry)
    rng = rng_from_seed(config.seed + 1)
    n_sections = max(config.samples // 10, 10)

    worst = 0.0
    for _ in range(n_sections):
        section = random_polynomial_section(rng, geom)
        for _ in range(5):
            xi = complex(*rng.normal(size=2))
            sl = slopes(section, xi)
            scale = sl.lam**2 + abs(sl.sigma) ** 2
            if abs(sl.det_factor) < 1e-3 * (scale + 1e-6):
                continue
            d1 = sl.det_factor * geom.conformal_factor(xi) ** 2
            d2 = pullback_determinant(section, xi)
            worst = max(worst, abs(d1 - d2) / max(abs(d1), 1e-12))
    report.check("det_oracle", worst, config.tolerance("det_oracle"))

    worst_stokes = 0.0
    for k in range(max(n_sections // 5, 3)):
        section = random_polynomial_section(rng, geom, scale=0.3)
        grid = AnnulusGrid(0.6 + 0.1 * (k % 3), 1.8 + 0.1 * (k % 4), 24, 32)
        interior, boundary = stokes_check(section, grid)
        worst_stokes = max(
            worst_stokes, abs(interior - boundary) / (1.0 + abs(interior))
        )
        lag = random_lagrangian_section(rng, geom)
        li, lb = stokes_check(lag, grid)
        worst_stokes = max(worst_stokes, abs(li - lb) / (1.0 + abs(li)))
    report.check("stokes", worst_stokes, config.tolerance("stokes"))


def _family_tuples(rng, geometry: str, count: int):
    """Seeded admissible family parameters with their trimmed profiles."""
    out = []
    while len(out) < count:
        params = FamilyParams(
            a1=rng.uniform(-0.5, 0.5),
            b1=rng.uniform(-0.5, 0.5),
            a2=rng.uniform(0.3, 2.0) * (1 if rng.uniform() < 0.5 else -1),
            b2=rng.uniform(0.5, 2.5),
        )
        r_range = (0.15, 0.95) if geometry == "sphere" else (0.3, 4.0)
        try:
            geom = geometry_by_name(geometry)
            profile = stationary_family(geom, params, 1, r_range)
        except (EmptyDomainError, NeutralKahlerError):
            continue
        lo, hi = profile.domain
        if hi - lo < 0.25:
            continue
        out.append((params, profile))
    return out


def _suite_rotsym(config: RunConfig, report: Report) -> None:
    geom = geometry_by_name(config.geometry)
    rng = rng_from_seed(config.seed + 2)
    tuples = _family_tuples(rng, config.geometry, max(config.samples // 40, 5))

    worst_ode = 0.0
    for _params, profile in tuples:
        lo, hi = comfortable_range(profile)
        for r in np.linspace(lo, hi, 9):
            r1, r2 = ode_residuals(geom, profile.H, profile.psi, float(r))
            worst_ode = max(worst_ode, abs(r1), 0.0 if math.isnan(r2) else abs(r2))
    report.check("ode_residual", worst_ode, config.tolerance("ode_residual"))

    # quadrature solution vs. closed form, modulo the anchored-integral
    # constant (a shift of b2 by the antiderivative value at the left end)
    worst_psi = 0.0
    for params, profile in tuples[: max(len(tuples) // 2, 3)]:
        lo, hi = profile.domain
        quad = psi_closed_form(geom, profile.H, params.a2, params.b2, (lo, hi))
        shift = -params.b1**2 * math.exp(-2.0 * geom.radial_u(lo)) / lo**2
        for r in np.linspace(lo, hi, 17):
            r = float(r)
            expect = profile.psi(r) - shift * math.exp(-2.0 * geom.radial_u(r))
            scale = max(abs(expect), 1.0)
            worst_psi = max(worst_psi, abs(quad(r) - expect) / scale)
    report.check("psi_quadrature", worst_psi, config.tolerance("psi_quadrature"))


def _suite_families(config: RunConfig, report: Report) -> None:
    rng = rng_from_seed(config.seed + 3)
    tuples = _family_tuples(rng, config.geometry, max(config.samples // 50, 4))

    worst_res = 0.0
    worst_fv = 0.0
    for _params, profile in tuples:
        section = profile.section()
        lo, hi = comfortable_range(profile)
        grid = AnnulusGrid(lo, hi, 16, 16)
        for r, t in grid.mesh_nodes()[:: max(1, len(grid.mesh_nodes()) // 40)]:
            xi = r * complex(math.cos(t), math.sin(t))
            try:
                worst_res = max(worst_res, abs(el_residual(section, xi)))
            except SingularResidualError:
                continue
        a_val = area(section, grid)
        for bump in bump_basis(grid.r_min, grid.r_max)[:4]:
            fv = first_variation(section, bump, grid)
            worst_fv = max(worst_fv, abs(fv) / max(a_val, 1e-12))
    report.check("residual_max", worst_res, config.tolerance("residual_max"))
    report.check("first_variation_rel", worst_fv, config.tolerance("first_variation_rel"))


def _run_verify(config: RunConfig, report: Report) -> None:
    suites = {
        "ambient": (_suite_ambient,),
        "graphs": (_suite_graphs,),
        "rotsym": (_suite_rotsym,),
        "families": (_suite_families,),
        "all": (_suite_ambient, _suite_graphs, _suite_rotsym, _suite_families),
    }
    if config.suite not in suites:
        raise ConfigError(f"unknown verify suite '{config.suite}'")
    for fn in suites[config.suite]:
        fn(config, report)


# ---------------------------------------------------------------------------
# section tasks
# ---------------------------------------------------------------------------


def _run_residual(config: RunConfig, report: Report) -> None:
    section, r_range = _build_section(config)
    grid = _build_grid(config, r_range)
    worst = 0.0
    skipped = 0
    for r, t in grid.mesh_nodes():
        xi = r * complex(math.cos(t), math.sin(t))
        try:
            worst = max(worst, abs(el_residual(section, xi)))
        except SingularResidualError:
            skipped += 1
    report.values["skipped_nodes"] = skipped
    report.check("residual_max", worst, config.tolerance("residual_max"))
    if config.out:
        path = _resolve(config.out)
        rows = export_classification_csv(section, grid, path)
        report.values["csv_rows"] = rows
        report.artifacts.append(str(path))


def _run_area(config: RunConfig, report: Report) -> None:
    section, r_range = _build_section(config)
    grid = _build_grid(config, r_range)
    report.values["area"] = area(section, grid)


def _run_variation(config: RunConfig, report: Report) -> None:
    section, r_range = _build_section(config)
    grid = _build_grid(config, r_range)
    a_val = area(section, grid)
    report.values["area"] = a_val
    worst = 0.0
    for bump in bump_basis(grid.r_min, grid.r_max):
        fv = first_variation(section, bump, grid)
        worst = max(worst, abs(fv) / max(a_val, 1e-12))
    report.check("first_variation_rel", worst, config.tolerance("first_variation_rel"))


def _run_classify(config: RunConfig, report: Report) -> None:
    section, r_range = _build_section(config)
    grid = _build_grid(config, r_range)
    counts: dict[str, int] = {}
    for r, t in grid.mesh_nodes():
        xi = r * complex(math.cos(t), math.sin(t))
        cls = str(slopes(section, xi).classify())
        counts[cls] = counts.get(cls, 0) + 1
    report.values["class_counts"] = dict(sorted(counts.items()))
    if config.out:
        path = _resolve(config.out)
        rows = export_classification_csv(section, grid, path)
        report.values["csv_rows"] = rows
        report.artifacts.append(str(path))


def _run_export(config: RunConfig, report: Report) -> None:
    section, r_range = _build_section(config)
    grid = _build_grid(config, r_range)
    if not config.out:
        raise ConfigError("export needs --out")
    path = _resolve(config.out)
    segments = export_congruence(section, grid, config.half_length, config.fmt, path)
    expected = len(grid.mesh_nodes())
    report.values["segments"] = segments
    report.check("export_segments", float(abs(segments - expected)), 0.0,
                 passed=(segments == expected))
    report.artifacts.append(str(path))


def _run_family(config: RunConfig, report: Report) -> None:
    sub = {
        "residual": _run_residual,
        "area": _run_area,
        "variation": _run_variation,
        "classify": _run_classify,
        "export": _run_export,
    }
    # "all" is the generic suite default; family sweeps default to residual
    name = "residual" if config.suite == "all" else config.suite
    if name not in sub:
        raise ConfigError(f"unknown family sub-task '{name}'")
    sub[name](config, report)


def run(config: RunConfig) -> tuple[int, dict]:
    """Execute one task; returns (exit_code, report_dict) and writes the report."""
    report = Report(config)
    runners = {
        "verify": _run_verify,
        "residual": _run_residual,
        "area": _run_area,
        "variation": _run_variation,
        "family": _run_family,
        "classify": _run_classify,
        "export": _run_export,
    }
    runners[config.task](config, report)
    report_path = _resolve(config.report or f"{config.task}_report.json")
    report.write(report_path)
    return (0 if report.all_passed() else 1), report.as_dict()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parse_exclude(values: list[str]) -> tuple[tuple[float, float], ...]:
    bands = []
    for v in values:
        try:
            center, _, width = v.partition(":")
            bands.append(
                (float(center), float(width) if width else DEFAULT_BAND_HALF_WIDTH)
            )
        except ValueError as exc:
            raise ConfigError(f"bad exclusion band '{v}' (use CENTER:HALFWIDTH)") from exc
    return tuple(bands)


def _parse_tols(values: list[str]) -> dict:
    out = {}
    for v in values:
        name, sep, val = v.partition("=")
        if not sep:
            raise ConfigError(f"bad tolerance override '{v}' (use NAME=VALUE)")
        try:
            out[name] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in '{v}'") from exc
    return out


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file '{path}'")
    flat: dict[str, str] = {}
    for section in parser.sections():
        flat.update(dict(parser[section]))
    flat.update(dict(parser.defaults()))
    return flat


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nklab",
        description="Neutral Kahler laboratory: verification suites, residual and "
        "classification reports, stationary families, line-congruence export.",
    )
    parser.add_argument("--version", action="version", version=f"nklab {__version__}")
    sub = parser.add_subparsers(dest="task")

    def add_common(p):
        p.add_argument("--config", help="key=value configuration file; flags override it")
        p.add_argument("--geometry", choices=("flat", "sphere"))
        p.add_argument("--seed", type=int)
        p.add_argument("--grid", help="radial x angular resolution, e.g. 64x64")
        p.add_argument("--rmin", type=float)
        p.add_argument("--rmax", type=float)
        p.add_argument("--exclude", action="append", default=None,
                       help="radial exclusion band CENTER:HALFWIDTH (repeatable)")
        p.add_argument("--tol", action="append", default=None,
                       help="tolerance override NAME=VALUE (repeatable)")
        p.add_argument("--report", help="JSON report path")
        p.add_argument("--out", help="artifact path (CSV/OBJ)")

    def add_family(p):
        p.add_argument("--A1", dest="a1", type=float)
        p.add_argument("--B1", dest="b1", type=float)
        p.add_argument("--A2", dest="a2", type=float)
        p.add_argument("--B2", dest="b2", type=float)
        p.add_argument("--C2", dest="c2", type=float,
                       help="sphere torus shorthand (with --B2)")
        p.add_argument("--branch", type=int, choices=(1, -1))

    p_verify = sub.add_parser("verify", help="run a seeded verification suite")
    add_common(p_verify)
    p_verify.add_argument("--suite", choices=("ambient", "graphs", "rotsym", "families", "all"))
    p_verify.add_argument("--samples", type=int)

    for name, help_ in (
        ("residual", "stationarity residual sweep over a family section"),
        ("area", "area of a family section over an annulus"),
        ("variation", "first-variation sweep over the bump basis"),
        ("classify", "classification map of a family section"),
    ):
        p = sub.add_parser(name, help=help_)
        add_common(p)
        add_family(p)

    p_family = sub.add_parser("family", help="generate a family and run a sub-task on it")
    add_common(p_family)
    add_family(p_family)
    p_family.add_argument("--task", dest="suite",
                          choices=("residual", "area", "variation", "classify", "export"))
    p_family.add_argument("--half-length", dest="half_length", type=float)
    p_family.add_argument("--format", dest="fmt", choices=("obj", "csv"))

    p_export = sub.add_parser("export", help="export a line congruence mesh")
    add_common(p_export)
    add_family(p_export)
    p_export.add_argument("--half-length", dest="half_length", type=float)
    p_export.add_argument("--format", dest="fmt", choices=("obj", "csv"))

    return parser


_CONFIG_CASTS = {
    "samples": int,
    "seed": int,
    "branch": int,
    "a1": float, "b1": float, "a2": float, "b2": float, "c2": float,
    "rmin": float, "rmax": float, "half_length": float,
    "grid_r": int, "grid_theta": int,
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if not args.task:
        raise ConfigError("no task given; see --help")
    values: dict = {}
    if getattr(args, "config", None):
        for key, raw in _load_config_file(args.config).items():
            key = key.replace("-", "_")
            if key == "grid":
                values["grid"] = raw
            elif key == "exclude":
                values["exclude"] = _parse_exclude(raw.split())
            elif key in _CONFIG_CASTS:
                values[key] = _CONFIG_CASTS[key](raw)
            else:
                values[key] = raw

    for key, val in vars(args).items():
        if key in ("config",) or val is None:
            continue
        values[key] = val

    grid_spec = values.pop("grid", None)
    if isinstance(grid_spec, str):
        try:
            gr, _, gt = grid_spec.lower().partition("x")
            values["grid_r"], values["grid_theta"] = int(gr), int(gt)
        except ValueError as exc:
            raise ConfigError(f"bad grid spec '{grid_spec}' (use NxM)") from exc
    if isinstance(values.get("exclude"), list):
        values["exclude"] = _parse_exclude(values["exclude"])
    if isinstance(values.get("tol"), list):
        values["tol"] = _parse_tols(values["tol"])

    allowed = set(RunConfig.__dataclass_fields__)
    unknown = set(values) - allowed
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        code, report = run(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except NeutralKahlerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for check in report["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']}: value={check['value']:.3e} "
              f"tolerance={check['tolerance']:.3e}")
    for key, val in report["values"].items():
        print(f"{key}: {val}")
    return code


if __name__ == "__main__":
    sys.exit(main())
