"""Configuration, sweep orchestration, persistence, and plot-data files.

Subcommands
-----------
``sweep``     run the full (bc, a) grid, write CSV + JSON sidecar + figures
``single``    run one (bc, a) point and print the row
``converge``  mode-count convergence scan at one point
``compare``   sweep all boundary conditions and tabulate their differences

Precedence for every option: command line > config file > defaults.  All
floating-point output is written with 17 significant digits; re-running an
identical configuration reproduces the physics columns and plot-data files
byte for byte (wall-time diagnostics live in the sweep CSV and sidecar).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from unruhsim.analysis import (
    SweepFit,
    compare_boundary_conditions,
    fit_temperature_curve,
    thermality,
)
from unruhsim.cavity_modes import BoundaryCondition, CouplingScheme, ModeSet
from unruhsim.evolution_engine import integrate_interaction, mode_convergence_scan
from unruhsim.perturbative_oracle import boltzmann_temperature, converged_probability
from unruhsim.trajectory import Worldline, exit_acceleration, position, switching

# Reference configuration: T = 4, delta = 8/7,
# lambda0 = 0.01, L = 144 pi, 240 exact / 9000 perturbative modes,
# tolerance 1e-11.  The detector gap and sweep window are free parameters;
# the defaults put the sweep where the response is cleanly resolvable by
# both engines (see README).
DEFAULT_GRID_POINTS = 12
DEFAULT_GRID_BOUNDS = (1.2, 1.64)
ENGINES = ("np", "pt", "both")

CSV_COLUMNS = [
    "bc",
    "a",
    "nu",
    "r",
    "delta_thermality",
    "T_nonpert",
    "P_pert",
    "T_boltz",
    "symplectic_residual",
    "wall_time",
]


def _fmt(x: float | None) -> str:
    """17 significant digits; empty cell for missing values."""
    if x is None:
        return ""
    return f"{x:.16e}"


@dataclass(frozen=True)
class RunConfig:
    bcs: tuple[str, ...] = ("dirichlet", "neumann", "periodic")
    coupling: str = "xx"
    L: float = 144.0 * np.pi
    T: float = 4.0
    delta: float = 8.0 / 7.0
    lambda0: float = 0.01
    Omega_d: float = 2.25
    n_modes_np: int = 240
    n_modes_pt: int = 9000
    tol: float = 1e-11
    grid: tuple[float, ...] = tuple(
        np.linspace(DEFAULT_GRID_BOUNDS[0], DEFAULT_GRID_BOUNDS[1], DEFAULT_GRID_POINTS)
    )
    engine: str = "pt"
    out_dir: str = "results"
    trajectory_a: float = 1.6  # acceleration used for the sampled-trajectory file
    min_acceleration: float = 0.05  # config floor; the 1/a formulas degrade below it

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        for bc in self.bcs:
            BoundaryCondition(bc)
        CouplingScheme(self.coupling)
        grid = tuple(float(a) for a in self.grid)
        if len(grid) < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("acceleration grid must be strictly increasing")
        if any(a < self.min_acceleration for a in grid):
            raise ValueError(
                f"grid accelerations below the configured floor {self.min_acceleration}"
            )
        object.__setattr__(self, "grid", grid)

    def worldline(self, a: float) -> Worldline:
        return Worldline(
            a=a,
            L=self.L,
            T=self.T,
            delta=self.delta,
            lambda0=self.lambda0,
            Omega_d=self.Omega_d,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        for key in ("bcs", "grid"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)


@dataclass(frozen=True)
class SweepRow:
    bc: str
    a: float
    nu: float | None = None
    r: float | None = None
    delta_thermality: float | None = None
    T_nonpert: float | None = None
    P_pert: float | None = None
    T_boltz: float | None = None
    symplectic_residual: float | None = None
    wall_time: float | None = None
    pt_n_used: int | None = None
    pt_tail_rel: float | None = None


@dataclass
class SweepResult:
    config: RunConfig
    rows: list[SweepRow]
    fits: dict[str, SweepFit] = field(default_factory=dict)
    comparison: object | None = None

    def temperatures(self, bc: str) -> list[tuple[float, float]]:
        pick = lambda row: row.T_nonpert if row.T_nonpert is not None else row.T_boltz
        return [(row.a, pick(row)) for row in self.rows if row.bc == bc]


def run_point(config: RunConfig, bc: str, a: float) -> SweepRow:
    """Evaluate one (bc, a) sweep point with the configured engine(s)."""
    w = config.worldline(a)
    scheme = CouplingScheme(config.coupling)
    boundary = BoundaryCondition(bc)
    row: dict = {"bc": bc, "a": a}
    start = time.perf_counter()
    if config.engine in ("np", "both"):
        modes = ModeSet.build(boundary, config.n_modes_np, config.L)
        result = integrate_interaction(modes, scheme, w, config.tol)
        report = thermality(result.detector, config.Omega_d)
        row.update(
            nu=report.nu,
            r=report.r,
            delta_thermality=report.delta_ratio,
            T_nonpert=report.temperature,
            symplectic_residual=result.diagnostics.symplectic_residual,
        )
    if config.engine in ("pt", "both"):
        modes = ModeSet.build(boundary, config.n_modes_pt, config.L)
        pt = converged_probability(modes, w)
        T_boltz = (
            0.0 if pt.probability == 0.0 else boltzmann_temperature(pt.probability, config.Omega_d)
        )
        row.update(
            P_pert=pt.probability,
            T_boltz=T_boltz,
            pt_n_used=pt.n_used,
            pt_tail_rel=pt.tail_estimate / pt.probability if pt.probability > 0.0 else 0.0,
        )
    row["wall_time"] = time.perf_counter() - start
    return SweepRow(**row)


def run_sweep(config: RunConfig) -> SweepResult:
    """Run the acceleration grid for every configured boundary condition.

    Points are evaluated and merged in deterministic (bc, a) order; a failed
    point aborts with the offending pair identified while keeping completed
    rows attached to the raised error.
    """
    rows: list[SweepRow] = []
    for bc in config.bcs:
        for a in config.grid:
            try:
                rows.append(run_point(config, bc, a))
            except Exception as exc:
                exc.partial_rows = rows  # type: ignore[attr-defined]
                raise RuntimeError(f"sweep point failed: bc={bc}, a={a}: {exc}") from exc
    result = SweepResult(config=config, rows=rows)
    if len(config.grid) >= 3:
        for bc in config.bcs:
            result.fits[bc] = fit_temperature_curve(result.temperatures(bc))
        if len(config.bcs) >= 2:
            result.comparison = compare_boundary_conditions(result.fits)
    return result


def write_sweep_csv(result: SweepResult, path: Path) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for row in result.rows:
        cells = [row.bc] + [
            _fmt(getattr(row, col)) for col in CSV_COLUMNS[1:]
        ]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_sidecar(result: SweepResult, path: Path) -> None:
    doc = {"config": json.loads(result.config.to_json())}
    doc["fits"] = {
        bc: {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
            "max_residual": fit.max_residual,
        }
        for bc, fit in result.fits.items()
    }
    if result.comparison is not None:
        doc["comparison"] = {
            "max_rel_difference": result.comparison.max_rel_difference,
            "max_slope_ratio_deviation": result.comparison.max_slope_ratio_deviation,
            "pairs": [
                {
                    "first": p.first,
                    "second": p.second,
                    "max_rel_difference": p.max_rel_difference,
                    "slope_ratio": p.slope_ratio,
                }
                for p in result.comparison.pairs
            ],
        }
    doc["diagnostics"] = {
        "total_wall_time": sum(row.wall_time or 0.0 for row in result.rows),
        "max_symplectic_residual": max(
            (row.symplectic_residual for row in result.rows if row.symplectic_residual is not None),
            default=None,
        ),
        "mode_sum_tails": [
            {"bc": row.bc, "a": row.a, "n_used": row.pt_n_used, "tail_rel": row.pt_tail_rel}
            for row in result.rows
            if row.pt_n_used is not None
        ],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def emit_plot_data(result: SweepResult, out_dir: Path) -> list[Path]:
    """Figure-analog data files: temperature curves, pairwise differences,
    and a sampled trajectory/switching profile."""
    out_dir.mkdir(parents=True, exist_ok=True)
    config = result.config
    written: list[Path] = []

    # temperature versus acceleration, one temperature column per bc
    path = out_dir / "temperature_vs_acceleration.csv"
    bcs = list(config.bcs)
    by_bc = {bc: {row.a: row for row in result.rows if row.bc == bc} for bc in bcs}
    header = ["a"]
    for bc in bcs:
        header += [f"T_nonpert_{bc}", f"T_boltz_{bc}"]
    lines = [",".join(header)]
    for a in config.grid if result.rows else ():
        cells = [_fmt(a)]
        for bc in bcs:
            row = by_bc[bc].get(a)
            cells += [_fmt(row.T_nonpert), _fmt(row.T_boltz)] if row else ["", ""]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    written.append(path)

    # pairwise temperature differences per acceleration
    path = out_dir / "temperature_differences.csv"
    if result.comparison is not None:
        pairs = result.comparison.pairs
        header = ["a"] + [f"dT_{p.first}_minus_{p.second}" for p in pairs]
        lines = [",".join(header)]
        for i, a in enumerate(config.grid):
            lines.append(
                ",".join([_fmt(a)] + [_fmt(float(p.delta_T[i])) for p in pairs])
            )
    else:
        lines = ["a"]
    path.write_text("\n".join(lines) + "\n")
    written.append(path)

    # sampled trajectory and switching profile on a 401-point proper-time grid
    path = out_dir / "trajectory_switching.csv"
    lines = ["tau,x,lambda"]
    if result.rows:
        w = config.worldline(config.trajectory_a)
        for tau in np.linspace(-config.T, config.T, 401):
            lines.append(
                ",".join(
                    [_fmt(tau), _fmt(float(position(w, tau))), _fmt(float(switching(w, tau)))]
                )
            )
    path.write_text("\n".join(lines) + "\n")
    written.append(path)
    return written


def render_figures(result: SweepResult, out_dir: Path) -> list[Path]:
    """PNG renderings of the three plot-data files."""
    from unruhsim import _plotting

    return _plotting.render_all(result, out_dir)


def _write_outputs(result: SweepResult, out_dir: Path, figures: bool = True) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(result, out_dir / "sweep.csv")
    write_sidecar(result, out_dir / "sweep.json")
    emit_plot_data(result, out_dir)
    if figures:
        render_figures(result, out_dir)


# ---------------------------------------------------------------------------
# command-line interface


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file (CLI flags override it)")
    p.add_argument("--bc", choices=[b.value for b in BoundaryCondition], help="boundary condition")
    p.add_argument("--coupling", choices=[s.value for s in CouplingScheme])
    p.add_argument("--engine", choices=list(ENGINES))
    p.add_argument("--modes", type=int, help="non-perturbative mode count")
    p.add_argument("--modes-pt", type=int, help="perturbative mode count")
    p.add_argument("--tol", type=float, help="integration tolerance")
    p.add_argument("--omega-d", type=float, help="detector gap")
    p.add_argument("--lambda0", type=float, help="peak coupling strength")
    p.add_argument("--length", type=float, help="cavity length")
    p.add_argument("--half-duration", type=float, help="interaction half-duration T")
    p.add_argument("--delta", type=float, help="switching width")
    p.add_argument("--grid", type=str, help="acceleration grid 'lo:hi:npts' or comma list")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def _parse_grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        lo, hi, n = text.split(":")
        return tuple(np.linspace(float(lo), float(hi), int(n)))
    return tuple(float(x) for x in text.split(","))


def _build_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config is not None:
        data.update(json.loads(Path(args.config).read_text()))
    overrides = {
        "bcs": (args.bc,) if args.bc else None,
        "coupling": args.coupling,
        "engine": args.engine,
        "n_modes_np": args.modes,
        "n_modes_pt": args.modes_pt,
        "tol": args.tol,
        "Omega_d": args.omega_d,
        "lambda0": args.lambda0,
        "L": args.length,
        "T": args.half_duration,
        "delta": args.delta,
        "grid": _parse_grid(args.grid) if args.grid else None,
        "out_dir": str(args.out) if args.out else None,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(data)


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _build_config(args)
    result = run_sweep(config)
    out_dir = Path(config.out_dir)
    _write_outputs(result, out_dir, figures=not args.no_figures)
    for bc, fit in result.fits.items():
        print(
            f"{bc}: slope={fit.slope:.6g} intercept={fit.intercept:.6g} "
            f"R^2={fit.r_squared:.6f} max|resid|={fit.max_residual:.3g}"
        )
    if result.comparison is not None:
        print(
            f"cross-bc: max |dT|/T = {result.comparison.max_rel_difference:.3%}, "
            f"max slope-ratio deviation = {result.comparison.max_slope_ratio_deviation:.3%}"
        )
    print(f"wrote {out_dir}/sweep.csv")
    return 0


def _cmd_single(args: argparse.Namespace) -> int:
    config = _build_config(args)
    bc = config.bcs[0] if args.bc is None else args.bc
    row = run_point(config, bc, args.a)
    for col in CSV_COLUMNS:
        print(f"{col} = {getattr(row, col)}")
    if row.pt_n_used is not None:
        print(f"pt_n_used = {row.pt_n_used}")
        print(f"pt_tail_rel = {row.pt_tail_rel}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        result = SweepResult(config=replace(config, bcs=(bc,), grid=(args.a,)), rows=[row])
        write_sweep_csv(result, out_dir / "single.csv")
        write_sidecar(result, out_dir / "single.json")
        print(f"wrote {out_dir}/single.csv")
    return 0


def _cmd_converge(args: argparse.Namespace) -> int:
    config = _build_config(args)
    bc = BoundaryCondition(config.bcs[0] if args.bc is None else args.bc)
    w = config.worldline(args.a)
    rows = mode_convergence_scan(
        lambda n: ModeSet.build(bc, n, config.L),
        CouplingScheme(config.coupling),
        w,
        config.tol,
        args.n_list,
    )
    print("n_modes,nu,temperature,rel_change,converged")
    for row in rows:
        rel = "" if row.rel_change is None else _fmt(row.rel_change)
        conv = "" if row.converged is None else str(row.converged).lower()
        print(f"{row.n_modes},{_fmt(row.nu)},{_fmt(row.temperature)},{rel},{conv}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        lines = ["n_modes,nu,temperature,rel_change,converged"]
        for row in rows:
            rel = "" if row.rel_change is None else _fmt(row.rel_change)
            conv = "" if row.converged is None else str(row.converged).lower()
            lines.append(f"{row.n_modes},{_fmt(row.nu)},{_fmt(row.temperature)},{rel},{conv}")
        (out_dir / "convergence.csv").write_text("\n".join(lines) + "\n")
        (out_dir / "convergence.json").write_text(config.to_json() + "\n")
        print(f"wrote {out_dir}/convergence.csv")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if args.bc is not None:
        raise SystemExit("compare always runs all boundary conditions; drop --bc")
    config = replace(config, bcs=("dirichlet", "neumann", "periodic"))
    result = run_sweep(config)
    comp = result.comparison
    print("pair,max_|dT|/T,slope_ratio")
    for p in comp.pairs:
        print(f"{p.first}/{p.second},{p.max_rel_difference:.6g},{p.slope_ratio:.6g}")
    print(
        f"summary: max |dT|/T = {comp.max_rel_difference:.3%}, "
        f"max slope-ratio deviation = {comp.max_slope_ratio_deviation:.3%}"
    )
    if args.out:
        _write_outputs(result, Path(args.out), figures=not args.no_figures)
        print(f"wrote {args.out}/sweep.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unruhsim",
        description="Accelerated detector in a 1-D cavity: sweeps, convergence scans, comparisons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run the acceleration grid and write results")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("single", help="run one (bc, a) point")
    _add_common_flags(p)
    p.add_argument("-a", "--acceleration", dest="a", type=float, required=True)
    p.set_defaults(func=_cmd_single)

    p = sub.add_parser("converge", help="mode-count convergence scan")
    _add_common_flags(p)
    p.add_argument("-a", "--acceleration", dest="a", type=float, required=True)
    p.add_argument(
        "--n-list",
        type=lambda s: [int(x) for x in s.split(",")],
        default=[60, 120, 240, 480],
        help="comma-separated ascending mode counts",
    )
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("compare", help="sweep all boundary conditions and diff them")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
