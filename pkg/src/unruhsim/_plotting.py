"""Matplotlib renderings of the sweep outputs (headless Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from unruhsim.trajectory import position, switching

_BC_STYLE = {
    "dirichlet": dict(color="tab:blue", marker="o"),
    "neumann": dict(color="tab:orange", marker="s"),
    "periodic": dict(color="tab:green", marker="^"),
}


def _style(bc: str) -> dict:
    return _BC_STYLE.get(bc, dict(color="tab:gray", marker="x"))


def render_trajectory(result, path: Path) -> Path:
    config = result.config
    w = config.worldline(config.trajectory_a)
    taus = np.linspace(-config.T, config.T, 401)
    xs = position(w, taus)
    lams = switching(w, taus)

    fig, ax1 = plt.subplots(figsize=(6.4, 4.0))
    ax1.plot(taus, xs, color="tab:blue", label="position $x(\\tau)$")
    ax1.axhline(0.0, color="gray", lw=0.6)
    ax1.axhline(config.L, color="gray", lw=0.6)
    ax1.set_xlabel(r"proper time $\tau$")
    ax1.set_ylabel(r"$x(\tau)$", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.plot(taus, lams / config.lambda0, color="tab:red", ls="--", label="switching")
    ax2.set_ylabel(r"$\lambda(\tau)/\lambda_0$", color="tab:red")
    ax1.set_title(f"detector worldline and switching, a = {config.trajectory_a:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_temperatures(result, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for bc in result.config.bcs:
        points = [(a, T) for a, T in result.temperatures(bc) if T is not None]
        if not points:
            continue
        accs, temps = zip(*points)
        ax.plot(accs, temps, ls="-", ms=4, label=bc, **_style(bc))
        fit = result.fits.get(bc)
        if fit is not None:
            grid = np.asarray(accs)
            ax.plot(grid, fit.slope * grid + fit.intercept, ls=":", lw=1,
                    color=_style(bc)["color"])
    ax.set_xlabel(r"proper acceleration $a$")
    ax.set_ylabel(r"temperature $T_d$")
    ax.set_title("detector temperature versus acceleration")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_differences(result, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if result.comparison is not None:
        grid = np.asarray(result.config.grid)
        for pair in result.comparison.pairs:
            ax.plot(grid, pair.delta_T, marker=".", label=f"{pair.first} − {pair.second}")
        ax.legend()
    ax.axhline(0.0, color="gray", lw=0.6)
    ax.set_xlabel(r"proper acceleration $a$")
    ax.set_ylabel(r"$\Delta T_d$")
    ax.set_title("pairwise temperature differences between boundary conditions")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_all(result, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        render_trajectory(result, out_dir / "trajectory_switching.png"),
        render_temperatures(result, out_dir / "temperature_vs_acceleration.png"),
        render_differences(result, out_dir / "temperature_differences.png"),
    ]
