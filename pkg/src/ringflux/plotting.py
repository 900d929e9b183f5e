"""Figure rendering for the CLI report paths.

Each function takes already-computed data and a target path and writes one
PNG next to the delimited artifact. matplotlib is imported lazily and in
headless mode so the data paths never pay for it.
"""

from __future__ import annotations

from pathlib import Path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_space_time(configs, path, title=None) -> Path:
    """Trajectory raster: time runs downward, occupied sites dark."""
    import numpy as np

    plt = _pyplot()
    grid = np.array([[int(ch) for ch in row] for row in configs])
    height = max(2.0, min(10.0, grid.shape[0] / 40))
    fig, ax = plt.subplots(figsize=(7, height))
    ax.imshow(grid, cmap="Greys", interpolation="nearest", aspect="auto")
    ax.set_xlabel("site")
    ax.set_ylabel("step")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_diagram_surface(rows, path, title=None) -> Path:
    """Fundamental diagram: flux over the (rho1, rho110) plane.

    With two or more distinct rho110 values the measured points span a
    surface; a sweep restricted to a single block count degenerates to a
    curve, so plot flux against rho1 instead.
    """
    plt = _pyplot()
    measured = [row for row in rows if row.q_u_hat is not None]
    distinct_rho110 = sorted({row.rho110 for row in measured})
    if len(distinct_rho110) >= 2 and len(measured) >= 3:
        fig = plt.figure(figsize=(7, 5.5))
        ax = fig.add_subplot(projection="3d")
        ax.plot_trisurf(
            [row.rho1 for row in measured],
            [row.rho110 for row in measured],
            [row.q_u_hat for row in measured],
            cmap="viridis",
            linewidth=0.1,
        )
        ax.set_zlabel("flux")
    else:
        fig, ax = plt.subplots(figsize=(6.5, 4.5))
        for rho110 in distinct_rho110:
            band = [row for row in measured if row.rho110 == rho110]
            band.sort(key=lambda row: row.rho1)
            ax.errorbar(
                [row.rho1 for row in band],
                [row.q_u_hat for row in band],
                yerr=[row.stderr for row in band],
                marker="o",
                markersize=3,
                capsize=2,
                label=f"$\\rho_{{110}}$={rho110:.3g}",
            )
        ax.set_ylabel("flux")
        ax.legend(fontsize=8)
    ax.set_xlabel(r"$\rho_1$")
    if len(distinct_rho110) >= 2 and len(measured) >= 3:
        ax.set_ylabel(r"$\rho_{110}$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_flux_curve(points, path, mc_rows=None, title=None) -> Path:
    """Predicted flux against particle density, with optional MC estimates."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.plot(
        [p.m1 / p.L for p in points],
        [float(p.q_u) for p in points],
        "o-",
        markersize=3.5,
        label="stationary prediction",
    )
    if mc_rows:
        ax.errorbar(
            [row.rho1 for row in mc_rows if row.q_u_hat is not None],
            [row.q_u_hat for row in mc_rows if row.q_u_hat is not None],
            yerr=[row.stderr for row in mc_rows if row.q_u_hat is not None],
            fmt="s",
            markersize=4,
            mfc="none",
            label="Monte Carlo",
        )
    ax.set_xlabel(r"$\rho_1$")
    ax.set_ylabel("flux")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_limit_curve(report, path, title=None) -> Path:
    """Deviation from the deterministic flux as alpha approaches one."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.plot(
        [1 - row.alpha for row in report.rows],
        [abs(row.deviation) for row in report.rows],
        "o-",
    )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"$1-\alpha$")
    ax.set_ylabel("|deviation from deterministic flux|")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
