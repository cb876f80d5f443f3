"""Figure rendering for boundary curves and trajectories (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .solver import Trajectory
from .stability import BoundaryCurve

__all__ = ["save_boundary_figure", "save_trajectory_figure"]

_DPI = 150


def save_boundary_figure(
    curve: BoundaryCurve,
    path: str,
    markers=(),
    intervals=None,
) -> None:
    """Render the boundary curve, optional eigenvalue markers and stable
    real-axis intervals, to an image file."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.plot(curve.points.real, curve.points.imag, "-", lw=1.0, color="tab:blue")
    ax.plot([1.0], [0.0], "k.", ms=4)
    for lam in markers:
        lam = complex(lam)
        ax.plot([lam.real], [lam.imag], "x", ms=8, color="tab:red")
    if intervals:
        for lo, hi in intervals:
            ax.plot([lo, hi], [0.0, 0.0], "-", lw=3, color="tab:green", alpha=0.7)
    ax.axhline(0.0, color="0.7", lw=0.5)
    ax.axvline(0.0, color="0.7", lw=0.5)
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    ax.set_xlabel(r"Re $\lambda$")
    ax.set_ylabel(r"Im $\lambda$")
    simple = "simple" if curve.is_simple else "self-intersecting"
    ax.set_title(f"Stability boundary, order {curve.order} ({simple})")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_trajectory_figure(traj: Trajectory, path: str, title: str = "") -> None:
    """Render per-component moduli |x_k(t)| against time to an image file."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    t = np.arange(len(traj.states))
    mags = np.abs(traj.states)
    for k in range(mags.shape[1]):
        ax.plot(t, mags[:, k], lw=1.0, label=f"$|x_{{{k + 1}}}|$")
    if traj.diverged_at is not None:
        ax.set_yscale("log")
        ax.axvline(traj.diverged_at, color="tab:red", lw=0.8, ls="--")
    ax.set_xlabel("t")
    ax.set_ylabel("$|x_k(t)|$")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    ax.set_title(title or f"Trajectory, order {traj.order}")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
