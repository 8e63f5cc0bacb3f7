"""Figure rendering to files (no interactive windows).

Trajectories are drawn on the surface that matches the sign of the
curvature: ambient 3D triples on the sphere, projective-disk pairs on the
hyperbolic plane, plain Cartesian pairs in the flat case.  Conservation
plots show the drift of every logged quantity on a log scale.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import charts
from .dynamics import Trajectory

_SAVEFIG = {"dpi": 130, "metadata": {"Software": None}}


def plot_data(traj: Trajectory) -> dict:
    """Ambient triples plus projective pairs (None where not covered)."""
    ambient = []
    beltrami = []
    for s in traj.states:
        amb = charts.to_ambient(s)
        ambient.append([amb.x0, amb.x1, amb.x2])
        if amb.x0 > 1e-9:
            beltrami.append([amb.x1 / amb.x0, amb.x2 / amb.x0])
        else:
            beltrami.append(None)
    return {"ambient": ambient, "beltrami": beltrami}


def save_trajectory_figure(traj: Trajectory, path) -> None:
    data = plot_data(traj)
    kappa = traj.states[0].kappa
    amb = np.array(data["ambient"])
    if kappa > 0.0:
        fig = plt.figure(figsize=(6, 6))
        ax = fig.add_subplot(projection="3d")
        r = 1.0 / math.sqrt(kappa)
        u = np.linspace(0, 2 * np.pi, 40)
        v = np.linspace(0, np.pi, 20)
        ax.plot_wireframe(
            r * np.outer(np.cos(u), np.sin(v)),
            r * np.outer(np.sin(u), np.sin(v)),
            np.outer(np.ones_like(u), np.cos(v)) / math.sqrt(kappa),
            color="0.85",
            linewidth=0.4,
        )
        ax.plot(amb[:, 1], amb[:, 2], amb[:, 0], lw=1.0)
        ax.scatter(amb[:1, 1], amb[:1, 2], amb[:1, 0], marker="o", s=25)
        ax.set_xlabel("x1"), ax.set_ylabel("x2"), ax.set_zlabel("x0")
        ax.set_title(f"trajectory on the sphere, kappa={kappa:g}")
    else:
        fig, ax = plt.subplots(figsize=(6, 6))
        pts = np.array([p for p in data["beltrami"] if p is not None])
        ax.plot(pts[:, 0], pts[:, 1], lw=1.0)
        ax.scatter(pts[:1, 0], pts[:1, 1], marker="o", s=25, zorder=3)
        if kappa < 0.0:
            rad = 1.0 / math.sqrt(-kappa)
            theta = np.linspace(0, 2 * np.pi, 200)
            ax.plot(rad * np.cos(theta), rad * np.sin(theta), "k--", lw=0.8)
            ax.set_title(f"trajectory in the projective disk, kappa={kappa:g}")
        else:
            ax.set_title("trajectory in the plane")
        ax.set_aspect("equal")
        ax.set_xlabel("q1"), ax.set_ylabel("q2")
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def save_conservation_figure(traj: Trajectory, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, vals in traj.conserved.items():
        drift = np.abs(vals - vals[0]) / (1.0 + abs(vals[0]))
        ax.plot(traj.times, np.maximum(drift, 1e-18), label=name, lw=0.9)
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("relative drift")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("conserved-quantity drift")
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def save_sweep_figure(kappas, deviations, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = [abs(k) for k in kappas if k != 0.0]
    ds = [d for k, d in zip(kappas, deviations) if k != 0.0]
    ax.loglog(ks, ds, "o-")
    ax.set_xlabel("|kappa|")
    ax.set_ylabel("sup deviation from flat run")
    ax.set_title("flat-limit convergence")
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)
