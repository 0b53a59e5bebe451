"""Figure rendering for the CLI report path.

Each function builds a matplotlib figure from already-computed rows; the
CLI saves it next to the CSV output.  Nothing here recomputes physics.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["trajectory_figure", "scan_figure", "phase_integral_figure",
           "save_figure"]


def trajectory_figure(times: np.ndarray, populations: np.ndarray,
                      norms: np.ndarray,
                      fidelities: np.ndarray | None = None,
                      title: str = "") -> plt.Figure:
    """Population and norm versus time; optionally fidelity versus exact."""
    n_rows = 3 if fidelities is not None else 2
    fig, axes = plt.subplots(n_rows, 1, sharex=True,
                             figsize=(7.0, 2.2 * n_rows))
    axes[0].plot(times, populations, lw=1.0)
    axes[0].set_ylabel(r"$|\psi_1|^2$")
    axes[0].set_ylim(-0.05, 1.05)
    axes[1].plot(times, norms - 1.0, lw=1.0)
    axes[1].set_ylabel(r"$\|\psi\| - 1$")
    if fidelities is not None:
        axes[2].semilogy(times[1:], np.maximum(1.0 - fidelities[1:], 1e-18),
                         lw=1.0)
        axes[2].set_ylabel("infidelity")
    axes[-1].set_xlabel("t")
    if title:
        axes[0].set_title(title)
    fig.tight_layout()
    return fig


def scan_figure(axis: np.ndarray, values: np.ndarray, xlabel: str,
                ylabel: str, title: str = "") -> plt.Figure:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    positive = np.all(np.asarray(values) > 0.0)
    plot = ax.loglog if positive and np.all(np.asarray(axis) > 0.0) else ax.plot
    plot(axis, values, "o-", lw=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def phase_integral_figure(times: np.ndarray, quad_values: Sequence[complex],
                          bessel_values: Sequence[complex],
                          discrepancy: np.ndarray) -> plt.Figure:
    quad_values = np.asarray(quad_values)
    bessel_values = np.asarray(bessel_values)
    fig, (ax_val, ax_gap) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 5.0))
    ax_val.plot(times, quad_values.real, lw=1.2, label="Re, quadrature")
    ax_val.plot(times, quad_values.imag, lw=1.2, label="Im, quadrature")
    ax_val.plot(times, bessel_values.real, "k--", lw=0.8, label="Bessel series")
    ax_val.plot(times, bessel_values.imag, "k--", lw=0.8)
    ax_val.set_ylabel(r"$I_+(t)$")
    ax_val.legend(loc="best", fontsize=8)
    ax_gap.semilogy(times, np.maximum(discrepancy, 1e-18), lw=1.0)
    ax_gap.set_ylabel("route discrepancy")
    ax_gap.set_xlabel("t")
    fig.tight_layout()
    return fig


def save_figure(fig: plt.Figure, path: str, dpi: int = 150) -> None:
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
