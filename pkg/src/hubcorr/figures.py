"""Reproduction recipes: plot-ready tables plus rendered PNG companions.

Each recipe id maps to a function returning (columns, config).  The tables
are written through the io module; render() draws the matching figure with
matplotlib so a report run leaves both the delimited data and the picture.
"""

from __future__ import annotations

import numpy as np

from .lattice import ConfigError, LatticeSpec, dense_grid, momentum_grid
from .bose_first import ground_correlators, omega_bose, j_critical
from .bose_second import parity_correlation
from .bose_tilt import PulseProfile, pair_creation_rate


def _dispersion_1d():
    """omega_k^2 / U^2 against k for a few hoppings up to the critical one."""
    U = 1.0
    ks = np.linspace(0.0, np.pi, 257)
    j_values = [0.05, 0.10, 0.15, j_critical(U)]
    col_k, col_j, col_w2 = [], [], []
    for J in j_values:
        w2 = omega_bose(J, U, np.cos(ks)).omega_sq
        col_k.append(ks)
        col_j.append(np.full_like(ks, J))
        col_w2.append(w2 / U**2)
    columns = {
        "k": np.concatenate(col_k),
        "J_over_U": np.concatenate(col_j),
        "omega_sq_over_U_sq": np.concatenate(col_w2),
    }
    return columns, {"U": U, "J_values": [float(j) for j in j_values]}


def _parity_1d():
    """Ground-state parity correlations at s = 1, 2, 3 against J/U."""
    U = 1.0
    j_values = np.linspace(0.005, 0.16, 32)
    out = {"J_over_U": j_values}
    for s in (1, 2, 3):
        vals = []
        for J in j_values:
            spec = LatticeSpec(dimension=1, extent=512, J=float(J), U=U, boundary="periodic")
            corr = ground_correlators(spec, dense_grid(spec, 512))
            vals.append(parity_correlation(corr, [float(s)]))
        out[f"F_parity_s{s}"] = np.asarray(vals)
    return out, {"U": U, "separations": [1, 2, 3]}


def _pexc_surface():
    """Pair-creation rate over a (tau, E0) grid, closed-form Sauter modes."""
    U = 1.0
    spec = LatticeSpec(dimension=1, extent=12, J=0.1, U=U, boundary="periodic")
    grid = momentum_grid(spec)
    taus = np.array([0.5, 1.0, 2.0, 4.0, 8.0, 16.0])
    e0s = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    col_tau, col_e0, col_p = [], [], []
    for tau in taus:
        for E0 in e0s:
            pulse = PulseProfile(E0=float(E0), tau=float(tau), shape="sauter")
            res = pair_creation_rate(spec, pulse, grid, method="sauter")
            col_tau.append(tau)
            col_e0.append(E0)
            col_p.append(res["P_exc"])
    columns = {
        "tau": np.asarray(col_tau),
        "E0": np.asarray(col_e0),
        "P_exc": np.asarray(col_p),
    }
    return columns, {"L": 12, "J": 0.1, "U": U}


CATALOG = {
    "dispersion-1d": _dispersion_1d,
    "parity-1d": _parity_1d,
    "pexc-surface": _pexc_surface,
}


def build(figure_id: str):
    if figure_id not in CATALOG:
        known = ", ".join(sorted(CATALOG))
        raise ConfigError(f"unknown figure id {figure_id!r} (known: {known})")
    return CATALOG[figure_id]()


def render(figure_id: str, columns: dict, png_path):
    """Draw the recipe's figure from its own table."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if figure_id == "dispersion-1d":
        k = np.asarray(columns["k"])
        jv = np.asarray(columns["J_over_U"])
        w2 = np.asarray(columns["omega_sq_over_U_sq"])
        for J in np.unique(jv):
            m = jv == J
            ax.plot(k[m], w2[m], label=f"J/U = {J:.4g}")
        ax.set_xlabel("k")
        ax.set_ylabel(r"$\omega_k^2 / U^2$")
        ax.legend(fontsize=8)
    elif figure_id == "parity-1d":
        jv = np.asarray(columns["J_over_U"])
        for name in columns:
            if name.startswith("F_parity_s"):
                ax.plot(jv, np.asarray(columns[name]), label=f"s = {name[-1]}")
        ax.set_xlabel("J / U")
        ax.set_ylabel("parity correlation")
        ax.legend(fontsize=8)
    elif figure_id == "pexc-surface":
        tau = np.asarray(columns["tau"])
        e0 = np.asarray(columns["E0"])
        p = np.asarray(columns["P_exc"])
        for t in np.unique(tau):
            m = tau == t
            ax.semilogy(e0[m], np.maximum(p[m], 1e-300), label=f"tau U = {t:g}")
        ax.set_xlabel(r"$E_0$")
        ax.set_ylabel(r"$P_{exc}$")
        ax.legend(fontsize=8)
    else:
        raise ConfigError(f"no renderer for {figure_id!r}")
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return png_path
