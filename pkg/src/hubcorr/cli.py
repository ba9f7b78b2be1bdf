"""Command-line front end.

Subcommands cover the analytic hierarchies (bose, fermi), the exact
diagonalization engine (ed), figure reproduction recipes (reproduce) and the
cross-method comparison report (compare-ed-z1).  A JSON config file can
preload any flag; explicit flags win.  Exit codes: 0 ok, 2 configuration
error, 3 numeric failure, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .lattice import (
    BudgetExceeded,
    ConfigError,
    LatticeSpec,
    NumericFailure,
    momentum_grid,
    structure_factor,
)
from . import bose_first, bose_second, bose_tilt, fermi, figures, floquet, io


def _thread_env():
    n = os.environ.get("HUBCORR_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path}: top level must be an object")
    flat = {}
    for key, value in cfg.items():
        if isinstance(value, dict):  # nested sections flatten to their keys
            flat.update(value)
        else:
            flat[key] = value
    return flat


def _merge_config(args, parser):
    """Fill argparse defaults from the config file; explicit flags win."""
    cfg = _load_config(getattr(args, "config", None))
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            continue
        if getattr(args, dest) == parser.get_default(dest):
            setattr(args, dest, value)
    return args


def _spec_from_args(args) -> LatticeSpec:
    extent = args.extent
    if isinstance(extent, str):
        extent = [int(x) for x in extent.split(",")]
    return LatticeSpec(
        dimension=args.dimension,
        extent=extent,
        J=args.J,
        U=args.U,
        boundary=args.boundary,
    )


def _lattice_flags(p, extent="64", J=0.1, U=1.0):
    p.add_argument("--dimension", type=int, default=1)
    p.add_argument("--extent", default=extent, help="comma-separated sites per axis")
    p.add_argument("--J", type=float, default=J)
    p.add_argument("--U", type=float, default=U)
    p.add_argument("--boundary", default="periodic", choices=["periodic", "open"])


def _output_flags(p, default_out="result.csv"):
    p.add_argument("--config", default=None, help="JSON file preloading any flag")
    p.add_argument("--out", default=default_out)
    p.add_argument("--format", dest="fmt", default=None, choices=["csv", "json"])


def _emit(args, columns, config):
    fmt = args.fmt or ("json" if str(args.out).endswith(".json") else "csv")
    path = io.write_table(args.out, columns, fmt, config)
    print(f"wrote {path}")


def _k_columns(grid):
    cols = {}
    for d in range(grid.points.shape[1]):
        cols[f"k{d + 1}"] = grid.points[:, d]
    return cols


# ---------------------------------------------------------------- bose

def _bose_table(spec, corr):
    T = structure_factor(spec, corr.grid.points)
    w2 = bose_first.omega_bose(spec.J, spec.U, T).omega_sq
    cols = _k_columns(corr.grid)
    cols.update(
        {
            "T_k": T,
            "omega_sq": w2,
            "f11": np.real(corr.f11),
            "re_f12": np.real(corr.f12),
            "im_f12": np.imag(corr.f12),
            "re_f21": np.real(corr.f21),
            "im_f21": np.imag(corr.f21),
        }
    )
    return cols


def cmd_bose(args, parser):
    spec = _spec_from_args(args)
    cfg = {"model": "bose", "experiment": args.experiment, "J": spec.J, "U": spec.U,
           "dimension": spec.dimension, "extent": list(spec.extent)}
    if args.experiment == "ground":
        corr = bose_first.ground_correlators(spec)
        _emit(args, _bose_table(spec, corr), cfg)
    elif args.experiment == "quench":
        corr = bose_first.quench_correlators(spec, t=args.t)
        cfg["t"] = args.t
        _emit(args, _bose_table(spec, corr), cfg)
        print(f"depletion = {corr.depletion:.6g}")
    elif args.experiment == "equilibrate":
        corr = bose_first.quasi_equilibrium(spec)
        _emit(args, _bose_table(spec, corr), cfg)
        T_eff = bose_first.effective_temperature(spec, depletion=corr.depletion)
        print(f"depletion = {corr.depletion:.6g}  T_eff/U = {T_eff / spec.U:.6g}")
    elif args.experiment == "tilt":
        pulse = bose_tilt.PulseProfile(E0=args.E0, tau=args.tau, shape=args.shape)
        res = bose_tilt.pair_creation_rate(spec, pulse, method=args.method, dt=args.dt)
        grid = momentum_grid(spec)
        cols = _k_columns(grid)
        cols["beta_sq"] = res["beta_sq"]
        cfg.update({"E0": args.E0, "tau": args.tau, "shape": args.shape,
                    "depletion": res["depletion"], "P_exc": res["P_exc"],
                    "P_exc_overlap": res["P_exc_overlap"]})
        _emit(args, cols, cfg)
        print(f"depletion = {res['depletion']:.6g}  P_exc = {res['P_exc']:.6g}")
    elif args.experiment == "floquet":
        u_values = np.linspace(args.u_min, args.u_max, args.n_u)
        rows_u, rows_s, rows_im = [], [], []
        for U in u_values:
            drive = floquet.FloquetDrive(J=args.J, U=float(U), E0=args.E0)
            res = floquet.monodromy_exponent(drive)
            rows_u.append(U)
            rows_s.append(np.real(res.sin2_pinu))
            rows_im.append(np.imag(res.nu))
        cfg.update({"E0": args.E0, "U_min": args.u_min, "U_max": args.u_max})
        _emit(args, {"U": rows_u, "sin2_pinu": rows_s, "im_nu": rows_im}, cfg)
        bands = floquet.resonance_scan(args.J, u_values, args.E0)
        for band in bands:
            print(f"resonance near U = {band['center']:.4g}, width {band['width']:.4g}")
    else:
        raise ConfigError(f"unknown bose experiment {args.experiment!r}")
    return 0


# ---------------------------------------------------------------- fermi

def _fermi_table(spec, corr):
    T = structure_factor(spec, corr.grid.points)
    w = fermi.omega_fermi(spec.J, spec.U, T)
    cols = _k_columns(corr.grid)
    cols.update(
        {
            "T_k": T,
            "omega": w,
            "f_1B1B": np.real(corr.f_1B1B),
            "re_f_1B0A": np.real(corr.f_1B0A),
            "im_f_1B0A": np.imag(corr.f_1B0A),
        }
    )
    return cols


def cmd_fermi(args, parser):
    spec = _spec_from_args(args)
    cfg = {"model": "fermi", "experiment": args.experiment, "J": spec.J, "U": spec.U,
           "dimension": spec.dimension, "extent": list(spec.extent)}
    if args.experiment == "ground":
        corr = fermi.ground_correlators_fermi(spec)
        _emit(args, _fermi_table(spec, corr), cfg)
    elif args.experiment == "quench":
        grid = momentum_grid(spec)
        times = np.linspace(0.0, args.t, args.n_times)
        docc = [fermi.quench_correlators_fermi(spec, grid, t).double_occupancy for t in times]
        cfg["t_final"] = args.t
        _emit(args, {"t": times, "double_occupancy": docc}, cfg)
    elif args.experiment == "equilibrate":
        corr = fermi.quasi_equilibrium_fermi(spec, momentum_grid(spec))
        _emit(args, _fermi_table(spec, corr), cfg)
        print(f"double occupancy = {corr.double_occupancy:.6g}")
    elif args.experiment == "staggered":
        grid = momentum_grid(spec)
        T = structure_factor(spec, grid.points)
        freq = fermi.staggered_frequencies(spec.J, spec.U, args.a, T)
        cols = _k_columns(grid)
        cols.update(
            {
                "T_k": T,
                "soft_minus": freq["soft"][0],
                "soft_plus": freq["soft"][1],
                "charge": freq["charge"][1],
            }
        )
        cfg["a"] = args.a
        _emit(args, cols, cfg)
    elif args.experiment == "tilt":
        pulse = bose_tilt.PulseProfile(E0=args.E0, tau=args.tau, shape=args.shape)
        res = fermi.dirac_pair_creation(spec, pulse, dt=args.dt)
        grid = momentum_grid(spec)
        cols = _k_columns(grid)
        cols["beta_sq"] = res["beta_sq"]
        cfg.update({"E0": args.E0, "tau": args.tau,
                    "double_occupancy": res["double_occupancy"]})
        _emit(args, cols, cfg)
        lz = fermi.tunneling_exponent(spec, args.E0)
        print(
            f"double occupancy = {res['double_occupancy']:.6g}  "
            f"tunneling estimate |beta|^2 = {lz['beta_sq']:.6g}"
        )
    else:
        raise ConfigError(f"unknown fermi experiment {args.experiment!r}")
    return 0


# ---------------------------------------------------------------- ed

def _ed_setup(args):
    from .ed.basis import build_fock_basis, build_momentum_sectors

    L = args.L
    N = args.N if args.N is not None else L
    spec = LatticeSpec(dimension=1, extent=L, J=args.J, U=args.U, boundary="periodic")
    basis = build_fock_basis(N, L)
    return spec, basis, build_momentum_sectors(basis)


def cmd_ed(args, parser):
    from .ed import dynamics as ed_dynamics
    from .ed.basis import build_fock_basis, locate_representative
    from .ed.hamiltonian import hamiltonian_sector
    from .ed.observables import (
        momentum_distribution_ed,
        obdm_operator_sector,
        obdm_sector,
        occupation_probabilities,
        state_weights,
    )
    from .ed.spectra import full_spectrum_dense, ground_state, lowest_eigenpairs

    cfg = {"model": "ed", "experiment": args.experiment, "L": args.L,
           "N": args.N if args.N is not None else args.L, "J": args.J, "U": args.U}

    if args.experiment == "spectrum":
        spec, basis, sectors = _ed_setup(args)
        col_K, col_i, col_E = [], [], []
        for sector in sectors:
            H = hamiltonian_sector(spec, sector)
            k = min(args.n_levels, sector.dimension)
            w, _ = lowest_eigenpairs(H, k)
            col_K.extend([sector.K] * k)
            col_i.extend(range(k))
            col_E.extend(np.real(w))
        _emit(args, {"K": col_K, "Omega": col_i, "E": col_E}, cfg)
    elif args.experiment == "ground":
        spec, basis, sectors = _ed_setup(args)
        s0 = sectors[0]
        H = hamiltonian_sector(spec, s0)
        E, psi = ground_state(H)
        C = obdm_sector(s0, psi)
        P = momentum_distribution_ed(C)
        L = s0.L
        cols = {
            "s": np.arange(L),
            "obdm_re": np.real(C),
            "obdm_im": np.imag(C),
            "k": 2.0 * np.pi * np.arange(L) / L,
            "P_k": P,
        }
        cfg["E0_ground"] = E
        _emit(args, cols, cfg)
        print(f"E_ground = {E:.10g}")
    elif args.experiment == "thermal":
        spec, basis, sectors = _ed_setup(args)
        energies, p0_eig, obdm_eig = [], [], []
        for sector in sectors:
            H = hamiltonian_sector(spec, sector)
            w, V = full_spectrum_dense(H)
            energies.append(w)
            pn = np.stack(
                [(sector.representatives == n).mean(axis=1) for n in range(basis.N + 1)],
                axis=1,
            )
            p0_eig.append((np.abs(V) ** 2).T @ pn[:, 0])
            obdm_eig.append(
                ed_dynamics.eigenstate_expectations(V, obdm_operator_sector(sector, 1))
            )
        E = np.concatenate(energies)
        p0 = np.concatenate(p0_eig)
        ob = np.concatenate(obdm_eig)
        temps = np.linspace(args.t_min, args.t_max, args.n_t)
        rows_p0 = [ed_dynamics.thermal_average(E, p0, T) for T in temps]
        rows_ob = [ed_dynamics.thermal_average(E, ob, T) for T in temps]
        _emit(args, {"T": temps, "p0": rows_p0, "obdm_s1": rows_ob}, cfg)
    elif args.experiment == "quench":
        spec, basis, sectors = _ed_setup(args)
        s0 = sectors[0]
        H = hamiltonian_sector(spec, s0)
        E, V = full_spectrum_dense(H)
        i0 = int(locate_representative(s0, np.ones((1, s0.L), dtype=np.uint8))[0][0])
        c0 = ed_dynamics.initial_coefficients(V, i0)
        times = np.linspace(0.0, args.t, args.n_times)
        B1 = obdm_operator_sector(s0, 1)
        B2 = obdm_operator_sector(s0, 2)
        rows = {"t": times, "p0": [], "p1": [], "p2": [], "obdm_s1": [], "obdm_s2": []}
        for t in times:
            psi = ed_dynamics.quench_amplitudes(E, V, c0, t)
            pn = occupation_probabilities(s0.representatives, state_weights(psi))
            rows["p0"].append(pn[0])
            rows["p1"].append(pn[1])
            rows["p2"].append(pn[2])
            rows["obdm_s1"].append(np.real(np.vdot(psi, B1 @ psi)))
            rows["obdm_s2"].append(np.real(np.vdot(psi, B2 @ psi)))
        cfg["t_final"] = args.t
        _emit(args, rows, cfg)
    elif args.experiment == "tilt":
        L = args.L
        N = args.N if args.N is not None else L
        spec = LatticeSpec(dimension=1, extent=L, J=args.J, U=args.U, boundary="open")
        basis = build_fock_basis(N, L)
        res = ed_dynamics.tilt_evolution(spec, basis, args.E0, args.tau, dt=args.dt)
        cfg.update({"E0": args.E0, "tau": args.tau})
        _emit(
            args,
            {
                "tau": [args.tau],
                "E0": [args.E0],
                "P_exc": [res["P_exc"]],
                "overlap": [res["overlap"]],
                "norm_drift": [res["norm_drift"]],
            },
            cfg,
        )
        print(f"P_exc = {res['P_exc']:.6g}")
    else:
        raise ConfigError(f"unknown ed experiment {args.experiment!r}")
    return 0


# ---------------------------------------------------------------- reports

def cmd_reproduce(args, parser):
    columns, cfg = figures.build(args.figure_id)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = args.fmt or "csv"
    table = out_dir / f"{args.figure_id}.{fmt}"
    io.write_table(table, columns, fmt, cfg)
    png = figures.render(args.figure_id, columns, out_dir / f"{args.figure_id}.png")
    print(f"wrote {table}")
    print(f"wrote {png}")
    return 0


def cmd_compare(args, parser):
    from .ed.basis import build_fock_basis, build_momentum_sectors
    from .ed.hamiltonian import hamiltonian_sector
    from .ed.observables import momentum_distribution_ed, obdm_sector
    from .ed.spectra import ground_state

    L = args.L
    spec = LatticeSpec(dimension=1, extent=L, J=args.J, U=args.U, boundary="periodic")
    basis = build_fock_basis(L, L)
    s0 = build_momentum_sectors(basis)[0]
    E, psi = ground_state(hamiltonian_sector(spec, s0))
    P_ed = momentum_distribution_ed(obdm_sector(s0, psi))
    corr = bose_first.ground_correlators(spec)
    P_z1 = bose_first.momentum_distribution(corr)
    eps = 1e-30
    dev = np.abs(P_ed - P_z1) / np.maximum.reduce([np.abs(P_ed), np.abs(P_z1), np.full(L, eps)])
    ok = dev <= args.tolerance
    cols = {
        "k": 2.0 * np.pi * np.arange(L) / L,
        "P_ed": P_ed,
        "P_z1": P_z1,
        "rel_deviation": dev,
        "tolerance": np.full(L, args.tolerance),
        "pass": ["yes" if x else "no" for x in ok],
    }
    cfg = {"report": "compare-ed-z1", "L": L, "J": args.J, "U": args.U,
           "tolerance": args.tolerance}
    _emit(args, cols, cfg)
    print(f"max relative deviation = {dev.max():.4g} "
          f"({'within' if ok.all() else 'EXCEEDS'} tolerance {args.tolerance:g})")
    return 0


def cmd_run(args, parser):
    cfg = _load_config(args.config)
    model = cfg.get("model")
    experiment = cfg.get("experiment")
    if model is None or experiment is None:
        raise ConfigError("run config needs 'model' and 'experiment' keys")
    argv = [model, experiment] if model in ("bose", "fermi", "ed") else [model]
    argv += ["--config", args.config]
    if args.out is not None:
        argv += ["--out", args.out]
    return main(argv)


# ---------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="hubcorr",
        description="Hubbard-model correlation hierarchies, exact diagonalization "
        "cross-checks and figure reproduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bose", help="bosonic correlator experiments")
    p.add_argument("experiment",
                   choices=["ground", "quench", "equilibrate", "tilt", "floquet"])
    _lattice_flags(p)
    p.add_argument("--t", type=float, default=5.0)
    p.add_argument("--E0", type=float, default=0.1)
    p.add_argument("--tau", type=float, default=5.0)
    p.add_argument("--shape", default="sauter", choices=["sauter", "bump"])
    p.add_argument("--method", default="ode", choices=["ode", "sauter"])
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--u-min", type=float, default=0.5)
    p.add_argument("--u-max", type=float, default=2.5)
    p.add_argument("--n-u", type=int, default=81)
    _output_flags(p)
    p.set_defaults(handler=cmd_bose, _parser=p)

    p = sub.add_parser("fermi", help="fermionic correlator experiments")
    p.add_argument("experiment",
                   choices=["ground", "quench", "equilibrate", "staggered", "tilt"])
    _lattice_flags(p)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--n-times", type=int, default=201)
    p.add_argument("--a", type=float, default=0.0, help="staggered field amplitude")
    p.add_argument("--E0", type=float, default=0.1)
    p.add_argument("--tau", type=float, default=5.0)
    p.add_argument("--shape", default="sauter", choices=["sauter", "bump"])
    p.add_argument("--dt", type=float, default=None)
    _output_flags(p)
    p.set_defaults(handler=cmd_fermi, _parser=p)

    p = sub.add_parser("ed", help="exact diagonalization on a 1D ring")
    p.add_argument("experiment", choices=["spectrum", "ground", "thermal", "quench", "tilt"])
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--N", type=int, default=None, help="particle number (default L)")
    p.add_argument("--J", type=float, default=0.1)
    p.add_argument("--U", type=float, default=1.0)
    p.add_argument("--n-levels", type=int, default=5)
    p.add_argument("--t", type=float, default=100.0)
    p.add_argument("--n-times", type=int, default=101)
    p.add_argument("--t-min", type=float, default=0.02)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--n-t", type=int, default=25)
    p.add_argument("--E0", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=2.0)
    p.add_argument("--dt", type=float, default=None)
    _output_flags(p)
    p.set_defaults(handler=cmd_ed, _parser=p)

    p = sub.add_parser("reproduce", help="figure reproduction recipes")
    p.add_argument("figure_id", help="one of: " + ", ".join(sorted(figures.CATALOG)))
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", dest="fmt", default=None, choices=["csv", "json"])
    p.set_defaults(handler=cmd_reproduce, _parser=p)

    p = sub.add_parser("compare-ed-z1", help="ED vs hierarchy momentum distribution")
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--J", type=float, default=0.1)
    p.add_argument("--U", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=0.2)
    _output_flags(p, default_out="compare-ed-z1.csv")
    p.set_defaults(handler=cmd_compare, _parser=p)

    p = sub.add_parser("run", help="run an experiment fully described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_run, _parser=p)

    return parser


def main(argv=None):
    _thread_env()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.handler is not cmd_run:
            args = _merge_config(args, args._parser)
        return args.handler(args, parser)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
