"""Command-line interface: scenario configs in, CSV/JSON artifacts out.

One subcommand per capability: evolve, photon-dist, wigner-grid,
qfunc-grid, oscillator, quasienergy, cat.  A scenario may also be given as
a single JSON file via --config, whose keys mirror the long option names.
Outputs are deterministic: fixed float formatting, no timestamps, and
reductions that do not depend on BLAS threading.

Exit codes: 0 success, 2 configuration error, 3 numeric/invariant error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .cats import CatState, cat_photon_distribution, cat_wavefunction, cat_wigner_grid
from .errors import ConfigInvalid, PhaseSpaceError
from .oscillator import EpsilonPoint, FrequencyProfile, quasienergy, solve_epsilon, variances
from .photons import photon_distribution
from .states import evolve, q_function, wigner
from .symplectic import evolve_real
from .cats import WignerGrid  # noqa: F401  (re-exported for plotting scripts)

COMMANDS = ("evolve", "photon-dist", "wigner-grid", "qfunc-grid",
            "oscillator", "quasienergy", "cat")


def _parse_floats(text: str, count: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise ConfigInvalid(f"{what} needs {count} comma-separated values, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigInvalid(f"{what}: {exc}") from exc


def _parse_grid(text: str) -> tuple[float, float, float, float, int]:
    parts = text.split(",")
    if len(parts) != 5:
        raise ConfigInvalid(f"grid must be 'min1,max1,min2,max2,n', got {text!r}")
    try:
        a, b, c, d = (float(p) for p in parts[:4])
        n = int(parts[4])
    except ValueError as exc:
        raise ConfigInvalid(f"grid: {exc}") from exc
    if n < 2:
        raise ConfigInvalid("grid needs at least 2 points per axis")
    return a, b, c, d, n


def _parse_complex(text: str, what: str) -> complex:
    re, im = _parse_floats(text, 2, what)
    return complex(re, im)


def _require(opts: dict, key: str):
    value = opts.get(key)
    if value is None:
        raise ConfigInvalid(f"missing required option {key!r}")
    return value


def _optional_steps(opts: dict) -> int | None:
    steps = opts.get("steps")
    return None if steps is None else int(steps)


def run_evolve(opts: dict) -> None:
    h = io.load_hamiltonian(_require(opts, "hamiltonian"))
    state = io.load_state(_require(opts, "state"))
    t = float(_require(opts, "t"))
    prop = evolve_real(h, t, _optional_steps(opts))
    if opts.get("invert"):
        prop = prop.inverse()
    out = evolve(state, prop)
    io.dump_state(out, _require(opts, "out"))
    if opts.get("propagator_out"):
        io.dump_json(io.propagator_to_dict(prop), opts["propagator_out"])


def run_photon_dist(opts: dict) -> None:
    state = io.load_state(_require(opts, "state"))
    if opts.get("hamiltonian"):
        h = io.load_hamiltonian(opts["hamiltonian"])
        t = float(_require(opts, "t"))
        state = evolve(state, evolve_real(h, t, _optional_steps(opts)))
    cutoff_text = str(_require(opts, "cutoff"))
    try:
        cutoff = tuple(int(c) for c in cutoff_text.split(","))
    except ValueError as exc:
        raise ConfigInvalid(f"cutoff: {exc}") from exc
    dist = photon_distribution(state, cutoff)
    out = Path(_require(opts, "out"))
    header = [f"n{j + 1}" for j in range(state.n_modes)] + ["prob"]
    rows = ((*idx, float(dist.probs[idx])) for idx in np.ndindex(*dist.probs.shape))
    io.write_csv(out, header, rows)
    sidecar = {
        "mass": dist.mass,
        "mean_per_mode": list(dist.mode_means),
        "p0": float(dist.probs[(0,) * state.n_modes]),
    }
    io.dump_json(sidecar, out.with_suffix(".json"))


def run_wigner_grid(opts: dict) -> None:
    state = io.load_state(_require(opts, "state"))
    pmin, pmax, qmin, qmax, n = _parse_grid(str(_require(opts, "grid")))
    ps = np.linspace(pmin, pmax, n)
    qs = np.linspace(qmin, qmax, n)
    nm = state.n_modes
    if nm == 1:
        rows = []
        for pv in ps:
            pts = np.stack([np.full(n, pv), qs], axis=-1)
            vals = wigner(state, pts)
            rows.extend((pv, qv, wv) for qv, wv in zip(qs, vals))
        io.write_csv(_require(opts, "out"), ["p", "q", "value"], rows)
        return
    # multimode: tensor grid with the same axis per mode, generic format
    header = ["index"] + [f"p{j + 1}" for j in range(nm)] + [f"q{j + 1}" for j in range(nm)] + ["value"]
    axes = [ps] * nm + [qs] * nm
    rows = []
    for index, combo in enumerate(np.ndindex(*(n,) * (2 * nm))):
        point = np.array([axes[d][k] for d, k in enumerate(combo)])
        rows.append((index, *point, float(wigner(state, point))))
    io.write_csv(_require(opts, "out"), header, rows)


def run_qfunc_grid(opts: dict) -> None:
    state = io.load_state(_require(opts, "state"))
    rmin, rmax, imin, imax, n = _parse_grid(str(_require(opts, "grid")))
    res = np.linspace(rmin, rmax, n)
    ims = np.linspace(imin, imax, n)
    nm = state.n_modes
    if nm == 1:
        rows = []
        for rv in res:
            betas = rv + 1j * ims
            vals = q_function(state, betas[:, None])
            rows.extend((rv, iv, qv) for iv, qv in zip(ims, vals))
        io.write_csv(_require(opts, "out"), ["re_beta", "im_beta", "value"], rows)
        return
    header = ["index"]
    for j in range(nm):
        header += [f"re_beta{j + 1}", f"im_beta{j + 1}"]
    header += ["value"]
    rows = []
    for index, combo in enumerate(np.ndindex(*(n,) * (2 * nm))):
        beta = np.array([res[combo[2 * j]] + 1j * ims[combo[2 * j + 1]] for j in range(nm)])
        coords = []
        for j in range(nm):
            coords += [res[combo[2 * j]], ims[combo[2 * j + 1]]]
        rows.append((index, *coords, float(q_function(state, beta))))
    io.write_csv(_require(opts, "out"), header, rows)


def run_oscillator(opts: dict) -> None:
    profile = io.load_profile(_require(opts, "profile"))
    t_final = float(_require(opts, "t_final"))
    traj = solve_epsilon(profile, t_final, _optional_steps(opts))
    n_samples = int(opts.get("samples") or 101)
    picks = np.unique(np.linspace(0, traj.times.size - 1, n_samples).round().astype(int))
    var = variances(traj.eps[picks], traj.eps_dot[picks])
    rows = zip(traj.times[picks], traj.eps[picks].real, traj.eps[picks].imag,
               var.sigma_x, var.sigma_p, var.sigma_xp, var.r)
    io.write_csv(
        _require(opts, "out"),
        ["t", "re_eps", "im_eps", "sigma_x", "sigma_p", "sigma_xp", "r"],
        rows,
    )


def run_quasienergy(opts: dict) -> None:
    profile = io.load_profile(_require(opts, "profile"))
    period = opts.get("period")
    result = quasienergy(profile, None if period is None else float(period))
    io.dump_json(
        {
            "kappa": result.kappa,
            "stable": result.stable,
            "trace": result.trace,
            "multipliers": [
                [result.multipliers[0].real, result.multipliers[0].imag],
                [result.multipliers[1].real, result.multipliers[1].imag],
            ],
            "period": result.period,
        },
        _require(opts, "out"),
    )


def _cat_from_opts(opts: dict) -> CatState:
    parity = str(_require(opts, "parity"))
    alpha = _parse_complex(str(_require(opts, "alpha")), "alpha")
    t = float(opts.get("t") or 0.0)
    if t == 0.0:
        point = EpsilonPoint.initial()
    else:
        profile = (io.load_profile(opts["profile"]) if opts.get("profile")
                   else FrequencyProfile.constant(1.0))
        point = solve_epsilon(profile, t, _optional_steps(opts)).final
    try:
        return CatState(parity, alpha, point)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc


def run_cat(opts: dict) -> None:
    out = Path(_require(opts, "out"))
    emit = opts.get("emit")
    if emit is None:
        for kind in ("wavefunction", "wigner", "photon"):
            if kind in out.stem:
                emit = kind
                break
    if emit not in ("wavefunction", "wigner", "photon"):
        raise ConfigInvalid("pass --emit wavefunction|wigner|photon "
                            "(or name the output file after one)")
    cat = _cat_from_opts(opts)
    if emit == "wavefunction":
        if opts.get("x"):
            parts = str(opts["x"]).split(",")
            if len(parts) != 3:
                raise ConfigInvalid(f"--x must be 'xmin,xmax,n', got {opts['x']!r}")
            try:
                xmin, xmax, n = float(parts[0]), float(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ConfigInvalid(f"--x: {exc}") from exc
        else:
            span = 8.0 * max(1.0, abs(cat.alpha)) * max(1.0, abs(cat.point.eps))
            xmin, xmax, n = -span, span, 1024
        xs = np.linspace(xmin, xmax, n)
        psi = cat_wavefunction(cat, xs)
        io.write_csv(out, ["x", "re_psi", "im_psi"], zip(xs, psi.real, psi.imag))
    elif emit == "wigner":
        grid = str(opts.get("grid") or "-6,6,-6,6,128")
        pmin, pmax, qmin, qmax, n = _parse_grid(grid)
        wg = cat_wigner_grid(cat, (pmin, pmax), (qmin, qmax), n)
        rows = []
        for i, pv in enumerate(wg.p):
            rows.extend((pv, qv, wg.values[i, j]) for j, qv in enumerate(wg.q))
        io.write_csv(out, ["p", "q", "value"], rows)
    else:
        cutoff = int(opts.get("cutoff") or 20)
        dist = cat_photon_distribution(cat, cutoff)
        io.write_csv(out, ["n1", "prob"],
                     ((k, float(dist.probs[k])) for k in range(cutoff + 1)))
        io.dump_json(
            {"mass": dist.mass, "mean_per_mode": list(dist.mode_means),
             "p0": float(dist.probs[0])},
            out.with_suffix(".json"),
        )


_HANDLERS = {
    "evolve": run_evolve,
    "photon-dist": run_photon_dist,
    "wigner-grid": run_wigner_grid,
    "qfunc-grid": run_qfunc_grid,
    "oscillator": run_oscillator,
    "quasienergy": run_quasienergy,
    "cat": run_cat,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasespace",
        description="Gaussian phase-space simulation, photon statistics and cat states",
    )
    parser.add_argument("--config", help="JSON scenario file carrying the command and options")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("evolve", help="evolve a Gaussian state under a quadratic Hamiltonian")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--invert", action="store_true",
                   help="apply the inverse of the computed propagator")
    p.add_argument("--out", required=True)
    p.add_argument("--propagator-out", dest="propagator_out")

    p = sub.add_parser("photon-dist", help="photon-number distribution of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--cutoff", required=True, help="per-mode cutoffs, e.g. '8' or '8,8'")
    p.add_argument("--hamiltonian", help="optional: evolve the state first")
    p.add_argument("--t", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("wigner-grid", help="Wigner function on a lattice")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", required=True, help="'pmin,pmax,qmin,qmax,n'")
    p.add_argument("--out", required=True)

    p = sub.add_parser("qfunc-grid", help="Husimi Q-function on a lattice")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", required=True, help="'remin,remax,immin,immax,n'")
    p.add_argument("--out", required=True)

    p = sub.add_parser("oscillator", help="parametric-oscillator trajectory table")
    p.add_argument("--profile", required=True)
    p.add_argument("--t-final", dest="t_final", type=float, required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--samples", type=int, help="rows in the CSV (default 101)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("quasienergy", help="Floquet stability and quasienergy")
    p.add_argument("--profile", required=True)
    p.add_argument("--period", type=float)
    p.add_argument("--out", required=True)

    p = sub.add_parser("cat", help="even/odd coherent-state artifacts")
    p.add_argument("--parity", choices=("even", "odd"), required=True)
    p.add_argument("--alpha", required=True, help="'re,im'")
    p.add_argument("--profile")
    p.add_argument("--t", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--emit", choices=("wavefunction", "wigner", "photon"))
    p.add_argument("--grid", help="'pmin,pmax,qmin,qmax,n' for --emit wigner")
    p.add_argument("--x", help="'xmin,xmax,n' for --emit wavefunction")
    p.add_argument("--cutoff", type=int, help="for --emit photon (default 20)")
    p.add_argument("--out", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            scenario = io.load_json(args.config)
            command = scenario.pop("command", None)
            if command not in _HANDLERS:
                raise ConfigInvalid(f"config must set command to one of {COMMANDS}")
            _HANDLERS[command](scenario)
        else:
            if args.command is None:
                parser.print_usage(sys.stderr)
                return 2
            opts = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
            _HANDLERS[args.command](opts)
    except ConfigInvalid as exc:
        print(f"ConfigInvalid: {exc}", file=sys.stderr)
        return 2
    except PhaseSpaceError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
