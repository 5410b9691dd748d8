"""Deterministic JSON/CSV serialization for states, Hamiltonians and profiles.

Every float is written as 17-significant-digit scientific notation so that
repeated runs produce byte-identical artifacts; no timestamps enter data
files.  Dispersion matrices travel as the row-major upper triangle.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigInvalid
from .oscillator import FrequencyProfile
from .states import GaussianState
from .symplectic import PropagatorReal, QuadraticHamiltonian


def fmt(x: float) -> str:
    """Fixed 17-significant-digit scientific rendering of one float."""
    return f"{float(x):.16e}"


def _json_render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_json_render(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat:
            return "[" + ", ".join(_json_render(v) for v in obj) + "]"
        items = ",\n".join(f"{pad}  {_json_render(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return "null"
        return fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise ConfigInvalid(f"cannot serialize value of type {type(obj).__name__}")


def dump_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(_json_render(obj) + "\n")


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read JSON from {path}: {exc}") from exc


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            str(v) if isinstance(v, (int, np.integer)) else fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------- states

def state_to_dict(state: GaussianState) -> dict:
    n = state.n_modes
    upper = [state.dispersion[i, j] for i in range(2 * n) for j in range(i, 2 * n)]
    return {"n_modes": n, "mean": list(state.mean), "dispersion_upper": upper}


def state_from_dict(data: dict) -> GaussianState:
    try:
        n = int(data["n_modes"])
        mean = np.asarray(data["mean"], dtype=float)
        upper = list(data["dispersion_upper"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"invalid state record: {exc}") from exc
    dim = 2 * n
    if mean.shape != (dim,):
        raise ConfigInvalid(f"mean must have {dim} entries, got {mean.shape}")
    if len(upper) != dim * (dim + 1) // 2:
        raise ConfigInvalid(
            f"dispersion_upper must have {dim * (dim + 1) // 2} entries, got {len(upper)}")
    disp = np.zeros((dim, dim))
    it = iter(upper)
    for i in range(dim):
        for j in range(i, dim):
            disp[i, j] = disp[j, i] = float(next(it))
    return GaussianState(mean, disp)


def load_state(path: str | Path) -> GaussianState:
    return state_from_dict(load_json(path))


def dump_state(state: GaussianState, path: str | Path) -> None:
    dump_json(state_to_dict(state), path)


# ----------------------------------------------------------- propagators

def propagator_to_dict(prop: PropagatorReal) -> dict:
    return {
        "n_modes": prop.n_modes,
        "time": prop.time,
        "lambda": [list(row) for row in prop.lam],
        "delta": list(prop.delta),
    }


def propagator_from_dict(data: dict) -> PropagatorReal:
    try:
        return PropagatorReal(
            np.asarray(data["lambda"], dtype=float),
            np.asarray(data["delta"], dtype=float),
            float(data["time"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"invalid propagator record: {exc}") from exc


# ---------------------------------------------------------- hamiltonians

def _matrix(data, dim: int, what: str) -> np.ndarray:
    m = np.asarray(data, dtype=float)
    if m.shape != (dim, dim):
        raise ConfigInvalid(f"{what} must be {dim}x{dim}, got shape {m.shape}")
    return m


def hamiltonian_from_dict(data: dict) -> QuadraticHamiltonian:
    """Build a Hamiltonian from {"n_modes", "B": {...}, "C": [...]}.

    B kinds: constant {"matrix"}, cosine_modulated {"base", "modulation",
    "frequency"}, piecewise {"times", "matrices"}.  C is a constant vector
    (defaults to zero).
    """
    try:
        n = int(data["n_modes"])
        bspec = data["B"]
        kind = bspec["kind"]
    except (KeyError, TypeError) as exc:
        raise ConfigInvalid(f"invalid Hamiltonian record: {exc}") from exc
    dim = 2 * n
    c = np.asarray(data.get("C", np.zeros(dim)), dtype=float)
    if c.shape != (dim,):
        raise ConfigInvalid(f"C must have {dim} entries")
    if kind == "constant":
        b = _matrix(bspec.get("matrix"), dim, "B.matrix")
        return QuadraticHamiltonian.constant(b, c)
    if kind == "cosine_modulated":
        base = _matrix(bspec.get("base"), dim, "B.base")
        mod = _matrix(bspec.get("modulation"), dim, "B.modulation")
        try:
            freq = float(bspec["frequency"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid("cosine_modulated B needs a numeric frequency") from exc
        return QuadraticHamiltonian.from_callables(
            n, lambda t: base + math.cos(freq * t) * mod, lambda t: c)
    if kind == "piecewise":
        try:
            times = [float(t) for t in bspec["times"]]
            mats = [_matrix(m, dim, "B.matrices[]") for m in bspec["matrices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid(f"invalid piecewise B: {exc}") from exc
        if len(mats) != len(times) + 1:
            raise ConfigInvalid("piecewise B needs len(matrices) == len(times) + 1")

        def b_of_t(t: float) -> np.ndarray:
            for bound, mat in zip(times, mats):
                if t < bound:
                    return mat
            return mats[-1]

        return QuadraticHamiltonian.from_callables(n, b_of_t, lambda t: c)
    raise ConfigInvalid(f"unknown B kind {kind!r}")


def load_hamiltonian(path: str | Path) -> QuadraticHamiltonian:
    return hamiltonian_from_dict(load_json(path))


# -------------------------------------------------------------- profiles

def profile_from_dict(data: dict) -> FrequencyProfile:
    try:
        kind = data["kind"]
    except (KeyError, TypeError) as exc:
        raise ConfigInvalid(f"invalid profile record: {exc}") from exc
    try:
        if kind == "constant":
            return FrequencyProfile.constant(float(data["omega_sq"]))
        if kind == "free":
            return FrequencyProfile.free()
        if kind == "repulsive":
            return FrequencyProfile.repulsive()
        if kind == "cosine_modulated":
            return FrequencyProfile.cosine_modulated(
                float(data["omega0_sq"]), float(data["depth"]), float(data["mod_frequency"]))
        if kind == "piecewise":
            return FrequencyProfile.piecewise_constant(data["times"], data["values"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"invalid {kind!r} profile: {exc}") from exc
    raise ConfigInvalid(f"unknown profile kind {kind!r}")


def profile_to_dict(profile: FrequencyProfile) -> dict:
    return {"kind": profile.kind, **profile.params}


def load_profile(path: str | Path) -> FrequencyProfile:
    return profile_from_dict(load_json(path))
