"""Multimode mixed Gaussian states and their phase-space functions.

A state is the Gaussian Wigner function

    W(Q) = det(M)^(-1/2) exp[-(1/2) (Q - <Q>) M^(-1) (Q - <Q>)],

normalized so that the integral of W over prod(dp_j dq_j / 2pi) is one.
Under that measure the vacuum value at the origin is 2 and phase-space
overlaps compute operator traces directly.  The Husimi Q-function of the
same state is parametrized by a complex symmetric matrix R and vector y;
the pair of maps between (M, <Q>) and (R, y) lives here as well.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidState,
    NonRealResult,
    SingularDispersion,
    SingularMatrix,
)
from .symplectic import PropagatorReal, SymplecticForm

_COND_LIMIT = 1e12
_UNCERTAINTY_SLACK = 1e-10


def _solve_checked(a: np.ndarray, rhs: np.ndarray, name: str, exc=SingularMatrix):
    """LU solve with a condition estimate; raises naming the failing inverse."""
    if not np.all(np.isfinite(a)) or np.linalg.cond(a) > _COND_LIMIT:
        raise exc(f"matrix {name} is singular at working precision")
    return np.linalg.solve(a, rhs)


class GaussianState:
    """Gaussian state of N modes: quadrature means and dispersion matrix.

    Attributes:
        n_modes: number of modes N.
        mean: (2N,) quadrature averages ordered (p_1..p_N, q_1..q_N).
        dispersion: (2N, 2N) real symmetric matrix of symmetrized second
            moments; row/column ordering matches `mean`.
    """

    def __init__(self, mean: np.ndarray, dispersion: np.ndarray):
        mean = np.array(mean, dtype=float)
        disp = np.array(dispersion, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0:
            raise DimensionMismatch(f"mean must be a 2N vector, got shape {mean.shape}")
        n = mean.size // 2
        if disp.shape != (2 * n, 2 * n):
            raise DimensionMismatch(
                f"dispersion must have shape ({2 * n}, {2 * n}), got {disp.shape}")
        asym = float(np.abs(disp - disp.T).max())
        if asym > 1e-12:
            raise InvalidState(f"dispersion not symmetric: max |M - M^T| = {asym:.3e}")
        disp = (disp + disp.T) / 2.0
        eigs = np.linalg.eigvalsh(disp)
        if eigs.min() <= 0:
            raise InvalidState(f"dispersion not positive definite (min eig {eigs.min():.3e})")
        sigma = SymplecticForm(n).sigma
        herm = disp + 0.5j * sigma
        umin = float(np.linalg.eigvalsh(herm).min())
        if umin < -_UNCERTAINTY_SLACK:
            raise InvalidState(
                f"uncertainty relation violated: min eig of M + (i/2)Sigma = {umin:.3e}")
        self.n_modes = n
        self.mean = mean
        self.dispersion = disp

    def __repr__(self) -> str:  # pragma: no cover
        return f"GaussianState(n_modes={self.n_modes})"


def vacuum(n_modes: int = 1) -> GaussianState:
    """Vacuum: zero means, dispersion I/2."""
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes) / 2.0)


def coherent(alpha) -> GaussianState:
    """Coherent state(s) with amplitudes alpha (scalar or length-N array).

    Means follow alpha = (q + ip)/sqrt(2): <p_j> = sqrt(2) Im alpha_j,
    <q_j> = sqrt(2) Re alpha_j; the dispersion is the vacuum one.
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=complex))
    mean = np.concatenate([math.sqrt(2.0) * a.imag, math.sqrt(2.0) * a.real])
    return GaussianState(mean, np.eye(2 * a.size) / 2.0)


def thermal(nbar, n_modes: int | None = None) -> GaussianState:
    """Thermal state with mean photon number nbar per mode."""
    nb = np.atleast_1d(np.asarray(nbar, dtype=float))
    if n_modes is not None and nb.size == 1:
        nb = np.full(n_modes, nb[0])
    diag = np.concatenate([nb + 0.5, nb + 0.5])
    return GaussianState(np.zeros(2 * nb.size), np.diag(diag))


def squeezed_vacuum(s: float) -> GaussianState:
    """Single-mode squeezed vacuum with variance ratio s: M = diag(s/2, 1/(2s))."""
    if s <= 0:
        raise InvalidState("squeezing ratio must be positive")
    return GaussianState(np.zeros(2), np.diag([s / 2.0, 1.0 / (2.0 * s)]))


def wigner(state: GaussianState, point: np.ndarray) -> np.ndarray:
    """Evaluate the Wigner function at one or many phase-space points.

    `point` has shape (..., 2N); a plain (2N,) vector yields a scalar.
    """
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1] != 2 * state.n_modes:
        raise DimensionMismatch(
            f"point must end in dimension {2 * state.n_modes}, got shape {pts.shape}")
    d = pts - state.mean
    minv = _solve_checked(
        state.dispersion, np.eye(2 * state.n_modes), "M", SingularDispersion)
    expo = -0.5 * np.einsum("...i,ij,...j->...", d, minv, d)
    det = np.linalg.det(state.dispersion)
    value = det**-0.5 * np.exp(expo)
    return value if value.ndim else float(value)


def evolve(state: GaussianState, prop: PropagatorReal) -> GaussianState:
    """Pull the state through a propagator.

    The output Wigner function at Q equals the input one at
    Lambda Q + Delta, i.e. dispersion Lambda^-1 M Lambda^-T and mean
    Lambda^-1 (<Q> - Delta).
    """
    if prop.n_modes != state.n_modes:
        raise DimensionMismatch(
            f"propagator acts on {prop.n_modes} modes, state has {state.n_modes}")
    lam_inv = np.linalg.solve(prop.lam, np.eye(2 * state.n_modes))
    disp = lam_inv @ state.dispersion @ lam_inv.T
    mean = lam_inv @ (state.mean - prop.delta)
    return GaussianState(mean, (disp + disp.T) / 2.0)


def mean_photon(state: GaussianState, j: int) -> float:
    """Mean photon number of mode j from quadrature means and dispersions."""
    n = state.n_modes
    if not 0 <= j < n:
        raise IndexOutOfRange(f"mode index {j} outside 0..{n - 1}")
    value = 0.5 * (state.dispersion[j, j] + state.dispersion[n + j, n + j] - 1.0)
    value += 0.5 * (state.mean[j] ** 2 + state.mean[n + j] ** 2)
    if -_UNCERTAINTY_SLACK <= value < 0.0:
        warnings.warn("mean photon number clamped to 0", RuntimeWarning, stacklevel=2)
        value = 0.0
    return float(value)


@dataclass(frozen=True)
class QFunctionParams:
    """Husimi-function parameters (R, y, P0) of a Gaussian state.

    R is complex symmetric (2N, 2N), y a complex (2N,) vector and p0 the
    vacuum probability.  Only states with I - 2M invertible possess a
    finite y; see `to_q_params`.
    """

    r_matrix: np.ndarray
    y: np.ndarray
    p0: float

    def __post_init__(self):
        r = np.asarray(self.r_matrix)
        if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] % 2 != 0:
            raise DimensionMismatch(f"R must be 2Nx2N, got {r.shape}")
        if float(np.abs(r - r.T).max()) > 1e-12:
            raise InvalidState("R must be symmetric")
        if np.asarray(self.y).shape != (r.shape[0],):
            raise DimensionMismatch("y must be a 2N vector matching R")
        if not 0.0 < self.p0 <= 1.0 + 1e-12:
            raise InvalidState(f"p0 must lie in (0, 1], got {self.p0}")

    @property
    def n_modes(self) -> int:
        return np.asarray(self.r_matrix).shape[0] // 2


def husimi_kernel(state: GaussianState) -> tuple[float, np.ndarray, np.ndarray]:
    """Exponent data (P0, R, v) of the Q-function with v = R y.

    Q(B) = P0 exp[-(1/2) B (R + swap) B + B v] for B = (beta, beta*).
    Unlike y itself, the product v = R y stays finite for every valid
    state (including coherent states, where I - 2M is singular), so the
    photon-statistics pipeline consumes this form.
    """
    n = state.n_modes
    form = SymplecticForm(n)
    eye = np.eye(2 * n)
    w = _solve_checked(2.0 * state.dispersion + eye, eye, "2M + I", SingularDispersion)
    r = form.u.T @ w @ ((eye - 2.0 * state.dispersion) @ form.u)
    r = (r + r.T) / 2.0
    v = 2.0 * form.u.T @ (w @ state.mean)
    p0 = float(
        np.linalg.det(state.dispersion + eye / 2.0) ** -0.5
        * math.exp(-float(state.mean @ w @ state.mean)))
    return p0, r, v


def q_function(state: GaussianState, beta) -> np.ndarray:
    """Husimi Q-function at coherent amplitudes beta, shape (..., N) or scalar.

    Normalized so the integral over prod(d^2 beta_j / pi) is one.
    """
    b = np.asarray(beta, dtype=complex)
    if state.n_modes == 1 and (b.ndim == 0 or b.shape[-1] != 1):
        b = b[..., None]
    if b.shape[-1] != state.n_modes:
        raise DimensionMismatch(
            f"beta must end in dimension {state.n_modes}, got shape {b.shape}")
    p0, r, v = husimi_kernel(state)
    big = np.concatenate([b, b.conj()], axis=-1)
    g = r + SymplecticForm(state.n_modes).swap
    quad = np.einsum("...i,ij,...j->...", big, g, big)
    lin = big @ v
    value = p0 * np.exp(-0.5 * quad + lin)
    if float(np.abs(value.imag).max()) > 1e-10 * max(1.0, float(np.abs(value.real).max())):
        raise NonRealResult("Q-function evaluation left an imaginary residue")
    out = np.clip(value.real, 0.0, None)
    return out if out.ndim else float(out)


def to_q_params(state: GaussianState) -> QFunctionParams:
    """Extract (R, y, P0) from a state.

    Zero-mean states take y = 0 without inverting anything; otherwise
    y = 2 u† (I - 2M)^-1 <Q>, which requires I - 2M to be invertible.
    """
    p0, r, _ = husimi_kernel(state)
    n = state.n_modes
    form = SymplecticForm(n)
    if not state.mean.any():
        y = np.zeros(2 * n, dtype=complex)
    else:
        inv_mean = _solve_checked(
            np.eye(2 * n) - 2.0 * state.dispersion, state.mean, "I - 2M")
        y = 2.0 * form.u.conj().T @ inv_mean
    return QFunctionParams(r, y, p0)


def from_q_params(params: QFunctionParams) -> GaussianState:
    """Rebuild the Wigner parametrization (M, <Q>) from (R, y)."""
    n = params.n_modes
    form = SymplecticForm(n)
    eye = np.eye(2 * n)
    g = np.asarray(params.r_matrix, dtype=complex) + form.swap
    g_inv = _solve_checked(g, eye.astype(complex), "R + swap")
    disp = form.u @ g_inv @ form.u.T - eye / 2.0
    mean = form.u @ ((eye - g_inv @ form.swap) @ np.asarray(params.y, dtype=complex))
    residue = max(float(np.abs(disp.imag).max()), float(np.abs(mean.imag).max()))
    if residue > 1e-10:
        raise NonRealResult(f"reconstruction left imaginary residue {residue:.3e}")
    return GaussianState(mean.real, (disp.real + disp.real.T) / 2.0)


def random_state(
    n_modes: int,
    rng: np.random.Generator,
    mean_scale: float = 1.5,
    mixedness: float = 0.5,
) -> GaussianState:
    """Random valid Gaussian state: squeezed-rotated pure part plus noise.

    The dispersion is (1/2) S S^T + A A^T with S random symplectic, which
    satisfies the uncertainty constraint by construction.
    """
    from .symplectic import random_symplectic

    dim = 2 * n_modes
    s = random_symplectic(n_modes, rng, scale=0.3)
    disp = 0.5 * s @ s.T
    if mixedness > 0:
        a = rng.normal(size=(dim, dim)) * math.sqrt(mixedness / dim)
        disp = disp + a @ a.T
    mean = rng.normal(size=dim) * mean_scale
    return GaussianState(mean, (disp + disp.T) / 2.0)
