"""Shared builders for randomized property tests (seeded, deterministic)."""

import numpy as np
import pytest

from phasespace import GaussianState, QuadraticHamiltonian
from phasespace.symplectic import SymplecticForm, matrix_exp


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_symmetric(rng, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim))
    return scale * (g + g.T) / 2.0


def random_posdef(rng, dim: int, spectral_norm: float) -> np.ndarray:
    g = rng.normal(size=(dim, dim))
    b = g @ g.T
    return b * (spectral_norm / np.linalg.norm(b, 2))


def random_stable_hamiltonian(rng, n_modes: int, norm: float, with_drive=True):
    """Time-independent Hamiltonian with positive-definite B (bounded flow)."""
    b = random_posdef(rng, 2 * n_modes, norm)
    c = rng.normal(size=2 * n_modes) if with_drive else None
    return QuadraticHamiltonian.constant(b, c)


def random_symplectic_matrix(rng, n_modes: int, scale: float = 0.5) -> np.ndarray:
    b = random_symmetric(rng, 2 * n_modes, scale)
    return matrix_exp(SymplecticForm(n_modes).sigma @ b)


def random_gaussian_state(rng, n_modes: int, mean_scale=1.5, mixed=0.5) -> GaussianState:
    s = random_symplectic_matrix(rng, n_modes, 0.3)
    disp = 0.5 * s @ s.T
    if mixed > 0:
        a = rng.normal(size=(2 * n_modes, 2 * n_modes)) * np.sqrt(mixed / (2 * n_modes))
        disp = disp + a @ a.T
    mean = rng.normal(size=2 * n_modes) * mean_scale
    return GaussianState(mean, (disp + disp.T) / 2.0)


def random_single_mode_state(rng, mean_bound=2.0, eig_range=(0.5, 4.0)) -> GaussianState:
    """Random one-mode state with dispersion eigenvalues in eig_range.

    Any symmetric 2x2 matrix with both eigenvalues >= 1/2 satisfies the
    uncertainty bound det M >= 1/4.
    """
    theta = rng.uniform(0.0, 2.0 * np.pi)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    disp = rot @ np.diag(rng.uniform(*eig_range, size=2)) @ rot.T
    mean = rng.uniform(-1.0, 1.0, size=2)
    norm = np.linalg.norm(mean)
    if norm > 0:
        mean *= rng.uniform(0.0, mean_bound) / norm
    return GaussianState(mean, (disp + disp.T) / 2.0)
