"""Linear integrals of motion for N-mode quadratic Hamiltonians.

The Hamiltonian is H = (1/2) Q.B(t).Q + C(t).Q in the quadrature ordering
Q = (p_1..p_N, q_1..q_N), hbar = 1.  Its 2N linear integrals of motion
Q0(t) = Lambda(t) Q + Delta(t) are obtained by integrating

    dLambda/dt = Lambda Sigma B(t),   Lambda(0) = I,
    dDelta/dt  = Lambda Sigma C(t),   Delta(0)  = 0,

with the antisymmetric form Sigma = [[0, I], [-I, 0]].  The same system in
the ladder ordering A = (a_1..a_N, a_1†..a_N†) has integrals of motion
A0(t) = M(t) A + N(t) governed by the complex form sigma = [[0, iI], [-iI, 0]].
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonRealResult,
    NonSymmetricB,
    SymplecticDriftExceeded,
)

DEFAULT_SYMPLECTIC_TOL = 1e-9

#: samples per unit of (time x matrix norm) used by the default step heuristic
_STEPS_PER_UNIT = 200


def symplectic_tolerance(tol: float | None = None) -> float:
    """Resolve the symplectic-defect tolerance.

    Explicit argument wins, then the PHASESPACE_TOL environment variable,
    then the library default of 1e-9.
    """
    if tol is not None:
        return float(tol)
    env = os.environ.get("PHASESPACE_TOL")
    if env is not None:
        return float(env)
    return DEFAULT_SYMPLECTIC_TOL


class SymplecticForm:
    """Fixed structure matrices for N modes in the (p, q) ordering.

    Attributes:
        sigma: real antisymmetric form [[0, I], [-I, 0]], shape (2N, 2N).
        sigma_c: complex form [[0, iI], [-iI, 0]] governing the ladder
            representation.
        swap: mode-swap matrix [[0, I], [I, 0]].
        u: unitary with Q = u A, i.e. maps ladder ordering (a, a†) to
            quadrature ordering (p, q); u = [[-iI, iI], [I, I]]/sqrt(2).
    """

    def __init__(self, n_modes: int):
        if n_modes < 1:
            raise DimensionMismatch(f"n_modes must be >= 1, got {n_modes}")
        self.n_modes = int(n_modes)
        eye = np.eye(n_modes)
        zero = np.zeros((n_modes, n_modes))
        self.sigma = np.block([[zero, eye], [-eye, zero]])
        self.sigma_c = np.block([[zero, 1j * eye], [-1j * eye, zero]])
        self.swap = np.block([[zero, eye], [eye, zero]])
        self.u = np.block([[-1j * eye, 1j * eye], [eye, eye]]) / math.sqrt(2.0)


def _check_square_even(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2 != 0:
        raise DimensionMismatch(f"expected square 2Nx2N matrix, got shape {a.shape}")
    return a.shape[0] // 2


def symplectic_defect(lam: np.ndarray) -> float:
    """Max-entry deviation of Lambda Sigma Lambda^T from Sigma."""
    n = _check_square_even(lam)
    sigma = SymplecticForm(n).sigma
    return float(np.abs(lam @ sigma @ lam.T - sigma).max())


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a Taylor kernel.

    The argument is scaled until its infinity norm is below 1/2, a degree-16
    Taylor sum is evaluated, and the result is repeatedly squared.
    """
    a = np.asarray(a)
    norm = np.linalg.norm(a, np.inf)
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
        a = a / (2.0**squarings)
    out = np.eye(a.shape[0], dtype=a.dtype)
    term = out
    for k in range(1, 17):
        term = term @ a / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Time-dependent quadratic Hamiltonian H = (1/2) Q B(t) Q + C(t) Q.

    b_of_t returns a real symmetric (2N, 2N) matrix, c_of_t a real (2N,)
    vector.  `time_independent` marks Hamiltonians whose coefficients do not
    depend on t, enabling the matrix-exponential fast path.
    """

    n_modes: int
    b_of_t: Callable[[float], np.ndarray]
    c_of_t: Callable[[float], np.ndarray]
    time_independent: bool = False

    @classmethod
    def constant(cls, b: np.ndarray, c: np.ndarray | None = None) -> "QuadraticHamiltonian":
        b = np.array(b, dtype=float)
        n = _check_square_even(b)
        _require_symmetric(b, 0.0)
        if c is None:
            c = np.zeros(2 * n)
        c = np.array(c, dtype=float)
        if c.shape != (2 * n,):
            raise DimensionMismatch(f"C must have shape ({2 * n},), got {c.shape}")
        return cls(n, lambda t: b, lambda t: c, time_independent=True)

    @classmethod
    def from_callables(
        cls,
        n_modes: int,
        b_of_t: Callable[[float], np.ndarray],
        c_of_t: Callable[[float], np.ndarray] | None = None,
    ) -> "QuadraticHamiltonian":
        if c_of_t is None:
            zero = np.zeros(2 * n_modes)
            c_of_t = lambda t: zero  # noqa: E731
        h = cls(int(n_modes), b_of_t, c_of_t, time_independent=False)
        _require_symmetric(np.asarray(b_of_t(0.0), dtype=float), 1e-12)
        return h


def _require_symmetric(b: np.ndarray, tol: float = 1e-12) -> None:
    asym = float(np.abs(b - b.T).max())
    if asym > tol:
        raise NonSymmetricB(f"B is not symmetric: max |B - B^T| = {asym:.3e}")


class PropagatorReal:
    """Integrals-of-motion data (Lambda, Delta) at a fixed time.

    Construction verifies the symplectic identity Lambda Sigma Lambda^T =
    Sigma to within `tol` and fails loudly instead of renormalizing.
    """

    def __init__(self, lam: np.ndarray, delta: np.ndarray, time: float, tol: float | None = None):
        lam = np.array(lam, dtype=float)
        n = _check_square_even(lam)
        delta = np.array(delta, dtype=float)
        if delta.shape != (2 * n,):
            raise DimensionMismatch(f"Delta must have shape ({2 * n},), got {delta.shape}")
        tol = symplectic_tolerance(tol)
        defect = symplectic_defect(lam)
        if defect > tol:
            raise SymplecticDriftExceeded(
                f"symplectic defect {defect:.3e} exceeds tolerance {tol:.1e}")
        self.lam = lam
        self.delta = delta
        self.time = float(time)
        self.n_modes = n

    def inverse(self) -> "PropagatorReal":
        """Propagator undoing this one: Lambda' = Lambda^-1, Delta' = -Lambda^-1 Delta."""
        lam_inv = np.linalg.solve(self.lam, np.eye(2 * self.n_modes))
        return PropagatorReal(lam_inv, -lam_inv @ self.delta, -self.time)


class PropagatorComplex:
    """Ladder-ordering integrals of motion (M, N) at a fixed time."""

    def __init__(self, m: np.ndarray, n_vec: np.ndarray, time: float, tol: float | None = None):
        m = np.array(m, dtype=complex)
        n = _check_square_even(m)
        n_vec = np.array(n_vec, dtype=complex)
        if n_vec.shape != (2 * n,):
            raise DimensionMismatch(f"N must have shape ({2 * n},), got {n_vec.shape}")
        tol = symplectic_tolerance(tol)
        sigma_c = SymplecticForm(n).sigma_c
        defect = float(np.abs(m @ sigma_c @ m.T - sigma_c).max())
        if defect > tol:
            raise SymplecticDriftExceeded(
                f"complex symplectic defect {defect:.3e} exceeds tolerance {tol:.1e}")
        self.m = m
        self.n_vec = n_vec
        self.time = float(time)
        self.n_modes = n


def compose(first: PropagatorReal, second: PropagatorReal) -> PropagatorReal:
    """Combine the leg 0->t1 with the leg t1->t1+t2 into one propagator."""
    if first.n_modes != second.n_modes:
        raise DimensionMismatch("propagators act on different mode counts")
    lam = first.lam @ second.lam
    delta = first.lam @ second.delta + first.delta
    return PropagatorReal(lam, delta, first.time + second.time)


def default_steps(h: QuadraticHamiltonian, t_final: float) -> int:
    """Step-count heuristic: 200 per unit of t x max row-sum norm of B."""
    samples = np.linspace(0.0, t_final, 33)
    norm = max(float(np.abs(np.asarray(h.b_of_t(s))).sum(axis=1).max()) for s in samples)
    return max(100, int(math.ceil(_STEPS_PER_UNIT * t_final * max(1.0, norm))))


def _rk4_linear(
    gen: Callable[[float], np.ndarray],
    dim: int,
    t_final: float,
    n_steps: int,
    dtype,
) -> np.ndarray:
    """Integrate Y' = Y G(t) with Y(0) = [I | 0] of shape (dim, dim+1).

    The generator G packs the matrix and the drive into one (dim+1, dim+1)
    block so Lambda and Delta advance in a single matmul per stage.
    """
    y = np.zeros((dim, dim + 1), dtype=dtype)
    y[:, :dim] = np.eye(dim)
    if n_steps == 0:
        return y
    h = t_final / n_steps
    t = 0.0
    for _ in range(n_steps):
        g1 = gen(t)
        g2 = gen(t + h / 2)
        g4 = gen(t + h)
        k1 = y @ g1
        k2 = (y + (h / 2) * k1) @ g2
        k3 = (y + (h / 2) * k2) @ g2
        k4 = (y + h * k3) @ g4
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


def evolve_real(
    h: QuadraticHamiltonian,
    t_final: float,
    n_steps: int | None = None,
    tol: float | None = None,
) -> PropagatorReal:
    """Integrate the real integrals of motion up to t_final with fixed-step RK4."""
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    dim = 2 * h.n_modes
    if t_final == 0.0:
        return PropagatorReal(np.eye(dim), np.zeros(dim), 0.0, tol)
    if n_steps is None:
        n_steps = default_steps(h, t_final)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    sigma = SymplecticForm(h.n_modes).sigma

    def gen(t: float) -> np.ndarray:
        b = np.asarray(h.b_of_t(t), dtype=float)
        _require_symmetric(b)
        g = np.zeros((dim + 1, dim + 1))
        g[:dim, :dim] = sigma @ b
        g[:dim, dim] = sigma @ np.asarray(h.c_of_t(t), dtype=float)
        return g

    y = _rk4_linear(gen, dim, t_final, n_steps, float)
    return PropagatorReal(y[:, :dim], y[:, dim], t_final, tol)


def propagator_const(
    b: np.ndarray,
    c: np.ndarray | None = None,
    t: float = 0.0,
    tol: float | None = None,
) -> PropagatorReal:
    """Closed-form propagator for a time-independent Hamiltonian.

    Lambda = exp(Sigma B t); Delta = integral of exp(Sigma B tau) Sigma C,
    evaluated exactly through the augmented block exponential
    exp(t [[Sigma B, Sigma C], [0, 0]]) whether or not Sigma B is invertible.
    """
    b = np.array(b, dtype=float)
    n = _check_square_even(b)
    _require_symmetric(b)
    dim = 2 * n
    if c is None:
        c = np.zeros(dim)
    c = np.array(c, dtype=float)
    sigma = SymplecticForm(n).sigma
    aug = np.zeros((dim + 1, dim + 1))
    aug[:dim, :dim] = sigma @ b
    aug[:dim, dim] = sigma @ c
    e = matrix_exp(aug * t)
    return PropagatorReal(e[:dim, :dim], e[:dim, dim], t, tol)


def ladder_coefficients(h: QuadraticHamiltonian, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients (D, E) of H = (1/2) A D A + E A in the ladder ordering.

    With Q = u A these follow from the quadrature coefficients as
    D = u^T B u and E = u^T C.
    """
    u = SymplecticForm(h.n_modes).u
    b = np.asarray(h.b_of_t(t), dtype=float)
    _require_symmetric(b)
    return u.T @ b @ u, u.T @ np.asarray(h.c_of_t(t), dtype=float)


def evolve_complex(
    h: QuadraticHamiltonian,
    t_final: float,
    n_steps: int | None = None,
    tol: float | None = None,
) -> PropagatorComplex:
    """Integrate the ladder-ordering integrals of motion with fixed-step RK4."""
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    dim = 2 * h.n_modes
    if t_final == 0.0:
        return PropagatorComplex(np.eye(dim, dtype=complex), np.zeros(dim, dtype=complex), 0.0, tol)
    if n_steps is None:
        n_steps = default_steps(h, t_final)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    sigma_c = SymplecticForm(h.n_modes).sigma_c

    def gen(t: float) -> np.ndarray:
        d, e = ladder_coefficients(h, t)
        g = np.zeros((dim + 1, dim + 1), dtype=complex)
        g[:dim, :dim] = sigma_c @ d
        g[:dim, dim] = sigma_c @ e
        return g

    y = _rk4_linear(gen, dim, t_final, n_steps, complex)
    return PropagatorComplex(y[:, :dim], y[:, dim], t_final, tol)


def real_to_complex(p: PropagatorReal) -> PropagatorComplex:
    """Convert (Lambda, Delta) to (M, N) via M = u† Lambda u, N = u† Delta."""
    u = SymplecticForm(p.n_modes).u
    return PropagatorComplex(u.conj().T @ p.lam @ u, u.conj().T @ p.delta, p.time)


def complex_to_real(p: PropagatorComplex, imag_tol: float = 1e-10) -> PropagatorReal:
    """Convert (M, N) back to (Lambda, Delta) via Lambda = u M u†, Delta = u N."""
    u = SymplecticForm(p.n_modes).u
    lam = u @ p.m @ u.conj().T
    delta = u @ p.n_vec
    residue = max(float(np.abs(lam.imag).max()), float(np.abs(delta.imag).max()))
    if residue > imag_tol:
        raise NonRealResult(f"conversion left imaginary residue {residue:.3e}")
    return PropagatorReal(lam.real, delta.real, p.time)


def random_symplectic(
    n_modes: int, rng: np.random.Generator, scale: float = 1.0
) -> np.ndarray:
    """Random symplectic matrix exp(Sigma B) for symmetric B with O(scale) entries."""
    dim = 2 * n_modes
    g = rng.normal(size=(dim, dim)) * scale
    b = (g + g.T) / 2
    sigma = SymplecticForm(n_modes).sigma
    return matrix_exp(sigma @ b)
