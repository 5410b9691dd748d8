"""Photon-number statistics of Gaussian states.

The distribution is P_n = P0 * H_(n,n)(y) / n! where H is the multivariable
Hermite polynomial attached to the Husimi matrix R, defined through the
generating function

    exp(-(1/2) t R t + t R y) = sum_m H_m(y) t^m / m!.

The lattice recurrence consumes the always-finite product v = R y, so
coherent states (singular I - 2M) follow the identical code path.  A
phase-space quadrature oracle and Fock-basis Wigner functions provide the
independent ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetricR,
    DegreeTooLarge,
    DimensionMismatch,
    GridTooCoarse,
    IndexOutOfRange,
    NegativeProbability,
)
from .states import GaussianState, husimi_kernel, mean_photon, wigner

MAX_ENTRY = 60
MAX_TOTAL_DEGREE = 128
_CLAMP = 1e-10


def validate_multi_index(n: Sequence[int]) -> tuple[int, ...]:
    """Check a photon multi-index (nonnegative integers) and return it as a tuple."""
    idx = tuple(int(k) for k in n)
    if any(k < 0 for k in idx):
        raise IndexOutOfRange(f"multi-index entries must be nonnegative integers: {n}")
    if any(k > MAX_ENTRY for k in idx):
        raise IndexOutOfRange(f"multi-index entries capped at {MAX_ENTRY}: {n}")
    return idx


def multi_factorial(n: Sequence[int]) -> int:
    """n! = prod over modes of n_j!, exact integer arithmetic."""
    out = 1
    for k in validate_multi_index(n):
        out *= math.factorial(k)
    return out


def _hermite_lattice(r: np.ndarray, v: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Fill H_m over the whole box `shape` by the lattice recurrence.

    H_(m+e_j) = v_j H_m - sum_k R_jk m_k H_(m-e_k), with H_0 = 1 and
    v = R y the linear coefficient of the generating function.  The table
    is per-call state; nothing is shared between invocations.
    """
    h = np.zeros(shape, dtype=complex)
    h[(0,) * len(shape)] = 1.0
    dims = len(shape)
    for m in np.ndindex(*shape):
        if not any(m):
            continue
        j = next(i for i, k in enumerate(m) if k > 0)
        base = list(m)
        base[j] -= 1
        value = v[j] * h[tuple(base)]
        for k in range(dims):
            if base[k] > 0:
                lower = list(base)
                lower[k] -= 1
                value -= r[j, k] * base[k] * h[tuple(lower)]
        h[m] = value
    return h


def hermite_multivar(r: np.ndarray, y: np.ndarray, n: Sequence[int]) -> complex:
    """Multivariable Hermite polynomial H_n(y) for a symmetric matrix r.

    Dimension is generic: r is (d, d), y is (d,), n a length-d multi-index.
    """
    r = np.asarray(r, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DimensionMismatch(f"R must be square, got {r.shape}")
    if float(np.abs(r - r.T).max()) > 1e-12:
        raise AsymmetricR("Hermite coefficient matrix must be symmetric")
    idx = tuple(int(k) for k in n)
    if len(idx) != r.shape[0] or any(k < 0 for k in idx):
        raise DimensionMismatch(f"multi-index {n} incompatible with R of shape {r.shape}")
    if sum(idx) > MAX_TOTAL_DEGREE:
        raise DegreeTooLarge(f"total degree {sum(idx)} exceeds {MAX_TOTAL_DEGREE}")
    y = np.asarray(y, dtype=complex)
    if y.shape != (r.shape[0],):
        raise DimensionMismatch(f"y must have shape ({r.shape[0]},), got {y.shape}")
    lattice = _hermite_lattice(r, r @ y, tuple(k + 1 for k in idx))
    return complex(lattice[idx])


def _clamped_prob(raw: float) -> tuple[float, bool]:
    if raw < -_CLAMP:
        raise NegativeProbability(
            f"photon probability {raw:.3e} below the clamp window; convention bug")
    if raw < 0.0:
        return 0.0, True
    return float(raw), False


def photon_prob(state: GaussianState, n: Sequence[int]) -> float:
    """Probability of detecting the photon multi-index n.

    Evolved states use the identical code path: evolve the state first,
    then call this on the result (the linear transform of photon
    statistics).
    """
    idx = validate_multi_index(n)
    if len(idx) != state.n_modes:
        raise DimensionMismatch(
            f"multi-index length {len(idx)} does not match {state.n_modes} modes")
    doubled = idx + idx
    if sum(doubled) > MAX_TOTAL_DEGREE:
        raise DegreeTooLarge(f"doubled multi-index degree {sum(doubled)} exceeds cap")
    p0, r, v = husimi_kernel(state)
    lattice = _hermite_lattice(r, v, tuple(k + 1 for k in doubled))
    raw = (p0 * lattice[doubled] / multi_factorial(idx)).real
    value, _ = _clamped_prob(raw)
    return min(value, 1.0)


@dataclass
class PhotonDistribution:
    """Truncated photon-number table with bookkeeping.

    probs is an ndarray of shape cutoff+1 per mode; mass the included
    probability; mode_means the per-mode averages implied by the table;
    n_clamped counts tiny negatives that were clamped to zero.
    """

    cutoff: tuple[int, ...]
    probs: np.ndarray
    mass: float
    mode_means: np.ndarray
    n_clamped: int = 0

    def prob(self, n: Sequence[int]) -> float:
        return float(self.probs[tuple(int(k) for k in n)])


def _table_stats(probs: np.ndarray) -> tuple[float, np.ndarray]:
    mass = float(probs.sum())
    means = np.empty(probs.ndim)
    for axis in range(probs.ndim):
        counts = np.arange(probs.shape[axis], dtype=float)
        shape = [1] * probs.ndim
        shape[axis] = -1
        means[axis] = float((probs * counts.reshape(shape)).sum())
    return mass, means


def photon_distribution(state: GaussianState, cutoff: Sequence[int] | int) -> PhotonDistribution:
    """Photon-number table for all multi-indices up to `cutoff` per mode.

    One lattice pass covers the whole box; every entry is the same value
    photon_prob would return.
    """
    if isinstance(cutoff, (int, np.integer)):
        cutoff = (int(cutoff),) * state.n_modes
    cut = validate_multi_index(cutoff)
    if len(cut) != state.n_modes:
        raise DimensionMismatch(
            f"cutoff length {len(cut)} does not match {state.n_modes} modes")
    if 2 * sum(cut) > MAX_TOTAL_DEGREE and state.n_modes > 1:
        raise DegreeTooLarge(f"cutoff {cut} implies degree {2 * sum(cut)} beyond cap")
    p0, r, v = husimi_kernel(state)
    lattice = _hermite_lattice(r, v, tuple(k + 1 for k in cut + cut))
    probs = np.empty(tuple(k + 1 for k in cut))
    clamped = 0
    for idx in np.ndindex(*probs.shape):
        raw = (p0 * lattice[idx + idx] / multi_factorial(idx)).real
        value, was_clamped = _clamped_prob(raw)
        clamped += was_clamped
        probs[idx] = value
    mass, means = _table_stats(probs)
    return PhotonDistribution(cut, probs, mass, means, clamped)


def laguerre(n: int, alpha: int, x) -> np.ndarray:
    """Generalized Laguerre polynomial L_n^alpha by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def wigner_fock(m: int, n: int, p, q):
    """Wigner function of the one-mode Fock operator |m><n|.

    For m >= n:
        W_mn = 2^(m-n+1) (-1)^n sqrt(n!/m!) ((q - ip)/sqrt(2))^(m-n)
               exp(-(p^2+q^2)) L_n^(m-n)(2 (q^2+p^2));
    the m < n case follows from conjugate symmetry W_mn = W_nm*.  Diagonal
    values are real and (1/2pi) integral of W_mm W_nn dp dq = delta_mn.
    """
    m, n = int(m), int(n)
    if m < 0 or n < 0 or m > MAX_ENTRY or n > MAX_ENTRY:
        raise IndexOutOfRange(f"Fock indices must lie in 0..{MAX_ENTRY}, got ({m}, {n})")
    if m < n:
        return np.conj(wigner_fock(n, m, p, q))
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    r2 = p**2 + q**2
    ratio = 1.0  # n!/m! as a running product, finite for m up to the cap
    for k in range(n + 1, m + 1):
        ratio /= k
    value = (
        2.0 ** (m - n + 1)
        * (-1.0) ** n
        * math.sqrt(ratio)
        * ((q - 1j * p) / math.sqrt(2.0)) ** (m - n)
        * np.exp(-r2)
        * laguerre(n, m - n, 2.0 * r2)
    )
    return value if np.ndim(value) else complex(value)


def _axis_grid(state: GaussianState, n_j: int, axis: int, points: int) -> np.ndarray:
    """Axis grid wide enough for both the state Gaussian and the Fock rings."""
    center = float(state.mean[axis])
    half = (6.0 + 2.0 * math.sqrt(n_j)) * max(1.0, math.sqrt(state.dispersion[axis, axis]))
    half += abs(center)  # keep the origin-centered Fock function covered
    return np.linspace(center - half, center + half, points)


def _trap_weights(npts: int) -> np.ndarray:
    w = np.ones(npts)
    w[0] = w[-1] = 0.5
    return w


def _oracle_integral(state: GaussianState, idx: tuple[int, ...], npts: int) -> float:
    nm = state.n_modes
    axes = [_axis_grid(state, idx[j % nm], j, npts) for j in range(2 * nm)]
    steps = [g[1] - g[0] for g in axes]
    scale = float(np.prod(steps)) / (2.0 * math.pi) ** nm
    if nm == 1:
        pg, qg = np.meshgrid(axes[0], axes[1], indexing="ij")
        wr = wigner(state, np.stack([pg, qg], axis=-1))
        wf = wigner_fock(idx[0], idx[0], pg, qg).real
        w2 = np.outer(_trap_weights(npts), _trap_weights(npts))
        return float((wr * wf * w2).sum() * scale)
    # two modes: chunk over the p_1 axis to bound memory
    p1, p2, q1, q2 = axes
    wf1 = wigner_fock(idx[0], idx[0], p1[:, None], q1[None, :]).real  # (p1, q1)
    wf2 = wigner_fock(idx[1], idx[1], p2[:, None], q2[None, :]).real  # (p2, q2)
    w = _trap_weights(npts)
    total = 0.0
    chunk = max(1, 3_000_000 // npts**3)
    for a0 in range(0, npts, chunk):
        a1 = min(a0 + chunk, npts)
        shape = (a1 - a0, npts, npts, npts)
        pts = np.empty(shape + (4,))
        pts[..., 0] = p1[a0:a1, None, None, None]
        pts[..., 1] = p2[None, :, None, None]
        pts[..., 2] = q1[None, None, :, None]
        pts[..., 3] = q2[None, None, None, :]
        wr = wigner(state, pts)
        wr *= wf1[a0:a1][:, None, :, None]
        wr *= wf2[None, :, None, :]
        wr *= (w[a0:a1, None, None, None] * w[None, :, None, None]
               * w[None, None, :, None] * w[None, None, None, :])
        total += float(wr.sum())
    return total * scale


def photon_prob_oracle(
    state: GaussianState,
    n: Sequence[int],
    points: int | None = None,
    check_tol: float = 1e-6,
) -> float:
    """Brute-force P_n as the phase-space overlap of W with Fock Wigner functions.

    Tensor-product trapezoid quadrature over one or two modes with a
    grid-halving self-check; desk-scale ground truth, not a fast path.
    """
    idx = validate_multi_index(n)
    if len(idx) != state.n_modes:
        raise DimensionMismatch(
            f"multi-index length {len(idx)} does not match {state.n_modes} modes")
    if state.n_modes > 2:
        raise DimensionMismatch("oracle quadrature supports at most 2 modes")
    if points is None:
        points = 321 if state.n_modes == 1 else 81
    if points % 2 == 0:
        points += 1  # keep the half grid a strict subset
    full = _oracle_integral(state, idx, points)
    half = _oracle_integral(state, idx, points // 2 + 1)
    if abs(full - half) > check_tol:
        raise GridTooCoarse(
            f"quadrature self-check {abs(full - half):.3e} above {check_tol:.1e}")
    return full


def distribution_mean_consistency(state: GaussianState, dist: PhotonDistribution) -> float:
    """Worst per-mode gap between the table mean and the moment formula."""
    gaps = [abs(dist.mode_means[j] - mean_photon(state, j)) for j in range(state.n_modes)]
    return max(gaps)
