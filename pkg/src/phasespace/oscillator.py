"""Parametric oscillator: classical trajectory, packet states, Floquet analysis.

Everything is driven by the complex solution of

    eps'' + omega^2(t) eps = 0,    eps(0) = 1,  eps'(0) = i,

whose Wronskian eps eps'* - eps* eps' = -2i encodes the unit commutator of
the time-dependent lowering invariant A = (i/sqrt 2)(eps p - eps' x).
Coherent packets, squeezed number states, quadrature variances and the
monodromy-based quasienergy all evaluate from (eps, eps').
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BranchTrackingLost,
    GridTooCoarse,
    IndexOutOfRange,
    NotPeriodic,
    WronskianDrift,
)

_WRONSKIAN_TOL = 1e-9


class FrequencyProfile:
    """Time-dependent squared frequency omega^2(t).

    Attributes:
        kind: one of 'constant', 'free', 'repulsive', 'cosine_modulated',
            'piecewise'.
        omega_sq: callable t -> omega^2(t).
        params: plain-data parameters (serialization round-trips through
            these).
        intrinsic_period: modulation period for cosine profiles, None when
            the profile has no distinguished period.  Constant profiles are
            periodic with any period.
        breakpoints: discontinuity times (piecewise only); integrators
            split steps there.
    """

    def __init__(self, kind, omega_sq, params, intrinsic_period=None, breakpoints=()):
        self.kind = kind
        self.omega_sq = omega_sq
        self.params = dict(params)
        self.intrinsic_period = intrinsic_period
        self.breakpoints = tuple(breakpoints)

    @classmethod
    def constant(cls, omega_sq: float) -> "FrequencyProfile":
        w = float(omega_sq)
        return cls("constant", lambda t: w, {"omega_sq": w})

    @classmethod
    def free(cls) -> "FrequencyProfile":
        return cls("free", lambda t: 0.0, {})

    @classmethod
    def repulsive(cls) -> "FrequencyProfile":
        return cls("repulsive", lambda t: -1.0, {})

    @classmethod
    def cosine_modulated(
        cls, omega0_sq: float, depth: float, mod_frequency: float
    ) -> "FrequencyProfile":
        w0, d, nu = float(omega0_sq), float(depth), float(mod_frequency)
        if nu <= 0:
            raise ValueError("modulation frequency must be positive")
        return cls(
            "cosine_modulated",
            lambda t: w0 + d * math.cos(nu * t),
            {"omega0_sq": w0, "depth": d, "mod_frequency": nu},
            intrinsic_period=2.0 * math.pi / nu,
        )

    @classmethod
    def piecewise_constant(cls, times, values) -> "FrequencyProfile":
        """omega^2(t) = values[i] on [times[i-1], times[i]); last value extends."""
        times = [float(t) for t in times]
        values = [float(v) for v in values]
        if len(values) != len(times) + 1:
            raise ValueError("need len(values) == len(times) + 1")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("breakpoints must be strictly increasing")

        def omega_sq(t: float) -> float:
            for bound, val in zip(times, values):
                if t < bound:
                    return val
            return values[-1]

        return cls(
            "piecewise",
            omega_sq,
            {"times": times, "values": values},
            breakpoints=times,
        )

    @property
    def is_constant(self) -> bool:
        return self.kind in ("constant", "free", "repulsive")

    @property
    def normalized_start(self) -> bool:
        """True when omega(0) = 1, the reference normalization."""
        return abs(self.omega_sq(0.0) - 1.0) <= 1e-12

    def max_abs_omega_sq(self, t_final: float) -> float:
        ts = list(np.linspace(0.0, t_final, 65)) + [
            b for b in self.breakpoints if 0.0 <= b <= t_final]
        return max(abs(self.omega_sq(t)) for t in ts)


@dataclass(frozen=True)
class EpsilonPoint:
    """Trajectory sample (eps, eps_dot) plus the unwrapped phase of eps.

    The phase fixes the branch of eps^(-1/2) continuously from arg eps(0)=0.
    """

    eps: complex
    eps_dot: complex
    phase: float

    @classmethod
    def initial(cls) -> "EpsilonPoint":
        return cls(1.0 + 0.0j, 1j, 0.0)

    @property
    def wronskian_error(self) -> float:
        w = self.eps * self.eps_dot.conjugate() - self.eps.conjugate() * self.eps_dot
        return abs(w + 2j)


class EpsilonTrajectory:
    """Sampled solution eps(t), eps_dot(t) on a uniform-in-segments grid.

    The construction gate compares the Wronskian drift against
    tol * max(1, |eps| |eps_dot|) per sample: for bounded trajectories that
    is the plain absolute tolerance, while hyperbolically growing ones
    (repulsive profiles at large t) are judged relative to the only scale
    float64 can resolve there.
    """

    def __init__(
        self,
        times: np.ndarray,
        eps: np.ndarray,
        eps_dot: np.ndarray,
        wronskian_tol: float = _WRONSKIAN_TOL,
    ):
        times = np.asarray(times, dtype=float)
        eps = np.asarray(eps, dtype=complex)
        eps_dot = np.asarray(eps_dot, dtype=complex)
        if not (times.shape == eps.shape == eps_dot.shape):
            raise ValueError("times, eps, eps_dot must share one shape")
        if abs(eps[0] - 1.0) > 0 or abs(eps_dot[0] - 1j) > 0:
            raise WronskianDrift("initial conditions must be exactly eps=1, eps_dot=i")
        wr = eps * eps_dot.conj() - eps.conj() * eps_dot
        scale = np.maximum(1.0, np.abs(eps) * np.abs(eps_dot))
        drift = float((np.abs(wr + 2j) / scale).max())
        if drift > wronskian_tol:
            raise WronskianDrift(f"Wronskian drift {drift:.3e} exceeds {wronskian_tol:.1e}")
        if float(np.abs(eps).min()) < 1e-12:
            raise BranchTrackingLost("eps passed within 1e-12 of zero")
        self.times = times
        self.eps = eps
        self.eps_dot = eps_dot
        self.phase = np.unwrap(np.angle(eps))

    @property
    def wronskian_drift(self) -> float:
        """Worst absolute deviation |eps eps_dot* - eps* eps_dot + 2i|."""
        wr = self.eps * self.eps_dot.conj() - self.eps.conj() * self.eps_dot
        return float(np.abs(wr + 2j).max())

    @property
    def relative_wronskian_drift(self) -> float:
        wr = self.eps * self.eps_dot.conj() - self.eps.conj() * self.eps_dot
        scale = np.maximum(1.0, np.abs(self.eps) * np.abs(self.eps_dot))
        return float((np.abs(wr + 2j) / scale).max())

    def point_at(self, index: int) -> EpsilonPoint:
        return EpsilonPoint(
            complex(self.eps[index]), complex(self.eps_dot[index]), float(self.phase[index]))

    def point(self, t: float, atol: float = 1e-9) -> EpsilonPoint:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > atol:
            raise ValueError(f"time {t} not on the sample grid (nearest {self.times[i]})")
        return self.point_at(i)

    @property
    def final(self) -> EpsilonPoint:
        return self.point_at(len(self.times) - 1)


def _closed_form(profile: FrequencyProfile, times: np.ndarray):
    w = profile.omega_sq(0.0)
    if abs(w) < 1e-300:
        eps = 1.0 + 1j * times
        eps_dot = np.full_like(eps, 1j)
    elif w > 0:
        om = math.sqrt(w)
        eps = np.cos(om * times) + (1j / om) * np.sin(om * times)
        eps_dot = -om * np.sin(om * times) + 1j * np.cos(om * times)
    else:
        om = math.sqrt(-w)
        eps = np.cosh(om * times) + (1j / om) * np.sinh(om * times)
        eps_dot = om * np.sinh(om * times) + 1j * np.cosh(om * times)
    return eps, eps_dot


def default_epsilon_steps(profile: FrequencyProfile, t_final: float) -> int:
    scale = max(1.0, math.sqrt(profile.max_abs_omega_sq(t_final)))
    return max(200, int(math.ceil(200.0 * t_final * scale)))


def solve_epsilon(
    profile: FrequencyProfile,
    t_final: float,
    n_steps: int | None = None,
    use_closed_form: bool = True,
    wronskian_tol: float = _WRONSKIAN_TOL,
) -> EpsilonTrajectory:
    """Solve the classical trajectory on [0, t_final].

    Constant-frequency kinds take the closed form unless
    use_closed_form=False forces the RK4 path (useful as a cross-check).
    Piecewise profiles are integrated segment by segment so the RK4 stages
    never straddle a discontinuity.
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if n_steps is None:
        n_steps = default_epsilon_steps(profile, t_final)
    if profile.is_constant and use_closed_form:
        times = np.linspace(0.0, t_final, n_steps + 1)
        eps, eps_dot = _closed_form(profile, times)
        return EpsilonTrajectory(times, eps, eps_dot, wronskian_tol)

    cuts = [0.0] + [b for b in profile.breakpoints if 0.0 < b < t_final] + [t_final]
    times = [0.0]
    eps = [1.0 + 0.0j]
    eps_dot = [1j]
    w = profile.omega_sq
    piecewise = profile.kind == "piecewise"
    for seg_start, seg_end in zip(cuts, cuts[1:]):
        seg_steps = max(1, int(round(n_steps * (seg_end - seg_start) / t_final)))
        h = (seg_end - seg_start) / seg_steps
        w_seg = w(0.5 * (seg_start + seg_end))  # constant inside a piecewise segment
        y0, y1 = eps[-1], eps_dot[-1]
        t = seg_start
        for _ in range(seg_steps):
            if piecewise:
                w1 = w2 = w4 = w_seg
            else:
                w1, w2, w4 = w(t), w(t + h / 2), w(t + h)
            k1a, k1b = y1, -w1 * y0
            k2a, k2b = y1 + (h / 2) * k1b, -w2 * (y0 + (h / 2) * k1a)
            k3a, k3b = y1 + (h / 2) * k2b, -w2 * (y0 + (h / 2) * k2a)
            k4a, k4b = y1 + h * k3b, -w4 * (y0 + h * k3a)
            y0 = y0 + (h / 6) * (k1a + 2 * k2a + 2 * k3a + k4a)
            y1 = y1 + (h / 6) * (k1b + 2 * k2b + 2 * k3b + k4b)
            t += h
            times.append(t)
            eps.append(y0)
            eps_dot.append(y1)
        times[-1] = seg_end  # absorb accumulated rounding at the joint
    return EpsilonTrajectory(np.array(times), np.array(eps), np.array(eps_dot), wronskian_tol)


@dataclass(frozen=True)
class QuadratureVariances:
    """Second moments of the packet states and the correlation coefficient.

    im_cross stores Im(eps_dot eps*), which the Wronskian pins to one; the
    uncertainty residual is evaluated through it because the direct product
    sigma_x sigma_p - sigma_xp^2 squares large magnitudes first and loses
    the 1/4 to rounding on hyperbolic trajectories.
    """

    sigma_x: float | np.ndarray
    sigma_p: float | np.ndarray
    sigma_xp: float | np.ndarray
    r: float | np.ndarray
    im_cross: float | np.ndarray

    @property
    def squeezed_x(self):
        return self.sigma_x < 0.5

    @property
    def squeezed_p(self):
        return self.sigma_p < 0.5

    @property
    def uncertainty_product_error(self):
        """|sigma_x sigma_p - sigma_xp^2 - 1/4| in factored form.

        The product identity equals Im(eps_dot eps*)^2 / 4, so the residual
        is |(im - 1)(im + 1)|/4 exactly, without forming the large products.
        """
        return np.abs((self.im_cross - 1.0) * (self.im_cross + 1.0)) / 4.0


def variances(eps, eps_dot) -> QuadratureVariances:
    """Position/momentum variances and covariance of the coherent packets.

    sigma_x = |eps|^2/2, sigma_p = |eps_dot|^2/2, sigma_xp = Re(eps_dot
    eps*)/2; the correlation r = sigma_xp/sqrt(sigma_x sigma_p) then
    saturates the Schrodinger uncertainty product sigma_x sigma_p (1 - r^2)
    = 1/4.  Accepts scalars or matching arrays.
    """
    eps = np.asarray(eps, dtype=complex)
    eps_dot = np.asarray(eps_dot, dtype=complex)
    scale = np.maximum(1.0, np.abs(eps) * np.abs(eps_dot))
    wr = np.abs(eps * eps_dot.conj() - eps.conj() * eps_dot + 2j) / scale
    if float(np.max(wr)) > 1e-6:
        raise WronskianDrift(f"pair violates the Wronskian by {float(np.max(wr)):.3e}")
    cross = eps_dot * eps.conj()
    sx = np.abs(eps) ** 2 / 2.0
    sp = np.abs(eps_dot) ** 2 / 2.0
    sxp = cross.real / 2.0
    r = sxp / np.sqrt(sx * sp)
    if sx.ndim == 0:
        return QuadratureVariances(float(sx), float(sp), float(sxp), float(r),
                                   float(cross.imag))
    return QuadratureVariances(sx, sp, sxp, r, cross.imag)


def _sqrt_inv_eps(point: EpsilonPoint) -> complex:
    """eps^(-1/2) on the branch tracked continuously from arg eps(0) = 0."""
    mod = abs(point.eps)
    if mod < 1e-12:
        raise BranchTrackingLost("eps is numerically zero")
    return mod**-0.5 * cmath.exp(-0.5j * point.phase)


def ground_wavefunction(point: EpsilonPoint, x) -> np.ndarray:
    """Gaussian packet that generalizes the oscillator ground state."""
    x = np.asarray(x, dtype=float)
    out = (
        math.pi**-0.25
        * _sqrt_inv_eps(point)
        * np.exp(0.5j * point.eps_dot / point.eps * x**2)
    )
    return out if out.ndim else complex(out)


def coherent_wavefunction(point: EpsilonPoint, alpha: complex, x) -> np.ndarray:
    """Packet eigenstate of the lowering invariant with eigenvalue alpha."""
    x = np.asarray(x, dtype=float)
    alpha = complex(alpha)
    eps = point.eps
    shift = (
        -abs(alpha) ** 2 / 2.0
        - alpha**2 * eps.conjugate() / (2.0 * eps)
        + math.sqrt(2.0) * alpha * x / eps
    )
    out = ground_wavefunction(point, x) * np.exp(shift)
    return out if np.ndim(out) else complex(out)


def _hermite_normalized(m: int, xi: np.ndarray) -> np.ndarray:
    """h_m(xi) = H_m(xi)/sqrt(2^m m!) by the stable normalized recurrence."""
    prev = np.ones_like(xi)
    if m == 0:
        return prev
    cur = math.sqrt(2.0) * xi
    for k in range(1, m):
        prev, cur = cur, xi * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1.0)) * prev
    return cur


def number_wavefunction(point: EpsilonPoint, m: int, x) -> np.ndarray:
    """Squeezed-correlated number state, eigenstate of A†A with eigenvalue m."""
    m = int(m)
    if not 0 <= m <= 60:
        raise IndexOutOfRange(f"number index must lie in 0..60, got {m}")
    x = np.asarray(x, dtype=float)
    xi = x / abs(point.eps)
    out = (
        cmath.exp(-1j * m * point.phase)
        * _hermite_normalized(m, xi)
        * ground_wavefunction(point, x)
    )
    return out if np.ndim(out) else complex(out)


def _derivative_4th(y: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order centered first derivative with zero ghost cells."""
    yp = np.pad(y, 2)
    return (yp[:-4] - 8.0 * yp[1:-3] + 8.0 * yp[3:-1] - yp[4:]) / (12.0 * h)


def apply_lowering_invariant(point: EpsilonPoint, x: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply A = (eps d/dx - i eps_dot x)/sqrt(2) on a uniform grid.

    Uses a fourth-order finite difference; the grid must resolve the
    wavefunction and extend into its decayed tails.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 8:
        raise GridTooCoarse("need a 1-D grid with at least 8 points")
    h = x[1] - x[0]
    dpsi = _derivative_4th(np.asarray(psi, dtype=complex), h)
    return (point.eps * dpsi - 1j * point.eps_dot * x * psi) / math.sqrt(2.0)


@dataclass(frozen=True)
class QuasienergyResult:
    """Floquet analysis output for one period of a periodic profile."""

    kappa: float
    stable: bool
    trace: float
    multipliers: tuple[complex, complex]
    period: float


def quasienergy(profile: FrequencyProfile, period: float | None = None) -> QuasienergyResult:
    """Monodromy-based quasienergy of a periodic frequency profile.

    The real solutions (Re eps, Im eps) over one period T give the 2x2
    monodromy matrix; the motion is stable iff |trace| <= 2, and then the
    quasienergy is kappa = arccos(trace/2)/T reduced to [0, pi/T] (the full
    spectrum is kappa + 2 pi k / T).  Unstable profiles report kappa = nan.
    """
    if period is None:
        period = profile.intrinsic_period
        if period is None and profile.is_constant:
            raise NotPeriodic("constant profile: pass the period explicitly")
    if period is None or period <= 0:
        raise NotPeriodic(f"profile kind {profile.kind!r} has no usable period")
    if profile.intrinsic_period is not None:
        ratio = period / profile.intrinsic_period
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise NotPeriodic(
                f"period {period} is not a multiple of the intrinsic {profile.intrinsic_period}")
    traj = solve_epsilon(profile, period)
    end = traj.final
    monodromy = np.array(
        [[end.eps.real, end.eps.imag], [end.eps_dot.real, end.eps_dot.imag]])
    trace = float(np.trace(monodromy))
    stable = abs(trace) <= 2.0
    eigs = np.linalg.eigvals(monodromy)
    order = np.lexsort((eigs.imag, eigs.real))
    multipliers = (complex(eigs[order[0]]), complex(eigs[order[1]]))
    if stable:
        kappa = math.acos(max(-1.0, min(1.0, trace / 2.0))) / period
    else:
        kappa = math.nan
    return QuasienergyResult(kappa, stable, trace, multipliers, float(period))


def fold_quasienergy(kappa: float, period: float) -> float:
    """Map any quasienergy branch into the reduced zone [0, pi/T]."""
    zone = 2.0 * math.pi / period
    k = math.fmod(kappa, zone)
    if k < 0:
        k += zone
    return zone - k if k > zone / 2.0 else k
