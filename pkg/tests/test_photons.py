"""Photon statistics: recurrence vs generating function, oracle agreement.

Two independent oracles guard the pipeline: a brute-force Taylor expansion
of the Hermite generating function (dict-of-multi-indices polynomial
algebra below), and phase-space quadrature overlaps with Fock Wigner
functions (photon_prob_oracle).  Closed-form laws (Poisson, geometric,
squeezed-vacuum parity) pin the conventions.
"""

import itertools
import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from phasespace import (
    coherent,
    hermite_multivar,
    laguerre,
    mean_photon,
    multi_factorial,
    photon_distribution,
    photon_prob,
    photon_prob_oracle,
    squeezed_vacuum,
    thermal,
    vacuum,
    wigner_fock,
)
from phasespace.errors import (
    AsymmetricR,
    DegreeTooLarge,
    DimensionMismatch,
    GridTooCoarse,
    IndexOutOfRange,
)
from phasespace.photons import distribution_mean_consistency

from conftest import random_single_mode_state


def hermite_series_oracle(r, v, max_degree):
    """Taylor coefficients of exp(-t R t / 2 + t v) by dict-polynomial algebra.

    Returns {multi-index: H_m / m!}; brute force, independent of the
    recurrence under test.
    """
    d = len(v)
    exponent = {}
    for i in range(d):
        if v[i] != 0:
            key = tuple(1 if k == i else 0 for k in range(d))
            exponent[key] = exponent.get(key, 0.0) + v[i]
    for i in range(d):
        for j in range(d):
            if r[i][j] != 0:
                key = tuple((1 if k == i else 0) + (1 if k == j else 0) for k in range(d))
                exponent[key] = exponent.get(key, 0.0) - 0.5 * r[i][j]
    series = {(0,) * d: 1.0 + 0.0j}
    power = {(0,) * d: 1.0 + 0.0j}  # exponent^k / k!
    for k in range(1, max_degree + 1):
        nxt = {}
        for m1, c1 in power.items():
            for m2, c2 in exponent.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if sum(m) <= max_degree:
                    nxt[m] = nxt.get(m, 0.0) + c1 * c2 / k
        power = nxt
        if not power:
            break
        for m, c in power.items():
            series[m] = series.get(m, 0.0) + c
    return series


class TestHermite:
    def test_zero_order_is_one(self):
        r = np.array([[0.3, 0.1], [0.1, -0.2]])
        assert hermite_multivar(r, np.array([0.5, 0.2]), (0, 0)) == 1.0

    def test_first_order_is_ry(self, rng):
        r = np.array([[0.3, 0.1 + 0.2j], [0.1 + 0.2j, -0.2]])
        y = np.array([0.5, -0.7j])
        v = r @ y
        assert hermite_multivar(r, y, (1, 0)) == pytest.approx(v[0])
        assert hermite_multivar(r, y, (0, 1)) == pytest.approx(v[1])

    def test_physicists_hermite_1d(self):
        # R = 2 reduces the generating function to exp(2ty - t^2)
        for y in (0.0, 0.3, -1.2):
            assert hermite_multivar([[2.0]], [y], (2,)) == pytest.approx(4 * y * y - 2)
            assert hermite_multivar([[2.0]], [y], (3,)) == pytest.approx(8 * y**3 - 12 * y)

    @pytest.mark.parametrize("dim", [1, 2])
    def test_against_series_oracle(self, dim, rng):
        for _ in range(10):
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            r = (g + g.T) / 2
            y = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            series = hermite_series_oracle(r, r @ y, 6)
            for m in itertools.product(range(4), repeat=dim):
                if sum(m) > 6:
                    continue
                expected = series.get(m, 0.0) * multi_factorial(m)
                got = hermite_multivar(r, y, m)
                assert got == pytest.approx(expected, rel=1e-10, abs=1e-10)

    def test_rejects_asymmetric(self):
        with pytest.raises(AsymmetricR):
            hermite_multivar(np.array([[0.0, 1.0], [0.0, 0.0]]), np.zeros(2), (1, 1))

    def test_rejects_huge_degree(self):
        with pytest.raises(DegreeTooLarge):
            hermite_multivar([[2.0]], [0.0], (200,))


class TestPhotonProb:
    def test_vacuum(self):
        assert photon_prob(vacuum(1), (0,)) == 1.0
        for n in (1, 2, 5):
            assert photon_prob(vacuum(1), (n,)) == pytest.approx(0.0, abs=1e-14)

    def test_coherent_poisson(self):
        state = coherent(1.0)  # <n> = 1
        for n in range(9):
            assert photon_prob(state, (n,)) == pytest.approx(
                math.exp(-1.0) / math.factorial(n), abs=1e-12)

    def test_squeezed_vacuum_parity(self):
        state = squeezed_vacuum(4.0)
        for n in (1, 3, 5, 7):
            assert photon_prob(state, (n,)) <= 1e-10

    def test_squeezed_vacuum_closed_form(self):
        # P_2k = P0 [(2k-1)!!]^2 tanh(xi)^2k / (2k)! with s = exp(2 xi)
        s = 4.0
        state = squeezed_vacuum(s)
        p0 = 2 * math.sqrt(s) / (1 + s)
        ratio = (s - 1) / (s + 1)
        for k in range(4):
            dfact = math.prod(range(1, 2 * k, 2)) if k else 1
            expected = p0 * dfact**2 * ratio ** (2 * k) / math.factorial(2 * k)
            assert photon_prob(state, (2 * k,)) == pytest.approx(expected, rel=1e-12)

    def test_thermal_geometric(self):
        nbar = 0.5
        state = thermal(nbar)
        for n in range(9):
            assert photon_prob(state, (n,)) == pytest.approx(
                nbar**n / (1 + nbar) ** (n + 1), rel=1e-12)

    def test_two_mode_product_state(self):
        state = coherent([1.0, 0.5j])
        for n1, n2 in ((0, 0), (1, 0), (2, 1)):
            expected = (math.exp(-1.0) / math.factorial(n1)) * (
                math.exp(-0.25) * 0.25**n2 / math.factorial(n2))
            assert photon_prob(state, (n1, n2)) == pytest.approx(expected, rel=1e-10)

    def test_multi_index_validation(self):
        with pytest.raises(IndexOutOfRange):
            photon_prob(vacuum(1), (-1,))
        with pytest.raises(DimensionMismatch):
            photon_prob(vacuum(1), (1, 1))


class TestPhotonDistribution:
    def test_vacuum_mass(self):
        dist = photon_distribution(vacuum(1), 5)
        assert dist.mass == pytest.approx(1.0, abs=1e-14)
        assert dist.prob((0,)) == 1.0

    def test_coherent_mass_and_mean(self):
        dist = photon_distribution(coherent(1.0), 20)
        assert dist.mass >= 1 - 1e-8
        assert dist.mode_means[0] == pytest.approx(1.0, abs=1e-6)

    def test_thermal_geometric_table(self):
        nbar = 0.5
        dist = photon_distribution(thermal(nbar), 40)
        ks = np.arange(41)
        expected = nbar**ks / (1 + nbar) ** (ks + 1)
        assert np.abs(dist.probs - expected).max() <= 1e-6

    def test_mass_grows_to_one(self, rng):
        state = random_single_mode_state(rng, eig_range=(0.6, 2.0))
        masses = [photon_distribution(state, c).mass for c in (4, 12, 30, 60)]
        assert all(b >= a - 1e-12 for a, b in zip(masses, masses[1:]))
        if mean_photon(state, 0) <= 3:
            assert masses[-1] >= 1 - 1e-6

    def test_mean_consistency(self, rng):
        for _ in range(5):
            state = random_single_mode_state(rng, eig_range=(0.6, 2.0))
            dist = photon_distribution(state, 60)
            if dist.mass >= 1 - 1e-7:
                assert distribution_mean_consistency(state, dist) <= 1e-5

    def test_two_mode_table(self):
        state = coherent([0.8, 0.6])
        dist = photon_distribution(state, (10, 10))
        assert dist.mass >= 1 - 1e-8
        assert dist.mode_means[0] == pytest.approx(0.64, abs=1e-6)
        assert dist.mode_means[1] == pytest.approx(0.36, abs=1e-6)


class TestWignerFock:
    def test_frozen_origin_values(self):
        assert wigner_fock(0, 0, 0.0, 0.0) == pytest.approx(2.0)
        assert wigner_fock(1, 1, 0.0, 0.0) == pytest.approx(-2.0)
        assert wigner_fock(1, 0, 0.0, 0.0) == pytest.approx(0.0)

    def test_conjugate_symmetry(self, rng):
        for _ in range(5):
            p, q = rng.normal(size=2)
            m, n = int(rng.integers(0, 6)), int(rng.integers(0, 6))
            assert wigner_fock(m, n, p, q) == pytest.approx(
                np.conj(wigner_fock(n, m, p, q)))

    def test_laguerre_against_scipy(self, rng):
        x = rng.uniform(0, 20, size=50)
        for n in range(8):
            for alpha in range(4):
                assert np.allclose(
                    laguerre(n, alpha, x), eval_genlaguerre(n, alpha, x),
                    rtol=1e-10, atol=1e-12)

    def test_diagonal_orthonormality(self):
        g = np.linspace(-7.5, 7.5, 401)
        pg, qg = np.meshgrid(g, g, indexing="ij")
        h = g[1] - g[0]
        diag = [wigner_fock(n, n, pg, qg).real for n in range(6)]
        for m in range(6):
            for n in range(6):
                overlap = (diag[m] * diag[n]).sum() * h * h / (2 * math.pi)
                assert overlap == pytest.approx(1.0 if m == n else 0.0, abs=1e-6)

    def test_index_cap(self):
        with pytest.raises(IndexOutOfRange):
            wigner_fock(61, 0, 0.0, 0.0)


class TestOracle:
    def test_vacuum(self):
        assert photon_prob_oracle(vacuum(1), (0,)) == pytest.approx(1.0, abs=1e-8)

    def test_coherent_n2(self):
        value = photon_prob_oracle(coherent(1.0), (2,))
        assert value == pytest.approx(math.exp(-1.0) / 2.0, abs=1e-6)

    def test_squeezed_dual_path(self):
        state = squeezed_vacuum(4.0)
        assert photon_prob_oracle(state, (2,)) == pytest.approx(
            photon_prob(state, (2,)), abs=1e-6)

    def test_random_states_agree(self, rng):
        for _ in range(6):
            state = random_single_mode_state(rng)
            for n in (0, 1, 4, 8):
                assert photon_prob_oracle(state, (n,)) == pytest.approx(
                    photon_prob(state, (n,)), abs=1e-6)

    def test_two_mode_agreement(self):
        state = coherent([0.7, 0.4j])
        for n in ((1, 1), (2, 0)):
            assert photon_prob_oracle(state, n) == pytest.approx(
                photon_prob(state, n), abs=1e-6)

    def test_grid_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            photon_prob_oracle(coherent(1.5), (4,), points=21)

    def test_three_modes_rejected(self):
        with pytest.raises(DimensionMismatch):
            photon_prob_oracle(vacuum(3), (0, 0, 0))
