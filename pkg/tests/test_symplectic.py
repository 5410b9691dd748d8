"""Integrals of motion: frozen examples, invariants, and conversion identities.

Expected values marked with a closed form were derived independently
(matrix exponentials cross-checked against scipy.linalg.expm at build
time) and frozen here; scipy stays the oracle inside the tests.
"""

import math

import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from phasespace import (
    PropagatorReal,
    QuadraticHamiltonian,
    SymplecticForm,
    complex_to_real,
    compose,
    evolve_complex,
    evolve_real,
    matrix_exp,
    propagator_const,
    real_to_complex,
    symplectic_defect,
)
from phasespace.errors import (
    DimensionMismatch,
    NonSymmetricB,
    SymplecticDriftExceeded,
)

from conftest import (
    random_stable_hamiltonian,
    random_symmetric,
    random_symplectic_matrix,
)

B_HARMONIC = np.eye(2)


class TestSymplecticForm:
    def test_sigma_antisymmetric_and_squares_to_minus_one(self):
        for n in (1, 2, 3):
            s = SymplecticForm(n).sigma
            assert np.array_equal(s.T, -s)
            assert np.allclose(s @ s, -np.eye(2 * n))

    def test_u_is_unitary(self):
        for n in (1, 3):
            u = SymplecticForm(n).u
            assert np.allclose(u @ u.conj().T, np.eye(2 * n), atol=1e-15)

    def test_swap_conjugates_u(self):
        form = SymplecticForm(2)
        assert np.allclose(form.u @ form.swap, form.u.conj(), atol=1e-15)


class TestMatrixExp:
    def test_against_scipy(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 9))
            a = rng.normal(size=(d, d)) * rng.uniform(0.1, 4.0)
            ours, ref = matrix_exp(a), scipy_expm(a)
            assert np.abs(ours - ref).max() <= 1e-12 * max(1.0, np.abs(ref).max())

    def test_complex_argument(self, rng):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.allclose(matrix_exp(a), scipy_expm(a), atol=1e-12)


class TestSymplecticDefect:
    def test_identity_is_zero(self):
        assert symplectic_defect(np.eye(4)) == 0.0

    def test_rotation_is_zero(self):
        assert symplectic_defect(np.array([[0.0, 1.0], [-1.0, 0.0]])) == 0.0

    def test_diagonal_stretch(self):
        # Lambda Sigma Lambda^T = 2 Sigma, so the max entry gap is 1
        assert symplectic_defect(np.diag([2.0, 1.0])) == pytest.approx(1.0)

    def test_rejects_odd_dimension(self):
        with pytest.raises(DimensionMismatch):
            symplectic_defect(np.eye(3))


class TestEvolveReal:
    def test_harmonic_quarter_period(self):
        h = QuadraticHamiltonian.constant(B_HARMONIC)
        p = evolve_real(h, math.pi / 2)
        expected = scipy_expm(SymplecticForm(1).sigma * (math.pi / 2))
        assert np.abs(expected - np.array([[0, 1], [-1, 0]])).max() < 1e-15
        assert np.abs(p.lam - expected).max() < 1e-9
        assert np.abs(p.delta).max() < 1e-12

    def test_free_particle_shear(self):
        h = QuadraticHamiltonian.constant(np.diag([1.0, 0.0]))
        for t in (0.5, 2.0):
            p = evolve_real(h, t)
            # classical trajectory q(t) = q0 + t p0 inverts to the shear below
            assert np.abs(p.lam - np.array([[1.0, 0.0], [-t, 1.0]])).max() < 1e-9

    def test_time_zero_is_identity(self, rng):
        h = random_stable_hamiltonian(rng, 2, 1.0)
        p = evolve_real(h, 0.0)
        assert np.array_equal(p.lam, np.eye(4))
        assert np.array_equal(p.delta, np.zeros(4))

    def test_rejects_nonsymmetric_b(self):
        h = QuadraticHamiltonian(1, lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]),
                                 lambda t: np.zeros(2))
        with pytest.raises(NonSymmetricB):
            evolve_real(h, 1.0, 50)

    def test_drive_accumulates(self):
        h = QuadraticHamiltonian.constant(np.zeros((2, 2)), np.array([0.0, 1.0]))
        p = evolve_real(h, 3.0, 100)
        assert np.allclose(p.delta, [3.0, 0.0], atol=1e-12)
        assert np.allclose(p.lam, np.eye(2))


class TestPropagatorConst:
    def test_pure_drive(self):
        p = propagator_const(np.zeros((2, 2)), np.array([0.0, 1.0]), 2.5)
        assert np.allclose(p.lam, np.eye(2))
        assert np.allclose(p.delta, [2.5, 0.0], atol=1e-14)

    def test_full_rotation_period(self):
        p = propagator_const(B_HARMONIC, None, 2 * math.pi)
        assert np.abs(p.lam - np.eye(2)).max() < 1e-12

    def test_time_zero(self, rng):
        b = random_symmetric(rng, 4, 1.0)
        p = propagator_const(b, None, 0.0)
        assert np.allclose(p.lam, np.eye(4))
        assert np.allclose(p.delta, 0.0)

    def test_agrees_with_evolve_real(self, rng):
        for _ in range(5):
            n = int(rng.integers(1, 4))
            h = random_stable_hamiltonian(rng, n, 1.5)
            t = float(rng.uniform(0.3, 3.0))
            a = evolve_real(h, t)
            b = propagator_const(h.b_of_t(0.0), h.c_of_t(0.0), t)
            assert np.abs(a.lam - b.lam).max() < 1e-8
            assert np.abs(a.delta - b.delta).max() < 1e-8

    def test_rejects_nonsymmetric(self):
        with pytest.raises(NonSymmetricB):
            propagator_const(np.array([[0.0, 1.0], [0.0, 0.0]]), None, 1.0)


class TestEvolveComplex:
    def test_harmonic_oscillator_phases(self):
        h = QuadraticHamiltonian.constant(B_HARMONIC)
        t = 0.7
        p = evolve_complex(h, t)
        expected = np.diag([np.exp(1j * t), np.exp(-1j * t)])
        assert np.abs(p.m - expected).max() < 1e-9
        assert np.abs(p.n_vec).max() < 1e-12

    def test_time_zero(self):
        h = QuadraticHamiltonian.constant(B_HARMONIC)
        p = evolve_complex(h, 0.0)
        assert np.array_equal(p.m, np.eye(2, dtype=complex))

    def test_free_particle_matches_conversion(self):
        h = QuadraticHamiltonian.constant(np.diag([1.0, 0.0]))
        t = 1.3
        direct = evolve_complex(h, t)
        converted = real_to_complex(evolve_real(h, t))
        assert np.abs(direct.m - converted.m).max() < 1e-8

    def test_representation_consistency_random(self, rng):
        for _ in range(5):
            n = int(rng.integers(1, 4))
            h = random_stable_hamiltonian(rng, n, 1.0)
            t = float(rng.uniform(0.2, 2.0))
            direct = evolve_complex(h, t)
            converted = real_to_complex(evolve_real(h, t))
            assert np.abs(direct.m - converted.m).max() < 1e-8
            assert np.abs(direct.n_vec - converted.n_vec).max() < 1e-8


class TestConversions:
    def test_identity_maps_to_identity(self):
        p = PropagatorReal(np.eye(4), np.zeros(4), 0.0)
        c = real_to_complex(p)
        assert np.allclose(c.m, np.eye(4))

    def test_harmonic_rotation(self):
        t = 1.1
        p = propagator_const(B_HARMONIC, None, t)
        c = real_to_complex(p)
        assert np.abs(c.m - np.diag([np.exp(1j * t), np.exp(-1j * t)])).max() < 1e-12

    def test_roundtrip_random_symplectic(self, rng):
        for n in (1, 2, 3):
            lam = random_symplectic_matrix(rng, n)
            delta = rng.normal(size=2 * n)
            p = PropagatorReal(lam, delta, 1.0)
            back = complex_to_real(real_to_complex(p))
            assert np.abs(back.lam - lam).max() < 1e-12
            assert np.abs(back.delta - delta).max() < 1e-12


class TestInvariants:
    def test_symplectic_and_determinant(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            h = random_stable_hamiltonian(rng, n, float(rng.uniform(0.2, 2.0)))
            p = evolve_real(h, float(rng.uniform(0.5, 10.0)))
            assert symplectic_defect(p.lam) <= 1e-9
            assert abs(np.linalg.det(p.lam) - 1.0) <= 1e-8

    def test_composition_time_independent(self, rng):
        for _ in range(5):
            n = int(rng.integers(1, 4))
            h = random_stable_hamiltonian(rng, n, 1.0)
            t1, t2 = float(rng.uniform(0.2, 2.0)), float(rng.uniform(0.2, 2.0))
            total = propagator_const(h.b_of_t(0.0), h.c_of_t(0.0), t1 + t2)
            leg1 = propagator_const(h.b_of_t(0.0), h.c_of_t(0.0), t1)
            leg2 = propagator_const(h.b_of_t(0.0), h.c_of_t(0.0), t2)
            combined = compose(leg1, leg2)
            assert np.abs(combined.lam - total.lam).max() < 1e-8
            assert np.abs(combined.delta - total.delta).max() < 1e-8

    def test_step_halving_is_fourth_order(self):
        h = QuadraticHamiltonian.from_callables(
            1,
            lambda t: np.array([[1.0, 0.3 * math.cos(t)], [0.3 * math.cos(t), 1.5]]),
            lambda t: np.array([0.0, 0.1]),
        )
        ref = evolve_real(h, 3.0, 6400)
        # coarse runs need a loose gate: their defect is exactly what shrinks
        errors = [np.abs(evolve_real(h, 3.0, ns, tol=1e-3).lam - ref.lam).max()
                  for ns in (100, 200, 400)]
        ratios = [errors[i] / errors[i + 1] for i in range(2)]
        for r in ratios:
            assert 12.0 < r < 20.0

    def test_inverse_undoes(self, rng):
        h = random_stable_hamiltonian(rng, 2, 1.0)
        p = evolve_real(h, 1.7)
        total = compose(p, p.inverse())
        assert np.abs(total.lam - np.eye(4)).max() < 1e-10
        assert np.abs(total.delta).max() < 1e-10


class TestValidation:
    def test_nonsymplectic_construction_fails(self):
        with pytest.raises(SymplecticDriftExceeded):
            PropagatorReal(np.diag([2.0, 1.0]), np.zeros(2), 0.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            PropagatorReal(np.eye(4), np.zeros(2), 0.0)

    def test_tolerance_override(self):
        # defect of this stretch is 1; a loose tolerance lets it through
        p = PropagatorReal(np.diag([2.0, 1.0]), np.zeros(2), 0.0, tol=10.0)
        assert p.lam[0, 0] == 2.0
