"""Phase-space simulation of multimode Gaussian light and parametric oscillators.

Capabilities: linear integrals of motion for arbitrary time-dependent
quadratic Hamiltonians, Wigner/Husimi functions of mixed Gaussian states
and their symplectic evolution, photon-number statistics through
multivariable Hermite polynomials with a quadrature oracle, the complex
classical trajectory of the parametric oscillator with coherent/number
packet states and Floquet quasienergy analysis, and even/odd (Schrodinger
cat) superpositions with numerically exact Wigner functions.
"""

from .cats import (
    CatState,
    WignerGrid,
    cat_a_squared_residual,
    cat_photon_distribution,
    cat_wavefunction,
    cat_wigner_grid,
    wavefunction_wigner_grid,
)
from .errors import PhaseSpaceError
from .oscillator import (
    EpsilonPoint,
    EpsilonTrajectory,
    FrequencyProfile,
    QuadratureVariances,
    QuasienergyResult,
    apply_lowering_invariant,
    coherent_wavefunction,
    fold_quasienergy,
    ground_wavefunction,
    number_wavefunction,
    quasienergy,
    solve_epsilon,
    variances,
)
from .photons import (
    PhotonDistribution,
    hermite_multivar,
    laguerre,
    multi_factorial,
    photon_distribution,
    photon_prob,
    photon_prob_oracle,
    wigner_fock,
)
from .states import (
    GaussianState,
    QFunctionParams,
    coherent,
    evolve,
    from_q_params,
    mean_photon,
    q_function,
    squeezed_vacuum,
    thermal,
    to_q_params,
    vacuum,
    wigner,
)
from .symplectic import (
    PropagatorComplex,
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

__version__ = "0.1.0"
