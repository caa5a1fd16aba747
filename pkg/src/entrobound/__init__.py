"""Numerical explorer for entropy-constrained energy-space cost bounds.

The package studies how small the joint cost tr(rho H) * tr(rho Q^2) can get
for states of given von Neumann entropy in finite-dimensional quantum
mechanics: closed-form oscillator counterexamples to the classic bound,
two-parameter Gibbs-state scans over Hamiltonian families, and the fit of the
empirical bound coefficient.
"""

from .asymptotics import SpectrumParams, degeneracy, eigen_energy, partition_and_costs
from .discrete_qm import (
    HamiltonianSpec,
    QSystem,
    boost,
    build_system,
    laurent_family,
    monomial_family,
    parity,
    translation,
)
from .errors import (
    DomainError,
    EmptyWindowError,
    InfeasibilityError,
    NumericError,
    PreconditionError,
    TruncationError,
    ValidationError,
)
from .gibbs import (
    GibbsState,
    brute_force_max_entropy,
    deadend_lower_bound,
    energy_relent_identity_residual,
    gibbs_state,
    stationarity_residual,
    symmetrize,
    variance_q,
)
from .matfun import (
    EigenDecomposition,
    eigh,
    entropy,
    entropy_gradient_check,
    matrix_function,
    relative_entropy,
)
from .oscillator import (
    Counterexample1Report,
    Counterexample2Report,
    OscillatorParams,
    bound_rhs,
    counterexample1,
    counterexample2,
    eigenstate_qsq,
)
from .scan import (
    BoundFit,
    CostPoint,
    ScanConfig,
    candidate_bound,
    fit_alpha,
    run_scan,
    write_csv,
)

__version__ = "0.1.0"
