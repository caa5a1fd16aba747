"""Two-parameter Gibbs states and entropy-maximization diagnostics.

A state rho(b1, b2) = exp(-b1 H - b2 Q^2) / Z is the unique entropy maximizer
among states with its own energy and spatial costs.  This module constructs
such states, measures how far an arbitrary state is from exact Gibbs form,
recovers maximizers independently with a convex solver (as a cross-check
oracle), and evaluates the relative-entropy identity

    tr(rho A) = S(rho) - log tr(e^-A) + S(rho || e^-A / tr(e^-A))

together with the Jensen-style lower-bound chain built on it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import matfun
from .discrete_qm import QSystem
from .errors import (
    InfeasibilityError,
    NumericError,
    PreconditionError,
    ValidationError,
)


@dataclass(frozen=True)
class GibbsState:
    """exp(-b1 H - b2 Q^2)/Z with its entropy and costs precomputed."""

    beta1: float
    beta2: float
    rho: np.ndarray
    entropy: float
    energy_cost: float
    space_cost: float

    @property
    def product(self) -> float:
        """Joint cost tr(rho H) * tr(rho Q^2)."""
        return self.energy_cost * self.space_cost


def _trace_product(a: np.ndarray, b: np.ndarray) -> float:
    # tr(a b) for Hermitian a, b
    return float(np.vdot(a, b).real)


def gibbs_state(sys: QSystem, beta1: float, beta2: float) -> GibbsState:
    """Construct the Gibbs state for the exponent -beta1 H - beta2 Q^2.

    The exponent's largest eigenvalue is subtracted before exponentiating, so
    arbitrarily large |beta| cannot overflow; the normalization is invariant
    under that shift.
    """
    h = sys.hamiltonian
    q_sq = sys.position_sq
    exponent = -beta1 * h - beta2 * q_sq
    dec = matfun.eigh(exponent)
    w, u = dec.eigenvalues, dec.eigenvectors
    if not np.all(np.isfinite(w)):
        raise NumericError(f"non-finite exponent spectrum at ({beta1}, {beta2})")
    p = np.exp(w - w[-1])
    p /= p.sum()
    rho = (u * p) @ u.conj().T
    rho = (rho + rho.conj().T) / 2.0
    pos = p[p > 0.0]
    entropy = float(-np.sum(pos * np.log(pos)))
    energy = _trace_product(h, rho)
    space = float(rho.diagonal().real @ (sys.grid**2))
    if not (math.isfinite(entropy) and math.isfinite(energy) and math.isfinite(space)):
        raise NumericError(f"non-finite costs at ({beta1}, {beta2})")
    rho.setflags(write=False)
    return GibbsState(
        beta1=float(beta1),
        beta2=float(beta2),
        rho=rho,
        entropy=entropy,
        energy_cost=energy,
        space_cost=space,
    )


def stationarity_residual(state: GibbsState, sys: QSystem) -> float:
    """Distance of log rho + b1 H + b2 Q^2 from a multiple of the identity.

    Zero exactly when rho has Gibbs form for (b1, b2); evaluated entrywise in
    max norm after removing the trace part.  Requires the state to be
    numerically full rank (eigenvalues >= 1e-14) so the logarithm is reliable.
    """
    w = np.linalg.eigvalsh(state.rho)
    if w[0] < 1e-14:
        raise PreconditionError(
            f"state is numerically rank-deficient (min eigenvalue {w[0]:.3e}); "
            "the logarithm would be meaningless"
        )
    log_rho = matfun.matrix_function(state.rho, np.log)
    m = log_rho + state.beta1 * sys.hamiltonian + state.beta2 * sys.position_sq
    d = sys.dim
    m = m - (m.trace() / d) * np.eye(d)
    return float(np.abs(m).max())


def brute_force_max_entropy(sys: QSystem, c1: float, c2: float) -> np.ndarray:
    """Maximize S(rho) under tr(rho H) = c1 and tr(rho Q^2) = c2 directly.

    Runs an interior-point convex solver over Hermitian matrices with no
    Gibbs-form assumption; exists as an independent oracle for the
    variational principle, so it is restricted to small dimensions.

    Raises InfeasibilityError when no state attains the constraints.
    """
    if sys.dim > 8:
        raise PreconditionError(f"oracle limited to dim <= 8, got {sys.dim}")
    h = np.asarray(sys.hamiltonian)
    q_sq = np.asarray(sys.position_sq)
    w_h = sys.eigenvalues
    w_q = sys.grid**2
    slack = 1e-9
    if not (w_h[0] - slack <= c1 <= w_h[-1] + slack):
        raise InfeasibilityError(
            f"c1 = {c1!r} outside the attainable energy range "
            f"[{w_h[0]:.6g}, {w_h[-1]:.6g}]"
        )
    if not (w_q.min() - slack <= c2 <= w_q.max() + slack):
        raise InfeasibilityError(
            f"c2 = {c2!r} outside the attainable spatial range "
            f"[{w_q.min():.6g}, {w_q.max():.6g}]"
        )

    import cvxpy as cp

    d = sys.dim
    x = cp.Variable((d, d), hermitian=True)
    constraints = [
        x >> 0,
        cp.trace(x) == 1,
        cp.real(cp.trace(x @ h)) == c1,
        cp.real(cp.trace(x @ q_sq)) == c2,
    ]
    problem = cp.Problem(cp.Maximize(cp.von_neumann_entr(x)), constraints)
    # solver accuracy advisories are redundant here: the result is certified
    # against the constraints explicitly below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        try:
            problem.solve(solver=cp.CLARABEL, verbose=False)
        except cp.error.SolverError:
            problem.solve(solver=cp.SCS, eps=1e-8, max_iters=100_000, verbose=False)
        if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            # fall back to a first-order solver before concluding anything
            problem.solve(solver=cp.SCS, eps=1e-8, max_iters=100_000, verbose=False)
    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        raise InfeasibilityError(
            f"no state attains (c1, c2) = ({c1!r}, {c2!r}): solver status "
            f"{problem.status}"
        )
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise NumericError(f"solver failed with status {problem.status}")

    rho = np.asarray(x.value, dtype=complex)
    rho = (rho + rho.conj().T) / 2.0
    w, u = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    rho = (u * (w / w.sum())) @ u.conj().T
    rho = (rho + rho.conj().T) / 2.0
    scale1 = 1.0 + abs(c1)
    scale2 = 1.0 + abs(c2)
    err1 = abs(_trace_product(h, rho) - c1)
    err2 = abs(_trace_product(q_sq, rho) - c2)
    if err1 > 1e-6 * scale1 or err2 > 1e-6 * scale2:
        raise InfeasibilityError(
            f"constraints not certified after bounded search: residuals "
            f"({err1:.3e}, {err2:.3e}) for (c1, c2) = ({c1!r}, {c2!r})"
        )
    rho.setflags(write=False)
    return rho


def symmetrize(rho: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Average a state with its parity reflection: (Pi rho Pi + rho) / 2.

    The result commutes with Pi; for parity-commuting Hamiltonians it keeps
    both costs while never decreasing entropy.
    """
    rho = matfun.require_density_matrix(rho)
    pi = matfun.require_hermitian(pi)
    if np.abs(pi @ pi - np.eye(pi.shape[0])).max() > 1e-10:
        raise ValidationError("parity operator must be an involution")
    out = 0.5 * (pi @ rho @ pi + rho)
    out = (out + out.conj().T) / 2.0
    out.setflags(write=False)
    return out


def variance_q(rho: np.ndarray, sys: QSystem) -> float:
    """Positional variance tr(rho Q^2) - tr(rho Q)^2."""
    rho = matfun.require_density_matrix(rho)
    diag = rho.diagonal().real
    mean = float(diag @ sys.grid)
    mean_sq = float(diag @ sys.grid**2)
    return mean_sq - mean * mean


def energy_relent_identity_residual(rho: np.ndarray, a: np.ndarray) -> float:
    """Residual of tr(rho A) = S(rho) - log tr(e^-A) + S(rho || e^-A / Z).

    Both sides are computed independently (the right side goes through the
    spectral decomposition of e^-A / Z, not through A itself).  Returns
    ``math.inf`` when the relative-entropy term is infinite, signalling a
    support mismatch.
    """
    rho = matfun.require_density_matrix(rho)
    a = matfun.require_hermitian(a)
    dec = matfun.eigh(a)
    w, u = dec.eigenvalues, dec.eigenvectors
    log_z = float(logsumexp(-w))
    p = np.exp(-w - log_z)
    sigma = (u * p) @ u.conj().T
    sigma = (sigma + sigma.conj().T) / 2.0
    rel = matfun.relative_entropy(rho, sigma)
    if math.isinf(rel):
        return math.inf
    lhs = _trace_product(rho, a)
    rhs = matfun.entropy(rho) - log_z + rel
    return abs(lhs - rhs)


def deadend_lower_bound(sys: QSystem, rho: np.ndarray) -> tuple[float, float]:
    """Cost product against its Jensen-style entropy lower-bound candidate.

    Returns (lhs, rhs) with lhs = tr(rho H) tr(rho Q^2) and

        rhs = S^2 - S (log tr e^-H + log tr e^-Q^2)
              + (log d - tr H / d)(log d - tr Q^2 / d).

    The candidate is obtained by dropping relative-entropy cross terms and
    Jensen-bounding the partition logs; it is a faithful lower bound for
    high-entropy states but can exceed the product in low-entropy corners, so
    both sides are returned for inspection rather than asserted here.
    """
    rho = matfun.require_density_matrix(rho)
    d = sys.dim
    s = matfun.entropy(rho)
    lhs = _trace_product(sys.hamiltonian, rho) * float(
        rho.diagonal().real @ (sys.grid**2)
    )
    log_z_h = float(logsumexp(-sys.eigenvalues))
    x_sq = sys.grid**2
    log_z_q = float(logsumexp(-x_sq))
    jensen_h = math.log(d) - float(sys.eigenvalues.sum()) / d
    jensen_q = math.log(d) - float(x_sq.sum()) / d
    rhs = s * s - s * (log_z_h + log_z_q) + jensen_h * jensen_q
    return lhs, rhs
