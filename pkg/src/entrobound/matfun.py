"""Dense Hermitian matrix kernel.

Everything downstream (operator construction, Gibbs states, scans) reduces to
spectral calculus on Hermitian matrices: eigendecompose, map the eigenvalues
through a scalar function, reassemble.  This module owns that kernel together
with the von Neumann entropy S(rho) = -tr(rho log rho), the relative entropy
S(rho||sigma) = -tr(rho log sigma) - S(rho), and a finite-difference check of
the entropy gradient -1 - log(rho).

All functions are pure and operate on plain ndarrays; validation helpers
return defensively hermitized copies so roundoff asymmetry never propagates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PreconditionError, ValidationError

# Absolute tolerance for |A - A^dag| on inputs declared Hermitian.
HERMITIAN_ATOL = 1e-12
# Density-matrix eigenvalues dirtier than this are caller errors, not noise.
EIGENVALUE_CLAMP = 1e-10
# sigma-eigenvalues below this count as kernel directions for S(rho||sigma).
KERNEL_THRESHOLD = 1e-12


def require_hermitian(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate that ``a`` is square and Hermitian; return its Hermitian part.

    Raises ValidationError if the asymmetry |a - a^dag| exceeds ``atol``
    entrywise.  The returned copy is exactly Hermitian so downstream spectral
    routines see clean input.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    asym = np.abs(a - a.conj().T).max()
    if asym > atol:
        raise ValidationError(
            f"matrix is not Hermitian: max |a - a^dag| = {asym:.3e} > {atol:.1e}"
        )
    return (a + a.conj().T) / 2.0


def require_density_matrix(rho, atol: float = EIGENVALUE_CLAMP) -> np.ndarray:
    """Validate a density matrix: Hermitian, spectrum >= -atol, unit trace."""
    rho = require_hermitian(rho)
    w = np.linalg.eigvalsh(rho)
    if w[0] < -atol:
        raise ValidationError(f"density matrix has eigenvalue {w[0]:.3e} < -{atol:.1e}")
    tr = rho.trace().real
    if abs(tr - 1.0) > atol:
        raise ValidationError(f"density matrix trace {tr!r} deviates from 1")
    return rho


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition A = U diag(w) U^dag with ascending eigenvalues."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def eigh(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending; column i of ``eigenvectors`` pairs with
    eigenvalue i.  Deterministic for identical input.
    """
    a = require_hermitian(a)
    w, u = np.linalg.eigh(a)
    return EigenDecomposition(eigenvalues=w, eigenvectors=u)


def _scalar_eval(f: Callable, x: float) -> float:
    # out-of-domain scalar evaluations surface as nan for the finite check
    try:
        return float(f(x))
    except (ValueError, OverflowError, ZeroDivisionError):
        return math.nan


def matrix_function(a, f: Callable) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix by spectral calculus.

    Returns U diag(f(w)) U^dag, so the spectrum of the result is exactly the
    image of the spectrum of ``a`` under ``f``.  ``f`` may be vectorized (any
    numpy ufunc) or a plain scalar callable.

    Raises DomainError if ``f`` is non-finite on some eigenvalue, identifying
    the offending one.
    """
    dec = eigh(a)
    w = dec.eigenvalues
    with np.errstate(all="ignore"):
        try:
            fw = np.asarray(f(w), dtype=float)
            if fw.shape != w.shape:
                raise TypeError
        except (TypeError, ValueError):
            fw = np.array([_scalar_eval(f, x) for x in w])
    bad = ~np.isfinite(fw)
    if bad.any():
        i = int(np.argmax(bad))
        raise DomainError(
            f"function is not finite on eigenvalue {w[i]!r} (index {i}): {fw[i]!r}"
        )
    u = dec.eigenvectors
    out = (u * fw) @ u.conj().T
    return (out + out.conj().T) / 2.0


def _entropy_from_eigenvalues(w: np.ndarray, atol: float = EIGENVALUE_CLAMP) -> float:
    """-sum w log w with the 0 log 0 = 0 convention; rejects dirty spectra."""
    if w.min() < -atol or w.max() > 1.0 + atol:
        raise ValidationError(
            f"eigenvalues outside [0, 1] beyond tolerance: min {w.min():.3e}, "
            f"max {w.max():.3e}"
        )
    w = np.clip(w, 0.0, 1.0)
    pos = w[w > 0.0]
    return float(-np.sum(pos * np.log(pos)))


def entropy(rho) -> float:
    """von Neumann entropy S(rho) = -tr(rho log rho), in nats.

    Eigenvalues are clamped to [0, 1]; a clamp larger than the tolerance is
    treated as caller error.  The result lies in [0, log dim].
    """
    rho = require_hermitian(rho)
    w = np.linalg.eigvalsh(rho)
    if abs(w.sum() - 1.0) > EIGENVALUE_CLAMP:
        raise ValidationError(f"density matrix trace {w.sum()!r} deviates from 1")
    return _entropy_from_eigenvalues(w)


def relative_entropy(rho, sigma) -> float:
    """Relative entropy S(rho||sigma) = -tr(rho log sigma) - S(rho).

    Returns ``math.inf`` when the support of ``rho`` meets the kernel of
    ``sigma``: a sigma-eigendirection with eigenvalue below 1e-12 carrying
    rho-weight above 1e-12.
    """
    rho = require_density_matrix(rho)
    sigma = require_density_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValidationError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    dec = eigh(sigma)
    s, u = dec.eigenvalues, dec.eigenvectors
    weights = np.einsum("ij,jk,ki->i", u.conj().T, rho, u).real
    kernel = s < KERNEL_THRESHOLD
    if np.any(weights[kernel] > KERNEL_THRESHOLD):
        return math.inf
    support = ~kernel
    cross = float(-np.sum(weights[support] * np.log(s[support])))
    return cross - entropy(rho)


def entropy_gradient_check(rho, v, h: float) -> float:
    """Discrepancy between a central difference of S and its analytic gradient.

    Compares (S(rho + h v) - S(rho - h v)) / (2 h) against
    tr(v (-1 - log rho)); for interior rho the discrepancy is O(h^2).

    Preconditions: rho strictly interior (spectrum within [1e-6, 1 - 1e-6]),
    tr v = 0, spectral norm of v at most 1.
    """
    rho = require_density_matrix(rho)
    v = require_hermitian(v)
    if rho.shape != v.shape:
        raise ValidationError(f"shape mismatch: {rho.shape} vs {v.shape}")
    if h <= 0.0:
        raise ValidationError(f"step must be positive, got {h!r}")
    w = np.linalg.eigvalsh(rho)
    if w[0] < 1e-6 or w[-1] > 1.0 - 1e-6:
        raise PreconditionError(
            f"state is not strictly interior: spectrum [{w[0]:.3e}, {w[-1]:.6f}]"
        )
    if abs(v.trace().real) > 1e-10:
        raise ValidationError(f"direction must be traceless, tr = {v.trace().real!r}")
    vnorm = np.linalg.norm(v, ord=2)
    if vnorm > 1.0 + 1e-10:
        raise ValidationError(f"direction spectral norm {vnorm!r} exceeds 1")

    s_plus = _entropy_from_eigenvalues(np.linalg.eigvalsh(rho + h * v))
    s_minus = _entropy_from_eigenvalues(np.linalg.eigvalsh(rho - h * v))
    central = (s_plus - s_minus) / (2.0 * h)

    log_rho = matrix_function(rho, np.log)
    gradient = -np.eye(rho.shape[0]) - log_rho
    analytic = np.trace(v @ gradient).real
    return abs(central - analytic)
