"""Finite-dimensional position/momentum operator algebra.

A d-dimensional system lives on the centered unit-step grid
x_k = k, k = -(d-1)/2 ... (d-1)/2 (half-integers for even d).  The centered
discrete Fourier matrix F maps the position basis to the momentum basis, the
momentum operator is P = F diag(2 pi k / d) F^dag over the same centered
indices, and Hamiltonians take the form H = 1/2 P^2 + V(Q) with the potential
assembled from |Q|^n terms.  Every built Hamiltonian is shifted so its ground
energy is exactly 0.

Units: hbar = m = 1, grid spacing 1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import matfun
from .errors import ValidationError


def grid(dim: int) -> np.ndarray:
    """Centered unit-step grid: integers for odd dim, half-integers for even."""
    if dim < 2:
        raise ValidationError(f"dimension must be at least 2, got {dim}")
    return np.arange(dim) - (dim - 1) / 2.0


def fourier_matrix(dim: int) -> np.ndarray:
    """Centered DFT unitary with entries exp(2 pi i a b / d) / sqrt(d).

    Row and column indices a, b run over the centered grid, so the matrix is
    symmetric and diagonalizes the shift operators below.
    """
    a = grid(dim)
    return np.exp(2j * np.pi * np.outer(a, a) / dim) / np.sqrt(dim)


def position_operator(dim: int) -> np.ndarray:
    return np.diag(grid(dim)).astype(complex)


def momentum_operator(dim: int) -> np.ndarray:
    """P = F diag(2 pi k / d) F^dag over the centered index range."""
    f = fourier_matrix(dim)
    p = (f * (2.0 * np.pi * grid(dim) / dim)) @ f.conj().T
    return (p + p.conj().T) / 2.0


def _cyclic_shift(dim: int) -> np.ndarray:
    """Lower cyclic shift whose wrap-around entry carries phase (-1)^(d+1)."""
    s = np.zeros((dim, dim), dtype=complex)
    for k in range(dim - 1):
        s[k + 1, k] = 1.0
    s[0, dim - 1] = (-1.0) ** (dim + 1)
    return s


def translation(dim: int) -> np.ndarray:
    """Unitary grid translation T: x_k -> x_{k+1} with boundary phase (-1)^(d+1).

    Satisfies T = exp(-i P) exactly for every d >= 2 under this phase
    convention.
    """
    if dim < 2:
        raise ValidationError(f"dimension must be at least 2, got {dim}")
    return _cyclic_shift(dim)


def boost(dim: int) -> np.ndarray:
    """Unitary momentum boost B: the same shift pattern in the momentum basis.

    Satisfies B = exp(i 2 pi Q / d) exactly for every d >= 2.
    """
    if dim < 2:
        raise ValidationError(f"dimension must be at least 2, got {dim}")
    f = fourier_matrix(dim)
    return f @ _cyclic_shift(dim) @ f.conj().T


def parity(dim: int) -> np.ndarray:
    """Grid-reflection involution mapping x_k to -x_k; real symmetric."""
    if dim < 2:
        raise ValidationError(f"dimension must be at least 2, got {dim}")
    return np.fliplr(np.eye(dim)).astype(complex)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Declarative potential description: V(Q) = sum sign(n) theta |Q|^n.

    Each term is an (exponent, factor) pair with a positive factor; sign(0)
    is 0, so an exponent-0 term (or an empty term list) yields the free
    particle.  Negative exponents require an even dimension because an odd
    grid contains x = 0, where |x|^n diverges.

    ``kinetic_sign`` selects the sign of the 1/2 P^2 term.  The physical
    convention is +1 (the default); -1 reproduces a legacy convention whose
    published scan coefficients differ observably (see README).
    """

    dim: int
    terms: tuple[tuple[int, float], ...] = field(default_factory=tuple)
    kinetic_sign: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValidationError(f"dimension must be at least 2, got {self.dim}")
        if self.kinetic_sign not in (-1, 1):
            raise ValidationError(f"kinetic_sign must be +1 or -1, got {self.kinetic_sign}")
        terms = tuple((int(n), float(theta)) for n, theta in self.terms)
        object.__setattr__(self, "terms", terms)
        for n, theta in terms:
            if theta <= 0.0:
                raise ValidationError(f"term ({n}, {theta}) has non-positive factor")
            if n < 0 and self.dim % 2 == 1:
                raise ValidationError(
                    f"negative exponent {n} with odd dimension {self.dim}: "
                    "the grid contains x = 0 where the potential diverges"
                )

    def potential(self) -> np.ndarray:
        """Potential values on the grid; overflow surfaces as non-finite entries."""
        x = np.abs(grid(self.dim))
        v = np.zeros(self.dim)
        with np.errstate(over="ignore"):
            for n, theta in self.terms:
                v += np.sign(n) * theta * x ** float(n)
        return v

    def to_json_dict(self) -> dict:
        out = {"dim": self.dim, "terms": [[n, theta] for n, theta in self.terms]}
        if self.kinetic_sign != 1:
            out["kinetic_sign"] = self.kinetic_sign
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "HamiltonianSpec":
        return cls(
            dim=int(data["dim"]),
            terms=tuple((n, t) for n, t in data["terms"]),
            kinetic_sign=int(data.get("kinetic_sign", 1)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "HamiltonianSpec":
        return cls.from_json_dict(json.loads(text))


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QSystem:
    """Immutable bundle of the operators and spectra of one built system."""

    spec: HamiltonianSpec
    grid: np.ndarray
    fourier: np.ndarray
    position: np.ndarray
    momentum: np.ndarray
    hamiltonian: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    position_sq_energy_basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def position_sq(self) -> np.ndarray:
        return self.position @ self.position


def build_system(spec: HamiltonianSpec) -> QSystem:
    """Construct grid, operators, and ground-normalized Hamiltonian.

    H = 1/2 P^2 + V(Q), shifted so that its minimal eigenvalue is exactly 0.
    Raises ValidationError for potentials with non-finite entries.
    """
    d = spec.dim
    x = grid(d)
    f = fourier_matrix(d)
    q = position_operator(d)
    p = momentum_operator(d)
    v = spec.potential()
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"potential has non-finite entries for spec {spec}")
    h = spec.kinetic_sign * 0.5 * (p @ p) + np.diag(v).astype(complex)
    h = (h + h.conj().T) / 2.0
    ground = np.linalg.eigvalsh(h)[0]
    h = h - ground * np.eye(d)
    dec = matfun.eigh(h)
    u = dec.eigenvectors
    q_sq = q @ q
    q_sq_energy = u.conj().T @ q_sq @ u
    return QSystem(
        spec=spec,
        grid=_readonly(x),
        fourier=_readonly(f),
        position=_readonly(q),
        momentum=_readonly(p),
        hamiltonian=_readonly(h),
        eigenvalues=_readonly(dec.eigenvalues),
        eigenvectors=_readonly(u),
        position_sq_energy_basis=_readonly(q_sq_energy),
    )


def monomial_family(
    dims: Iterable[int],
    thetas: Sequence[float] = (0.1, 0.5, 1.0, 5.0, 10.0),
    exponents: Sequence[int] = (-3, -2, -1, 0, 1, 2, 3, 4, 5),
    kinetic_sign: int = 1,
) -> list[HamiltonianSpec]:
    """Single-term potential family over the cartesian product of parameters.

    Ordering is dimension-major, then exponent, then factor.  Combinations of
    a negative exponent with an odd dimension are filtered out.
    """
    specs = []
    for d, n, theta in itertools.product(dims, exponents, thetas):
        if n < 0 and d % 2 == 1:
            continue
        terms = () if n == 0 else ((n, theta),)
        specs.append(HamiltonianSpec(dim=d, terms=terms, kinetic_sign=kinetic_sign))
    return specs


def laurent_family(
    dims: Iterable[int],
    coefficients: Sequence[float] = (0.1, 1.0, 5.0),
    exponents: Sequence[int] = (-2, -1, 1, 2),
    kinetic_sign: int = 1,
) -> list[HamiltonianSpec]:
    """Multi-term potentials with one coefficient choice per exponent.

    Enumerates every assignment of ``coefficients`` to ``exponents`` (the
    exponent-0 term is omitted since it contributes nothing).  Requires even
    dimensions when negative exponents are present.
    """
    specs = []
    for d in dims:
        for combo in itertools.product(coefficients, repeat=len(exponents)):
            terms = tuple((n, a) for n, a in zip(exponents, combo))
            specs.append(HamiltonianSpec(dim=d, terms=terms, kinetic_sign=kinetic_sign))
    return specs
