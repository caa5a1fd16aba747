"""Closed-form harmonic-oscillator costs and the two bound counterexamples.

Everything here is analytic: eigenstate expectation values of Q^2 from ladder
algebra, the uniform-mixture state over all eigenstates with quantum numbers
at most l in each of d degrees of freedom, and the two-level state
rho(p) = (1-p)|0><0| + p|1><1| of the one-dimensional oscillator.  These feed
the bound

    tr(rho H) tr(rho Q^2) >= (hbar^2 d^2 / 2m) (factor * exp(S/d) - 1)^2

with explicit hbar, m, omega parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class OscillatorParams:
    """Physical constants; all strictly positive.  Defaults are natural units."""

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            if getattr(self, name) <= 0.0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)!r}")


DEFAULT_PARAMS = OscillatorParams()


def eigenstate_qsq(params: OscillatorParams, n_vector: Sequence[int]) -> float:
    """<Q^2> of the product eigenstate with quantum numbers ``n_vector``.

    Ladder algebra gives (hbar / 2 m omega) * sum_k (2 n_k + 1), additive over
    the degrees of freedom.
    """
    total = 0
    for n in n_vector:
        if n < 0 or int(n) != n:
            raise ValidationError(f"quantum numbers must be non-negative integers, got {n!r}")
        total += 2 * int(n) + 1
    return params.hbar / (2.0 * params.mass * params.omega) * total


def bound_rhs(params: OscillatorParams, s: float, d: int, factor: float = 1.0,
              floor: bool = True) -> float:
    """(hbar^2 d^2 / 2m) (factor * exp(S/d) - 1)^2, the bound's entropy side.

    With ``floor`` (the default) the pre-square argument is clamped at 0 once
    factor * exp(S/d) drops below 1, which keeps the value monotone
    non-decreasing in S; pass floor=False for the raw squared value.
    """
    if s < 0.0:
        raise ValidationError(f"entropy must be non-negative, got {s!r}")
    if d < 1:
        raise ValidationError(f"degrees of freedom must be at least 1, got {d!r}")
    if factor <= 0.0:
        raise ValidationError(f"factor must be positive, got {factor!r}")
    arg = factor * math.exp(s / d) - 1.0
    if floor:
        arg = max(arg, 0.0)
    return params.hbar**2 * d * d / (2.0 * params.mass) * arg * arg


@dataclass(frozen=True)
class Counterexample1Report:
    """Costs of the uniform mixture over eigenstates with quantum numbers <= l.

    ``reduced_lhs`` (= (dl + d + 1)/2) against ``reduced_rhs`` (= dl) is the
    unit-free form of the inequality; ``reduced_lhs_swapped`` is the variant
    with d and l exchanged in the middle term, recorded for comparison.
    """

    d: int
    l: int
    energy_cost: float
    space_cost: float
    product: float
    entropy: float
    bound_rhs: float
    violation_ratio: float
    holds: bool
    reduced_lhs: float
    reduced_lhs_swapped: float
    reduced_rhs: float

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "l": self.l,
            "energy_cost": self.energy_cost,
            "space_cost": self.space_cost,
            "product": self.product,
            "entropy": self.entropy,
            "bound_rhs": self.bound_rhs,
            "violation_ratio": self.violation_ratio,
            "holds": self.holds,
            "reduced_lhs": self.reduced_lhs,
            "reduced_lhs_swapped": self.reduced_lhs_swapped,
            "reduced_rhs": self.reduced_rhs,
        }


def counterexample1(params: OscillatorParams, d: int, l: int) -> Counterexample1Report:
    """Evaluate the bound on the equal mixture of all eigenstates with n_k <= l.

    Closed forms: energy (hbar omega / 2) d l, spatial cost
    (hbar / 2 m omega)(d l + d + 1), entropy d log(l + 1).  The violation
    ratio bound/product equals 2 d l / (d l + d + 1) in any units and tends
    to 2 as d = l grows.
    """
    if d < 1 or l < 1:
        raise ValidationError(f"require d >= 1 and l >= 1, got d={d}, l={l}")
    hbar, m, omega = params.hbar, params.mass, params.omega
    energy = hbar * omega / 2.0 * d * l
    space = hbar / (2.0 * m * omega) * (d * l + d + 1)
    product = energy * space
    entropy = d * math.log(l + 1.0)
    bound = bound_rhs(params, entropy, d)
    return Counterexample1Report(
        d=d,
        l=l,
        energy_cost=energy,
        space_cost=space,
        product=product,
        entropy=entropy,
        bound_rhs=bound,
        violation_ratio=bound / product,
        holds=product >= bound,
        reduced_lhs=(d * l + d + 1) / 2.0,
        reduced_lhs_swapped=(d * l + l + 1) / 2.0,
        reduced_rhs=float(d * l),
    )


@dataclass(frozen=True)
class Counterexample2Report:
    """Bound side f, cost side g, and their ratio for rho(p) on one oscillator.

    As p -> 0+ the computed ratio decreases to 0 like p (1 - log p)^2: the
    cost side vanishes only linearly in p while the bound side vanishes
    quadratically up to log factors.
    """

    p: float
    entropy: float
    f: float
    g: float
    ratio: float

    def to_json_dict(self) -> dict:
        return {"p": self.p, "entropy": self.entropy, "f": self.f, "g": self.g,
                "ratio": self.ratio}


def counterexample2(params: OscillatorParams, p: float) -> Counterexample2Report:
    """Evaluate both sides of the d = 1 bound on (1-p)|0><0| + p|1><1|.

    entropy is the binary entropy of p (0 at p = 1 by continuity),
    f = (hbar^2/2m)(e^entropy - 1)^2 and g = (hbar^2/2m)(2 p^2 + p).
    """
    if not 0.0 < p <= 1.0:
        raise ValidationError(f"p must lie in (0, 1], got {p!r}")
    if p == 1.0:
        entropy = 0.0
    else:
        entropy = -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)
    scale = params.hbar**2 / (2.0 * params.mass)
    f = scale * (math.exp(entropy) - 1.0) ** 2
    g = scale * (2.0 * p * p + p)
    return Counterexample2Report(p=p, entropy=entropy, f=f, g=g, ratio=f / g)
